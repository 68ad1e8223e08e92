#include "rvfl/lipschitz.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rvfl/rng.hpp"

namespace rvfl {

double estimate_lipschitz(const Compactum& domain, const std::vector<double>& values) {
    const auto& pts = domain.points();
    if (values.size() != pts.size())
        throw std::invalid_argument("estimate_lipschitz: points/values size mismatch");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("estimate_lipschitz: non-finite value");
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = (pts[i] - pts[j]).norm();
            const double df = std::abs(values[i] - values[j]);
            if (dx == 0.0) {
                if (df > 0.0)
                    throw std::invalid_argument(
                        "estimate_lipschitz: coincident points with different values");
                continue;
            }
            best = std::max(best, df / dx);
        }
    }
    return best;
}

SampledFunction recenter(const Compactum& domain, const std::vector<double>& values,
                         std::optional<double> ell) {
    const double estimated = estimate_lipschitz(domain, values);
    double ell_used = estimated;
    if (ell) {
        if (!(*ell > 0.0)) throw std::invalid_argument("recenter: ell must be > 0");
        if (*ell < estimated * (1.0 - 1e-12))
            throw std::invalid_argument(
                "recenter: supplied ell is below the sample Lipschitz estimate");
        ell_used = *ell;
    } else if (!(estimated > 0.0)) {
        throw std::invalid_argument(
            "recenter: constant target; supply an explicit ell > 0");
    }

    double vmin = values.front(), vmax = values.front();
    for (double v : values) {
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    SampledFunction out{
        .domain = domain.translated(-domain.circumcenter()),
        .values = values,
        .ell = ell_used,
        .M = 0.5 * (vmax - vmin),
        .zeta = 0.5 * (vmax - vmin) + vmin,
        .p = domain.circumcenter(),
        .R = domain.circumradius(),
    };
    for (double& v : out.values) v -= out.zeta;
    // 2M = max f - min f <= ell diam(K) <= 2 ell R.
    if (out.M > out.ell * out.R * (1.0 + 1e-9))
        throw std::logic_error("recenter: M <= ell R violated");
    return out;
}

double Extension::radial_profile(double) const {
    throw std::logic_error("radial_profile: extension is not radial");
}

McShaneExtension::McShaneExtension(SampledFunction base) : base_(std::move(base)) {
    if (!(base_.ell > 0.0)) throw std::invalid_argument("McShaneExtension: ell must be > 0");
    const auto& pts = base_.domain.points();
    box_lo_ = pts.front();
    box_hi_ = pts.front();
    for (const auto& p : pts) {
        box_lo_ = box_lo_.cwiseMin(p);
        box_hi_ = box_hi_.cwiseMax(p);
    }
    const double margin = base_.M / base_.ell;
    box_lo_.array() -= margin;
    box_hi_.array() += margin;
}

double McShaneExtension::operator()(const Eigen::VectorXd& x) const {
    const auto& pts = base_.domain.points();
    // Lowest-index maximizer of |f(a)| - ell |x - a| (strict improvement only).
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double score = std::abs(base_.values[i]) - base_.ell * (x - pts[i]).norm();
        if (score > best) {
            best = score;
            best_idx = i;
        }
    }
    if (best <= 0.0) return 0.0;
    return base_.values[best_idx] >= 0.0 ? best : -best;
}

int McShaneExtension::dim() const { return base_.domain.dim(); }

std::pair<Eigen::VectorXd, Eigen::VectorXd> McShaneExtension::support_box() const {
    return {box_lo_, box_hi_};
}

double gradient_sup_check(const Extension& ext, std::uint64_t trials, std::uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("gradient_sup_check: trials must be >= 1");
    const auto [lo, hi] = ext.support_box();
    const int m = ext.dim();
    constexpr double kDelta = 1e-5;
    Rng rng(seed);
    Eigen::VectorXd x(m), u(m);
    double worst = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (int i = 0; i < m; ++i) x[i] = rng.uniform(lo[i], hi[i]);
        double norm2 = 0.0;
        do {
            for (int i = 0; i < m; ++i) u[i] = rng.normal();
            norm2 = u.squaredNorm();
        } while (norm2 < 1e-20);
        u /= std::sqrt(norm2);
        const double ratio = std::abs(ext(x + kDelta * u) - ext(x)) / kDelta;
        worst = std::max(worst, ratio);
    }
    return worst;
}

}  // namespace rvfl
