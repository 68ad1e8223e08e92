#include "rvfl/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "rvfl/parallel.hpp"
#include "rvfl/rng.hpp"

namespace rvfl {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kLogMax = 709.0;  // ~log(DBL_MAX)
}  // namespace

HiddenLayer sample_hidden(int n, int m, double sigma, double R, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_hidden: n must be >= 1");
    if (m < 1) throw std::invalid_argument("sample_hidden: m must be >= 1");
    if (!(sigma > 0.0) || !(R > 0.0))
        throw std::invalid_argument("sample_hidden: sigma and R must be positive");
    HiddenLayer layer;
    layer.m = m;
    layer.n = n;
    layer.sigma = sigma;
    layer.R = R;
    layer.seed = seed;
    layer.w.resize(n, m);
    layer.b.resize(n);
    const double half_width = sigma * R * std::sqrt(static_cast<double>(m));
    chunked_map<int>(static_cast<std::uint64_t>(n), 1024,
                     [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
                         for (std::uint64_t j = lo; j < hi; ++j) {
                             Rng rng = Rng::substream(seed, j);
                             for (int d = 0; d < m; ++d)
                                 layer.w(static_cast<Eigen::Index>(j), d) = sigma * rng.normal();
                             layer.b[static_cast<Eigen::Index>(j)] =
                                 rng.uniform(-half_width, half_width);
                         }
                         return 0;
                     });
    return layer;
}

double RvflNetwork::eval(const Eigen::VectorXd& x) const {
    if (x.size() != m) throw std::invalid_argument("eval: dimension mismatch");
    double sum = zeta;
    for (int j = 0; j < n; ++j) {
        const double t = w.row(j).dot(x) + b[j];
        if (t > 0.0) sum += a[j] * t;
    }
    return sum;
}

std::vector<double> RvflNetwork::eval_batch(const std::vector<Eigen::VectorXd>& xs) const {
    std::vector<double> out(xs.size());
    chunked_map<int>(xs.size(), 64, [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) out[i] = eval(xs[i]);
        return 0;
    });
    return out;
}

double RvflNetwork::lipschitz_bound() const {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += std::abs(a[j]) * w.row(j).norm();
    return sum;
}

WeightDensity::WeightDensity(std::shared_ptr<const SpectralSurrogate> surrogate, double sigma,
                             double R, double ktilde_volume)
    : surrogate_(std::move(surrogate)), sigma_(sigma), R_(R), ktilde_volume_(ktilde_volume) {
    if (!surrogate_) throw std::invalid_argument("weight density needs a surrogate");
    if (!(sigma_ > 0.0) || !(R_ > 0.0) || !(ktilde_volume_ > 0.0))
        throw std::invalid_argument("weight density parameters must be positive");
    m_ = surrogate_->dim();
    lambda_ = surrogate_->lambda();
    theta_ = surrogate_->theta();
    Lambda_ = lambda_ / sigma_;
    log_prefactor_ = std::log(2.0 * sigma_ * R_) + 0.5 * std::log(static_cast<double>(m_)) +
                     2.0 * std::log(Lambda_) + m_ * std::log(lambda_) -
                     0.5 * m_ * std::log(kTwoPi);
}

double WeightDensity::log_magnitude(const Eigen::VectorXd& w, double b, int& sign) const {
    sign = 0;
    if (w.size() != m_) throw std::invalid_argument("weight density: dimension mismatch");
    const double r = w.norm();
    const double sqrt_m = std::sqrt(static_cast<double>(m_));
    if (r < theta_ * sigma_ * sqrt_m) return -std::numeric_limits<double>::infinity();
    const double psi = surrogate_->kernel().psi_cap_radial(r / sigma_);
    if (psi <= 0.0) return -std::numeric_limits<double>::infinity();
    double fabs_val, farg;
    surrogate_->fourier_polar(Lambda_ * w, fabs_val, farg);
    if (fabs_val <= 0.0) return -std::numeric_limits<double>::infinity();
    const double c = std::cos(Lambda_ * b - farg);
    if (c == 0.0) return -std::numeric_limits<double>::infinity();
    // G carries a leading minus sign.
    sign = c > 0.0 ? -1 : 1;
    return log_prefactor_ + std::log(fabs_val) + std::log(psi) + std::log(std::abs(c));
}

double WeightDensity::operator()(const Eigen::VectorXd& w, double b) const {
    int sign = 0;
    const double lg = log_magnitude(w, b, sign);
    if (sign == 0) return 0.0;
    if (lg > kLogMax) throw std::overflow_error("weight density magnitude exceeds double range");
    return sign * std::exp(lg);
}

double WeightDensity::log_hoeffding_b() const {
    return std::log(2.0 * R_ * R_) + 0.5 * std::log(static_cast<double>(m_)) -
           0.5 * m_ * std::log(kTwoPi) + (m_ + 1) * std::log(lambda_) +
           std::log1p(1.0 / theta_) + std::log(surrogate_->extension().lipschitz()) +
           std::log(ktilde_volume_);
}

double WeightDensity::hoeffding_envelope(std::uint64_t n, double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("hoeffding envelope needs t > 0");
    if (n == 0) return 2.0;
    const double log_ratio = std::log(t) - log_hoeffding_b();
    const double exponent = -0.5 * static_cast<double>(n) * std::exp(2.0 * log_ratio);
    return 2.0 * std::exp(exponent);
}

RvflNetwork build_constructive(const HiddenLayer& layer, const WeightDensity& density,
                               double zeta) {
    if (layer.m != density.dim())
        throw std::invalid_argument("layer and density dimensions differ");
    if (layer.sigma != density.sigma() || layer.R != density.R())
        throw std::invalid_argument("layer and density must share sigma and R");
    RvflNetwork net;
    net.m = layer.m;
    net.n = layer.n;
    net.sigma = layer.sigma;
    net.R = layer.R;
    net.seed = layer.seed;
    net.zeta = zeta;
    net.provenance = "constructive";
    net.w = layer.w;
    net.b = layer.b;
    net.a.resize(layer.n);
    chunked_map<int>(static_cast<std::uint64_t>(layer.n), 256,
                     [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
                         for (std::uint64_t j = lo; j < hi; ++j) {
                             const Eigen::Index jj = static_cast<Eigen::Index>(j);
                             net.a[jj] = density(layer.w.row(jj).transpose(), layer.b[jj]) /
                                         static_cast<double>(layer.n);
                         }
                         return 0;
                     });
    return net;
}

RvflNetwork fit_least_squares(const HiddenLayer& layer, const std::vector<Eigen::VectorXd>& xs,
                              const std::vector<double>& ys, double ridge) {
    if (xs.empty() || xs.size() != ys.size())
        throw std::invalid_argument("least squares needs matching nonempty points and values");
    if (ridge < 0.0) throw std::invalid_argument("ridge must be >= 0");
    const Eigen::Index p = static_cast<Eigen::Index>(xs.size());
    const Eigen::Index n = layer.n;
    const Eigen::Index rows = ridge > 0.0 ? p + n : p;
    Eigen::MatrixXd phi(rows, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
    chunked_map<int>(static_cast<std::uint64_t>(p), 64,
                     [&](std::uint64_t, std::uint64_t lo, std::uint64_t hi) {
                         for (std::uint64_t i = lo; i < hi; ++i) {
                             const Eigen::Index ii = static_cast<Eigen::Index>(i);
                             if (xs[i].size() != layer.m)
                                 throw std::invalid_argument("least squares: point dimension");
                             phi.row(ii) =
                                 ((layer.w * xs[i]) + layer.b).cwiseMax(0.0).transpose();
                             rhs[ii] = ys[i];
                         }
                         return 0;
                     });
    if (ridge > 0.0)
        phi.bottomRows(n) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(n, n);
    if (!phi.allFinite() || !rhs.allFinite())
        throw std::invalid_argument("least squares: non-finite design entries");
    RvflNetwork net;
    net.m = layer.m;
    net.n = layer.n;
    net.sigma = layer.sigma;
    net.R = layer.R;
    net.seed = layer.seed;
    net.zeta = 0.0;
    net.provenance = "least-squares";
    net.w = layer.w;
    net.b = layer.b;
    net.a = phi.completeOrthogonalDecomposition().solve(rhs);
    return net;
}

GridSup sup_error(const RvflNetwork& net, const std::vector<Eigen::VectorXd>& grid,
                  const std::vector<double>& reference, double reference_offset) {
    if (grid.empty() || grid.size() != reference.size())
        throw std::invalid_argument("sup_error needs a nonempty grid with matching references");
    const std::vector<double> values = net.eval_batch(grid);
    GridSup out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = std::abs(values[i] - (reference[i] + reference_offset));
        if (d > out.value) {
            out.value = d;
            out.argmax = i;
        }
    }
    return out;
}

}  // namespace rvfl
