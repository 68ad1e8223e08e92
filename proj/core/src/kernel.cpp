#include "rvfl/kernel.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "rvfl/csv.hpp"
#include "rvfl/interp.hpp"
#include "rvfl/quadrature.hpp"
#include "rvfl/specfun.hpp"

namespace rvfl {
namespace {

constexpr int kPsiTableSize = 4097;   // radial Psi profile nodes on [0, 1]
constexpr int kOmegaTableSize = 8193; // omega profile nodes on [0, 1/2]

double sphere_surface(int m) {  // |S^{m-1}|
    return 2.0 * std::exp(0.5 * m * std::log(M_PI) - std::lgamma(0.5 * m));
}

double omega_raw(double nu, double j_nu, double r) {
    // J_nu(2 j_nu r) / r^nu with its analytic r -> 0 limit.
    if (r < 1e-8) return std::exp(nu * std::log(j_nu) - std::lgamma(nu + 1.0));
    return specfun::bessel_j(nu, 2.0 * j_nu * r) / std::pow(r, nu);
}

}  // namespace

struct SmoothingKernel::Impl {
    CubicTable omega_table;  // omega on [0, 1/2]
    CubicTable psi_table;    // radial profile q with Psi(x) = q(|x|/sqrt(m)) on [0, 1]
    double sqrt_m = 1.0;

    // psi sampler state (m = 1 only), built on first use.
    std::once_flag sampler_once;
    std::vector<double> sampler_x;
    std::vector<double> sampler_cdf;
    double sampler_total = 0.0;
};

SmoothingKernel::SmoothingKernel(int m, double table_scale) : m_(m) {
    if (m < 1) throw std::invalid_argument("SmoothingKernel: m must be >= 1");
    nu_ = 0.5 * m - 1.0;
    j_nu_ = specfun::first_bessel_zero(nu_);
    c_norm_ = normalization(m);
    impl_ = std::make_unique<Impl>();
    impl_->sqrt_m = std::sqrt(static_cast<double>(m));

    // Fast omega profile for the convolution quadrature below.
    {
        std::vector<double> vals(kOmegaTableSize);
        for (int i = 0; i < kOmegaTableSize; ++i) {
            const double r = 0.5 * i / (kOmegaTableSize - 1);
            vals[i] = c_norm_ * omega_raw(nu_, j_nu_, r);
        }
        vals.back() = 0.0;  // J_nu(j_nu) = 0 exactly
        impl_->omega_table =
            CubicTable(0.0, 0.5, std::move(vals), true, CubicTable::OutOfRange::kZero);
    }
    const auto om = [this](double r) { return impl_->omega_table(r); };

    // Radial profile q(rho) = (omega * omega) at radius rho. The integrand
    // is analytic inside each panel; panel splits isolate the points where
    // the angular cap transitions on/off the support boundary.
    const auto q_at = [&](double rho) -> double {
        if (rho >= 1.0) return 0.0;
        if (m_ == 1) {
            const double lo = std::max(rho - 0.5, -0.5);
            if (lo >= 0.5) return 0.0;
            return integrate_gl(
                [&](double y) { return om(std::abs(y)) * om(std::abs(rho - y)); }, lo, 0.5, 96);
        }
        const double surface = sphere_surface(m_ - 1);
        if (rho < 1e-12) {
            // q(0) = integral of omega^2 = 1 by normalization; evaluate anyway.
            const double angular = std::sqrt(M_PI) *
                                   std::exp(std::lgamma(0.5 * (m_ - 1)) - std::lgamma(0.5 * m_));
            const double radial = integrate_gl(
                [&](double s) { return om(s) * om(s) * std::pow(s, m_ - 1); }, 0.0, 0.5, 96);
            return surface * angular * radial;
        }
        const auto inner = [&](double s) -> double {
            const double cstar = (rho * rho + s * s - 0.25) / (2.0 * rho * s);
            if (cstar >= 1.0) return 0.0;
            const double phi_max = cstar <= -1.0 ? M_PI : std::acos(cstar);
            const double ang = integrate_gl(
                [&](double phi) {
                    const double tau2 =
                        rho * rho + s * s - 2.0 * rho * s * std::cos(phi);
                    const double tau = std::sqrt(std::max(0.0, tau2));
                    return om(tau) * std::pow(std::sin(phi), m_ - 2);
                },
                0.0, phi_max, 48);
            return om(s) * std::pow(s, m_ - 1) * ang;
        };
        const double smin = std::max(0.0, rho - 0.5);
        if (smin >= 0.5) return 0.0;
        const double sstar = 0.5 - rho;  // angular cap reaches the full sphere
        double result = 0.0;
        if (sstar > smin && sstar < 0.5) {
            result = integrate_panels(inner, smin, sstar, 2, 64) +
                     integrate_panels(inner, sstar, 0.5, 2, 64);
        } else {
            result = integrate_panels(inner, smin, 0.5, 3, 64);
        }
        return surface * result;
    };

    std::vector<double> qvals(kPsiTableSize);
    for (int i = 0; i < kPsiTableSize; ++i) {
        const double rho = static_cast<double>(i) / (kPsiTableSize - 1);
        qvals[i] = table_scale * q_at(rho);
    }
    qvals.back() = 0.0;
    impl_->psi_table =
        CubicTable(0.0, 1.0, std::move(qvals), true, CubicTable::OutOfRange::kZero);

    const double psi0 = psi_cap_radial(0.0);
    if (std::abs(psi0 - table_scale) > 1e-6)
        throw std::runtime_error("SmoothingKernel: normalization check failed, Psi(0) = " +
                                 csv::format_double(psi0));
}

SmoothingKernel::~SmoothingKernel() = default;

double SmoothingKernel::normalization(int m) {
    if (m < 1) throw std::invalid_argument("SmoothingKernel: m must be >= 1");
    const double nu = 0.5 * m - 1.0;
    const double j_nu = specfun::first_bessel_zero(nu);
    // integral over R^m of omega_raw^2 = |S^{m-1}| int_0^{1/2} J_nu(2 j_nu s)^2 s ds
    // (the power s^{m-1-2nu} collapses to s for every m).
    const double radial = integrate_gl(
        [&](double s) {
            const double j = specfun::bessel_j(nu, 2.0 * j_nu * s);
            return j * j * s;
        },
        0.0, 0.5, 128);
    const double total = sphere_surface(m) * radial;
    if (!(total > 0.0) || !std::isfinite(total))
        throw std::runtime_error("SmoothingKernel: normalization quadrature failed");
    return 1.0 / std::sqrt(total);
}

double SmoothingKernel::omega(double r) const {
    if (std::isnan(r) || r < 0.0) throw std::domain_error("omega: radius must be >= 0");
    if (r > 0.5) return 0.0;
    return c_norm_ * omega_raw(nu_, j_nu_, r);
}

double SmoothingKernel::psi_cap_radial(double r) const {
    const double rho = r / impl_->sqrt_m;
    if (rho > 1.0) return 0.0;
    return impl_->psi_table(rho);
}

double SmoothingKernel::second_moment() const { return 4.0 * j_nu_ * j_nu_ / m_; }

double SmoothingKernel::psi_pdf(double x) const {
    if (m_ != 1) throw std::invalid_argument("psi_pdf: implemented for m = 1 only");
    // psi(x) = (1/pi) int_0^1 q(v) cos(v x) dv (Psi real and even).
    const double ax = std::abs(x);
    const int panels = std::max(4, static_cast<int>(std::ceil(ax / 3.0)));
    return integrate_panels(
               [&](double v) { return impl_->psi_table(v) * std::cos(v * x); }, 0.0, 1.0,
               panels, 24) /
           M_PI;
}

double SmoothingKernel::psi_sample(Rng& rng) const {
    if (m_ != 1) throw std::invalid_argument("psi_sample: implemented for m = 1 only");
    std::call_once(impl_->sampler_once, [this] {
        // Dense grid near the core, coarser on the tail; psi decays like
        // x^-4 so truncation at 300 leaves ~1e-7 mass.
        std::vector<double>& xs = impl_->sampler_x;
        for (double x = 0.0; x < 20.0; x += 0.005) xs.push_back(x);
        for (double x = 20.0; x <= 300.0; x += 0.05) xs.push_back(x);
        std::vector<double> pdf(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) pdf[i] = std::max(0.0, psi_pdf(xs[i]));
        impl_->sampler_cdf.assign(xs.size(), 0.0);
        for (std::size_t i = 1; i < xs.size(); ++i)
            impl_->sampler_cdf[i] = impl_->sampler_cdf[i - 1] +
                                    0.5 * (pdf[i] + pdf[i - 1]) * (xs[i] - xs[i - 1]);
        impl_->sampler_total = impl_->sampler_cdf.back();
        if (!(impl_->sampler_total > 0.0))
            throw std::runtime_error("psi_sample: degenerate CDF table");
    });
    const double u = rng.uniform01();
    const double sign = u < 0.5 ? -1.0 : 1.0;
    const double v = std::min(1.0 - 1e-16, 2.0 * std::abs(u - 0.5));
    const double target = v * impl_->sampler_total;
    const auto& cdf = impl_->sampler_cdf;
    const auto& xs = impl_->sampler_x;
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (cdf[mid] <= target)
            lo = mid;
        else
            hi = mid;
    }
    const double seg = cdf[hi] - cdf[lo];
    const double frac = seg > 0.0 ? (target - cdf[lo]) / seg : 0.0;
    return sign * (xs[lo] + frac * (xs[hi] - xs[lo]));
}

void SmoothingKernel::dump_table_csv(std::ostream& out) const {
    out << "radius,psi\n";
    for (int i = 0; i < kPsiTableSize; ++i) {
        const double rho = static_cast<double>(i) / (kPsiTableSize - 1);
        const double r = rho * impl_->sqrt_m;
        out << csv::make_row({csv::format_double(r), csv::format_double(psi_cap_radial(r))});
    }
}

std::shared_ptr<const SmoothingKernel> make_kernel(int m) {
    return std::make_shared<SmoothingKernel>(m);
}

}  // namespace rvfl
