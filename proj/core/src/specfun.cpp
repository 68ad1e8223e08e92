#include "rvfl/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rvfl::specfun {
namespace {

constexpr int kMaxIter = 20000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Ascending series J_nu(t) = (t/2)^nu / Gamma(nu+1) * sum_k (-(t/2)^2)^k /
// (k! (nu+1)_k). Accurate while the terms do not grow much before decaying,
// which holds for t <= 12 or t moderately below nu.
double bessel_series(double nu, double t) {
    const double q = 0.25 * t * t;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 2000; ++k) {
        term *= -q / (k * (nu + k));
        sum += term;
        if (std::abs(term) <= kEps * std::abs(sum) + kTiny) break;
    }
    if (sum == 0.0) return 0.0;
    // Prefactor in log form; safe because nu >= -1/2 keeps Gamma(nu+1) finite.
    const double log_pref = nu * std::log(0.5 * t) - std::lgamma(nu + 1.0);
    return std::copysign(std::exp(log_pref + std::log(std::abs(sum))), sum);
}

// Steed's method: CF1 for J'_nu/J_nu, downward recurrence to mu = nu - nl,
// CF2 for the complex ratio at mu, then the Wronskian fixes the magnitude.
double bessel_steed(double nu, double x) {
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl;

    // CF1: h -> J'_nu/J_nu, isign tracks the sign of J_nu.
    int isign = 1;
    double h = nu * xi;
    if (std::abs(h) < kTiny) h = kTiny;
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    bool converged = false;
    for (int i = 1; i <= kMaxIter; ++i) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b - 1.0 / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) < kEps) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::runtime_error("bessel_j: CF1 did not converge");

    // Downward recurrence in the order from nu to xmu.
    double rjl = isign * kTiny;
    double rjpl = h * rjl;
    const double rjl_at_nu = rjl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    // CF2 at xmu: p + iq = (J' + iY')/(J + iY), requires x not small.
    const double xmu2 = xmu * xmu;
    double a = 0.25 - xmu2;
    double p = -0.5 * xi;
    double q = 1.0;
    const double br = 2.0 * x;
    double bi = 2.0;
    double fct = a * xi / (p * p + q * q);
    double cr = br + q * fct;
    double ci = bi + p * fct;
    double den = br * br + bi * bi;
    double dr = br / den;
    double di = -bi / den;
    double dlr = cr * dr - ci * di;
    double dli = cr * di + ci * dr;
    double temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    converged = false;
    for (int i = 2; i <= kMaxIter; ++i) {
        a += 2 * (i - 1);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) {
            converged = true;
            break;
        }
    }
    if (!converged) throw std::runtime_error("bessel_j: CF2 did not converge");

    // Wronskian J_mu Y'_mu - J'_mu Y_mu = 2/(pi x) pins |J_mu|.
    const double w = xi2 / M_PI;
    const double gam = (p - f) / q;
    double rjmu = std::sqrt(w / ((p - f) * gam + q));
    rjmu = std::copysign(rjmu, rjl);
    return rjmu * (rjl_at_nu / rjl);
}

double bessel_nonneg_order(double nu, double t) {
    if (t == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (t <= 12.0 || t <= 1.2 * nu + 2.0) return bessel_series(nu, t);
    return bessel_steed(nu, t);
}

}  // namespace

double bessel_j(double nu, double t) {
    if (std::isnan(nu) || std::isnan(t)) throw std::domain_error("bessel_j: NaN argument");
    if (t < 0.0) throw std::domain_error("bessel_j: t must be >= 0");
    if (nu < -0.5) throw std::domain_error("bessel_j: nu must be >= -1/2");
    if (nu >= 0.0) return bessel_nonneg_order(nu, t);
    // nu in [-1/2, 0): one step of J_{nu} = (2(nu+1)/t) J_{nu+1} - J_{nu+2}
    // with both computed orders nonnegative.
    if (t == 0.0) return std::numeric_limits<double>::infinity();
    if (t <= 12.0) return bessel_series(nu, t);
    const double j1 = bessel_nonneg_order(nu + 1.0, t);
    const double j2 = bessel_nonneg_order(nu + 2.0, t);
    return (2.0 * (nu + 1.0) / t) * j1 - j2;
}

double first_bessel_zero(double nu) {
    if (std::isnan(nu) || nu < -0.5) throw std::domain_error("first_bessel_zero: nu must be >= -1/2");
    // J_nu > 0 on (0, j_nu); scan right from a point below the zero.
    double lo = std::max(0.1, nu);
    if (bessel_j(nu, lo) <= 0.0) throw std::runtime_error("first_bessel_zero: bad start bracket");
    const double step = 0.5;
    double hi = lo;
    bool bracketed = false;
    for (int i = 0; i < 400; ++i) {
        hi = lo + step;
        if (bessel_j(nu, hi) <= 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
    }
    if (!bracketed) throw std::runtime_error("first_bessel_zero: no sign change found");
    while (hi - lo > 1e-13 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (bessel_j(nu, mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

double lower_gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int n = 1; n <= kMaxIter; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("regularized_lower_gamma: series did not converge");
}

double upper_gamma_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw std::runtime_error("regularized_lower_gamma: continued fraction did not converge");
}

}  // namespace

double regularized_lower_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("regularized_lower_gamma: a must be > 0");
    if (std::isnan(x) || x < 0.0) throw std::domain_error("regularized_lower_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? lower_gamma_series(a, x) : 1.0 - upper_gamma_cf(a, x);
}

double log_unit_ball_volume(int m) {
    if (m < 1) throw std::domain_error("unit_ball_volume: m must be >= 1");
    return 0.5 * m * std::log(M_PI) - std::lgamma(0.5 * m + 1.0);
}

double unit_ball_volume(int m) { return std::exp(log_unit_ball_volume(m)); }

double chi_cdf(int m, double r) {
    if (m < 1) throw std::domain_error("chi_cdf: m must be >= 1");
    if (std::isnan(r) || r < 0.0) throw std::domain_error("chi_cdf: r must be >= 0");
    if (r == 0.0) return 0.0;
    return regularized_lower_gamma(0.5 * m, 0.5 * r * r);
}

double chi_mean(int m) {
    if (m < 1) throw std::domain_error("chi_mean: m must be >= 1");
    return std::exp(0.5 * std::log(2.0) + std::lgamma(0.5 * (m + 1)) - std::lgamma(0.5 * m));
}

}  // namespace rvfl::specfun
