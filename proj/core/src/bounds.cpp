#include "rvfl/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rvfl/specfun.hpp"

namespace rvfl {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kE = 2.71828182845904523536;
constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLn10 = 2.30258509299404568402;

double kahan_sum(const std::vector<double>& terms) {
    double sum = 0.0, c = 0.0;
    for (double t : terms) {
        const double y = t - c;
        const double s = sum + y;
        c = (s - sum) - y;
        sum = s;
    }
    return sum;
}

double airy_factor(int m) {
    return 2.0 - std::cbrt(2.0) * specfun::kAiryA * std::pow(static_cast<double>(m), -2.0 / 3.0);
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

void check_common(int m, double epsilon, double ell, double R) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    check_positive(epsilon, "epsilon");
    check_positive(ell, "ell");
    check_positive(R, "R");
}

void check_eta_dk(int m, double eta, double dK) {
    if (!(eta > 0.0) || !(eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
    if (!(dK >= 1.0) || !(dK <= static_cast<double>(m)))
        throw std::invalid_argument("dK must lie in [1, m]");
}

}  // namespace

ParameterSchedule schedule(int m, double epsilon, double ell, double R, double sigma) {
    check_common(m, epsilon, ell, R);
    check_positive(sigma, "sigma");
    ParameterSchedule s;
    s.m = m;
    s.epsilon = epsilon;
    s.ell = ell;
    s.R = R;
    s.sigma = sigma;
    const double md = static_cast<double>(m);
    const double denom = md * md + 3.0 * md + 1.0;
    s.alpha = md * (md + 2.0) / denom;
    s.beta = 1.0 / denom;
    s.gamma = md / denom;
    s.c_a = airy_factor(m);
    s.Lambda = (1.0 / sigma) * (ell / (s.alpha * epsilon)) * s.c_a * std::sqrt(md);
    s.lambda = sigma * s.Lambda;
    // 1/theta = [(1/(beta eps)) (2 ell R / sqrt(pi m)) V_m R^m]^{1/m}
    //           * lambda / sqrt(2 pi / e), in log domain.
    const double log_bracket = -std::log(s.beta * epsilon) + std::log(2.0 * ell * R) -
                               0.5 * std::log(kPi * md) + specfun::log_unit_ball_volume(m) +
                               md * std::log(R);
    const double log_inv_theta =
        log_bracket / md + std::log(s.lambda) - 0.5 * std::log(kTwoPi / kE);
    s.theta = std::exp(-log_inv_theta);
    return s;
}

double lemma2_bound(int m, double ell, double lambda) {
    check_positive(ell, "ell");
    check_positive(lambda, "lambda");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    return (ell / lambda) * airy_factor(m) * std::sqrt(static_cast<double>(m));
}

double log_lemma3_bound(int m, double ell, double R, double theta, double lambda) {
    check_positive(ell, "ell");
    check_positive(R, "R");
    check_positive(theta, "theta");
    check_positive(lambda, "lambda");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const double md = static_cast<double>(m);
    return std::log(2.0 * ell * R) - 0.5 * std::log(kPi * md) +
           specfun::log_unit_ball_volume(m) +
           md * (std::log(R * theta * lambda) - 0.5 * std::log(kTwoPi / kE));
}

double lemma3_bound(int m, double ell, double R, double theta, double lambda) {
    return std::exp(log_lemma3_bound(m, ell, R, theta, lambda));
}

double log_hoeffding_b_closed_form(int m, double ell, double R, double lambda, double theta,
                                   double dK) {
    check_positive(ell, "ell");
    check_positive(R, "R");
    check_positive(lambda, "lambda");
    check_positive(theta, "theta");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    const double md = static_cast<double>(m);
    const double log_ktilde = specfun::log_unit_ball_volume(m) + md * std::log(R) + dK * kLn2;
    return std::log(2.0 * R * R) + 0.5 * std::log(md) - 0.5 * md * std::log(kTwoPi) +
           (md + 1.0) * std::log(lambda) + std::log1p(1.0 / theta) + std::log(ell) +
           log_ktilde;
}

double n_main_log10(int m, double epsilon, double eta, double ell, double R, double dK) {
    check_common(m, epsilon, ell, R);
    check_eta_dk(m, eta, dK);
    const ParameterSchedule s = schedule(m, epsilon, ell, R, 1.0);
    const double md = static_cast<double>(m);
    const std::vector<double> terms = {
        -std::log(8.0 * kPi * kE),
        std::log(std::log(2.0 / eta)),
        2.0 * std::log1p(s.theta),
        2.0 * (md + 2.0) * std::log1p((md + 1.0) / (md * (md + 2.0))),
        4.0 * std::log(s.c_a),
        (2.0 + 2.0 / md) * std::log(md * md + 3.0 * md + 1.0),
        2.0 * dK * kLn2,
        -std::cbrt(2.0) * specfun::kAiryA * std::pow(md, 1.0 / 3.0),
        -std::log(md),
        (2.0 * md + 6.0 + 2.0 / md) * std::log(2.0 * ell * R * std::sqrt(kE) / epsilon)};
    return kahan_sum(terms) / kLn10;
}

double n_approx_log10(int m, double epsilon, double eta, double ell, double R, double dK) {
    check_common(m, epsilon, ell, R);
    check_eta_dk(m, eta, dK);
    const double md = static_cast<double>(m);
    const std::vector<double> terms = {
        std::log(2.0 * kE / kPi),
        std::log(std::log(2.0 / eta)),
        (2.0 * md + 6.0) * std::log(2.0 * ell * R * std::sqrt(kE) / epsilon),
        2.0 * dK * kLn2,
        -std::cbrt(2.0) * specfun::kAiryA * std::pow(md, 1.0 / 3.0),
        3.0 * std::log(md)};
    return kahan_sum(terms) / kLn10;
}

std::optional<std::uint64_t> n_main_integer(int m, double epsilon, double eta, double ell,
                                            double R, double dK) {
    const double lg = n_main_log10(m, epsilon, eta, ell, R, dK);
    if (lg >= 18.9) return std::nullopt;  // would not fit in 64 bits
    return static_cast<std::uint64_t>(std::ceil(std::pow(10.0, lg)));
}

double log_main_tail(int m, double epsilon, double eta, double ell, double R, double dK) {
    const ParameterSchedule s = schedule(m, epsilon, ell, R, 1.0);
    const double log_n = n_main_log10(m, epsilon, eta, ell, R, dK) * kLn10;
    const double log_b = log_hoeffding_b_closed_form(m, ell, R, s.lambda, s.theta, dK);
    const double t = s.gamma * epsilon;
    // ln(2 exp(-(n/2)(t/B)^2)) with the inner exponent assembled in logs.
    const double log_exponent = log_n - kLn2 + 2.0 * (std::log(t) - log_b);
    return kLn2 - std::exp(log_exponent);
}

ThetaRegime theta_regime_report(const ParameterSchedule& s) {
    ThetaRegime r;
    r.inv_theta = 1.0 / s.theta;
    r.large_m_approx = 2.0 * s.ell * s.R * kE / s.epsilon;
    r.ratio = r.inv_theta / r.large_m_approx;
    r.vm_root = std::exp(specfun::log_unit_ball_volume(s.m) / s.m);
    r.stirling = std::sqrt(kTwoPi * kE / s.m);
    r.stirling_ratio = r.vm_root / r.stirling;
    return r;
}

}  // namespace rvfl
