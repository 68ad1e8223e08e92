#pragma once

#include <cstdint>
#include <optional>

namespace rvfl {

// Parameter schedule for accuracy epsilon: splits the error budget as
// alpha + beta + gamma = 1 (exact rationals in m) and derives the
// frequency scale Lambda, lambda = sigma Lambda (independent of sigma) and
// the truncation fraction theta.
struct ParameterSchedule {
    int m = 0;
    double epsilon = 0.0, ell = 0.0, R = 0.0, sigma = 0.0;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    double c_a = 0.0;  // 2 - 2^{1/3} a m^{-2/3}, a the first Airy zero
    double Lambda = 0.0, lambda = 0.0, theta = 0.0;
};

ParameterSchedule schedule(int m, double epsilon, double ell, double R, double sigma);

// Smoothing error bound (ell/lambda)(2 - 2^{1/3} a m^{-2/3}) sqrt(m); the
// schedule's lambda turns it into exactly alpha * epsilon.
double lemma2_bound(int m, double ell, double lambda);

// Truncation error bound (2 ell R / sqrt(pi m)) V_m (R theta lambda /
// sqrt(2 pi / e))^m; the schedule's theta turns it into beta * epsilon.
double lemma3_bound(int m, double ell, double R, double theta, double lambda);
double log_lemma3_bound(int m, double ell, double R, double theta, double lambda);

// ln B with the closed-form volume bound |K~| <= V_m R^m 2^{dK}:
// B = 2 R^2 sqrt(m) (2pi)^{-m/2} lambda^{m+1} (1 + 1/theta) ell |K~|.
double log_hoeffding_b_closed_form(int m, double ell, double R, double lambda, double theta,
                                   double dK);

// Width lower bounds, returned as log10(n); n itself is astronomically
// large for any interesting epsilon. Compensated log-domain summation.
double n_main_log10(int m, double epsilon, double eta, double ell, double R, double dK);
double n_approx_log10(int m, double epsilon, double eta, double ell, double R, double dK);

// n_main rounded up, when it fits in 64 bits.
std::optional<std::uint64_t> n_main_integer(int m, double epsilon, double eta, double ell,
                                            double R, double dK);

// ln of the concentration tail 2 exp(-(n/2)(t/B)^2) evaluated at
// n = n_main, t = gamma epsilon, B as above: the end-to-end consistency
// check is log_main_tail <= ln(eta).
double log_main_tail(int m, double epsilon, double eta, double ell, double R, double dK);

// Diagnostics for the large-m simplifications: 1/theta vs 2 ell R e /
// epsilon, and V_m^{1/m} vs sqrt(2 pi e / m).
struct ThetaRegime {
    double inv_theta = 0.0;
    double large_m_approx = 0.0;  // 2 ell R e / epsilon
    double ratio = 0.0;
    double vm_root = 0.0;          // V_m^{1/m}
    double stirling = 0.0;         // sqrt(2 pi e / m)
    double stirling_ratio = 0.0;
};
ThetaRegime theta_regime_report(const ParameterSchedule& s);

}  // namespace rvfl
