#pragma once

namespace rvfl::specfun {

// First negative zero of the Airy function Ai.
inline constexpr double kAiryA = -2.33810741045976703849;

// Bessel function of the first kind J_nu(t), nu >= -1/2, t >= 0.
// Power series at small t, Steed's continued-fraction method at large t.
double bessel_j(double nu, double t);

// First positive zero j_nu of J_nu, nu >= -1/2. Bracketing scan followed
// by bisection to a bracket width below 1e-12.
double first_bessel_zero(double nu);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_lower_gamma(double a, double x);

// Volume of the unit ball in R^m, pi^{m/2} / Gamma(m/2 + 1).
double unit_ball_volume(int m);
double log_unit_ball_volume(int m);

// CDF of the chi distribution with m degrees of freedom: P(m/2, r^2/2).
double chi_cdf(int m, double r);

// Mean of the chi distribution: sqrt(2) Gamma((m+1)/2) / Gamma(m/2).
double chi_mean(int m);

}  // namespace rvfl::specfun
