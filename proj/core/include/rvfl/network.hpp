#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rvfl/spectral.hpp"

namespace rvfl {

// Random hidden layer: rows of w have i.i.d. N(0, sigma^2) coordinates
// (covariance sigma^2 I), biases are i.i.d. uniform on
// [-sigma R sqrt(m), sigma R sqrt(m)]. Row j is drawn from substream j of
// the master seed, so layers with the same seed are nested across n and
// identical for every thread count.
struct HiddenLayer {
    int m = 0;
    int n = 0;
    double sigma = 0.0;
    double R = 0.0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd w;  // n x m
    Eigen::VectorXd b;  // n
};

HiddenLayer sample_hidden(int n, int m, double sigma, double R, std::uint64_t seed);

// Depth-2 ReLU network N(x) = sum_j a_j max(<w_j, x> + b_j, 0) + zeta.
struct RvflNetwork {
    int m = 0;
    int n = 0;
    double sigma = 0.0;
    double R = 0.0;
    std::uint64_t seed = 0;
    double zeta = 0.0;
    std::string provenance;  // "constructive" or "least-squares"
    Eigen::MatrixXd w;       // n x m
    Eigen::VectorXd b;       // n
    Eigen::VectorXd a;       // n

    double eval(const Eigen::VectorXd& x) const;
    std::vector<double> eval_batch(const std::vector<Eigen::VectorXd>& xs) const;
    // sum_j |a_j| |w_j|: a bound on the network's Lipschitz constant, used
    // to certify grid sups (inflation = bound * grid spacing).
    double lipschitz_bound() const;
};

// The outer-weight density
//   G(w, b) = -2 sigma R sqrt(m) Lambda^2 (2pi)^{-m/2} lambda^m
//             |F(Lambda w)| Psi(w / sigma) [|w| >= theta sigma sqrt(m)]
//             cos(Lambda b - arg F(Lambda w)),
// Lambda = lambda / sigma. Products are assembled in log-magnitude + sign
// form; a value whose magnitude cannot be represented raises overflow.
// Supported on the annulus theta sigma sqrt(m) <= |w| <= sigma sqrt(m).
class WeightDensity {
  public:
    // ktilde_volume: |K + (M/ell) B|, e.g. from minkowski_ball_volume or
    // from the closed-form bound V_m R^m 2^{d(K)}.
    WeightDensity(std::shared_ptr<const SpectralSurrogate> surrogate, double sigma, double R,
                  double ktilde_volume);

    double operator()(const Eigen::VectorXd& w, double b) const;
    // log |G| (or -inf when G = 0) and the sign in {-1, 0, +1}.
    double log_magnitude(const Eigen::VectorXd& w, double b, int& sign) const;

    int dim() const { return m_; }
    double sigma() const { return sigma_; }
    double R() const { return R_; }
    double Lambda() const { return Lambda_; }
    double ktilde_volume() const { return ktilde_volume_; }
    const SpectralSurrogate& surrogate() const { return *surrogate_; }

    // ln B with B = 2 R^2 sqrt(m) (2pi)^{-m/2} lambda^{m+1} (1 + 1/theta)
    // ell |K~|: the a.s. bound on |G(w,b) rho(<w,x>+b)| over x in K~.
    double log_hoeffding_b() const;
    // P(|avg - mean| > t) bound: 2 exp(-(n/2) (t/B)^2); n = 0 gives 2.
    double hoeffding_envelope(std::uint64_t n, double t) const;

  private:
    std::shared_ptr<const SpectralSurrogate> surrogate_;
    int m_;
    double sigma_, R_, ktilde_volume_;
    double Lambda_, lambda_, theta_;
    double log_prefactor_;  // log(2 sigma R sqrt(m) Lambda^2 (2pi)^{-m/2} lambda^m)
};

// a_j = G(w_j, b_j) / n; zeta is the offset removed when the target was
// recentered, so eval() reports values in the original range.
RvflNetwork build_constructive(const HiddenLayer& layer, const WeightDensity& density,
                               double zeta = 0.0);

// Minimum-norm solution of min ||Phi a - y||^2 + ridge ||a||^2 over the
// given layer (Phi_pj = rho(<w_j, x_p> + b_j)), by a rank-revealing
// orthogonal factorization. zeta is 0: the fit absorbs any offset.
RvflNetwork fit_least_squares(const HiddenLayer& layer, const std::vector<Eigen::VectorXd>& xs,
                              const std::vector<double>& ys, double ridge = 0.0);

// max_i |net(grid[i]) - (reference[i] + reference_offset)| and where it
// happens. Pass offset = net.zeta when the reference lacks the offset.
struct GridSup {
    double value = 0.0;
    std::size_t argmax = 0;
};
GridSup sup_error(const RvflNetwork& net, const std::vector<Eigen::VectorXd>& grid,
                  const std::vector<double>& reference, double reference_offset = 0.0);

}  // namespace rvfl
