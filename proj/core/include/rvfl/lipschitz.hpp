#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "rvfl/geometry.hpp"

namespace rvfl {

// A Lipschitz target recentered per the construction: domain translated so
// the circumcenter sits at the origin, values shifted so their range is
// [-M, M]. The removed offset zeta and center p are kept so network outputs
// can be reported as N(x - p) + zeta in original coordinates.
struct SampledFunction {
    Compactum domain;            // recentered points
    std::vector<double> values;  // recentered values, range exactly [-M, M]
    double ell = 0.0;            // Lipschitz constant in force
    double M = 0.0;              // half-range of the original values
    double zeta = 0.0;           // removed value offset
    Eigen::VectorXd p;           // removed circumcenter (original coordinates)
    double R = 0.0;              // circumradius
};

// Smallest Lipschitz constant consistent with the samples (max pairwise
// difference quotient). Coincident points with different values are rejected.
double estimate_lipschitz(const Compactum& domain, const std::vector<double>& values);

// Builds the recentered SampledFunction. When ell is supplied it must be at
// least the sample estimate; otherwise the estimate is used (and must be
// positive: constant targets need an explicit ell > 0).
SampledFunction recenter(const Compactum& domain, const std::vector<double>& values,
                         std::optional<double> ell = std::nullopt);

// Compactly supported Lipschitz function on R^m: the common interface of
// the sampled-target extension and the analytic test fixtures. Evaluators
// are pure and thread-safe.
class Extension {
  public:
    virtual ~Extension() = default;
    virtual double operator()(const Eigen::VectorXd& x) const = 0;
    virtual int dim() const = 0;
    // Axis-aligned box outside which the function vanishes.
    virtual std::pair<Eigen::VectorXd, Eigen::VectorXd> support_box() const = 0;
    virtual double lipschitz() const = 0;
    virtual double sup_abs() const = 0;       // bound M on |value|
    virtual double domain_radius() const = 0; // circumradius R of the underlying K
    // True when the function is exactly a profile of |x|; enables the
    // radial Fourier fast path.
    virtual bool radial() const { return false; }
    virtual double radial_profile(double r) const;
};

// Pointwise maximal extension evaluator:
//   x -> rho(|f(a)| - ell |x - a|) * sign f(a),
// a the lowest-index maximizer of |f(u)| - ell |x - u| over the domain
// points. Agrees with f on the samples, ell-Lipschitz, |value| <= M,
// supported inside K + (M/ell) B.
class McShaneExtension final : public Extension {
  public:
    explicit McShaneExtension(SampledFunction base);

    double operator()(const Eigen::VectorXd& x) const override;
    int dim() const override;
    std::pair<Eigen::VectorXd, Eigen::VectorXd> support_box() const override;
    double lipschitz() const override { return base_.ell; }
    double sup_abs() const override { return base_.M; }
    double domain_radius() const override { return base_.R; }

    const SampledFunction& base() const { return base_; }

  private:
    SampledFunction base_;
    Eigen::VectorXd box_lo_, box_hi_;
};

// Max over random pairs (x, x + delta u) of |f(x + delta u) - f(x)| / delta
// with delta = 1e-5, x uniform in the support box, u a random direction.
// For a valid extension the result is <= ell (1 + 1e-3).
double gradient_sup_check(const Extension& ext, std::uint64_t trials, std::uint64_t seed);

}  // namespace rvfl
