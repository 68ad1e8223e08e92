#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvfl/geometry.hpp"
#include "rvfl/lipschitz.hpp"

namespace rvfl {

// Uniform tensor grid with per_axis nodes along each axis (endpoints included).
std::vector<Eigen::VectorXd> tensor_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                         int per_axis);

// Tensor lattice of [-radius, radius]^m restricted to the closed ball.
std::vector<Eigen::VectorXd> ball_lattice(int m, double radius, int per_axis);

// A sampled target in original coordinates, plus the exact Lipschitz
// constant when the generator knows it.
struct Target {
    Compactum domain;
    std::vector<double> values;
    std::optional<double> ell;
};

// Built-in analytic samplers:
//   "tent"        1 - |x| on [-1, 1], m = 1 only            (ell = 1)
//   "radial-bump" max(0, 1 - |x|) on the unit-ball lattice  (ell = 1)
//   "sin3"        sin(3 x_1) on the unit-ball lattice       (ell = 3)
// resolution = points per axis (grid for m = 1, lattice for m >= 2).
Target make_builtin_target(const std::string& name, int m, int resolution);
std::vector<std::string> builtin_target_names();
std::string builtin_target_help();

// Lattice resolution keeping the sample-cloud size (and the quadratic
// recentering / extension scans over it) manageable per dimension:
// 201 (m = 1), 21 (m = 2), 9 (m = 3), 5 beyond.
int default_resolution(int m);

// Exactly radial compactly supported profile; used as an analytic stand-in
// for the sampled extension where tests need the radial Fourier fast path.
class RadialExtension final : public Extension {
  public:
    RadialExtension(int m, std::function<double(double)> profile, double support_radius,
                    double lipschitz, double sup_abs, double domain_radius);

    double operator()(const Eigen::VectorXd& x) const override;
    int dim() const override { return m_; }
    std::pair<Eigen::VectorXd, Eigen::VectorXd> support_box() const override;
    double lipschitz() const override { return lipschitz_; }
    double sup_abs() const override { return sup_abs_; }
    double domain_radius() const override { return domain_radius_; }
    bool radial() const override { return true; }
    double radial_profile(double r) const override;
    double support_radius() const { return support_radius_; }

  private:
    int m_;
    std::function<double(double)> profile_;
    double support_radius_;
    double lipschitz_;
    double sup_abs_;
    double domain_radius_;
};

// r -> max(0, 1 - r): the radial tent, Lipschitz 1, sup 1, support radius 1.
std::shared_ptr<const RadialExtension> radial_tent_extension(int m);

// r -> sin(3 max(0, 1 - r)): Lipschitz 3, support radius 1.
std::shared_ptr<const RadialExtension> radial_sine_extension(int m);

}  // namespace rvfl
