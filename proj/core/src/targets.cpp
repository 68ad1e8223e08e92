#include "rvfl/targets.hpp"

#include <cmath>
#include <stdexcept>

namespace rvfl {

std::vector<Eigen::VectorXd> tensor_grid(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                         int per_axis) {
    if (per_axis < 2) throw std::invalid_argument("tensor_grid: per_axis must be >= 2");
    const int m = static_cast<int>(lo.size());
    if (hi.size() != m) throw std::invalid_argument("tensor_grid: box dimension mismatch");
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(per_axis);
    std::vector<Eigen::VectorXd> out;
    out.reserve(total);
    Eigen::VectorXd x(m);
    std::vector<int> idx(m, 0);
    for (std::size_t k = 0; k < total; ++k) {
        for (int i = 0; i < m; ++i)
            x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (per_axis - 1);
        out.push_back(x);
        for (int i = m - 1; i >= 0; --i) {
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
        }
    }
    return out;
}

std::vector<Eigen::VectorXd> ball_lattice(int m, double radius, int per_axis) {
    const Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, -radius);
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(m, radius);
    std::vector<Eigen::VectorXd> out;
    for (auto& x : tensor_grid(lo, hi, per_axis))
        if (x.norm() <= radius * (1.0 + 1e-12)) out.push_back(std::move(x));
    return out;
}

Target make_builtin_target(const std::string& name, int m, int resolution) {
    if (m < 1) throw std::invalid_argument("make_builtin_target: m must be >= 1");
    if (resolution < 3) throw std::invalid_argument("make_builtin_target: resolution must be >= 3");

    std::function<double(const Eigen::VectorXd&)> f;
    double ell = 0.0;
    if (name == "tent") {
        if (m != 1) throw std::invalid_argument("target 'tent' is 1-dimensional; use 'radial-bump'");
        f = [](const Eigen::VectorXd& x) { return 1.0 - std::abs(x[0]); };
        ell = 1.0;
    } else if (name == "radial-bump") {
        f = [](const Eigen::VectorXd& x) { return std::max(0.0, 1.0 - x.norm()); };
        ell = 1.0;
    } else if (name == "sin3") {
        f = [](const Eigen::VectorXd& x) { return std::sin(3.0 * x[0]); };
        ell = 3.0;
    } else {
        throw std::invalid_argument("unknown built-in target '" + name + "'; known: " +
                                    builtin_target_help());
    }

    std::vector<Eigen::VectorXd> pts;
    if (m == 1) {
        pts = tensor_grid(Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0),
                          resolution);
    } else {
        pts = ball_lattice(m, 1.0, resolution);
    }
    std::vector<double> values;
    values.reserve(pts.size());
    for (const auto& x : pts) values.push_back(f(x));
    return Target{Compactum(std::move(pts)), std::move(values), ell};
}

std::vector<std::string> builtin_target_names() { return {"tent", "radial-bump", "sin3"}; }

std::string builtin_target_help() {
    return "tent (1 - |x| on [-1,1], m=1, ell=1), "
           "radial-bump (max(0, 1 - |x|) on the unit ball, ell=1), "
           "sin3 (sin(3 x_1) on the unit ball, ell=3)";
}

int default_resolution(int m) {
    switch (m) {
        case 1: return 201;
        case 2: return 21;
        case 3: return 9;
        default: return 5;
    }
}

RadialExtension::RadialExtension(int m, std::function<double(double)> profile,
                                 double support_radius, double lipschitz, double sup_abs,
                                 double domain_radius)
    : m_(m),
      profile_(std::move(profile)),
      support_radius_(support_radius),
      lipschitz_(lipschitz),
      sup_abs_(sup_abs),
      domain_radius_(domain_radius) {
    if (m < 1) throw std::invalid_argument("RadialExtension: m must be >= 1");
    if (!(support_radius > 0.0))
        throw std::invalid_argument("RadialExtension: support radius must be > 0");
}

double RadialExtension::operator()(const Eigen::VectorXd& x) const {
    return radial_profile(x.norm());
}

double RadialExtension::radial_profile(double r) const {
    return r > support_radius_ ? 0.0 : profile_(r);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> RadialExtension::support_box() const {
    return {Eigen::VectorXd::Constant(m_, -support_radius_),
            Eigen::VectorXd::Constant(m_, support_radius_)};
}

std::shared_ptr<const RadialExtension> radial_tent_extension(int m) {
    return std::make_shared<RadialExtension>(
        m, [](double r) { return std::max(0.0, 1.0 - r); }, 1.0, 1.0, 1.0, 1.0);
}

std::shared_ptr<const RadialExtension> radial_sine_extension(int m) {
    return std::make_shared<RadialExtension>(
        m, [](double r) { return std::sin(3.0 * std::max(0.0, 1.0 - r)); }, 1.0, 3.0, 1.0, 1.0);
}

}  // namespace rvfl
