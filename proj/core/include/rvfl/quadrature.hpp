#pragma once

#include <vector>

namespace rvfl {

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with n points; results are cached per n.
const GaussRule& gauss_legendre(int n);

// Applies a cached rule to [a, b].
template <typename F>
double integrate_gl(F&& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

// Panels x GL nodes over [a, b].
template <typename F>
double integrate_panels(F&& f, double a, double b, int panels, int n) {
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) sum += integrate_gl(f, a + p * h, a + (p + 1) * h, n);
    return sum;
}

}  // namespace rvfl
