#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace rvfl {

// Catmull-Rom interpolation over a uniform grid on [x0, x1]. Ghost points:
// the left end mirrors evenly when the tabulated function is even there,
// otherwise extrapolates linearly; the right end extrapolates linearly.
class CubicTable {
  public:
    enum class OutOfRange { kZero, kThrow };

    CubicTable() = default;
    CubicTable(double x0, double x1, std::vector<double> values, bool even_at_left,
               OutOfRange oor)
        : x0_(x0), values_(std::move(values)), even_at_left_(even_at_left), oor_(oor) {
        if (values_.size() < 4) throw std::invalid_argument("CubicTable: need >= 4 values");
        if (!(x1 > x0)) throw std::invalid_argument("CubicTable: empty range");
        inv_h_ = (static_cast<double>(values_.size()) - 1.0) / (x1 - x0);
        x1_ = x1;
    }

    double x_min() const { return x0_; }
    double x_max() const { return x1_; }

    double operator()(double x) const {
        if (x < x0_ || x > x1_) {
            if (oor_ == OutOfRange::kZero) return 0.0;
            throw std::out_of_range("CubicTable: argument outside tabulated range");
        }
        const double t = (x - x0_) * inv_h_;
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(values_.size());
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(t);
        if (i > n - 2) i = n - 2;
        const double f = t - static_cast<double>(i);
        const double p1 = values_[i];
        const double p2 = values_[i + 1];
        const double p0 = i > 0 ? values_[i - 1]
                                : (even_at_left_ ? values_[1] : 2.0 * values_[0] - values_[1]);
        const double p3 = i + 2 < n ? values_[i + 2] : 2.0 * values_[n - 1] - values_[n - 2];
        return p1 + 0.5 * f *
                        (p2 - p0 +
                         f * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                              f * (3.0 * (p1 - p2) + p3 - p0)));
    }

  private:
    double x0_ = 0.0;
    double x1_ = 1.0;
    double inv_h_ = 1.0;
    std::vector<double> values_;
    bool even_at_left_ = false;
    OutOfRange oor_ = OutOfRange::kZero;
};

}  // namespace rvfl
