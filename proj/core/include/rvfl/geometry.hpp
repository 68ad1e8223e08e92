#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace rvfl {

struct Ball {
    Eigen::VectorXd center;
    double radius = 0.0;
};

struct VolumeEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
};

struct DimensionEstimate {
    double value = 0.0;    // clamped to [1, m]
    double raw = 0.0;      // unclamped lg(|K + RB| / (V_m R^m))
    double stderr_ = 0.0;
    bool clamped = false;  // Monte Carlo noise pushed the raw value outside [1, m]
};

// Minimum enclosing ball of a point cloud (>= 2 distinct points, m <= 16).
// Move-to-front Welzl with deterministic shuffling and index-ordered
// tie-breaking; the returned radius is the exact covering radius of the
// computed center, so max_i |p_i - center| <= radius always holds.
Ball min_enclosing_ball(const std::vector<Eigen::VectorXd>& points);

// Max pairwise distance, exact O(n^2).
double diameter(const std::vector<Eigen::VectorXd>& points);

// Monte Carlo volume of K + rB by uniform sampling over the bounding box
// of K inflated by r; membership is min distance to the cloud <= r.
// Deterministic for fixed (seed, samples) and any thread count.
VolumeEstimate minkowski_ball_volume(const std::vector<Eigen::VectorXd>& points, double r,
                                     std::uint64_t samples, std::uint64_t seed);

// Finite point cloud standing in for the compact set K, with cached
// circumball, diameter, and effective dimension.
class Compactum {
  public:
    explicit Compactum(std::vector<Eigen::VectorXd> points);

    int dim() const { return m_; }
    const std::vector<Eigen::VectorXd>& points() const { return points_; }

    const Ball& circumball() const;
    const Eigen::VectorXd& circumcenter() const { return circumball().center; }
    double circumradius() const { return circumball().radius; }
    double diameter() const;

    // lg(|K + RB| / (V_m R^m)) with R the circumradius, clamped to [1, m].
    DimensionEstimate effective_dimension(std::uint64_t samples, std::uint64_t seed) const;

    Compactum translated(const Eigen::VectorXd& shift) const;

  private:
    std::vector<Eigen::VectorXd> points_;
    int m_ = 0;
    mutable std::optional<Ball> ball_;
    mutable std::optional<double> diameter_;
};

}  // namespace rvfl
