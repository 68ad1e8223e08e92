#include "rvfl/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "rvfl/parallel.hpp"
#include "rvfl/rng.hpp"
#include "rvfl/specfun.hpp"

namespace rvfl {
namespace {

void validate_cloud(const std::vector<Eigen::VectorXd>& points) {
    if (points.empty()) throw std::invalid_argument("point cloud is empty");
    const Eigen::Index m = points.front().size();
    if (m < 1) throw std::invalid_argument("points must have dimension >= 1");
    bool distinct = false;
    for (const auto& p : points) {
        if (p.size() != m) throw std::invalid_argument("inconsistent point dimensions");
        if (!p.allFinite()) throw std::invalid_argument("non-finite point coordinate");
        if (!distinct && (p - points.front()).squaredNorm() > 0.0) distinct = true;
    }
    if (!distinct) throw std::invalid_argument("point cloud needs >= 2 distinct points");
}

class WelzlSolver {
  public:
    WelzlSolver(const std::vector<Eigen::VectorXd>& pts, int m)
        : pts_(pts), m_(m), perm_(pts.size()) {
        for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = static_cast<int>(i);
    }

    Ball solve() {
        std::vector<int> support;
        support.reserve(m_ + 1);
        return mtf_mb(static_cast<int>(perm_.size()), support);
    }

  private:
    // Circumball of <= m+1 support points: center = p0 + sum_i y_i (p_i - p0)
    // with 2 G y = d, G the Gram matrix of the edge vectors.
    Ball ball_from_support(const std::vector<int>& support) const {
        Ball b;
        b.center = Eigen::VectorXd::Zero(m_);
        if (support.empty()) {
            b.radius = -1.0;  // contains nothing
            return b;
        }
        const Eigen::VectorXd& p0 = pts_[support[0]];
        const int k = static_cast<int>(support.size());
        if (k == 1) {
            b.center = p0;
            b.radius = 0.0;
            return b;
        }
        Eigen::MatrixXd edges(k - 1, m_);
        Eigen::VectorXd d(k - 1);
        for (int i = 1; i < k; ++i) {
            const Eigen::VectorXd e = pts_[support[i]] - p0;
            edges.row(i - 1) = e.transpose();
            d[i - 1] = e.squaredNorm();
        }
        const Eigen::MatrixXd gram = 2.0 * edges * edges.transpose();
        // Minimum-norm solve tolerates nearly affinely dependent supports.
        const Eigen::VectorXd y =
            gram.completeOrthogonalDecomposition().solve(d);
        b.center = p0 + edges.transpose() * y;
        b.radius = (b.center - p0).norm();
        return b;
    }

    bool contains(const Ball& b, int idx) const {
        if (b.radius < 0.0) return false;
        const double r2 = b.radius * b.radius;
        return (pts_[idx] - b.center).squaredNorm() <= r2 + 1e-12 * (1.0 + r2);
    }

    // Move-to-front Welzl: scanning in index order keeps support-set
    // tie-breaking deterministic; recursion depth is bounded by m + 2.
    Ball mtf_mb(int end, std::vector<int>& support) {
        Ball ball = ball_from_support(support);
        if (static_cast<int>(support.size()) == m_ + 1) return ball;
        for (int i = 0; i < end; ++i) {
            const int idx = perm_[i];
            if (!contains(ball, idx)) {
                support.push_back(idx);
                ball = mtf_mb(i, support);
                support.pop_back();
                for (int j = i; j > 0; --j) perm_[j] = perm_[j - 1];
                perm_[0] = idx;
            }
        }
        return ball;
    }

    const std::vector<Eigen::VectorXd>& pts_;
    int m_;
    std::vector<int> perm_;
};

}  // namespace

Ball min_enclosing_ball(const std::vector<Eigen::VectorXd>& points) {
    validate_cloud(points);
    const int m = static_cast<int>(points.front().size());
    if (m > 16) throw std::invalid_argument("min_enclosing_ball: dimension capped at 16");
    WelzlSolver solver(points, m);
    Ball b = solver.solve();
    // Report the exact covering radius of the computed center.
    double r2 = 0.0;
    for (const auto& p : points) r2 = std::max(r2, (p - b.center).squaredNorm());
    b.radius = std::sqrt(r2);
    return b;
}

double diameter(const std::vector<Eigen::VectorXd>& points) {
    validate_cloud(points);
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, (points[i] - points[j]).squaredNorm());
    return std::sqrt(best);
}

VolumeEstimate minkowski_ball_volume(const std::vector<Eigen::VectorXd>& points, double r,
                                     std::uint64_t samples, std::uint64_t seed) {
    validate_cloud(points);
    if (!(r > 0.0)) throw std::invalid_argument("minkowski_ball_volume: r must be > 0");
    if (samples < 2) throw std::invalid_argument("minkowski_ball_volume: need >= 2 samples");
    const int m = static_cast<int>(points.front().size());
    Eigen::VectorXd lo = points.front(), hi = points.front();
    for (const auto& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    lo.array() -= r;
    hi.array() += r;
    double box_volume = 1.0;
    for (int i = 0; i < m; ++i) box_volume *= hi[i] - lo[i];
    if (!(box_volume > 0.0))
        throw std::invalid_argument("minkowski_ball_volume: degenerate bounding box");

    const double r2 = r * r;
    const auto result = mc_mean(samples, seed, [&](Rng& rng) {
        thread_local Eigen::VectorXd xbuf;
        xbuf.resize(m);
        for (int i = 0; i < m; ++i) xbuf[i] = rng.uniform(lo[i], hi[i]);
        for (const auto& p : points)
            if ((xbuf - p).squaredNorm() <= r2) return 1.0;
        return 0.0;
    });
    VolumeEstimate out;
    out.value = result.mean * box_volume;
    out.stderr_ = result.stderr_ * box_volume;
    out.samples = samples;
    return out;
}

Compactum::Compactum(std::vector<Eigen::VectorXd> points) : points_(std::move(points)) {
    validate_cloud(points_);
    m_ = static_cast<int>(points_.front().size());
}

const Ball& Compactum::circumball() const {
    if (!ball_) ball_ = min_enclosing_ball(points_);
    return *ball_;
}

double Compactum::diameter() const {
    if (!diameter_) diameter_ = rvfl::diameter(points_);
    return *diameter_;
}

DimensionEstimate Compactum::effective_dimension(std::uint64_t samples,
                                                 std::uint64_t seed) const {
    const double R = circumradius();
    const VolumeEstimate vol = minkowski_ball_volume(points_, R, samples, seed);
    if (!(vol.value > 0.0))
        throw std::runtime_error("effective_dimension: volume estimate is zero");
    const double ball_vol = specfun::unit_ball_volume(m_) * std::pow(R, m_);
    DimensionEstimate out;
    out.value = std::log2(vol.value / ball_vol);
    out.raw = out.value;
    out.stderr_ = vol.stderr_ / (vol.value * std::log(2.0));
    if (out.value < 1.0) {
        out.value = 1.0;
        out.clamped = true;
    } else if (out.value > m_) {
        out.value = m_;
        out.clamped = true;
    }
    return out;
}

Compactum Compactum::translated(const Eigen::VectorXd& shift) const {
    std::vector<Eigen::VectorXd> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back(p + shift);
    return Compactum(std::move(pts));
}

}  // namespace rvfl
