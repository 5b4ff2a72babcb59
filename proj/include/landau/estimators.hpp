#ifndef LANDAU_ESTIMATORS_HPP
#define LANDAU_ESTIMATORS_HPP

// Statistics of particle clouds: moments, the pair inverse-square statistic
// and a Kozachenko-Leonenko k-nearest-neighbour entropy estimate.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include "landau/stats.hpp"
#include "landau/types.hpp"

namespace landau {

/// Uniform atomic measure (1/N) sum delta_{v_i}.
class EmpiricalMeasure {
 public:
  explicit EmpiricalMeasure(Cloud points) : points_(std::move(points)) {
    if (points_.empty()) throw ConfigError("empirical measure needs at least one point");
    for (const auto& p : points_)
      if (!p.allFinite()) throw ConfigError("empirical measure has non-finite coordinates");
  }

  const Cloud& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double weight() const noexcept { return 1.0 / static_cast<double>(points_.size()); }

  template <class Fn>
  double integrate(Fn&& fn) const {
    stats::CompensatedSum s;
    for (const auto& p : points_) s.add(fn(p));
    return s.value() * weight();
  }

 private:
  Cloud points_;
};

struct MomentTable {
  double mass = 1.0;
  Vec3 mean = Vec3::Zero();
  /// int |v|^2 dmu.
  double energy = 0.0;
  /// radial[m] = int |v|^m dmu, m = 0..max_order.
  std::vector<double> radial;
};

inline MomentTable moments(const EmpiricalMeasure& mu, int max_order = 4) {
  if (max_order < 0 || max_order > 8) throw ConfigError("moments: max_order must lie in [0, 8]");
  MomentTable t;
  t.radial.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
  std::vector<stats::CompensatedSum> rad(t.radial.size());
  stats::CompensatedSum m[3];
  stats::CompensatedSum e;
  for (const auto& p : mu.points()) {
    for (int c = 0; c < 3; ++c) m[c].add(p[c]);
    e.add(p.squaredNorm());
    const double r = p.norm();
    double rm = 1.0;
    for (auto& s : rad) {
      s.add(rm);
      rm *= r;
    }
  }
  const double w = mu.weight();
  t.mean = Vec3(m[0].value(), m[1].value(), m[2].value()) * w;
  t.energy = e.value() * w;
  for (std::size_t i = 0; i < rad.size(); ++i) t.radial[i] = rad[i].value() * w;
  return t;
}

struct PairInverseSquare {
  double value = 0.0;
  std::int64_t pairs = 0;
  std::int64_t excluded = 0;
};

inline constexpr double kPairCoincidence = 1e-14;

/// 2/(N(N-1)) sum_{i<j} |v_i - v_j|^{-2}; coincident pairs are skipped and
/// counted, and the average is taken over the remaining pairs.
inline PairInverseSquare pair_inverse_square(const EmpiricalMeasure& mu) {
  const auto& v = mu.points();
  const std::size_t n = v.size();
  if (n < 2) throw ConfigError("pair_inverse_square needs N >= 2");
  PairInverseSquare out;
  stats::CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r2 = (v[i] - v[j]).squaredNorm();
      if (r2 < kPairCoincidence * kPairCoincidence) {
        ++out.excluded;
        continue;
      }
      row += 1.0 / r2;
      ++out.pairs;
    }
    total.add(row);
  }
  if (out.pairs == 0) throw DegenerateCloudError("pair_inverse_square: all pairs coincide");
  out.value = total.value() / static_cast<double>(out.pairs);
  return out;
}

struct KnnEntropy {
  /// Estimate of int f log f.
  double value = 0.0;
  /// Points moved because they coincided with a neighbour.
  std::int64_t jittered = 0;
};

inline constexpr double kKnnJitter = 1e-12;

/// Kozachenko-Leonenko estimate with k-th neighbour distances eps_i:
///   -int f log f ~ psi(N) - psi(k) + log(4 pi / 3) + (3/N) sum log eps_i.
inline KnnEntropy knn_entropy(const EmpiricalMeasure& mu, int k = 4) {
  namespace bg = boost::geometry;
  namespace bgi = boost::geometry::index;
  using Point = bg::model::point<double, 3, bg::cs::cartesian>;
  using Item = std::pair<Point, std::size_t>;

  const std::size_t n = mu.size();
  if (k < 1 || n < static_cast<std::size_t>(k) + 1)
    throw ConfigError("knn_entropy needs N >= k + 1 and k >= 1");
  Cloud pts = mu.points();
  KnnEntropy out;

  auto build = [&] {
    std::vector<Item> items;
    items.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      items.emplace_back(Point(pts[i][0], pts[i][1], pts[i][2]), i);
    return bgi::rtree<Item, bgi::quadratic<16>>(items.begin(), items.end());
  };

  auto tree = build();
  {
    // Nudge exact duplicates apart, deterministically.
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Item> hit;
      const Point q(pts[i][0], pts[i][1], pts[i][2]);
      tree.query(bgi::nearest(q, 2), std::back_inserter(hit));
      for (const auto& h : hit)
        if (h.second != i && h.second > i && bg::distance(q, h.first) == 0.0) {
          const double s = kKnnJitter * std::max(1.0, pts[i].norm());
          pts[h.second] += s * Vec3(1.0, 0.5, 0.25) * static_cast<double>(1 + (h.second % 7));
          ++out.jittered;
          moved = true;
        }
    }
    if (moved) tree = build();
  }

  stats::CompensatedSum log_eps;
  std::vector<Item> hit;
  for (std::size_t i = 0; i < n; ++i) {
    hit.clear();
    const Point q(pts[i][0], pts[i][1], pts[i][2]);
    tree.query(bgi::nearest(q, static_cast<unsigned>(k) + 1), std::back_inserter(hit));
    double eps = 0.0;
    std::vector<double> d;
    d.reserve(hit.size());
    for (const auto& h : hit)
      if (h.second != i) d.push_back(bg::distance(q, h.first));
    std::sort(d.begin(), d.end());
    eps = d.at(static_cast<std::size_t>(k) - 1);
    if (!(eps > 0.0)) throw DegenerateCloudError("knn_entropy: zero neighbour distance");
    log_eps.add(std::log(eps));
  }
  const double nn = static_cast<double>(n);
  const double neg = boost::math::digamma(nn) - boost::math::digamma(static_cast<double>(k)) +
                     std::log(4.0 * std::numbers::pi / 3.0) + 3.0 / nn * log_eps.value();
  out.value = -neg;
  return out;
}

}  // namespace landau

#endif  // LANDAU_ESTIMATORS_HPP
