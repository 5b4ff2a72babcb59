#ifndef LANDAU_DIAGNOSTICS_HPP
#define LANDAU_DIAGNOSTICS_HPP

// Instruments on particle trajectories: weak-form residual, bounded-Lipschitz
// distance over a C^2 dictionary, time-Hoelder seminorm, delta-non-aligned
// triples and the bump-weighted ball masses iota.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "landau/density.hpp"
#include "landau/dynamics.hpp"
#include "landau/estimators.hpp"
#include "landau/potential.hpp"
#include "landau/stats.hpp"
#include "landau/types.hpp"

namespace landau {

// --------------------------------------------------------------------------
// Test functions

class TestFunction {
 public:
  virtual ~TestFunction() = default;
  virtual double value(const Vec3& x) const = 0;
  virtual Vec3 grad(const Vec3& x) const = 0;
  virtual Mat3 hess(const Vec3& x) const = 0;
  virtual std::string name() const = 0;
};

using TestFunctionPtr = std::shared_ptr<const TestFunction>;

class ConstantFunction final : public TestFunction {
 public:
  explicit ConstantFunction(double c = 1.0) : c_(c) {}
  double value(const Vec3&) const override { return c_; }
  Vec3 grad(const Vec3&) const override { return Vec3::Zero(); }
  Mat3 hess(const Vec3&) const override { return Mat3::Zero(); }
  std::string name() const override { return "constant"; }

 private:
  double c_;
};

/// phi(x) = c + g . x (the C^2_b extension outside the cloud's hull is not
/// needed on empirical measures).
class AffineFunction final : public TestFunction {
 public:
  AffineFunction(double c, Vec3 g) : c_(c), g_(std::move(g)) {}
  double value(const Vec3& x) const override { return c_ + g_.dot(x); }
  Vec3 grad(const Vec3&) const override { return g_; }
  Mat3 hess(const Vec3&) const override { return Mat3::Zero(); }
  std::string name() const override { return "affine"; }

 private:
  double c_;
  Vec3 g_;
};

/// amplitude * exp(-|x - c|^2 / (2 s^2)).
class GaussianBump final : public TestFunction {
 public:
  GaussianBump(Vec3 center, double scale, double amplitude = 1.0)
      : c_(std::move(center)), s_(scale), amp_(amplitude) {
    if (!(scale > 0.0)) throw ConfigError("GaussianBump: scale must be positive");
  }
  double value(const Vec3& x) const override {
    return amp_ * std::exp(-(x - c_).squaredNorm() / (2.0 * s_ * s_));
  }
  Vec3 grad(const Vec3& x) const override { return -value(x) / (s_ * s_) * (x - c_); }
  Mat3 hess(const Vec3& x) const override {
    const Vec3 d = x - c_;
    const double s2 = s_ * s_;
    return value(x) / s2 * (d * d.transpose() / s2 - Mat3::Identity());
  }
  std::string name() const override { return "gaussian_bump"; }
  const Vec3& center() const { return c_; }
  double scale() const { return s_; }
  double amplitude() const { return amp_; }

  /// sup|g| + sup|grad g| + sup||hess g|| for unit amplitude.
  static double c2_norm(double scale) {
    return 1.0 + 1.0 / (scale * std::sqrt(std::exp(1.0))) + 1.0 / (scale * scale);
  }

 private:
  Vec3 c_;
  double s_;
  double amp_;
};

/// Radial bump profile: 1 on [0, 1], 0 on [3/2, inf), quintic transition.
struct BumpProfile {
  static double value(double r) noexcept { return 1.0 - detail::smoothstep5((r - 1.0) / 0.5); }
  static double d1(double r) noexcept { return -detail::smoothstep5_d1((r - 1.0) / 0.5) / 0.5; }
  static double d2(double r) noexcept { return -detail::smoothstep5_d2((r - 1.0) / 0.5) / 0.25; }
};

/// h((x - c)/delta) with h the radial bump profile.
class RadialBump final : public TestFunction {
 public:
  RadialBump(Vec3 center, double delta) : c_(std::move(center)), delta_(delta) {
    if (!(delta > 0.0)) throw ConfigError("RadialBump: delta must be positive");
  }
  double value(const Vec3& x) const override {
    return BumpProfile::value((x - c_).norm() / delta_);
  }
  Vec3 grad(const Vec3& x) const override {
    const Vec3 d = x - c_;
    const double r = d.norm();
    if (r <= delta_) return Vec3::Zero();
    return BumpProfile::d1(r / delta_) / delta_ * d / r;
  }
  Mat3 hess(const Vec3& x) const override {
    const Vec3 d = x - c_;
    const double r = d.norm();
    if (r <= delta_) return Mat3::Zero();
    const Vec3 u = d / r;
    const Mat3 uu = u * u.transpose();
    const double h1 = BumpProfile::d1(r / delta_) / delta_;
    const double h2 = BumpProfile::d2(r / delta_) / (delta_ * delta_);
    return h2 * uu + h1 / r * (Mat3::Identity() - uu);
  }
  std::string name() const override { return "radial_bump"; }
  const Vec3& center() const { return c_; }
  double delta() const { return delta_; }

 private:
  Vec3 c_;
  double delta_;
};

/// sup of |phi| + |grad phi| + ||hess phi||_2 estimated on rays from center.
inline double sampled_c2_norm(const TestFunction& phi, const Vec3& center, double radius,
                              int points = 2001) {
  const std::array<Vec3, 4> dirs{Vec3::UnitX(), Vec3(1, 1, 0).normalized(),
                                 Vec3(1, 1, 1).normalized(), Vec3(-0.3, 0.8, 0.52).normalized()};
  double v = 0.0;
  double g = 0.0;
  double h = 0.0;
  for (const auto& d : dirs)
    for (int i = 0; i < points; ++i) {
      const Vec3 x = center + (radius * i / (points - 1)) * d;
      v = std::max(v, std::abs(phi.value(x)));
      g = std::max(g, phi.grad(x).norm());
      const Eigen::SelfAdjointEigenSolver<Mat3> eig(phi.hess(x), Eigen::EigenvaluesOnly);
      h = std::max(h, eig.eigenvalues().cwiseAbs().maxCoeff());
    }
  return v + g + h;
}

/// Gaussian bumps at scales {1/2, 1, 2} centered on integer points of B(0, 6)
/// taken by increasing norm, each normalized to unit C^2 norm; weights 2^-n.
class TestFunctionDictionary {
 public:
  explicit TestFunctionDictionary(int n_max = 64) {
    if (n_max < 1) throw ConfigError("dictionary needs n_max >= 1");
    std::vector<Vec3> centers;
    for (int i = -6; i <= 6; ++i)
      for (int j = -6; j <= 6; ++j)
        for (int k = -6; k <= 6; ++k)
          if (i * i + j * j + k * k <= 36) centers.emplace_back(i, j, k);
    std::stable_sort(centers.begin(), centers.end(), [](const Vec3& a, const Vec3& b) {
      return a.squaredNorm() < b.squaredNorm();
    });
    for (const auto& c : centers) {
      for (double s : {0.5, 1.0, 2.0}) {
        if (static_cast<int>(fns_.size()) == n_max) break;
        auto f = std::make_shared<GaussianBump>(c, s, 1.0 / GaussianBump::c2_norm(s));
        if (sampled_c2_norm(*f, c, 8.0 * s) > 1.0 + 1e-12)
          throw std::logic_error("dictionary element exceeds unit C^2 norm");
        fns_.push_back(std::move(f));
      }
      if (static_cast<int>(fns_.size()) == n_max) break;
    }
  }

  int size() const { return static_cast<int>(fns_.size()); }
  const TestFunction& operator[](int n) const { return *fns_.at(static_cast<std::size_t>(n)); }
  /// Weight of the n-th element (0-based), 2^-(n+1).
  static double weight(int n) { return std::ldexp(1.0, -(n + 1)); }
  /// Bound on the omitted tail: sum_{n > n_max} 2^-n * 2.
  double truncation_bound() const { return 2.0 * std::ldexp(1.0, -size()); }

  std::vector<double> integrals(const EmpiricalMeasure& mu) const {
    std::vector<double> out(fns_.size());
    for (std::size_t n = 0; n < fns_.size(); ++n)
      out[n] = mu.integrate([&](const Vec3& v) { return fns_[n]->value(v); });
    return out;
  }

  std::vector<double> integrals(const DensityModel& f, int points_per_axis = 61,
                                double sigmas = 8.0) const {
    if (f.dim() != 3) throw ConfigError("dictionary integrals need a 3D density");
    const Box3 box = f.support_hint(sigmas);
    const int n = points_per_axis;
    const Vec3 h = (box.hi - box.lo) / (n - 1);
    std::vector<stats::CompensatedSum> acc(fns_.size());
    VecX x(3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          x << box.lo[0] + i * h[0], box.lo[1] + j * h[1], box.lo[2] + k * h[2];
          const double w = (i == 0 || i == n - 1 ? 0.5 : 1.0) * (j == 0 || j == n - 1 ? 0.5 : 1.0) *
                           (k == 0 || k == n - 1 ? 0.5 : 1.0) * f.density(x);
          if (w == 0.0) continue;
          const Vec3 v(x[0], x[1], x[2]);
          for (std::size_t m = 0; m < fns_.size(); ++m) acc[m].add(w * fns_[m]->value(v));
        }
    std::vector<double> out(fns_.size());
    for (std::size_t m = 0; m < fns_.size(); ++m) out[m] = acc[m].value() * h.prod();
    return out;
  }

 private:
  std::vector<TestFunctionPtr> fns_;
};

struct BlDistance {
  double value = 0.0;
  double truncation_error = 0.0;
};

inline BlDistance bl_distance_from_integrals(const std::vector<double>& a,
                                             const std::vector<double>& b,
                                             const TestFunctionDictionary& dict) {
  if (a.size() != b.size() || static_cast<int>(a.size()) != dict.size())
    throw ConfigError("bl_distance: integral vectors do not match the dictionary");
  double d = 0.0;
  for (int n = 0; n < dict.size(); ++n) d += TestFunctionDictionary::weight(n) * std::abs(a[n] - b[n]);
  return {d, dict.truncation_bound()};
}

inline BlDistance bl_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                              const TestFunctionDictionary& dict) {
  return bl_distance_from_integrals(dict.integrals(mu), dict.integrals(nu), dict);
}

inline BlDistance bl_distance(const EmpiricalMeasure& mu, const DensityModel& nu,
                              const TestFunctionDictionary& dict) {
  return bl_distance_from_integrals(dict.integrals(mu), dict.integrals(nu), dict);
}

inline BlDistance bl_distance(const DensityModel& mu, const DensityModel& nu,
                              const TestFunctionDictionary& dict) {
  return bl_distance_from_integrals(dict.integrals(mu), dict.integrals(nu), dict);
}

/// max over stored snapshot pairs s < t of d(mu_s, mu_t) / |t - s|^exponent.
inline double holder_seminorm(const Trajectory& traj, const TestFunctionDictionary& dict,
                              double exponent = 0.125) {
  if (traj.snapshots.size() < 2) throw ConfigError("holder_seminorm needs >= 2 snapshots");
  std::vector<std::vector<double>> ints;
  ints.reserve(traj.snapshots.size());
  for (const auto& s : traj.snapshots) ints.push_back(dict.integrals(EmpiricalMeasure(s.velocities)));
  double best = 0.0;
  for (std::size_t a = 0; a < ints.size(); ++a)
    for (std::size_t b = a + 1; b < ints.size(); ++b) {
      const double dt = std::abs(traj.snapshots[b].t - traj.snapshots[a].t);
      if (dt <= 0.0) continue;
      const double d = bl_distance_from_integrals(ints[a], ints[b], dict).value;
      best = std::max(best, d / std::pow(dt, exponent));
    }
  return best;
}

// --------------------------------------------------------------------------
// Weak-form residual

/// (1/N^2) sum_{i != j, V_i != V_j} [ b(z_ij) . (grad phi(V_i) - grad phi(V_j))
///                                  + alpha(|z_ij|) a(z_ij) : hess phi(V_i) ],
/// with the unregularized alpha = r^gamma and b(z) = -2 alpha z.
inline double weak_form_integrand(const Cloud& v, const TestFunction& phi, double gamma) {
  const std::size_t n = v.size();
  if (n < 2) throw ConfigError("weak_form_integrand needs N >= 2");
  const PotentialSpec pot = PotentialSpec::exact(gamma);
  std::vector<Vec3> g(n);
  std::vector<Mat3> h(n);
  bool flat = true;
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = phi.grad(v[i]);
    h[i] = phi.hess(v[i]);
    flat = flat && h[i].isZero(0.0);
  }
  stats::CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec3 z = v[i] - v[j];
      const double r2 = z.squaredNorm();
      if (r2 == 0.0) continue;
      const double alpha = pot.alpha(std::sqrt(r2));
      row += -2.0 * alpha * z.dot(g[i] - g[j]);
      if (!flat) {
        // a(z) : H = |z|^2 tr H - z^T H z
        row += alpha * (r2 * h[i].trace() - z.dot(h[i] * z));
      }
    }
    total.add(row);
  }
  const double nn = static_cast<double>(n);
  return total.value() / (nn * nn);
}

struct WeakResidual {
  double value = 0.0;
  /// Set when t is not a stored snapshot time (value then uses the last
  /// snapshot at or before t).
  bool interpolation_flag = false;
  double t_used = 0.0;
};

/// F_{phi,t}(mu) = -<mu_t, phi> + <mu_0, phi> + int_0^t integrand(mu_s) ds,
/// the time integral by the trapezoid rule over stored snapshots.
inline WeakResidual weak_form_residual(const Trajectory& traj, const TestFunction& phi, double t) {
  if (traj.snapshots.empty()) throw ConfigError("weak_form_residual: empty trajectory");
  WeakResidual out;
  std::size_t last = 0;
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  while (last + 1 < traj.snapshots.size() && traj.snapshots[last + 1].t <= t + tol) ++last;
  out.t_used = traj.snapshots[last].t;
  out.interpolation_flag = std::abs(out.t_used - t) > tol;

  auto mean_phi = [&](const Cloud& c) {
    stats::CompensatedSum s;
    for (const auto& x : c) s.add(phi.value(x));
    return s.value() / static_cast<double>(c.size());
  };
  stats::CompensatedSum integral;
  double prev = 0.0;
  for (std::size_t k = 0; k <= last; ++k) {
    const double cur = weak_form_integrand(traj.snapshots[k].velocities, phi, traj.config.gamma);
    if (k > 0)
      integral.add(0.5 * (prev + cur) * (traj.snapshots[k].t - traj.snapshots[k - 1].t));
    prev = cur;
  }
  out.value = (mean_phi(traj.snapshots[0].velocities) - mean_phi(traj.snapshots[last].velocities)) +
              integral.value();
  return out;
}

// --------------------------------------------------------------------------
// Non-aligned triples

struct NonAlignment {
  bool non_aligned = false;
  /// |v2 - v1| - 6 sqrt(delta).
  double m1 = 0.0;
  /// |p_{(v2-v1)^perp}(v3 - v1)| - (24 delta + 2 sqrt(delta) |v3 - v1|).
  double m2 = 0.0;
};

inline NonAlignment is_delta_nonaligned(const Vec3& v1, const Vec3& v2, const Vec3& v3,
                                        double delta) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  const double sd = std::sqrt(delta);
  const Vec3 u = v2 - v1;
  const Vec3 w = v3 - v1;
  const double un = u.norm();
  const Vec3 perp = un > 0.0 ? Vec3(w - u * (u.dot(w) / (un * un))) : w;
  NonAlignment r;
  r.m1 = un - 6.0 * sd;
  r.m2 = perp.norm() - (24.0 * delta + 2.0 * sd * w.norm());
  r.non_aligned = r.m1 >= 0.0 && r.m2 >= 0.0;
  return r;
}

struct NonAlignedTriple {
  Vec3 v1;
  Vec3 v2;
  Vec3 v3;
  double delta;
  double m1;
  double m2;
  std::array<double, 3> masses{};
};

/// int h((w - c)/delta) mu(dw).
inline double ball_mass(const EmpiricalMeasure& mu, const Vec3& c, double delta) {
  const double cut = 1.5 * delta;
  return mu.integrate([&](const Vec3& w) {
    const double r = (w - c).norm();
    return r >= cut ? 0.0 : BumpProfile::value(r / delta);
  });
}

/// Trapezoid quadrature of int h((w - c)/delta) f(w) dw on the cube around c.
inline double ball_mass(const DensityModel& f, const Vec3& c, double delta, int points = 41) {
  const double half = 1.5 * delta;
  const double h = 2.0 * half / (points - 1);
  stats::CompensatedSum s;
  VecX x(3);
  for (int i = 0; i < points; ++i)
    for (int j = 0; j < points; ++j)
      for (int k = 0; k < points; ++k) {
        const Vec3 d(-half + i * h, -half + j * h, -half + k * h);
        const double r = d.norm();
        if (r >= half) continue;
        x = c + d;
        s.add(BumpProfile::value(r / delta) * f.density(x));
      }
  return s.value() * h * h * h;
}

inline double iota(const EmpiricalMeasure& mu, const NonAlignedTriple& t) {
  return std::min({ball_mass(mu, t.v1, t.delta), ball_mass(mu, t.v2, t.delta),
                   ball_mass(mu, t.v3, t.delta)});
}

inline double iota(const DensityModel& f, const NonAlignedTriple& t) {
  return std::min({ball_mass(f, t.v1, t.delta), ball_mass(f, t.v2, t.delta),
                   ball_mass(f, t.v3, t.delta)});
}

struct TripleSearch {
  /// Grid spacing of the candidate lattice in B(0, R), as a fraction of R.
  double grid_fraction = 1.0 / 6.0;
  /// Number of cloud points added as candidates (evenly spaced in index).
  int cloud_candidates = 256;
  /// Candidates (by mass) entering the triple enumeration.
  int top = 48;
};

namespace detail {

inline std::vector<Vec3> lattice_in_ball(double R, double spacing) {
  std::vector<Vec3> out;
  const int m = static_cast<int>(std::floor(R / spacing));
  for (int i = -m; i <= m; ++i)
    for (int j = -m; j <= m; ++j)
      for (int k = -m; k <= m; ++k) {
        const Vec3 c(i * spacing, j * spacing, k * spacing);
        if (c.norm() <= R) out.push_back(c);
      }
  return out;
}

template <class MassFn>
std::optional<NonAlignedTriple> best_triple(std::vector<Vec3> cands, double delta, double kappa,
                                            int top, MassFn&& mass) {
  std::vector<std::pair<double, Vec3>> scored;
  scored.reserve(cands.size());
  for (const auto& c : cands) {
    const double m = mass(c);
    if (m >= kappa) scored.emplace_back(m, c);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  // Keep the heaviest candidate of each delta-neighbourhood so one dense
  // cluster cannot fill the whole shortlist.
  std::vector<std::pair<double, Vec3>> kept;
  for (const auto& s : scored) {
    if (static_cast<int>(kept.size()) == top) break;
    const bool near = std::any_of(kept.begin(), kept.end(), [&](const auto& k) {
      return (k.second - s.second).norm() < delta;
    });
    if (!near) kept.push_back(s);
  }
  scored = std::move(kept);
  std::optional<NonAlignedTriple> best;
  double best_min = -1.0;
  const std::size_t n = scored.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        const double mmin = std::min({scored[a].first, scored[b].first, scored[c].first});
        if (mmin <= best_min) continue;
        const std::array<std::array<std::size_t, 3>, 3> roles{
            {{a, b, c}, {b, c, a}, {c, a, b}}};
        for (const auto& r : roles) {
          const auto na = is_delta_nonaligned(scored[r[0]].second, scored[r[1]].second,
                                              scored[r[2]].second, delta);
          if (!na.non_aligned) continue;
          best = NonAlignedTriple{scored[r[0]].second, scored[r[1]].second, scored[r[2]].second,
                                  delta, na.m1, na.m2,
                                  {scored[r[0]].first, scored[r[1]].first, scored[r[2]].first}};
          best_min = mmin;
          break;
        }
      }
  return best;
}

}  // namespace detail

/// Deterministic search for a delta-non-aligned triple in B(0, R) whose three
/// bump-weighted ball masses are all >= kappa; the triple maximizing the
/// smallest mass is returned.
inline std::optional<NonAlignedTriple> find_nonaligned_triple(const EmpiricalMeasure& mu,
                                                              double delta, double R, double kappa,
                                                              const TripleSearch& opts = {}) {
  if (!(delta > 0.0) || !(R > 0.0) || !(kappa > 0.0))
    throw ConfigError("find_nonaligned_triple: delta, R, kappa must be positive");
  if (6.0 * std::sqrt(delta) > 2.0 * R) return std::nullopt;
  auto cands = detail::lattice_in_ball(R, opts.grid_fraction * R);
  const auto& pts = mu.points();
  const std::size_t stride =
      std::max<std::size_t>(1, pts.size() / static_cast<std::size_t>(std::max(1, opts.cloud_candidates)));
  for (std::size_t i = 0; i < pts.size(); i += stride)
    if (pts[i].norm() <= R) cands.push_back(pts[i]);
  return detail::best_triple(std::move(cands), delta, kappa, opts.top,
                             [&](const Vec3& c) { return ball_mass(mu, c, delta); });
}

inline std::optional<NonAlignedTriple> find_nonaligned_triple(const DensityModel& f, double delta,
                                                              double R, double kappa,
                                                              const TripleSearch& opts = {}) {
  if (!(delta > 0.0) || !(R > 0.0) || !(kappa > 0.0))
    throw ConfigError("find_nonaligned_triple: delta, R, kappa must be positive");
  if (6.0 * std::sqrt(delta) > 2.0 * R) return std::nullopt;
  auto cands = detail::lattice_in_ball(R, opts.grid_fraction * R);
  return detail::best_triple(std::move(cands), delta, kappa, opts.top,
                             [&](const Vec3& c) { return ball_mass(f, c, delta, 17); });
}

}  // namespace landau

#endif  // LANDAU_DIAGNOSTICS_HPP
