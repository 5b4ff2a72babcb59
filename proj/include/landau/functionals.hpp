#ifndef LANDAU_FUNCTIONALS_HPP
#define LANDAU_FUNCTIONALS_HPP

// Entropy H, Fisher information I (3D tensor-grid quadrature) and the
// pair functionals D, K_beta, J (Monte Carlo over samples of F on R^{3n}).
//
// The pair functionals are built from the directional derivative along
// b~_k = (b_k, -b_k) acting on (v1, v2):
//   y_k = (b~_k . grad) log F,
//   x_k = (b~_k . grad)^2 F / F
//       = b~_k^T (grad^2 log F) b~_k + y_k^2 + ((b~_k . grad) b~_k) . grad log F,
// with (b~_k . grad) b~_k = (2 e_k x b_k, -2 e_k x b_k). The weighted operator
// del_k = |z|^{-1/2} alpha^{1/4} (b~_k . grad) commutes with its radial weight
// w, so del^2 F / F = w^2 x_k and (del log F) = w y_k. Per sample we record
//   d = 1/2 alpha sum_k y_k^2,   A = sum w^4 x_k^2,
//   B = sum w^4 x_k y_k^2,       C = sum w^4 y_k^4,
// so that K_beta = E[A] + 2(beta-1) E[B] + (beta-1)^2 E[C] and J = E[C].

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "landau/density.hpp"
#include "landau/philox.hpp"
#include "landau/potential.hpp"
#include "landau/stats.hpp"
#include "landau/types.hpp"

namespace landau {

struct FunctionalEstimate {
  enum class Method { grid, mc };

  std::string functional;
  double value = 0.0;
  double abs_error = 0.0;
  Method method = Method::grid;
  std::int64_t n = 0;
  /// mc: abs_error = standard error x multiplier.
  double error_multiplier = 1.0;
  std::int64_t rejected = 0;

  double standard_error() const { return abs_error / error_multiplier; }
};

inline const char* to_string(FunctionalEstimate::Method m) {
  return m == FunctionalEstimate::Method::grid ? "grid" : "mc";
}

// --------------------------------------------------------------------------
// 3D quadrature

struct GridSpec {
  /// Box half-width in model standard deviations, when no box is given.
  double sigmas = 8.0;
  /// Points per axis; odd so the every-other-point subgrid is nested.
  int points_per_axis = 81;
  std::optional<Box3> box;
  double min_mass = 1.0 - 1e-8;
};

namespace detail {

struct GridResult {
  double value;
  double value_coarse;
  double mass;
  std::int64_t n;
};

// Trapezoid rule of integrand(f, log f, grad log f) over a tensor grid; also
// returns the rule on the nested grid with doubled spacing.
inline GridResult grid_integrate(
    const DensityModel& f, const GridSpec& grid,
    const std::function<double(double, double, const VecX&)>& integrand) {
  if (f.dim() != 3) throw ConfigError("grid quadrature needs a 3D density");
  const int n = grid.points_per_axis % 2 == 1 ? grid.points_per_axis : grid.points_per_axis + 1;
  if (n < 5) throw ConfigError("GridSpec: need at least 5 points per axis");
  const Box3 box = grid.box ? *grid.box : f.support_hint(grid.sigmas);
  const Vec3 h = (box.hi - box.lo) / (n - 1);

  auto weight = [n](int i, int stride) {
    return (i == 0 || i == n - 1) ? 0.5 * stride : 1.0 * stride;
  };
  stats::CompensatedSum fine;
  stats::CompensatedSum coarse;
  stats::CompensatedSum mass;
  VecX x(3);
  for (int i = 0; i < n; ++i) {
    x[0] = box.lo[0] + i * h[0];
    for (int j = 0; j < n; ++j) {
      x[1] = box.lo[1] + j * h[1];
      for (int k = 0; k < n; ++k) {
        x[2] = box.lo[2] + k * h[2];
        const double lf = f.log_density(x);
        const double fx = std::exp(lf);
        if (fx == 0.0) continue;
        const double val = integrand(fx, lf, fx > 0.0 ? f.log_grad(x) : VecX(VecX::Zero(3)));
        const double w = weight(i, 1) * weight(j, 1) * weight(k, 1);
        fine.add(w * val);
        mass.add(w * fx);
        if (i % 2 == 0 && j % 2 == 0 && k % 2 == 0)
          coarse.add(weight(i, 2) * weight(j, 2) * weight(k, 2) * val);
      }
    }
  }
  const double cell = h.prod();
  return {fine.value() * cell, coarse.value() * cell, mass.value() * cell,
          static_cast<std::int64_t>(n) * n * n};
}

inline FunctionalEstimate grid_estimate(
    const std::string& name, const DensityModel& f, const GridSpec& grid,
    const std::function<double(double, double, const VecX&)>& integrand) {
  const auto r = grid_integrate(f, grid, integrand);
  if (r.mass < grid.min_mass)
    throw CoverageError(name + ": grid captures mass " + std::to_string(r.mass) +
                        " < " + std::to_string(grid.min_mass));
  FunctionalEstimate est;
  est.functional = name;
  est.value = r.value;
  // Nested-grid difference plus the mass defect scaled by the value.
  est.abs_error = std::abs(r.value - r.value_coarse) + std::abs(1.0 - r.mass) * std::abs(r.value);
  est.method = FunctionalEstimate::Method::grid;
  est.n = r.n;
  return est;
}

}  // namespace detail

/// H(f) = int f log f.
inline FunctionalEstimate entropy(const DensityModel& f, const GridSpec& grid = {}) {
  return detail::grid_estimate("H", f, grid,
                               [](double fx, double lf, const VecX&) { return fx * lf; });
}

/// I(f) = int |grad f|^2 / f = int f |grad log f|^2.
inline FunctionalEstimate fisher(const DensityModel& f, const GridSpec& grid = {}) {
  return detail::grid_estimate(
      "I", f, grid, [](double fx, double, const VecX& g) { return fx * g.squaredNorm(); });
}

// --------------------------------------------------------------------------
// Pair directional derivatives

struct MCSpec {
  std::int64_t samples = 100000;
  std::uint64_t seed = 1;
  double multiplier = 1.0;
  /// Samples per counter stream; the reduction runs over streams in order.
  std::int64_t batch = 8192;
};

/// Pairs with |v1 - v2| below this are rejected and counted.
inline constexpr double kCoincidenceGuard = 1e-12;

using KSet = std::array<bool, 3>;
inline constexpr KSet kAllDirections{true, true, true};

/// The first six coordinates of x are (v1, v2).
struct DirectionalTerms {
  double alpha = 0.0;
  double dist = 0.0;
  std::array<double, 3> y{};  // (b~_k . grad) log F
  std::array<double, 3> x{};  // (b~_k . grad)^2 F / F
};

namespace detail {

inline VecX padded_direction(int dim, const Vec3& b) {
  VecX u = VecX::Zero(dim);
  u.segment<3>(0) = b;
  u.segment<3>(3) = -b;
  return u;
}

}  // namespace detail

/// Evaluates y_k (and x_k when second_order) for the pair (v1, v2) = x[0:6].
inline DirectionalTerms directional_terms(const DensityModel& F, const VecX& pt,
                                          const PotentialSpec& pot, const KSet& ks,
                                          bool second_order) {
  if (F.dim() < 6) throw ConfigError("pair functionals need dim(F) >= 6");
  DirectionalTerms t;
  const Vec3 z = pt.segment<3>(0) - pt.segment<3>(3);
  t.dist = z.norm();
  t.alpha = pot.alpha(t.dist);
  const VecX g = F.log_grad(pt);
  const Vec3 g1 = g.segment<3>(0);
  const Vec3 g2 = g.segment<3>(3);
  for (int k = 0; k < 3; ++k) {
    if (!ks[k]) continue;
    const Vec3 b = b_field(k, z);
    t.y[k] = b.dot(g1) - b.dot(g2);
    if (second_order) {
      const Vec3 c = 2.0 * Vec3::Unit(k).cross(b);
      const double transport = c.dot(g1) - c.dot(g2);
      const double quad = F.log_hess_quadform(pt, detail::padded_direction(F.dim(), b));
      t.x[k] = quad + t.y[k] * t.y[k] + transport;
    }
  }
  return t;
}

/// Applies del = w (b~_k . grad) to a scalar function by central differences;
/// used to check that radial functions of |v1 - v2| are annihilated.
struct DerivationOp {
  int k = 0;
  bool weighted = true;
  PotentialSpec potential = PotentialSpec::exact(-3.0);

  double weight(const Vec3& z) const {
    if (!weighted) return 1.0;
    const double r = z.norm();
    return std::pow(potential.alpha(r), 0.25) / std::sqrt(r);
  }

  double apply_fd(const std::function<double(const VecX&)>& fn, const VecX& pt,
                  double h = 1e-5) const {
    const Vec3 z = pt.segment<3>(0) - pt.segment<3>(3);
    const Vec3 b = b_field(k, z);
    const double scale = std::max(1.0, b.norm());
    VecX dir = detail::padded_direction(static_cast<int>(pt.size()), b / scale);
    const double d = (fn(pt + h * dir) - fn(pt - h * dir)) / (2.0 * h);
    return weight(z) * scale * d;
  }
};

// --------------------------------------------------------------------------
// Shared-sample Monte Carlo

/// Moments of the per-sample vector (d, A, B, C) described at the top.
struct DissipationSummary {
  stats::MomentAccumulator<4> acc;
  std::int64_t rejected = 0;
  double multiplier = 1.0;

  /// Estimate of E[c . (d, A, B, C)] with its standard error.
  FunctionalEstimate linear(const Eigen::Vector4d& c, std::string name) const {
    FunctionalEstimate e;
    e.functional = std::move(name);
    e.method = FunctionalEstimate::Method::mc;
    e.n = acc.count();
    e.rejected = rejected;
    e.value = c.dot(acc.mean());
    const double var = std::max(0.0, c.dot(acc.covariance() * c));
    e.error_multiplier = multiplier;
    e.abs_error = multiplier * std::sqrt(var / std::max<double>(1.0, e.n));
    return e;
  }

  static Eigen::Vector4d k_beta_coeffs(double beta) {
    return {0.0, 1.0, 2.0 * (beta - 1.0), (beta - 1.0) * (beta - 1.0)};
  }
  FunctionalEstimate D() const { return linear({1, 0, 0, 0}, "D"); }
  FunctionalEstimate K(double beta) const { return linear(k_beta_coeffs(beta), "K_beta"); }
  FunctionalEstimate J() const { return linear({0, 0, 0, 1}, "J"); }
};

inline Eigen::Vector4d dissipation_sample_vector(const DirectionalTerms& t, const KSet& ks) {
  Eigen::Vector4d s = Eigen::Vector4d::Zero();
  const double w4 = t.alpha / (t.dist * t.dist);
  for (int k = 0; k < 3; ++k) {
    if (!ks[k]) continue;
    const double y2 = t.y[k] * t.y[k];
    s[0] += 0.5 * t.alpha * y2;
    s[1] += w4 * t.x[k] * t.x[k];
    s[2] += w4 * t.x[k] * y2;
    s[3] += w4 * y2 * y2;
  }
  return s;
}

/// Samples F (dim >= 6) and accumulates (d, A, B, C). Second-order terms are
/// skipped (left at zero) when second_order is false.
inline DissipationSummary sample_dissipation(const DensityModel& F, const PotentialSpec& pot,
                                             const KSet& ks, const MCSpec& mc,
                                             bool second_order = true) {
  if (!F.can_sample()) throw ConfigError(F.name() + ": model is not sampleable");
  if (second_order && !F.has_hessian())
    throw CapabilityError(F.name() + ": K needs Hessian access");
  if (mc.samples < 2 || mc.batch < 1) throw ConfigError("MCSpec: need >= 2 samples");
  DissipationSummary out;
  out.multiplier = mc.multiplier;
  std::int64_t done = 0;
  for (std::uint64_t stream = 0; done < mc.samples; ++stream) {
    CounterStream rng(mc.seed, stream);
    stats::MomentAccumulator<4> part;
    const std::int64_t todo = std::min(mc.batch, mc.samples - done);
    for (std::int64_t s = 0; s < todo; ++s) {
      const VecX pt = F.sample(rng);
      const double dist = (pt.segment<3>(0) - pt.segment<3>(3)).norm();
      if (dist < kCoincidenceGuard) {
        ++out.rejected;
        continue;
      }
      part.add(dissipation_sample_vector(directional_terms(F, pt, pot, ks, second_order), ks));
    }
    out.acc.merge(part);
    done += todo;
  }
  return out;
}

/// D(rho (x) rho) = 1/2 int alpha a(v - w) : [grad log rho(v) - grad log rho(w)]^2.
/// A 3D rho is paired with itself; a 6D (or larger) model is used as is.
inline FunctionalEstimate entropy_production_D(const DensityPtr& rho, const PotentialSpec& pot,
                                               const MCSpec& mc) {
  if (!rho) throw ConfigError("entropy_production_D: null model");
  if (rho->dim() == 3) {
    const TensorProductModel pair(rho, 2);
    return sample_dissipation(pair, pot, kAllDirections, mc, false).D();
  }
  return sample_dissipation(*rho, pot, kAllDirections, mc, false).D();
}

inline FunctionalEstimate dissipation_K(const DensityModel& F, double beta, const KSet& ks,
                                        const PotentialSpec& pot, const MCSpec& mc) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("dissipation_K: beta must lie in [0, 1]");
  auto e = sample_dissipation(F, pot, ks, mc, true).K(beta);
  e.functional = "K_beta";
  return e;
}

inline FunctionalEstimate J_functional(const DensityModel& F, const KSet& ks,
                                       const PotentialSpec& pot, const MCSpec& mc) {
  // J needs only first derivatives; B and A stay zero.
  return sample_dissipation(F, pot, ks, mc, false).J();
}

/// Residual of the integration-by-parts step
/// int del^2 F (del F)^2 / F^2 = (2/3) J, on shared samples.
struct IbpCheck {
  double residual;     // |E[B] - 2/3 E[C]| / max(E[C], eps)
  double difference;   // E[B] - 2/3 E[C]
  double standard_error;
  double J;
};

inline constexpr double kResidualFloor = 1e-30;

inline IbpCheck ibp_identity_check(const DensityModel& F, int k, const PotentialSpec& pot,
                                   const MCSpec& mc) {
  KSet ks{false, false, false};
  ks.at(static_cast<std::size_t>(k)) = true;
  const auto summary = sample_dissipation(F, pot, ks, mc, true);
  const auto diff = summary.linear({0, 0, 1, -2.0 / 3.0}, "ibp");
  const double j = summary.J().value;
  return {std::abs(diff.value) / std::max(j, kResidualFloor), diff.value,
          diff.standard_error(), j};
}

/// D^j(rho^{(x)j}) and D(rho (x) rho) on shared pair marginals.
struct TensorConsistency {
  FunctionalEstimate value_j;
  FunctionalEstimate value_2;
  double difference_standard_error;
};

inline TensorConsistency tensor_consistency_D(DensityPtr rho, int j, const PotentialSpec& pot,
                                              const MCSpec& mc) {
  if (!rho || rho->dim() != 3) throw ConfigError("tensor_consistency_D: rho must be 3D");
  if (j < 2 || j > 4) throw ConfigError("tensor_consistency_D: j must lie in [2, 4]");
  const TensorProductModel Fj(rho, j);
  const TensorProductModel F2(rho, 2);
  stats::MomentAccumulator<3> acc;  // (D_j, D_2, D_j - D_2)
  std::int64_t rejected = 0;
  std::int64_t done = 0;
  for (std::uint64_t stream = 0; done < mc.samples; ++stream) {
    CounterStream rng(mc.seed, stream);
    const std::int64_t todo = std::min(mc.batch, mc.samples - done);
    for (std::int64_t s = 0; s < todo; ++s) {
      const VecX pt = Fj.sample(rng);
      const VecX pair = pt.head(6);
      if ((pair.segment<3>(0) - pair.segment<3>(3)).norm() < kCoincidenceGuard) {
        ++rejected;
        continue;
      }
      const double dj =
          dissipation_sample_vector(directional_terms(Fj, pt, pot, kAllDirections, false),
                                    kAllDirections)[0];
      const double d2 =
          dissipation_sample_vector(directional_terms(F2, pair, pot, kAllDirections, false),
                                    kAllDirections)[0];
      acc.add(Eigen::Vector3d(dj, d2, dj - d2));
    }
    done += todo;
  }
  auto make = [&](int idx, const char* name) {
    FunctionalEstimate e;
    e.functional = name;
    e.method = FunctionalEstimate::Method::mc;
    e.n = acc.count();
    e.rejected = rejected;
    e.value = acc.mean()[idx];
    e.error_multiplier = mc.multiplier;
    e.abs_error = mc.multiplier * std::sqrt(acc.covariance()(idx, idx) / acc.count());
    return e;
  };
  return {make(0, "D_j"), make(1, "D_2"),
          std::sqrt(acc.covariance()(2, 2) / std::max<double>(1.0, acc.count()))};
}

}  // namespace landau

#endif  // LANDAU_FUNCTIONALS_HPP
