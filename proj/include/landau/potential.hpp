#ifndef LANDAU_POTENTIAL_HPP
#define LANDAU_POTENTIAL_HPP

// Interaction potentials alpha(r) = r^gamma, their smooth bounded
// regularizations alpha_eta, and the geometric pair objects a(z), b_k, b~_k,
// the particle drift b^N and diffusion sigma^N.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "landau/types.hpp"

namespace landau {

namespace detail {

// Quintic smoothstep S(t) = 6t^5 - 15t^4 + 10t^3 on [0,1], clamped outside.
inline double smoothstep5(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

inline double smoothstep5_d1(double t) noexcept {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (t - 1.0) * (t - 1.0);
}

inline double smoothstep5_d2(double t) noexcept {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 60.0 * t * (2.0 * t * t - 3.0 * t + 1.0);
}

// Antiderivative of S with I(0) = 0, I(1) = 1/2.
inline double smoothstep5_integral(double t) noexcept {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 0.5 + (t - 1.0);
  const double t2 = t * t;
  return t2 * t2 * (t * (t - 3.0) + 2.5);
}

}  // namespace detail

/// Profile chi: R+ -> R+*, chi = 0.99 on [0, 0.98], chi(s) = s on [1, inf).
///
/// On [0.98, 1] the derivative is ramped from 0 to 1 with a quintic
/// smoothstep. The ramp width w = 0.02 is forced by chi(1) = 1: the integral
/// of the ramp is w/2 = 1 - 0.99. The resulting chi is C^3, nondecreasing,
/// has 0 <= chi' <= 1 and chi(s) >= s, so s chi'(s)/chi(s) <= 1.
struct RegularizationProfile {
  static constexpr double floor_value = 0.99;
  static constexpr double ramp_start = 0.98;
  static constexpr double ramp_width = 1.0 - ramp_start;

  static double value(double s) noexcept {
    if (s <= ramp_start) return floor_value;
    if (s >= 1.0) return s;
    return floor_value +
           ramp_width * detail::smoothstep5_integral((s - ramp_start) / ramp_width);
  }
  static double d1(double s) noexcept {
    return detail::smoothstep5((s - ramp_start) / ramp_width);
  }
  static double d2(double s) noexcept {
    return detail::smoothstep5_d1((s - ramp_start) / ramp_width) / ramp_width;
  }
};

/// Exponent, cutoff radius and ratio constant of a regularized power law.
///
/// gamma = 0 (Maxwell molecules, alpha == 1) is accepted as an oracle regime;
/// otherwise gamma must lie in [-3, -2]. eta <= 0 selects the unregularized
/// potential r^gamma, which is only meaningful for the functionals.
class PotentialSpec {
 public:
  PotentialSpec(double gamma, double eta, double theta = 0.99)
      : gamma_(gamma), eta_(eta), theta_(theta) {
    validate();
  }

  static PotentialSpec exact(double gamma) {
    PotentialSpec p(gamma, 1.0, 0.99);
    p.eta_ = 0.0;
    return p;
  }

  double gamma() const noexcept { return gamma_; }
  double eta() const noexcept { return eta_; }
  double theta() const noexcept { return theta_; }
  bool regularized() const noexcept { return eta_ > 0.0; }

  /// alpha_eta(r) = (eta chi(r/eta))^gamma, or r^gamma when unregularized.
  double alpha(double r) const noexcept {
    if (gamma_ == 0.0) return 1.0;
    if (!regularized() || r >= eta_) return power(r);
    return power(eta_ * RegularizationProfile::value(r / eta_));
  }

  double alpha_prime(double r) const noexcept {
    if (gamma_ == 0.0) return 0.0;
    if (!regularized() || r >= eta_) return gamma_ * power(r) / r;
    const double s = r / eta_;
    const double chi_eta = eta_ * RegularizationProfile::value(s);
    return gamma_ * power(chi_eta) / chi_eta * RegularizationProfile::d1(s);
  }

  /// Upper bound of alpha: (0.99 eta)^gamma for regularized potentials.
  double alpha_max() const noexcept {
    if (gamma_ == 0.0) return 1.0;
    if (!regularized()) return HUGE_VAL;
    return power(RegularizationProfile::floor_value * eta_);
  }

 private:
  double power(double x) const noexcept {
    // The presets are hit in the pair loop; avoid std::pow for them.
    if (gamma_ == -2.0) return 1.0 / (x * x);
    if (gamma_ == -3.0) return 1.0 / (x * x * x);
    return std::pow(x, gamma_);
  }

  void validate() const {
    if (!std::isfinite(gamma_) || (gamma_ != 0.0 && (gamma_ < -3.0 || gamma_ > -2.0)))
      throw ConfigError("gamma must lie in [-3, -2] (or equal 0), got " +
                        std::to_string(gamma_));
    if (!(eta_ > 0.0) || !std::isfinite(eta_))
      throw ConfigError("eta must be positive and finite, got " + std::to_string(eta_));
    if (!(theta_ <= 1.0) || !(theta_ > -gamma_ / std::sqrt(22.0)) || !(theta_ > 0.0))
      throw ConfigError("theta must lie in (-gamma/sqrt(22), 1], got " +
                        std::to_string(theta_));
  }

  double gamma_;
  double eta_;
  double theta_;
};

inline double alpha_reg(const PotentialSpec& spec, double r) {
  if (!(r >= 0.0)) throw ConfigError("alpha_reg: r must be nonnegative");
  return spec.alpha(r);
}

/// max over the grid of r|alpha'(r)|/alpha(r) - (-gamma/theta); <= 0 when the
/// regularization obeys the logarithmic-derivative bound.
inline double ratio_condition_margin(const PotentialSpec& spec,
                                     std::span<const double> r_grid) {
  if (r_grid.empty()) throw ConfigError("ratio_condition_margin: empty grid");
  const double bound = -spec.gamma() / spec.theta();
  double worst = -HUGE_VAL;
  for (double r : r_grid) {
    if (!(r > 0.0)) throw ConfigError("ratio_condition_margin: grid must be positive");
    const double ratio = r * std::abs(spec.alpha_prime(r)) / spec.alpha(r);
    worst = std::max(worst, ratio - bound);
  }
  return worst;
}

/// a(z) = |z|^2 Id - z z^T.
inline Mat3 projection_matrix(const Vec3& z) {
  return z.squaredNorm() * Mat3::Identity() - z * z.transpose();
}

/// b_k = e_k x z for z = v1 - v2.
inline Vec3 b_field(int k, const Vec3& z) { return Vec3::Unit(k).cross(z); }

struct PairKernel {
  Vec3 z;
  Mat3 a;
  std::array<Vec3, 3> bk;
  std::array<Eigen::Matrix<double, 6, 1>, 3> btilde;
};

inline PairKernel kernel_at(const Vec3& v1, const Vec3& v2) {
  PairKernel k;
  k.z = v1 - v2;
  k.a = projection_matrix(k.z);
  for (int i = 0; i < 3; ++i) {
    k.bk[i] = b_field(i, k.z);
    k.btilde[i] << k.bk[i], -k.bk[i];
  }
  return k;
}

/// b^N(z) = div(alpha a)(z) = -2 alpha(|z|) z; zero at z = 0.
inline Vec3 drift_bN(const PotentialSpec& spec, const Vec3& z) {
  const double r = z.norm();
  if (r == 0.0) return Vec3::Zero();
  return -2.0 * spec.alpha(r) * z;
}

/// sigma^N(z) = sqrt(alpha) |z|^{-1} a(z); zero at z = 0 by continuity.
inline Mat3 diffusion_sigmaN(const PotentialSpec& spec, const Vec3& z) {
  const double r = z.norm();
  if (r == 0.0) return Mat3::Zero();
  return (std::sqrt(spec.alpha(r)) / r) * projection_matrix(z);
}

}  // namespace landau

#endif  // LANDAU_POTENTIAL_HPP
