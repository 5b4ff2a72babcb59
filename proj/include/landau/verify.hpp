#ifndef LANDAU_VERIFY_HPP
#define LANDAU_VERIFY_HPP

// Fast self-checks of the library invariants, used by `landau verify`.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "landau/diagnostics.hpp"
#include "landau/dynamics.hpp"
#include "landau/functionals.hpp"
#include "landau/philox.hpp"
#include "landau/potential.hpp"
#include "landau/reference.hpp"

namespace landau::verify {

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

namespace detail {

inline std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

inline Check kernel_algebra() {
  CounterStream rng(7, 1);
  const PotentialSpec pot(-3.0, 0.1);
  double worst_a = 0.0;
  double worst_s = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Vec3 v1(rng.normal(), rng.normal(), rng.normal());
    const Vec3 v2(rng.normal(), rng.normal(), rng.normal());
    const auto k = kernel_at(v1, v2);
    Mat3 sum = Mat3::Zero();
    for (const auto& b : k.bk) sum += b * b.transpose();
    worst_a = std::max(worst_a, (sum - k.a).cwiseAbs().maxCoeff());
    const Mat3 sig = diffusion_sigmaN(pot, k.z);
    const Mat3 aa = pot.alpha(k.z.norm()) * k.a;
    worst_s = std::max(worst_s, (sig * sig.transpose() - aa).norm() / aa.norm());
  }
  return {"kernel algebra", worst_a <= 1e-12 && worst_s <= 1e-12,
          "sum b b^T - a: " + fmt(worst_a) + ", sigma sigma^T vs alpha a: " + fmt(worst_s)};
}

inline Check ratio_condition() {
  double worst = -HUGE_VAL;
  for (double gamma : {-3.0, -2.5, -2.0})
    for (double eta : {1e-3, 0.1, 1.0}) {
      const PotentialSpec p(gamma, eta);
      std::vector<double> r;
      for (int i = 1; i <= 4000; ++i) r.push_back(eta * (0.25 + 3.75 * i / 4000.0));
      worst = std::max(worst, ratio_condition_margin(p, r));
    }
  return {"ratio condition", worst <= 0.0, "max margin " + fmt(worst)};
}

inline Check conservation() {
  double worst = 0.0;
  for (double gamma : {0.0, -2.0, -3.0}) {
    SimConfig c;
    c.gamma = gamma;
    c.n_particles = 64;
    c.dt = 1e-3;
    c.t_end = 0.05;
    const auto g0 = maxwellian({});
    auto s = init_iid(c, *g0);
    Stepper st(c);
    for (int k = 0; k < 50; ++k) {
      const Vec3 before = conserved_quantities(s).momentum;
      double scale = 0.0;
      for (const auto& v : s.velocities) scale = std::max(scale, v.cwiseAbs().maxCoeff());
      st.advance(s);
      worst = std::max(worst, (conserved_quantities(s).momentum - before).cwiseAbs().maxCoeff() /
                                  std::max(1.0, scale));
    }
  }
  return {"momentum conservation", worst <= 1e-12, "max per-step change " + fmt(worst)};
}

inline Check rescale_energy_mode() {
  SimConfig c;
  c.gamma = -2.0;
  c.n_particles = 32;
  c.t_end = 0.05;
  c.energy_mode = EnergyMode::rescale;
  auto s = init_iid(c, *maxwellian({}));
  const double e0 = s.energy0;
  Stepper st(c);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    st.advance(s);
    worst = std::max(worst, std::abs(conserved_quantities(s).energy - e0) / e0);
  }
  return {"energy rescale", worst <= 1e-12, "max relative drift " + fmt(worst)};
}

inline Check gaussian_oracles() {
  double worst = 0.0;
  for (double s2 : {0.5, 1.0, 2.0}) {
    const auto g = maxwellian({Vec3::Zero(), s2});
    worst = std::max(worst, std::abs(entropy(*g).value - g->entropy_exact()) /
                                std::abs(g->entropy_exact()));
    worst = std::max(worst, std::abs(fisher(*g).value - 3.0 / s2) / (3.0 / s2));
  }
  return {"Gaussian H and I", worst <= 1e-6, "max relative error " + fmt(worst)};
}

inline Check equilibrium_zeros() {
  const auto m = maxwellian({});
  const TensorProductModel mm(m, 2);
  const PotentialSpec pot = PotentialSpec::exact(-3.0);
  MCSpec mc;
  mc.samples = 20000;
  const auto s = sample_dissipation(mm, pot, kAllDirections, mc, true);
  const double worst = std::max({std::abs(s.D().value), std::abs(s.K(0.5).value),
                                 std::abs(s.J().value)});
  return {"Maxwellian zeros", worst <= 1e-18, "max |D|, |K|, |J| " + fmt(worst)};
}

inline Check beta_expansion() {
  // d^2 F^beta / (beta F^beta) = d^2 F / F + (beta - 1) (dF / F)^2 for
  // F = exp(q), any direction: check via the closed forms along a line.
  CounterStream rng(3, 9);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const double q1 = rng.normal();
    const double q2 = rng.normal();
    const double beta = rng.uniform();
    const double lhs = (beta * q2 + beta * beta * q1 * q1) / beta;
    const double rhs = (q2 + q1 * q1) + (beta - 1.0) * q1 * q1;
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return {"beta expansion", worst <= 1e-12, "max relative error " + fmt(worst)};
}

inline Check nonalignment_example() {
  const auto r = is_delta_nonaligned(Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), 0.01);
  const bool ok = r.non_aligned && std::abs(r.m1 - 0.4) < 1e-15 && std::abs(r.m2 - 0.56) < 1e-15;
  return {"non-alignment example", ok, "margins " + fmt(r.m1) + ", " + fmt(r.m2)};
}

inline Check moment_ode() {
  Mat3 p0 = Vec3(2.0, 0.5, 0.5).asDiagonal();
  double worst = 0.0;
  for (double t : {0.0, 0.01, 0.1, 1.0})
    worst = std::max(worst, std::abs(maxwell_molecule_moment_ode(p0, t).trace() - 3.0));
  return {"moment ODE trace", worst <= 1e-14, "max trace error " + fmt(worst)};
}

inline Check philox_known_answer() {
  const auto w = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
  const bool ok = w[0] == 0x6627e8d5u && w[1] == 0xe169c58du && w[2] == 0xbc57ac4cu &&
                  w[3] == 0x9b00dbd8u;
  return {"Philox known answer", ok, ok ? "match" : "mismatch"};
}

}  // namespace detail

inline std::vector<Check> run_all() {
  std::vector<std::function<Check()>> fns{
      detail::philox_known_answer, detail::kernel_algebra, detail::ratio_condition,
      detail::conservation,        detail::rescale_energy_mode, detail::gaussian_oracles,
      detail::equilibrium_zeros,   detail::beta_expansion, detail::nonalignment_example,
      detail::moment_ode};
  std::vector<Check> out;
  for (const auto& f : fns) {
    try {
      out.push_back(f());
    } catch (const std::exception& e) {
      out.push_back({"(exception)", false, e.what()});
    }
  }
  return out;
}

}  // namespace landau::verify

#endif  // LANDAU_VERIFY_HPP
