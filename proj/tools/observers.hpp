#ifndef LANDAU_TOOLS_OBSERVERS_HPP
#define LANDAU_TOOLS_OBSERVERS_HPP

// Per-snapshot diagnostic rows shared by `simulate` and `sweep`.

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "landau/config.hpp"
#include "landau/diagnostics.hpp"
#include "landau/estimators.hpp"
#include "landau/reference.hpp"

namespace landau::tools {

struct NamedTest {
  std::string id;
  TestFunctionPtr phi;
};

inline std::vector<NamedTest> standard_tests() {
  return {{"constant", std::make_shared<ConstantFunction>(1.0)},
          {"affine", std::make_shared<AffineFunction>(0.5, Vec3(1.0, -2.0, 0.5))},
          {"bump", std::make_shared<RadialBump>(Vec3(0.3, -0.2, 0.1), 1.0)}};
}

/// Maxwellian with the cloud's mean and temperature.
inline std::shared_ptr<GaussianModel> matched_maxwellian(const Cloud& v) {
  const auto c = conserved_quantities(v);
  const double n = static_cast<double>(v.size());
  const Vec3 m = c.momentum / n;
  const double temp = std::max(1e-12, (c.energy / n - m.squaredNorm()) / 3.0);
  return maxwellian({m, temp});
}

struct ObserverOptions {
  bool entropy = true;
  bool pair_stats = true;
  bool iota = true;
};

/// Accumulates weak-form residuals online (trapezoid in time) and emits one
/// JSON row per observed state.
class DiagnosticsObserver {
 public:
  DiagnosticsObserver(const RunConfig& rc, const ParticleState& initial, ObserverOptions opts = {})
      : rc_(rc), opts_(opts), tests_(standard_tests()), dict_(64) {
    const auto ref = matched_maxwellian(initial.velocities);
    ref_integrals_ = dict_.integrals(*ref);
    const EmpiricalMeasure mu0(initial.velocities);
    for (const auto& t : tests_) {
      initial_mean_.push_back(mu0.integrate([&](const Vec3& x) { return t.phi->value(x); }));
      integral_.emplace_back();
    }
    prev_integrand_.assign(tests_.size(), 0.0);
    if (opts_.iota)
      triple_ = find_nonaligned_triple(mu0, rc.delta, rc.radius, rc.kappa);
  }

  nlohmann::json observe(const ParticleState& s) {
    const EmpiricalMeasure mu(s.velocities);
    const auto cq = conserved_quantities(s);
    nlohmann::json row;
    row["t"] = s.t;
    row["step"] = s.step_index;
    row["momentum"] = {cq.momentum[0], cq.momentum[1], cq.momentum[2]};
    row["energy"] = cq.energy;
    if (opts_.pair_stats) row["pair_inv_sq"] = pair_inverse_square(mu).value;
    if (opts_.entropy && s.size() >= 5) row["knn_entropy"] = knn_entropy(mu, 4).value;
    row["bl_dist_to_ref"] =
        bl_distance_from_integrals(dict_.integrals(mu), ref_integrals_, dict_).value;
    nlohmann::json weak = nlohmann::json::object();
    for (std::size_t k = 0; k < tests_.size(); ++k) {
      const double g = weak_form_integrand(s.velocities, *tests_[k].phi, rc_.sim.gamma);
      if (last_t_) integral_[k].add(0.5 * (prev_integrand_[k] + g) * (s.t - *last_t_));
      prev_integrand_[k] = g;
      const double now = mu.integrate([&](const Vec3& x) { return tests_[k].phi->value(x); });
      weak[tests_[k].id] = initial_mean_[k] - now + integral_[k].value();
    }
    last_t_ = s.t;
    row["weak_residual"] = weak;
    if (triple_)
      row["iota"] = iota(mu, *triple_);
    else
      row["iota"] = nullptr;
    return row;
  }

  const std::optional<NonAlignedTriple>& triple() const { return triple_; }

 private:
  RunConfig rc_;
  ObserverOptions opts_;
  std::vector<NamedTest> tests_;
  TestFunctionDictionary dict_;
  std::vector<double> ref_integrals_;
  std::vector<double> initial_mean_;
  std::vector<stats::CompensatedSum> integral_;
  std::vector<double> prev_integrand_;
  std::optional<double> last_t_;
  std::optional<NonAlignedTriple> triple_;
};

}  // namespace landau::tools

#endif  // LANDAU_TOOLS_OBSERVERS_HPP
