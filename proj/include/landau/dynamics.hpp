#ifndef LANDAU_DYNAMICS_HPP
#define LANDAU_DYNAMICS_HPP

// Conservative N-particle system with antisymmetric pair noise,
//   dV_i = 2/(N-1) sum_j b(V_i - V_j) dt + sqrt(2/(N-1)) sum_j sigma(V_i - V_j) dB_ij,
// B_ji = -B_ij, integrated by Euler-Maruyama.
//
// Pairs are enumerated in increasing label order and each pair increment is
// computed once, so the trajectory is a pure function of (config, seed,
// labels) and does not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "landau/density.hpp"
#include "landau/philox.hpp"
#include "landau/potential.hpp"
#include "landau/stats.hpp"
#include "landau/types.hpp"

namespace landau {

enum class EnergyMode { none, rescale };

inline const char* to_string(EnergyMode m) { return m == EnergyMode::none ? "none" : "rescale"; }

/// Either a fixed eta or eta(N) = c N^{-kappa}, clipped to [1e-4, 1].
struct EtaRule {
  std::optional<double> fixed;
  double c = 1.0;
  double kappa = 0.25;

  double resolve(std::int64_t n) const {
    if (fixed) {
      if (!(*fixed > 0.0)) throw ConfigError("eta must be positive");
      return *fixed;
    }
    if (!(c > 0.0) || !(kappa > 0.0)) throw ConfigError("eta rule needs c > 0 and kappa > 0");
    return std::clamp(c * std::pow(static_cast<double>(n), -kappa), 1e-4, 1.0);
  }
};

struct SimConfig {
  double gamma = -2.0;
  EtaRule eta_rule;
  double theta = 0.99;
  double dt = 1e-3;
  double t_end = 1.0;
  std::int64_t n_particles = 64;
  std::uint64_t seed = 1;
  EnergyMode energy_mode = EnergyMode::none;
  std::int64_t snapshot_stride = 1;
  int workers = 1;

  void validate() const {
    if (n_particles < 2) throw ConfigError("n_particles must be >= 2");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be >= 0");
    if (t_end > 0.0 && t_end < dt) throw ConfigError("t_end must be 0 or >= dt");
    if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    (void)potential();
  }

  double eta() const { return eta_rule.resolve(n_particles); }
  PotentialSpec potential() const { return PotentialSpec(gamma, eta(), theta); }
  std::int64_t n_steps() const { return static_cast<std::int64_t>(std::llround(t_end / dt)); }
};

struct ParticleState {
  double t = 0.0;
  std::int64_t step_index = 0;
  Cloud velocities;
  /// Noise identity of each particle; pairs draw with the smaller label first.
  std::vector<std::uint32_t> labels;
  std::uint64_t noise_seed = 0;
  /// Sum |V_i|^2 at t = 0, restored in rescale mode.
  double energy0 = 0.0;

  std::size_t size() const { return velocities.size(); }
};

struct Conserved {
  Vec3 momentum;
  double energy;
};

inline Conserved conserved_quantities(const Cloud& v) {
  stats::CompensatedSum m[3];
  stats::CompensatedSum e;
  for (const auto& x : v) {
    for (int c = 0; c < 3; ++c) m[c].add(x[c]);
    e.add(x.squaredNorm());
  }
  return {Vec3(m[0].value(), m[1].value(), m[2].value()), e.value()};
}

inline Conserved conserved_quantities(const ParticleState& s) {
  return conserved_quantities(s.velocities);
}

/// N i.i.d. draws from g0, deterministic in config.seed.
inline ParticleState init_iid(const SimConfig& config, const DensityModel& g0) {
  if (config.n_particles < 2) throw ConfigError("n_particles must be >= 2");
  if (g0.dim() != 3) throw ConfigError("initial density must be 3D");
  if (!g0.can_sample()) throw ConfigError(g0.name() + ": model is not sampleable");
  ParticleState s;
  s.noise_seed = config.seed;
  CounterStream rng(config.seed, 0);
  s.velocities.reserve(static_cast<std::size_t>(config.n_particles));
  for (std::int64_t i = 0; i < config.n_particles; ++i) {
    const VecX x = g0.sample(rng);
    s.velocities.emplace_back(x[0], x[1], x[2]);
  }
  s.labels.resize(s.velocities.size());
  std::iota(s.labels.begin(), s.labels.end(), 0u);
  s.energy0 = conserved_quantities(s.velocities).energy;
  return s;
}

/// Wraps a given cloud as an initial state (labels 0..N-1).
inline ParticleState state_from_cloud(Cloud v, std::uint64_t seed) {
  if (v.size() < 2) throw ConfigError("need at least 2 particles");
  ParticleState s;
  s.noise_seed = seed;
  s.velocities = std::move(v);
  s.labels.resize(s.velocities.size());
  std::iota(s.labels.begin(), s.labels.end(), 0u);
  s.energy0 = conserved_quantities(s.velocities).energy;
  return s;
}

/// Affine map V <- m + s (V - m) restoring sum |V|^2 = target.
inline void rescale_energy(Cloud& v, double target) {
  const auto n = static_cast<double>(v.size());
  const Vec3 m = conserved_quantities(v).momentum / n;
  stats::CompensatedSum centered;
  for (const auto& x : v) centered.add((x - m).squaredNorm());
  const double thermal = target - n * m.squaredNorm();
  if (!(centered.value() > 0.0) || !(thermal >= 0.0)) return;
  const double s = std::sqrt(thermal / centered.value());
  for (auto& x : v) x = m + s * (x - m);
}

/// Euler-Maruyama stepper. Owns scratch buffers; not thread-safe itself but
/// may use config.workers threads internally.
class Stepper {
 public:
  explicit Stepper(SimConfig config) : config_(std::move(config)), pot_(config_.potential()) {
    config_.validate();
    const double n = static_cast<double>(config_.n_particles);
    drift_coef_ = 2.0 / (n - 1.0) * config_.dt;
    noise_coef_ = std::sqrt(2.0 / (n - 1.0)) * std::sqrt(config_.dt);
  }

  const SimConfig& config() const { return config_; }
  const PotentialSpec& potential() const { return pot_; }

  void advance(ParticleState& s) {
    const std::size_t n = s.size();
    if (n < 2) throw ConfigError("need at least 2 particles");
    if (s.labels.size() != n) throw ConfigError("labels/velocities size mismatch");
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(),
              [&](std::size_t a, std::size_t b) { return s.labels[a] < s.labels[b]; });
    row_offset_.resize(n + 1);
    row_offset_[0] = 0;
    for (std::size_t a = 0; a < n; ++a) row_offset_[a + 1] = row_offset_[a] + (n - 1 - a);
    incr_.resize(row_offset_[n]);

    const int workers = std::max(1, std::min<int>(config_.workers, static_cast<int>(n / 16) + 1));
    if (workers == 1) {
      compute_rows(s, 0, n);
    } else {
      // Rows have decreasing length; interleave them across threads.
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t a = static_cast<std::size_t>(w); a < n;
               a += static_cast<std::size_t>(workers))
            compute_rows(s, a, a + 1);
        });
      for (auto& t : pool) t.join();
    }

    delta_.assign(n, Vec3::Zero());
    for (std::size_t a = 0; a < n; ++a) {
      const std::size_t p = order_[a];
      for (std::size_t b = a + 1; b < n; ++b) {
        const Vec3& d = incr_[row_offset_[a] + (b - a - 1)];
        delta_[p] += d;
        delta_[order_[b]] -= d;
      }
    }
    for (std::size_t i = 0; i < n; ++i) s.velocities[i] += delta_[i];
    if (config_.energy_mode == EnergyMode::rescale) rescale_energy(s.velocities, s.energy0);

    ++s.step_index;
    s.t = static_cast<double>(s.step_index) * config_.dt;
    for (const auto& v : s.velocities)
      if (!v.allFinite()) throw IntegrationBlowup(s.step_index, "non-finite velocity");
  }

 private:
  void compute_rows(const ParticleState& s, std::size_t a0, std::size_t a1) {
    const std::size_t n = s.size();
    const auto step = static_cast<std::uint64_t>(s.step_index);
    for (std::size_t a = a0; a < a1; ++a) {
      const std::size_t p = order_[a];
      const Vec3 vp = s.velocities[p];
      const std::uint32_t lp = s.labels[p];
      Vec3* out = incr_.data() + row_offset_[a];
      for (std::size_t b = a + 1; b < n; ++b) {
        const std::size_t q = order_[b];
        const Vec3 z = vp - s.velocities[q];
        const double r2 = z.squaredNorm();
        if (r2 == 0.0) {
          out[b - a - 1].setZero();
          continue;
        }
        const double r = std::sqrt(r2);
        const double alpha = pot_.alpha(r);
        const auto g = pair_normals({s.noise_seed, step, lp, s.labels[q]});
        const Vec3 xi(g[0], g[1], g[2]);
        // sigma xi = sqrt(alpha)/|z| (|z|^2 xi - z (z . xi))
        const Vec3 noise = (std::sqrt(alpha) / r) * (r2 * xi - z * z.dot(xi));
        out[b - a - 1] = drift_coef_ * (-2.0 * alpha) * z + noise_coef_ * noise;
      }
    }
  }

  SimConfig config_;
  PotentialSpec pot_;
  double drift_coef_ = 0.0;
  double noise_coef_ = 0.0;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> row_offset_;
  std::vector<Vec3> incr_;
  std::vector<Vec3> delta_;
};

/// One Euler-Maruyama step as a value transformation.
inline ParticleState step(const ParticleState& state, const SimConfig& config) {
  ParticleState next = state;
  Stepper(config).advance(next);
  return next;
}

struct Snapshot {
  std::int64_t step;
  double t;
  Cloud velocities;
};

struct Trajectory {
  SimConfig config;
  std::vector<Snapshot> snapshots;
  bool failed = false;
  std::string error;
  std::int64_t failed_step = -1;

  const Snapshot& at_time(double t) const;
};

inline const Snapshot& Trajectory::at_time(double t) const {
  for (const auto& s : snapshots)
    if (std::abs(s.t - t) <= 1e-9 * std::max(1.0, std::abs(t))) return s;
  throw ConfigError("no snapshot stored at t = " + std::to_string(t));
}

using Observer = std::function<void(const ParticleState&)>;

struct RunOptions {
  bool keep_snapshots = true;
};

/// Steps from the given state to config.t_end, calling observers at step 0,
/// every snapshot_stride steps and at the final step. A blowup is recorded in
/// the returned trajectory, which keeps the snapshots taken before it.
inline Trajectory run(const SimConfig& config, ParticleState state,
                      const std::vector<Observer>& observers = {}, RunOptions opts = {}) {
  config.validate();
  Trajectory traj;
  traj.config = config;
  const std::int64_t steps = config.n_steps();
  auto emit = [&](const ParticleState& s) {
    if (opts.keep_snapshots) traj.snapshots.push_back({s.step_index, s.t, s.velocities});
    for (const auto& o : observers) o(s);
  };
  emit(state);
  Stepper stepper(config);
  try {
    for (std::int64_t k = 1; k <= steps; ++k) {
      stepper.advance(state);
      if (k % config.snapshot_stride == 0 || k == steps) emit(state);
    }
  } catch (const IntegrationBlowup& e) {
    traj.failed = true;
    traj.error = e.what();
    traj.failed_step = e.step();
  }
  return traj;
}

inline Trajectory run(const SimConfig& config, const DensityModel& g0,
                      const std::vector<Observer>& observers = {}, RunOptions opts = {}) {
  return run(config, init_iid(config, g0), observers, opts);
}

}  // namespace landau

#endif  // LANDAU_DYNAMICS_HPP
