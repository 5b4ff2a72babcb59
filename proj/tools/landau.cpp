// landau: command-line front end.
//
//   landau simulate   --config run.json [--seed S] [--out DIR] [--format csv|binary]
//   landau sweep      --config run.json --axis N|dt|eta --values 64,128 [--seeds 8]
//   landau functionals --preset "maxwellian(1)" --functional fisher
//   landau plotdata   --run-dir DIR --series energy
//   landau verify
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "landau/landau.hpp"
#include "landau/verify.hpp"
#include "observers.hpp"
#include "run_io.hpp"

#ifndef LANDAU_VERSION
#define LANDAU_VERSION "0.0.0"
#endif

namespace {

using namespace landau;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

int worker_count(int flag) {
  if (const char* env = std::getenv("LANDAU_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("LANDAU_WORKERS must be a positive integer, got '") + env + "'");
  }
  return std::max(1, flag);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "run";
  std::string format = "csv";
  int workers = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  RunConfig rc = load_config(a.config);
  if (a.seed) rc.sim.seed = *a.seed;
  if (a.workers > 0 || std::getenv("LANDAU_WORKERS")) rc.sim.workers = worker_count(a.workers);
  const auto fmt = a.format == "binary" ? tools::SnapshotFormat::binary : tools::SnapshotFormat::csv;
  const auto g0 = make_preset(rc.initial);

  const fs::path out(a.out);
  fs::create_directories(out / "snapshots");
  const auto t0 = std::chrono::steady_clock::now();

  ParticleState init = init_iid(rc.sim, *g0);
  tools::DiagnosticsObserver diag(rc, init);
  tools::JsonlWriter jsonl(out / "diagnostics.jsonl");
  std::vector<fs::path> files;
  Observer write = [&](const ParticleState& s) {
    const fs::path p = out / "snapshots" / tools::snapshot_name(s.step_index, fmt);
    tools::write_snapshot(p, s, fmt);
    files.push_back(p);
    jsonl.write(diag.observe(s));
  };
  RunOptions opts;
  opts.keep_snapshots = false;
  const Trajectory traj = run(rc.sim, init, {write}, opts);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json manifest;
  manifest["version"] = LANDAU_VERSION;
  manifest["config"] = to_json(rc);
  manifest["seed"] = rc.sim.seed;
  manifest["eta"] = rc.sim.eta();
  manifest["snapshot_format"] = a.format;
  manifest["timing_seconds"] = seconds;
  manifest["status"] = traj.failed ? "blowup" : "ok";
  if (traj.failed) {
    manifest["error"] = traj.error;
    manifest["failed_step"] = traj.failed_step;
  }
  if (const auto& t = diag.triple())
    manifest["iota_triple"] = {{"v1", {t->v1[0], t->v1[1], t->v1[2]}},
                               {"v2", {t->v2[0], t->v2[1], t->v2[2]}},
                               {"v3", {t->v3[0], t->v3[1], t->v3[2]}},
                               {"delta", t->delta}};
  json outputs = json::array();
  files.push_back(out / "diagnostics.jsonl");
  for (const auto& f : files)
    outputs.push_back({{"path", fs::relative(f, out).string()}, {"sha256", tools::sha256_file(f)}});
  manifest["outputs"] = outputs;
  std::ofstream(out / "manifest.json") << manifest.dump(2) << '\n';

  std::cout << "wrote " << files.size() - 1 << " snapshot(s) to " << out.string() << '\n';
  if (traj.failed) {
    std::cerr << "error: " << traj.error << '\n';
    return kRuntime;
  }
  return kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::string axis;
  std::vector<double> values;
  int seeds = 8;
  std::string out = "sweep";
  int workers = 0;
};

struct CellResult {
  bool ok = false;
  std::string error;
  double weak_residual = 0.0;
  double bl_to_ref = 0.0;
  double energy_drift = 0.0;
};

int cmd_sweep(const SweepArgs& a) {
  if (a.values.empty()) throw ConfigError("sweep: --values must not be empty");
  if (a.axis != "N" && a.axis != "dt" && a.axis != "eta")
    throw ConfigError("sweep: --axis must be one of N, dt, eta");
  if (a.seeds < 1) throw ConfigError("sweep: --seeds must be >= 1");
  const RunConfig base = load_config(a.config);
  const auto g0 = make_preset(base.initial);

  const std::size_t nv = a.values.size();
  const std::size_t ns = static_cast<std::size_t>(a.seeds);
  std::vector<RunConfig> cells;
  for (double v : a.values)
    for (std::size_t s = 0; s < ns; ++s) {
      RunConfig rc = base;
      rc.sim.workers = 1;
      rc.sim.seed = base.sim.seed + s;
      if (a.axis == "N") rc.sim.n_particles = static_cast<std::int64_t>(std::llround(v));
      if (a.axis == "dt") rc.sim.dt = v;
      if (a.axis == "eta") rc.sim.eta_rule.fixed = v;
      rc.sim.validate();
      cells.push_back(rc);
    }

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < cells.size();) {
      const RunConfig& rc = cells[i];
      CellResult& r = results[i];
      try {
        ParticleState init = init_iid(rc.sim, *g0);
        tools::ObserverOptions light{false, false, false};
        tools::DiagnosticsObserver diag(rc, init, light);
        json last;
        RunOptions opts;
        opts.keep_snapshots = false;
        const auto traj = run(rc.sim, init, {[&](const ParticleState& s) { last = diag.observe(s); }}, opts);
        if (traj.failed) throw std::runtime_error(traj.error);
        r.weak_residual = std::abs(last["weak_residual"]["bump"].get<double>());
        r.bl_to_ref = last["bl_dist_to_ref"].get<double>();
        r.energy_drift = std::abs(last["energy"].get<double>() - init.energy0) / init.energy0;
        r.ok = true;
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  const int workers = worker_count(a.workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  fs::create_directories(a.out);
  std::ofstream csv(fs::path(a.out) / "summary.csv");
  std::ostringstream table;
  const std::string header =
      a.axis + ",seeds_ok,median_weak_residual,median_bl_dist_to_ref,median_energy_drift";
  csv << header << '\n';
  table << header << '\n';
  bool any_failed = false;
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<double> w, b, e;
    for (std::size_t s = 0; s < ns; ++s) {
      const auto& r = results[v * ns + s];
      if (!r.ok) {
        any_failed = true;
        std::cerr << "cell " << a.axis << "=" << a.values[v] << " seed " << cells[v * ns + s].sim.seed
                  << " failed: " << r.error << '\n';
        continue;
      }
      w.push_back(r.weak_residual);
      b.push_back(r.bl_to_ref);
      e.push_back(r.energy_drift);
    }
    std::ostringstream line;
    line << std::setprecision(10) << a.values[v] << ',' << w.size();
    if (w.empty())
      line << ",,,";
    else
      line << ',' << stats::median(w) << ',' << stats::median(b) << ',' << stats::median(e);
    csv << line.str() << '\n';
    table << line.str() << '\n';
  }
  std::cout << table.str();
  return any_failed ? kRuntime : kOk;
}

// ---------------------------------------------------------------- functionals

struct FunctionalArgs {
  std::string preset;
  std::string functional;
  double beta = 1.0;
  double gamma = -3.0;
  std::optional<double> eta;
  std::int64_t samples = 200000;
  std::uint64_t seed = 1;
  int grid_points = 81;
};

const std::vector<std::string>& functional_names() {
  static const std::vector<std::string> n{"entropy", "fisher", "D", "K_beta", "J", "ibp"};
  return n;
}

int cmd_functionals(const FunctionalArgs& a) {
  const auto& names = functional_names();
  if (std::find(names.begin(), names.end(), a.functional) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown functional '" + a.functional + "'; available: " + list);
  }
  const DensityPtr rho = make_preset(a.preset);
  const PotentialSpec pot = a.eta ? PotentialSpec(a.gamma, *a.eta) : PotentialSpec::exact(a.gamma);
  MCSpec mc;
  mc.samples = a.samples;
  mc.seed = a.seed;
  GridSpec grid;
  grid.points_per_axis = a.grid_points;

  json rep;
  rep["model"] = a.preset;
  FunctionalEstimate est;
  const auto pair = std::make_shared<TensorProductModel>(rho, 2);
  if (a.functional == "entropy") {
    est = entropy(*rho, grid);
  } else if (a.functional == "fisher") {
    est = fisher(*rho, grid);
  } else if (a.functional == "D") {
    est = entropy_production_D(rho, pot, mc);
  } else if (a.functional == "K_beta") {
    est = dissipation_K(*pair, a.beta, kAllDirections, pot, mc);
    rep["beta"] = a.beta;
  } else if (a.functional == "J") {
    est = J_functional(*pair, kAllDirections, pot, mc);
  } else {
    const auto r = ibp_identity_check(*pair, 0, pot, mc);
    est.functional = "ibp_residual";
    est.value = r.residual;
    est.abs_error = r.standard_error / std::max(r.J, kResidualFloor);
    est.method = FunctionalEstimate::Method::mc;
    est.n = mc.samples;
  }
  rep["functional"] = a.functional;
  rep["method"] = to_string(est.method);
  rep["value"] = est.value;
  rep["abs_error"] = est.abs_error;
  rep["n"] = est.n;
  if (est.method == FunctionalEstimate::Method::mc) {
    rep["gamma"] = a.gamma;
    rep["eta"] = a.eta ? json(*a.eta) : json(nullptr);
    rep["rejected"] = est.rejected;
  }
  std::cout << rep.dump(2) << '\n';
  return kOk;
}

// ---------------------------------------------------------------- plotdata

struct PlotArgs {
  std::string run_dir;
  std::string series;
  std::string out;
};

std::optional<double> series_value(const json& row, const std::string& series) {
  auto number = [](const json& v) -> std::optional<double> {
    if (v.is_number()) return v.get<double>();
    return std::nullopt;
  };
  if (series.rfind("weak_residual:", 0) == 0) {
    const std::string id = series.substr(14);
    if (!row.contains("weak_residual") || !row["weak_residual"].contains(id)) return std::nullopt;
    return number(row["weak_residual"][id]);
  }
  if (series.rfind("momentum_", 0) == 0 && series.size() == 10) {
    const int c = series[9] - 'x';
    if (c < 0 || c > 2 || !row.contains("momentum")) return std::nullopt;
    return number(row["momentum"][static_cast<std::size_t>(c)]);
  }
  if (!row.contains(series)) return std::nullopt;
  return number(row[series]);
}

int cmd_plotdata(const PlotArgs& a) {
  static const std::vector<std::string> known{
      "energy", "knn_entropy", "pair_inv_sq", "bl_dist_to_ref", "iota", "momentum_x", "momentum_y",
      "momentum_z", "weak_residual:constant", "weak_residual:affine", "weak_residual:bump"};
  if (std::find(known.begin(), known.end(), a.series) == known.end()) {
    std::string list;
    for (const auto& n : known) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown series '" + a.series + "'; available: " + list);
  }
  const fs::path path = fs::path(a.run_dir) / "diagnostics.jsonl";
  if (!fs::exists(path)) throw ConfigError("no diagnostics.jsonl in '" + a.run_dir + "'");
  const auto rows = tools::read_jsonl(path);
  std::ostringstream text;
  text << std::setprecision(17) << "# t " << a.series << '\n';
  std::size_t emitted = 0;
  for (const auto& row : rows)
    if (const auto v = series_value(row, a.series)) {
      text << row["t"].get<double>() << ' ' << *v << '\n';
      ++emitted;
    }
  if (emitted == 0) throw ConfigError("series '" + a.series + "' is absent from this run");
  if (a.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream(a.out) << text.str();
  }
  return kOk;
}

int cmd_verify() {
  bool all = true;
  for (const auto& c : verify::run_all()) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.pass;
  }
  return all ? kOk : kRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservative particle system for the homogeneous Landau equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LANDAU_VERSION);

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run one simulation and write its artifacts");
  s->add_option("--config", sim.config, "JSON run configuration")->required();
  s->add_option("--seed", sim.seed, "Override the config seed");
  s->add_option("--out", sim.out, "Output directory");
  s->add_option("--format", sim.format, "Snapshot format")->check(CLI::IsMember({"csv", "binary"}));
  s->add_option("--workers", sim.workers, "Threads for the pair loop");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Run a parameter sweep with seed replication");
  w->add_option("--config", sw.config, "JSON base configuration")->required();
  w->add_option("--axis", sw.axis, "N, dt or eta")->required();
  w->add_option("--values", sw.values, "Comma-separated values")->delimiter(',');
  w->add_option("--seeds", sw.seeds, "Seeds per cell");
  w->add_option("--out", sw.out, "Output directory");
  w->add_option("--workers", sw.workers, "Concurrent cells");

  FunctionalArgs fa;
  auto* f = app.add_subcommand("functionals", "Evaluate a functional on a preset density");
  f->add_option("--preset", fa.preset, "maxwellian(T), aniso_gauss(T1,T2,T3) or bimodal(d)")
      ->required();
  f->add_option("--functional", fa.functional, "entropy, fisher, D, K_beta, J or ibp")->required();
  f->add_option("--beta", fa.beta, "beta for K_beta");
  f->add_option("--gamma", fa.gamma, "Potential exponent");
  f->add_option("--eta", fa.eta, "Regularization radius (unregularized if omitted)");
  f->add_option("--samples", fa.samples, "Monte Carlo samples");
  f->add_option("--seed", fa.seed, "Monte Carlo seed");
  f->add_option("--grid", fa.grid_points, "Grid points per axis");

  PlotArgs pa;
  auto* p = app.add_subcommand("plotdata", "Extract a diagnostic series as two columns");
  p->add_option("--run-dir", pa.run_dir, "Directory written by simulate")->required();
  p->add_option("--series", pa.series, "Series name")->required();
  p->add_option("--out", pa.out, "Output file (stdout if omitted)");

  app.add_subcommand("verify", "Run the fast invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*s) return cmd_simulate(sim);
    if (*w) return cmd_sweep(sw);
    if (*f) return cmd_functionals(fa);
    if (*p) return cmd_plotdata(pa);
    return cmd_verify();
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
