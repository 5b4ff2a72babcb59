#ifndef LANDAU_REFERENCE_HPP
#define LANDAU_REFERENCE_HPP

// Fixtures with known answers: Maxwellians, the preset registry and the
// closed second-moment system for Maxwell molecules (alpha == 1).

#include <cctype>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "landau/density.hpp"
#include "landau/types.hpp"

namespace landau {

struct MaxwellianSpec {
  Vec3 mean = Vec3::Zero();
  double temperature = 1.0;
};

inline std::shared_ptr<GaussianModel> maxwellian(const MaxwellianSpec& spec) {
  if (!(spec.temperature > 0.0) || !std::isfinite(spec.temperature))
    throw ConfigError("maxwellian: temperature must be positive");
  return std::make_shared<GaussianModel>(GaussianModel::isotropic(spec.mean, spec.temperature));
}

inline std::shared_ptr<GaussianModel> aniso_gauss(double t1, double t2, double t3) {
  for (double t : {t1, t2, t3})
    if (!(t > 0.0)) throw ConfigError("aniso_gauss: temperatures must be positive");
  return std::make_shared<GaussianModel>(Vec3::Zero(), Vec3(t1, t2, t3).asDiagonal().toDenseMatrix());
}

/// Equal mixture of unit Gaussians centered at +-(d/2) e_1.
inline std::shared_ptr<MixtureModel> bimodal(double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) throw ConfigError("bimodal: separation must be >= 0");
  const Vec3 shift = 0.5 * d * Vec3::UnitX();
  std::vector<GaussianModel> comps{GaussianModel::isotropic(shift, 1.0),
                                   GaussianModel::isotropic(-shift, 1.0)};
  return std::make_shared<MixtureModel>(std::vector<double>{0.5, 0.5}, std::move(comps));
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"maxwellian(T)", "aniso_gauss(T1,T2,T3)",
                                              "bimodal(d)"};
  return names;
}

/// Parses "name(a,b,...)" into a 3D density.
inline DensityPtr make_preset(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  const auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw ConfigError("preset '" + text + "': expected name(args)");
  const std::string name = s.substr(0, open);
  std::vector<double> args;
  std::stringstream in(s.substr(open + 1, s.size() - open - 2));
  for (std::string tok; std::getline(in, tok, ',');) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("preset '" + text + "': bad number '" + tok + "'");
    }
  }
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw ConfigError("preset '" + text + "': expected " + std::to_string(n) + " argument(s)");
  };
  if (name == "maxwellian") {
    want(1);
    return maxwellian({Vec3::Zero(), args[0]});
  }
  if (name == "aniso_gauss") {
    want(3);
    return aniso_gauss(args[0], args[1], args[2]);
  }
  if (name == "bimodal") {
    want(1);
    return bimodal(args[0]);
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset '" + name + "'; available: " + known);
}

/// Decay rate of the traceless part of the second-moment matrix for
/// alpha == 1 in the mean-field limit.
///
/// With phi(v) = v_a v_b the pair generator of the system gives, per particle,
/// drift 2 b(z) = -4 z and quadratic variation 2 a(z). Averaging over an
/// independent pair (v, w) with E v = E w = 0 and E v v^T = P:
///   E[-4 (v - w) v^T + transpose] = -8 P,
///   E[2 a(v - w)] = 2 (2 tr P Id - 2 P) = 4 tr P Id - 4 P,
/// so dP/dt = 4 tr(P) Id - 12 P. The trace is conserved and the traceless
/// part decays like exp(-12 t). A centered N-particle cloud sees the same
/// system with the right-hand side multiplied by N/(N-1).
inline constexpr double kMaxwellMoleculeRate = 12.0;

inline Mat3 maxwell_molecule_moment_ode(const Mat3& p0, double t) {
  if (!(t >= 0.0)) throw ConfigError("moment ode: t must be >= 0");
  if ((p0 - p0.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, p0.cwiseAbs().maxCoeff()))
    throw ConfigError("moment ode: P0 must be symmetric");
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(p0, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, p0.trace()))
    throw ConfigError("moment ode: P0 must be positive semidefinite");
  const Mat3 iso = (p0.trace() / 3.0) * Mat3::Identity();
  return iso + std::exp(-kMaxwellMoleculeRate * t) * (p0 - iso);
}

}  // namespace landau

#endif  // LANDAU_REFERENCE_HPP
