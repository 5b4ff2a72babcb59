#ifndef LANDAU_DENSITY_HPP
#define LANDAU_DENSITY_HPP

// Analytic probability densities on R^{3n} with log-gradient and
// log-Hessian access, used as initial data and as functional arguments.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "landau/philox.hpp"
#include "landau/types.hpp"

namespace landau {

using MatX = Eigen::MatrixXd;

/// Axis-aligned box covering (almost) all the mass of a 3D density.
struct Box3 {
  Vec3 lo;
  Vec3 hi;
};

enum class NormalizationCertificate { analytic, quadrature };

class DensityModel {
 public:
  virtual ~DensityModel() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;

  virtual double log_density(const VecX& x) const = 0;
  virtual VecX log_grad(const VecX& x) const = 0;

  virtual bool has_hessian() const { return false; }
  /// u^T (grad^2 log f)(x) u.
  virtual double log_hess_quadform(const VecX& /*x*/, const VecX& /*u*/) const {
    throw CapabilityError(name() + ": no Hessian access");
  }

  virtual bool can_sample() const { return false; }
  virtual VecX sample(CounterStream& /*rng*/) const {
    throw ConfigError(name() + ": model is not sampleable");
  }

  virtual NormalizationCertificate certificate() const {
    return NormalizationCertificate::analytic;
  }

  /// Box holding all but a negligible fraction of the mass (3D models).
  virtual Box3 support_hint(double /*sigmas*/) const {
    throw CapabilityError(name() + ": no support hint");
  }

  double density(const VecX& x) const { return std::exp(log_density(x)); }
};

using DensityPtr = std::shared_ptr<const DensityModel>;

/// Multivariate normal N(mean, cov) in any dimension.
class GaussianModel final : public DensityModel {
 public:
  GaussianModel(VecX mean, MatX cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (mean_.size() == 0 || cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
      throw ConfigError("GaussianModel: dimension mismatch");
    Eigen::LLT<MatX> llt(cov_);
    if (llt.info() != Eigen::Success)
      throw ConfigError("GaussianModel: covariance is not positive definite");
    chol_ = llt.matrixL();
    precision_ = llt.solve(MatX::Identity(dim(), dim()));
    const double log_det = 2.0 * chol_.diagonal().array().log().sum();
    log_norm_ = -0.5 * (dim() * std::log(2.0 * std::numbers::pi) + log_det);
  }

  static GaussianModel isotropic(const Vec3& mean, double temperature) {
    if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
    return GaussianModel(mean, temperature * MatX::Identity(3, 3));
  }

  int dim() const override { return static_cast<int>(mean_.size()); }
  std::string name() const override { return "gaussian"; }

  const VecX& mean() const { return mean_; }
  const MatX& cov() const { return cov_; }
  const MatX& precision() const { return precision_; }

  double log_density(const VecX& x) const override {
    const VecX d = x - mean_;
    return log_norm_ - 0.5 * d.dot(precision_ * d);
  }
  VecX log_grad(const VecX& x) const override { return -(precision_ * (x - mean_)); }

  bool has_hessian() const override { return true; }
  double log_hess_quadform(const VecX& /*x*/, const VecX& u) const override {
    return -u.dot(precision_ * u);
  }

  bool can_sample() const override { return true; }
  VecX sample(CounterStream& rng) const override {
    VecX xi(dim());
    for (int i = 0; i < dim(); ++i) xi[i] = rng.normal();
    return mean_ + chol_ * xi;
  }

  Box3 support_hint(double sigmas) const override {
    if (dim() != 3) throw CapabilityError("support_hint: not a 3D model");
    const Vec3 sd = cov_.diagonal().cwiseSqrt();
    return {mean_ - sigmas * sd, mean_ + sigmas * sd};
  }

  /// Closed forms, with H = int f log f.
  double entropy_exact() const {
    return log_norm_ - 0.5 * dim();
  }
  double fisher_exact() const { return precision_.trace(); }

 private:
  VecX mean_;
  MatX cov_;
  MatX chol_;
  MatX precision_;
  double log_norm_ = 0.0;
};

/// Finite mixture of Gaussians.
class MixtureModel final : public DensityModel {
 public:
  MixtureModel(std::vector<double> weights, std::vector<GaussianModel> comps)
      : weights_(std::move(weights)), comps_(std::move(comps)) {
    if (weights_.empty() || weights_.size() != comps_.size())
      throw ConfigError("MixtureModel: weights/components mismatch");
    double total = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0)) throw ConfigError("MixtureModel: weights must be positive");
      total += w;
    }
    for (auto& w : weights_) w /= total;
    for (const auto& c : comps_)
      if (c.dim() != comps_.front().dim())
        throw ConfigError("MixtureModel: components differ in dimension");
    cumulative_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  }

  int dim() const override { return comps_.front().dim(); }
  std::string name() const override { return "mixture"; }

  double log_density(const VecX& x) const override {
    const auto lw = log_terms(x);
    const double top = *std::max_element(lw.begin(), lw.end());
    double s = 0.0;
    for (double l : lw) s += std::exp(l - top);
    return top + std::log(s);
  }

  VecX log_grad(const VecX& x) const override {
    const auto r = responsibilities(x);
    VecX g = VecX::Zero(dim());
    for (std::size_t c = 0; c < comps_.size(); ++c) g += r[c] * comps_[c].log_grad(x);
    return g;
  }

  bool has_hessian() const override { return true; }
  double log_hess_quadform(const VecX& x, const VecX& u) const override {
    // grad^2 log f = sum_c r_c (H_c + g_c g_c^T) - g g^T
    const auto r = responsibilities(x);
    double second = 0.0;
    double first = 0.0;
    for (std::size_t c = 0; c < comps_.size(); ++c) {
      const double ug = u.dot(comps_[c].log_grad(x));
      second += r[c] * (comps_[c].log_hess_quadform(x, u) + ug * ug);
      first += r[c] * ug;
    }
    return second - first * first;
  }

  bool can_sample() const override { return true; }
  VecX sample(CounterStream& rng) const override {
    const double u = rng.uniform();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto c = std::min<std::size_t>(it - cumulative_.begin(), comps_.size() - 1);
    return comps_[c].sample(rng);
  }

  Box3 support_hint(double sigmas) const override {
    Box3 b = comps_.front().support_hint(sigmas);
    for (const auto& c : comps_) {
      const Box3 cb = c.support_hint(sigmas);
      b.lo = b.lo.cwiseMin(cb.lo);
      b.hi = b.hi.cwiseMax(cb.hi);
    }
    return b;
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<GaussianModel>& components() const { return comps_; }

 private:
  std::vector<double> log_terms(const VecX& x) const {
    std::vector<double> lw(comps_.size());
    for (std::size_t c = 0; c < comps_.size(); ++c)
      lw[c] = std::log(weights_[c]) + comps_[c].log_density(x);
    return lw;
  }
  std::vector<double> responsibilities(const VecX& x) const {
    auto lw = log_terms(x);
    const double top = *std::max_element(lw.begin(), lw.end());
    double s = 0.0;
    for (auto& l : lw) s += (l = std::exp(l - top));
    for (auto& l : lw) l /= s;
    return lw;
  }

  std::vector<double> weights_;
  std::vector<GaussianModel> comps_;
  std::vector<double> cumulative_;
};

/// F = rho^{(x) copies} on R^{copies * dim(rho)}.
class TensorProductModel final : public DensityModel {
 public:
  TensorProductModel(DensityPtr base, int copies) : base_(std::move(base)), copies_(copies) {
    if (!base_ || copies_ < 1) throw ConfigError("TensorProductModel: bad arguments");
  }

  int dim() const override { return copies_ * base_->dim(); }
  std::string name() const override {
    return base_->name() + "^" + std::to_string(copies_);
  }
  int copies() const { return copies_; }
  const DensityModel& base() const { return *base_; }

  double log_density(const VecX& x) const override {
    double s = 0.0;
    for (int c = 0; c < copies_; ++c) s += base_->log_density(block(x, c));
    return s;
  }
  VecX log_grad(const VecX& x) const override {
    VecX g(dim());
    const int d = base_->dim();
    for (int c = 0; c < copies_; ++c) g.segment(c * d, d) = base_->log_grad(block(x, c));
    return g;
  }
  bool has_hessian() const override { return base_->has_hessian(); }
  double log_hess_quadform(const VecX& x, const VecX& u) const override {
    double s = 0.0;
    for (int c = 0; c < copies_; ++c)
      s += base_->log_hess_quadform(block(x, c), block(u, c));
    return s;
  }
  bool can_sample() const override { return base_->can_sample(); }
  VecX sample(CounterStream& rng) const override {
    VecX x(dim());
    const int d = base_->dim();
    for (int c = 0; c < copies_; ++c) x.segment(c * d, d) = base_->sample(rng);
    return x;
  }
  NormalizationCertificate certificate() const override { return base_->certificate(); }

 private:
  VecX block(const VecX& x, int c) const {
    const int d = base_->dim();
    return x.segment(c * d, d);
  }

  DensityPtr base_;
  int copies_;
};

/// f_lambda(x) = lambda^d f(lambda x).
class ScaledModel final : public DensityModel {
 public:
  ScaledModel(DensityPtr base, double lambda) : base_(std::move(base)), lambda_(lambda) {
    if (!base_ || !(lambda_ > 0.0)) throw ConfigError("ScaledModel: bad arguments");
  }
  int dim() const override { return base_->dim(); }
  std::string name() const override { return "scaled(" + base_->name() + ")"; }
  double log_density(const VecX& x) const override {
    return dim() * std::log(lambda_) + base_->log_density(lambda_ * x);
  }
  VecX log_grad(const VecX& x) const override { return lambda_ * base_->log_grad(lambda_ * x); }
  bool has_hessian() const override { return base_->has_hessian(); }
  double log_hess_quadform(const VecX& x, const VecX& u) const override {
    return lambda_ * lambda_ * base_->log_hess_quadform(lambda_ * x, u);
  }
  bool can_sample() const override { return base_->can_sample(); }
  VecX sample(CounterStream& rng) const override { return base_->sample(rng) / lambda_; }
  NormalizationCertificate certificate() const override { return base_->certificate(); }
  Box3 support_hint(double sigmas) const override {
    const Box3 b = base_->support_hint(sigmas);
    return {b.lo / lambda_, b.hi / lambda_};
  }

 private:
  DensityPtr base_;
  double lambda_;
};

/// Uniform density on [-1/2, 1/2]^3 convolved with N(0, eps^2 Id).
class MollifiedBoxModel final : public DensityModel {
 public:
  explicit MollifiedBoxModel(double eps) : eps_(eps) {
    if (!(eps_ > 0.0)) throw ConfigError("MollifiedBoxModel: eps must be positive");
  }
  int dim() const override { return 3; }
  std::string name() const override { return "mollified_box"; }

  double log_density(const VecX& x) const override {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::log(p(x[i]));
    return s;
  }
  VecX log_grad(const VecX& x) const override {
    VecX g(3);
    for (int i = 0; i < 3; ++i) g[i] = dp(x[i]) / p(x[i]);
    return g;
  }
  bool has_hessian() const override { return true; }
  double log_hess_quadform(const VecX& x, const VecX& u) const override {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double pi = p(x[i]);
      const double l1 = dp(x[i]) / pi;
      s += u[i] * u[i] * (d2p(x[i]) / pi - l1 * l1);
    }
    return s;
  }
  bool can_sample() const override { return true; }
  VecX sample(CounterStream& rng) const override {
    VecX x(3);
    for (int i = 0; i < 3; ++i) x[i] = rng.uniform() - 0.5 + eps_ * rng.normal();
    return x;
  }
  Box3 support_hint(double sigmas) const override {
    const double h = 0.5 + sigmas * eps_;
    return {Vec3::Constant(-h), Vec3::Constant(h)};
  }

 private:
  // 1D marginal: P(U + eps Z in dx); tails use erfc to avoid cancellation.
  double p(double x) const {
    const double ax = std::abs(x);
    const double s = eps_ * std::numbers::sqrt2;
    return 0.5 * (std::erfc((ax - 0.5) / s) - std::erfc((ax + 0.5) / s));
  }
  double phi(double u) const {
    return std::exp(-0.5 * u * u) / (eps_ * std::sqrt(2.0 * std::numbers::pi));
  }
  double dp(double x) const { return phi((x + 0.5) / eps_) - phi((x - 0.5) / eps_); }
  double d2p(double x) const {
    const double a = (x + 0.5) / eps_;
    const double b = (x - 0.5) / eps_;
    return (-a * phi(a) + b * phi(b)) / eps_;
  }

  double eps_;
};

}  // namespace landau

#endif  // LANDAU_DENSITY_HPP
