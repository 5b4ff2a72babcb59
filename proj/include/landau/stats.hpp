#ifndef LANDAU_STATS_HPP
#define LANDAU_STATS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace landau::stats {

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

/// Unbiased sample standard deviation.
inline double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

inline double standard_error(std::span<const double> xs) {
  return stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

inline double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty sample");
  const auto n = xs.size();
  std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
  const double hi = xs[n / 2];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(xs.begin(), xs.begin() + n / 2);
  return 0.5 * (lo + hi);
}

struct LineFit {
  double slope;
  double intercept;
};

/// Ordinary least squares y = slope x + intercept.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

/// Least-squares non-increasing fit (pool adjacent violators).
inline std::vector<double> isotonic_nonincreasing(std::span<const double> y) {
  struct Block {
    double sum;
    double count;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (double v : y) {
    blocks.push_back({v, 1.0});
    while (blocks.size() > 1) {
      const auto& b = blocks.back();
      const auto& a = blocks[blocks.size() - 2];
      if (a.sum / a.count >= b.sum / b.count) break;
      const Block merged{a.sum + b.sum, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const auto& b : blocks)
    for (int i = 0; i < static_cast<int>(b.count); ++i) out.push_back(b.sum / b.count);
  return out;
}

/// Welford mean/covariance of a fixed-size random vector.
template <int Dim>
class MomentAccumulator {
 public:
  using Vec = Eigen::Matrix<double, Dim, 1>;
  using Mat = Eigen::Matrix<double, Dim, Dim>;

  void add(const Vec& x) {
    ++n_;
    const Vec delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_).transpose();
  }

  void merge(const MomentAccumulator& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double n = static_cast<double>(n_ + o.n_);
    const Vec delta = o.mean_ - mean_;
    m2_ += o.m2_ + delta * delta.transpose() * (static_cast<double>(n_) * o.n_ / n);
    mean_ += delta * (static_cast<double>(o.n_) / n);
    n_ += o.n_;
  }

  long long count() const { return n_; }
  const Vec& mean() const { return mean_; }
  Mat covariance() const {
    return n_ > 1 ? Mat(m2_ / static_cast<double>(n_ - 1)) : Mat(Mat::Zero());
  }

 private:
  long long n_ = 0;
  Vec mean_ = Vec::Zero();
  Mat m2_ = Mat::Zero();
};

}  // namespace landau::stats

#endif  // LANDAU_STATS_HPP
