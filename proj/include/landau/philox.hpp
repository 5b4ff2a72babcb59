#ifndef LANDAU_PHILOX_HPP
#define LANDAU_PHILOX_HPP

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) and the
// Gaussian draws built on top of it. Every draw is a pure function of
// (key, counter), so parallel loops reproduce regardless of schedule.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace landau {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

  static Key key_from_seed(std::uint64_t seed) noexcept {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Counter single_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

namespace detail {

// Uniform in (0, 1) with 53 random bits; never returns 0 or 1.
inline double u53_open(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/// Two independent standard normals from one Philox block (Box-Muller).
inline std::array<double, 2> normal_pair(const Philox4x32::Counter& ctr,
                                         const Philox4x32::Key& key) noexcept {
  const auto w = Philox4x32::generate(ctr, key);
  const double u1 = detail::u53_open(w[0], w[1]);
  const double u2 = detail::u53_open(w[2], w[3]);
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi * u2;
  return {rad * std::cos(ang), rad * std::sin(ang)};
}

/// Identifies the Brownian increment of the unordered pair {i, j} at a step.
/// Only i < j ever draws; the (j, i) increment is the negation.
struct NoiseKey {
  std::uint64_t seed;
  std::uint64_t step;
  std::uint32_t i;
  std::uint32_t j;
};

/// Three standard normals for a pair key. Counter layout:
/// (i, j, step low word, step high word << 1 | sub-block).
inline std::array<double, 3> pair_normals(const NoiseKey& k) noexcept {
  const auto key = Philox4x32::key_from_seed(k.seed);
  const auto lo = static_cast<std::uint32_t>(k.step);
  const auto hi = static_cast<std::uint32_t>(k.step >> 32) << 1;
  const auto a = normal_pair({k.i, k.j, lo, hi}, key);
  const auto b = normal_pair({k.i, k.j, lo, hi | 1u}, key);
  return {a[0], a[1], b[0]};
}

/// Sequential stream of normals/uniforms keyed by (seed, stream id); used for
/// initial sampling and Monte-Carlo batches.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(Philox4x32::key_from_seed(seed)),
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  double uniform() noexcept {
    if (pos_ == 2) refill();
    return buf_u_[pos_++];
  }

  double normal() noexcept {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    have_spare_ = true;
    return rad * std::cos(ang);
  }

 private:
  void refill() noexcept {
    // High counter bit keeps these blocks disjoint from pair_normals' layout.
    const auto w = Philox4x32::generate(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         stream_lo_, stream_hi_ | 0x80000000u},
        key_);
    ++block_;
    buf_u_[0] = detail::u53_open(w[0], w[1]);
    buf_u_[1] = detail::u53_open(w[2], w[3]);
    pos_ = 0;
  }

  Philox4x32::Key key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t block_ = 0;
  std::array<double, 2> buf_u_{};
  int pos_ = 2;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace landau

#endif  // LANDAU_PHILOX_HPP
