#pragma once

#include <array>
#include <cstdint>

namespace pogit {

/// Philox4x32-10 counter-based generator. A (seed, stream) pair selects an
/// independent substream, so parallel workers can derive their own stream
/// from a master seed and a chunk index without coordination. Output is
/// fully determined by (seed, stream, draw index) — no platform dependence.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }
  std::uint64_t operator()() { return next_u64(); }

 private:
  void fill_block();
  void increment_counter();

  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;  // force fill on first draw
};

/// Seeded random stream with the samplers the simulations need. All
/// distributions are implemented here (not via <random>) so that draws are
/// bit-identical across standard libraries and across serial/parallel runs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(seed, stream) {}

  std::uint64_t next_u64() { return engine_.next_u64(); }

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_pos();
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  /// Exact Poisson sampler: Knuth multiplication below mean 10, Hormann's
  /// PTRS transformed rejection above.
  long poisson(double mean);
  /// Binomial by Bernoulli counting; exact for any (n, p).
  long binomial(long n, double p);
  /// Marsaglia–Tsang gamma sampler.
  double gamma(double shape, double scale);

 private:
  Philox4x32 engine_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace pogit
