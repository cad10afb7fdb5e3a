#pragma once

#include <cstdint>
#include <vector>

#include "landau/geometry.hpp"

namespace landau {

namespace rng {

/// splitmix64 step.
std::uint64_t mix(std::uint64_t x);

/// Combine words into one well-mixed 64-bit key.
std::uint64_t combine(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0,
                      std::uint64_t d = 0);

/// uniform in (0,1), derived from a 64-bit word
double to_unit(std::uint64_t w);

}  // namespace rng

/// Small keyed PRNG for sequential sampling (initialization, metrics).
/// Deterministic given the seed; xoshiro-free splitmix chain.
class SeqRng {
 public:
  explicit SeqRng(std::uint64_t seed) : state_(rng::mix(seed ^ 0x9e3779b97f4a7c15ULL)) {}

  std::uint64_t next_u64();
  double uniform();                    // (0,1)
  double uniform(double lo, double hi);
  double normal();                     // standard normal
  Vec3 normal3();
  Vec3 unit_vector();                  // uniform on the sphere
  Vec3 in_ball(double radius);         // uniform in B(0,radius)
  std::uint64_t below(std::uint64_t n);  // uniform in [0,n)

  /// Fisher-Yates shuffle.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Per-(step, particle) Gaussian increments, independent of call order and
/// thread scheduling: each draw is a pure function of (seed, stream, step,
/// particle).
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  /// Three i.i.d. standard normals for the given particle at the current step.
  virtual Vec3 normal3(std::uint32_t particle) const = 0;
  virtual void set_step(std::uint64_t step) = 0;
};

class CounterNoise final : public NoiseSource {
 public:
  CounterNoise(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream) {}

  Vec3 normal3(std::uint32_t particle) const override;
  void set_step(std::uint64_t step) override { step_ = step; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t step_ = 0;
};

/// All-zero noise (drift-only stepping in tests).
class ZeroNoise final : public NoiseSource {
 public:
  Vec3 normal3(std::uint32_t) const override { return {0.0, 0.0, 0.0}; }
  void set_step(std::uint64_t) override {}
};

/// Relabels the substreams of an inner source; used by the exchangeability
/// property (permute particles and noise streams together).
class PermutedNoise final : public NoiseSource {
 public:
  PermutedNoise(const NoiseSource& inner, std::vector<std::uint32_t> perm)
      : inner_(inner), perm_(std::move(perm)) {}

  Vec3 normal3(std::uint32_t particle) const override {
    return inner_.normal3(perm_[particle]);
  }
  void set_step(std::uint64_t step) override {
    const_cast<NoiseSource&>(inner_).set_step(step);
  }

 private:
  const NoiseSource& inner_;
  std::vector<std::uint32_t> perm_;
};

}  // namespace landau
