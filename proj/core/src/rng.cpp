#include "landau/rng.hpp"

#include <cmath>

namespace landau {

namespace rng {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t combine(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                      std::uint64_t d) {
  std::uint64_t k = mix(a);
  k = mix(k ^ b);
  k = mix(k ^ c);
  k = mix(k ^ d);
  return k;
}

double to_unit(std::uint64_t w) {
  // 53 high bits -> (0,1); offset by half an ulp so 0 is excluded
  return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace rng

std::uint64_t SeqRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double SeqRng::uniform() { return rng::to_unit(next_u64()); }

double SeqRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double SeqRng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double th = 2.0 * M_PI * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

Vec3 SeqRng::normal3() { return {normal(), normal(), normal()}; }

Vec3 SeqRng::unit_vector() {
  for (;;) {
    Vec3 g = normal3();
    double n = g.norm();
    if (n > 1e-12) return g * (1.0 / n);
  }
}

Vec3 SeqRng::in_ball(double radius) {
  double r = radius * std::cbrt(uniform());
  return unit_vector() * r;
}

std::uint64_t SeqRng::below(std::uint64_t n) {
  // rejection to avoid modulo bias
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t w = next_u64();
    if (w < limit) return w % n;
  }
}

Vec3 CounterNoise::normal3(std::uint32_t particle) const {
  std::uint64_t k = rng::combine(seed_, stream_, step_, particle);
  // two Box-Muller pairs from four mixed words; keep three
  std::uint64_t w1 = rng::mix(k ^ 1);
  std::uint64_t w2 = rng::mix(k ^ 2);
  std::uint64_t w3 = rng::mix(k ^ 3);
  std::uint64_t w4 = rng::mix(k ^ 4);
  double r1 = std::sqrt(-2.0 * std::log(rng::to_unit(w1)));
  double t1 = 2.0 * M_PI * rng::to_unit(w2);
  double r2 = std::sqrt(-2.0 * std::log(rng::to_unit(w3)));
  double t2 = 2.0 * M_PI * rng::to_unit(w4);
  return {r1 * std::cos(t1), r1 * std::sin(t1), r2 * std::cos(t2)};
}

}  // namespace landau
