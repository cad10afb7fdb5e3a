#include "landau/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "landau/kernel.hpp"
#include "landau/rng.hpp"

namespace landau {

namespace {

Vec3 draw(const InitSpec& spec, SeqRng& rng) {
  if (const auto* g = std::get_if<IsotropicGaussian>(&spec)) {
    if (!(g->sigma > 0.0))
      throw std::invalid_argument("init: sigma must be positive");
    return rng.normal3() * g->sigma;
  }
  if (const auto* d = std::get_if<DiagonalGaussian>(&spec)) {
    if (!(d->variances.x > 0.0 && d->variances.y > 0.0 && d->variances.z > 0.0))
      throw std::invalid_argument("init: variances must be positive");
    Vec3 g = rng.normal3();
    return {g.x * std::sqrt(d->variances.x), g.y * std::sqrt(d->variances.y),
            g.z * std::sqrt(d->variances.z)};
  }
  if (const auto* m = std::get_if<GaussianMixture>(&spec)) {
    if (!(m->sigma > 0.0))
      throw std::invalid_argument("init: sigma must be positive");
    Vec3 c = rng.uniform() < 0.5 ? m->center1 : m->center2;
    return c + rng.normal3() * m->sigma;
  }
  const auto& b = std::get<UniformBall>(spec);
  if (!(b.radius > 0.0))
    throw std::invalid_argument("init: radius must be positive");
  return b.center + rng.in_ball(b.radius);
}

}  // namespace

Ensemble init_ensemble(const InitSpec& spec, std::size_t n,
                       std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("init_ensemble: need n >= 2");
  Ensemble e;
  e.velocities = sample_cloud(spec, n, seed);
  return e;
}

std::vector<Vec3> sample_cloud(const InitSpec& spec, std::size_t n,
                               std::uint64_t seed) {
  SeqRng rng(seed);
  std::vector<Vec3> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pts.push_back(draw(spec, rng));
  return pts;
}

double moments(const Ensemble& ensemble, double q) {
  if (q < 0.0) throw std::invalid_argument("moments: q must be >= 0");
  if (ensemble.size() == 0) return 0.0;
  double acc = 0.0;
  for (const Vec3& v : ensemble.velocities) {
    double r2 = v.norm2();
    if (q == 2.0)
      acc += r2;
    else if (q == 0.0)
      acc += 1.0;
    else if (r2 > 0.0)
      acc += radial_pow(r2, q);
  }
  return acc / static_cast<double>(ensemble.size());
}

Vec3 mean_velocity(const Ensemble& ensemble) {
  Vec3 acc{};
  for (const Vec3& v : ensemble.velocities) acc += v;
  return acc * (1.0 / static_cast<double>(ensemble.size()));
}

}  // namespace landau
