#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "landau/geometry.hpp"

namespace landau {

/// N velocity points plus the simulation clock: the empirical state.
struct Ensemble {
  std::vector<Vec3> velocities;
  double time = 0.0;

  std::size_t size() const { return velocities.size(); }
  bool finite() const {
    for (const Vec3& v : velocities)
      if (!v.finite()) return false;
    return true;
  }
};

struct IsotropicGaussian {
  double sigma = 1.0;
};

/// Axis-aligned anisotropic Gaussian (diagonal covariance).
struct DiagonalGaussian {
  Vec3 variances{1.0, 1.0, 1.0};
};

/// Equal-weight two-component isotropic Gaussian mixture.
struct GaussianMixture {
  Vec3 center1{0.0, 0.0, 0.0};
  Vec3 center2{0.0, 0.0, 0.0};
  double sigma = 1.0;
};

struct UniformBall {
  double radius = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
};

using InitSpec =
    std::variant<IsotropicGaussian, DiagonalGaussian, GaussianMixture,
                 UniformBall>;

/// n i.i.d. samples from the given family; deterministic given seed.
Ensemble init_ensemble(const InitSpec& spec, std::size_t n,
                       std::uint64_t seed);

/// Draw n i.i.d. samples as a bare point cloud (metrics, references).
std::vector<Vec3> sample_cloud(const InitSpec& spec, std::size_t n,
                               std::uint64_t seed);

/// m_q = N^{-1} sum |V_i|^q.
double moments(const Ensemble& ensemble, double q);

Vec3 mean_velocity(const Ensemble& ensemble);

}  // namespace landau
