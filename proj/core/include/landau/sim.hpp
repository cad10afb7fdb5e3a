#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "landau/ensemble.hpp"
#include "landau/kernel.hpp"
#include "landau/rng.hpp"

namespace landau {

/// Raised when a particle update produces a non-finite velocity. Blow-up is
/// reported, never silently clipped.
struct BlowupError : std::runtime_error {
  BlowupError(std::size_t particle_index, double time)
      : std::runtime_error("numerical blow-up: non-finite velocity"),
        particle(particle_index),
        at_time(time) {}
  std::size_t particle;
  double at_time;
};

struct SimConfig {
  std::size_t n = 256;
  double dt = 1e-3;
  double t_end = 0.5;
  KernelParams kernel{-1.0, 1e-3, 64};
  std::uint64_t seed = 1;
  InitSpec init = IsotropicGaussian{1.0};
  std::size_t record_every = 0;  // 0: record only first and last

  void validate() const;  // throws std::invalid_argument
};

struct Trajectory {
  std::vector<Ensemble> snapshots;  // snapshots[k].time carries the clock
};

/// One explicit step: every particle advances by drift and diffusion fields
/// assembled on the pre-step snapshot,
///   V_i += b(mu,V_i) dt + a(mu,V_i)^{1/2} sqrt(dt) xi_i.
/// The caller is responsible for noise.set_step(...) before the call.
Ensemble step_em(const Ensemble& ensemble, const KernelParams& kernel,
                 double dt, const NoiseSource& noise);

/// Full run: init, stepping loop, snapshot recording. Bitwise deterministic
/// given (config, seed) regardless of worker-thread count.
Trajectory simulate(const SimConfig& config);

/// One row per particle per snapshot: header `t,i,vx,vy,vz`.
void write_snapshot_csv(std::ostream& out, const Trajectory& traj);

}  // namespace landau
