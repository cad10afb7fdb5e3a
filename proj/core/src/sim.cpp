#include "landau/sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "landau/matrix3.hpp"

namespace landau {

void SimConfig::validate() const {
  kernel.validate();
  if (n < 2) throw std::invalid_argument("sim: need n >= 2");
  if (!(dt > 0.0)) throw std::invalid_argument("sim: dt must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("sim: t_end must be >= 0");
  if (t_end > 0.0 && dt > t_end)
    throw std::invalid_argument("sim: dt must not exceed t_end");
  if (t_end > 0.0 && !(kernel.eta > 0.0))
    throw std::invalid_argument("sim: stepping requires eta in (0,1)");
}

Ensemble step_em(const Ensemble& ensemble, const KernelParams& kernel,
                 double dt, const NoiseSource& noise) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_em: dt must be positive");
  const std::size_t n = ensemble.size();
  Ensemble out;
  out.time = ensemble.time + dt;
  out.velocities.resize(n);
  const double sdt = std::sqrt(dt);

  // Per-particle writes only; parallel order cannot change the result.
  std::atomic<long long> bad{-1};
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const Vec3& v = ensemble.velocities[i];
    FieldPair f = field_ab(kernel, ensemble, v);
    SymMat3 root = mat3::sqrt_psd(f.a);
    Vec3 xi = noise.normal3(static_cast<std::uint32_t>(i));
    Vec3 next = v + f.b * dt + root.apply(xi) * sdt;
    if (!next.finite()) bad.store(i);
    out.velocities[i] = next;
  }
  long long b = bad.load();
  if (b >= 0) throw BlowupError(static_cast<std::size_t>(b), out.time);
  return out;
}

Trajectory simulate(const SimConfig& config) {
  config.validate();
  Ensemble state = init_ensemble(config.init, config.n, config.seed);
  CounterNoise noise(config.seed, /*stream=*/0);

  Trajectory traj;
  traj.snapshots.push_back(state);
  const auto steps =
      static_cast<std::uint64_t>(std::llround(config.t_end / config.dt));
  for (std::uint64_t s = 0; s < steps; ++s) {
    noise.set_step(s);
    state = step_em(state, config.kernel, config.dt, noise);
    bool record = config.record_every > 0 && (s + 1) % config.record_every == 0;
    if (record || s + 1 == steps) traj.snapshots.push_back(state);
  }
  return traj;
}

void write_snapshot_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,i,vx,vy,vz\n";
  char buf[160];
  for (const Ensemble& e : traj.snapshots) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      const Vec3& v = e.velocities[i];
      std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g,%.17g,%.17g\n", e.time,
                    i, v.x, v.y, v.z);
      out << buf;
    }
  }
}

}  // namespace landau
