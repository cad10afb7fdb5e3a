#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "landau/ensemble.hpp"
#include "landau/geometry.hpp"
#include "landau/kernel.hpp"
#include "landau/rng.hpp"

namespace landau {

/// A perfect matching of two equal-size clouds with its squared cost.
struct CouplingPlan {
  std::vector<std::uint32_t> perm;  // point i of X pairs with perm[i] of Y
  double cost_sq = 0.0;             // sum of squared pair distances

  std::string to_json() const;
  static CouplingPlan from_json(const std::string& text);
};

/// Exact minimum-cost matching under squared Euclidean cost (shortest
/// augmenting path with potentials). Sizes must match and stay <= 4096;
/// beyond that use the sliced surrogate explicitly.
CouplingPlan optimal_assignment_w2(const std::vector<Vec3>& X,
                                   const std::vector<Vec3>& Y);

/// All cost-minimal permutations (exhaustive; sizes <= 8 only).
std::vector<std::vector<std::uint32_t>> enumerate_optimal_perms(
    const std::vector<Vec3>& X, const std::vector<Vec3>& Y);

struct PairedSample {
  std::vector<Vec3> first;
  std::vector<Vec3> second;
  double cost_sq = 0.0;
};

/// Exchangeable optimal pairing: optimal plan, then a uniform relabeling of
/// the pairs, then a uniform draw from the set of optimal permutations (the
/// set is enumerated for sizes <= 8; above that the solver optimum stands
/// in, optimal-tie configurations being measure-zero for continuous data).
/// The pairing cost always equals the optimal cost.
PairedSample symmetrized_coupling(const std::vector<Vec3>& X,
                                  const std::vector<Vec3>& Y,
                                  std::uint64_t seed);

/// Advance two same-size systems one step with shared driving noise.
/// sysA steps against its own empirical field. sysB steps against fields
/// built from `reference` (the frozen stand-in for the limit law), its
/// Gaussian increment being U xi_i where xi_i is sysA's increment and U the
/// coupling rotation between the blob-mollified (radius blob_eps) diffusion
/// fields of the two systems at the paired points.
std::pair<Ensemble, Ensemble> step_coupled_pair(
    const Ensemble& sysA, const Ensemble& sysB,
    const std::vector<Vec3>& reference, const KernelParams& kernel,
    double blob_eps, double dt, const NoiseSource& shared_noise,
    double rotation_reg = 1e-12);

struct DeltaParts {
  double delta = 0.0;
  double delta1 = 0.0;  // antisymmetric under (v,v*,w,w*) -> (v*,v,w*,w)
  double delta2 = 0.0;  // bounded by 4(|v-w|^2+|v*-w*|^2) K(|v-v*|,|w-w*|)
};

/// Two-particle dissipation split for the pair-distance evolution:
/// delta = 2(v-w).(b(v-v*)-b(w-w*)) + |sigma(v-v*)-sigma(w-w*)|_F^2,
/// delta1 = ((v-w)+(v*-w*)).(b(v-v*)-b(w-w*)), delta2 = delta - delta1.
DeltaParts delta_decomposition(const Vec3& v, const Vec3& v_star,
                               const Vec3& w, const Vec3& w_star,
                               double gamma);

/// K(x,y) = (min(x,y))^{1+gamma} / max(x,y), the bound kernel for delta2.
double delta2_bound_kernel(double x, double y, double gamma);

}  // namespace landau
