#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "landau/ensemble.hpp"
#include "landau/geometry.hpp"
#include "landau/kernel.hpp"
#include "landau/rng.hpp"

namespace landau {

struct AnchorSelectionError : std::runtime_error {
  AnchorSelectionError(int stage_, const std::string& what)
      : std::runtime_error(what), stage(stage_) {}
  int stage;  // 1, 2 or 3: which anchor had no candidate
};

/// Three reference points with the geometry parameters attached to them.
/// Invariant: the triple passes check_non_alignment at 4*delta0.
struct AnchorSet {
  std::array<Vec3, 3> anchors;
  double delta0 = 0.0;
  double kappa0 = 0.0;  // min empirical mass of the three selection balls
  double tau0 = 1.0;    // anchor refresh window length
  int n0 = 0;           // sample count the anchors were selected from

  std::string to_json() const;
  static AnchorSet from_json(const std::string& text);
};

/// C^2 bump shapes built from the quintic smoothstep
/// S(s) = 6s^5 - 15s^4 + 10s^3 on [0,1], clamped outside:
///   h(v) = S(2 - |v|)  sandwiched between 1_{|v|<=1} and 1_{|v|<=2},
///   chi(r) = S(2 - r)  sandwiched between 1_{r<=1} and 1_{r<=2}.
struct BumpSpec {
  static double smoothstep(double s);
  static double smoothstep_deriv(double s);
  double h(const Vec3& v) const;
  Vec3 grad_h(const Vec3& v) const;
  double chi(double r) const;
  double chi_deriv(double r) const;
};

/// Quantitative non-degeneracy of the triple (x1,x2,x3) at scale delta:
///   |x2-x1| >= 6 sqrt(delta)  and
///   |p_{(x2-x1)^perp}(x3-x1)| >= 24 delta + 2 sqrt(delta) |x3-x1|.
/// Deliberately not permutation-invariant.
bool check_non_alignment(const Vec3& x1, const Vec3& x2, const Vec3& x3,
                         double delta);

/// Greedy anchor search over a grid of pitch delta covering B(0,R) with
/// R = 1 + sqrt(2 m2): pick the max-mass ball center, then the max-mass
/// center outside an exclusion ball around x1, then the max-mass center
/// outside the slab around the x1-x2 axis. The result passes
/// check_non_alignment at ell*delta, and delta0 = ell*delta/4.
AnchorSet select_anchors(const std::vector<Vec3>& samples, double delta,
                         int ell);

/// Cutoff functional in [0,3]: sum over anchors of
/// chi((4/kappa0) * N^{-1} sum_j h((V_j - x_k)/(2 delta0))).
/// 0 when every ball B(x_k, 2 delta0) holds mass >= kappa0/2; >= 1 when some
/// ball B(x_k, 4 delta0) holds mass <= kappa0/4.
double eval_cl(const AnchorSet& anchors, const Ensemble& ensemble,
               const BumpSpec& bumps);

/// Analytic gradient of eval_cl with respect to particle i.
Vec3 grad_cl(const AnchorSet& anchors, const Ensemble& ensemble,
             std::size_t i, const BumpSpec& bumps);

/// One perturbed step: the plain update plus, per particle,
/// c sqrt(dt) zeta_i (second noise source) and c grad_cl(i) dt, with c
/// evaluated on the pre-step snapshot. Bitwise identical to step_em when
/// c = 0.
Ensemble step_perturbed(const Ensemble& ensemble, const KernelParams& kernel,
                        const AnchorSet& anchors, const BumpSpec& bumps,
                        double dt, const NoiseSource& noise,
                        const NoiseSource& noise2);

struct EllipticityReport {
  int trials = 0;
  int violations = 0;
  int vacuous = 0;          // trials where the lower bound was 0
  double worst_margin = 0;  // min over trials of lhs - bound
  double kappa = 0.0;       // [delta/(R+3)]^{4+gamma}
  double min_ball_mass = 0.0;
};

/// Checks the directional lower bound
///   xi^T a(mu,v) xi >= kappa (1+|v|)^gamma inf_k mu(B(x_k,delta))
/// with kappa = [delta/(R+3)]^{4+gamma}, over random (v, xi) draws.
EllipticityReport ellipticity_floor_check(const std::vector<Vec3>& samples,
                                          const AnchorSet& anchors,
                                          double gamma, double delta, double R,
                                          int trials, std::uint64_t seed = 1);

}  // namespace landau
