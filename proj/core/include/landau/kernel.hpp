#pragma once

#include <vector>

#include "landau/geometry.hpp"

namespace landau {

struct Ensemble;  // particle state, defined in ensemble.hpp

/// Interaction-kernel parameters. gamma is the potential exponent, eta the
/// mollification radius (0 disables mollification), quad_nodes the size of
/// the deterministic ball-quadrature node set (must be even: the set is kept
/// closed under u -> -u so odd integrands cancel exactly).
struct KernelParams {
  double gamma = -1.0;
  double eta = 0.0;
  int quad_nodes = 64;

  void validate() const;  // throws std::invalid_argument
};

struct ExponentReport {
  double q_gamma = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
  double alpha = 0.0;
  bool p2_defined = false;
};

/// |v|^p computed from r2 = |v|^2, with sqrt-chain fast paths for the
/// half-integer exponents used throughout (-0.5, -1, -1.5, and their +2
/// shifts show up via multiplication by r2).
double radial_pow(double r2, double p);

/// a(v) = |v|^gamma (|v|^2 I - v v^T); zero matrix at v = 0.
SymMat3 eval_a(double gamma, const Vec3& v);

/// b(v) = -2 |v|^gamma v; zero vector at v = 0.
Vec3 eval_b(double gamma, const Vec3& v);

/// sigma(v) = a(v)^{1/2} = |v|^{gamma/2 - 1} (|v|^2 I - v v^T).
SymMat3 eval_sigma(double gamma, const Vec3& v);

/// The fixed antithetic quadrature node set in the unit ball for the given
/// count (cached per count; immutable after first use).
const std::vector<Vec3>& ball_nodes(int count);

/// b convolved with the uniform ball kernel of radius eta, by quadrature over
/// the antithetic node set. Exactly odd in x; delegates to eval_b at eta = 0.
Vec3 eval_b_mollified(const KernelParams& params, const Vec3& x);

/// a convolved with the uniform ball kernel of radius eta; symmetric PSD.
SymMat3 eval_a_mollified(const KernelParams& params, const Vec3& x);

/// Drift field of the mollified empirical measure at v:
/// N^{-1} sum_j b_eta(v - V_j).
Vec3 field_b(const KernelParams& params, const Ensemble& ensemble,
             const Vec3& v);

/// Diffusion field of the mollified empirical measure at v:
/// N^{-1} sum_j a_eta(v - V_j).
SymMat3 field_a(const KernelParams& params, const Ensemble& ensemble,
                const Vec3& v);

struct FieldPair {
  Vec3 b;
  SymMat3 a;
};

/// Both fields in a single pass over particles and quadrature nodes (the
/// stepper's hot path; one radial power evaluation per node).
FieldPair field_ab(const KernelParams& params, const Ensemble& ensemble,
                   const Vec3& v);

/// Scaling exponents of the mean-field convergence-rate regime:
/// q(gamma) = gamma^2/(2+gamma), p1 = 3/(3+gamma),
/// p2 = (3q-3gamma)/(q-3gamma) (defined only when q > q(gamma)),
/// alpha = (1-6/q)(2+2gamma)/3.
ExponentReport theoretical_exponents(double gamma, double q);

}  // namespace landau
