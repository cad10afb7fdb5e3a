#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "landau/ensemble.hpp"
#include "landau/geometry.hpp"

namespace landau {

struct MetricReport {
  double value = 0.0;
  double stderr_ = 0.0;
  std::string method;
};

/// Analytic densities with closed-form scores, for quadrature-based
/// functionals (empirical clouds go through the *_kde / kNN paths).
using DensitySpec = std::variant<IsotropicGaussian, GaussianMixture>;

/// Squared 2-Wasserstein distance between equal-size empirical measures:
/// exact assignment cost divided by N.
double w2sq_empirical(const std::vector<Vec3>& X, const std::vector<Vec3>& Y);

/// Monte Carlo sliced surrogate: average over random directions of the 1-D
/// squared distance between sorted projections.
MetricReport sliced_w2sq(const std::vector<Vec3>& X,
                         const std::vector<Vec3>& Y, int n_proj,
                         std::uint64_t seed);

/// Exact squared L2 norm of the empirical measure convolved with the
/// uniform ball kernel of radius eps, via pairwise sphere-intersection
/// volumes.
double blob_l2_norm_sq(const std::vector<Vec3>& X, double eps);

/// Cube-counting upper bound for blob_l2_norm_sq (side-eps grid);
/// a coarse certificate, exposed for cross-checking only.
double blob_l2_cube_bound_sq(const std::vector<Vec3>& X, double eps);

/// k-nearest-neighbor estimate of integral f log f (NOTE the sign: this is
/// the NEGATIVE of the usual differential entropy, and is the quantity that
/// decreases along the flow).
MetricReport knn_entropy(const std::vector<Vec3>& X, int k = 4);

/// Weighted Fisher information of an analytic density:
/// I_gamma = integral (1+|v|^2)^{gamma/2} |grad log f|^2 f dv,
/// by high-resolution quadrature. Gaussian sigma^2 I at gamma=0 gives
/// 3/sigma^2.
double weighted_fisher_quadrature(const DensitySpec& spec, double gamma);

/// Plug-in estimate of the same functional from samples using a Gaussian
/// kernel density score. Biased; diagnostic only. bandwidth = 0 picks the
/// Silverman default.
MetricReport weighted_fisher_kde(const std::vector<Vec3>& X, double gamma,
                                 double bandwidth = 0.0);

/// Fraction of points with |X_i - center| < radius.
double ball_mass(const std::vector<Vec3>& X, const Vec3& center,
                 double radius);

/// Two-particle chaoticity gap: the (V_1,V_2) pairs of independent runs,
/// viewed as a 6-D sample, against a product sample built from two
/// independent draws of `ref`; sliced squared W2 between them. Smaller means
/// closer to a product law.
MetricReport chaos_pair_gap(const std::vector<Ensemble>& runs,
                            const std::vector<Vec3>& ref, int n_proj = 128,
                            std::uint64_t seed = 1);

struct BallCheck {
  Vec3 center;
  double radius = 0.0;
  double mass = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - mass (>= 0 means the inequality holds)
  bool skipped = false;  // ball volume >= 1: bound shape does not apply
};

/// Diagnostic check of mass(A) <= (C + H + m2) / (-log |A|) on small balls,
/// using the kNN entropy estimate and empirical m2. Estimator noise is
/// acknowledged; margins are reported, never asserted as a theorem.
std::vector<BallCheck> entropy_moment_inequality_check(
    const std::vector<Vec3>& X,
    const std::vector<std::pair<Vec3, double>>& sets, double C);

}  // namespace landau
