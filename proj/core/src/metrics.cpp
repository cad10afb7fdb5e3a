#include "landau/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "landau/coupling.hpp"
#include "landau/kernel.hpp"
#include "landau/rng.hpp"

namespace landau {

namespace {

double digamma(double x) {
  double r = 0.0;
  while (x < 6.0) {
    r -= 1.0 / x;
    x += 1.0;
  }
  double f = 1.0 / (x * x);
  return r + std::log(x) - 0.5 / x -
         f * (1.0 / 12.0 - f * (1.0 / 120.0 - f / 252.0));
}

double mean_and_stderr(const std::vector<double>& xs, double* se) {
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - m) * (x - m);
  var /= std::max<std::size_t>(1, xs.size() - 1);
  if (se) *se = std::sqrt(var / static_cast<double>(xs.size()));
  return m;
}

// 1-D squared W2 between equal-size samples: sort both, mean squared gap.
double w2sq_1d(std::vector<double>& a, std::vector<double>& b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

}  // namespace

double w2sq_empirical(const std::vector<Vec3>& X, const std::vector<Vec3>& Y) {
  CouplingPlan plan = optimal_assignment_w2(X, Y);
  return plan.cost_sq / static_cast<double>(X.size());
}

MetricReport sliced_w2sq(const std::vector<Vec3>& X,
                         const std::vector<Vec3>& Y, int n_proj,
                         std::uint64_t seed) {
  if (X.size() != Y.size())
    throw std::invalid_argument("sliced_w2sq: sizes differ");
  if (n_proj < 1) throw std::invalid_argument("sliced_w2sq: n_proj >= 1");
  SeqRng rng(seed);
  std::vector<double> per_dir;
  per_dir.reserve(n_proj);
  std::vector<double> px(X.size()), py(Y.size());
  for (int p = 0; p < n_proj; ++p) {
    Vec3 u = rng.unit_vector();
    for (std::size_t i = 0; i < X.size(); ++i) px[i] = dot(X[i], u);
    for (std::size_t i = 0; i < Y.size(); ++i) py[i] = dot(Y[i], u);
    per_dir.push_back(w2sq_1d(px, py));
  }
  MetricReport r;
  r.method = "sliced-w2sq";
  r.value = mean_and_stderr(per_dir, &r.stderr_);
  if (n_proj == 1) r.stderr_ = 0.0;
  return r;
}

double blob_l2_norm_sq(const std::vector<Vec3>& X, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("blob_l2_norm_sq: eps > 0");
  // squared L2 norm of the blob density, via exact sphere-lens volumes:
  // vol(B(x,e) cap B(y,e)) = pi (4e + d)(2e - d)^2 / 12 for d = |x-y| < 2e.
  const std::size_t n = X.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += M_PI * 4.0 * eps * (2.0 * eps) * (2.0 * eps) / 12.0;  // self term
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = (X[i] - X[j]).norm();
      if (d >= 2.0 * eps) continue;
      acc += 2.0 * M_PI * (4.0 * eps + d) * (2.0 * eps - d) *
             (2.0 * eps - d) / 12.0;
    }
  }
  double c = 3.0 / (4.0 * M_PI * eps * eps * eps);
  return c * c * acc / (static_cast<double>(n) * static_cast<double>(n));
}

double blob_l2_cube_bound_sq(const std::vector<Vec3>& X, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("blob cube bound: eps > 0");
  struct Key {
    long x, y, z;
    bool operator==(const Key& o) const {
      return x == o.x && y == o.y && z == o.z;
    }
  };
  struct Hash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<long>()(k.x);
      h = h * 1000003u ^ std::hash<long>()(k.y);
      h = h * 1000003u ^ std::hash<long>()(k.z);
      return h;
    }
  };
  std::unordered_map<Key, std::size_t, Hash> counts;
  for (const Vec3& p : X)
    ++counts[{static_cast<long>(std::floor(p.x / eps)),
              static_cast<long>(std::floor(p.y / eps)),
              static_cast<long>(std::floor(p.z / eps))}];
  double s = 0.0;
  for (const auto& [k, c] : counts) s += static_cast<double>(c) * c;
  double n = static_cast<double>(X.size());
  return 3731.0 * s / (n * n * eps * eps * eps);
}

MetricReport knn_entropy(const std::vector<Vec3>& X, int k) {
  const std::size_t n = X.size();
  if (n < 50) throw std::invalid_argument("knn_entropy: need at least 50 points");
  if (k < 1 || k > 16) throw std::invalid_argument("knn_entropy: k in [1,16]");

  std::vector<double> logd(n);
  std::vector<double> d2(n);
#pragma omp parallel for schedule(static) firstprivate(d2)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    for (std::size_t j = 0; j < n; ++j) d2[j] = (X[i] - X[j]).norm2();
    d2[i] = std::numeric_limits<double>::infinity();  // exclude self
    std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
    double dist = std::sqrt(d2[k - 1]);
    logd[i] = 3.0 * std::log(std::max(dist, 1e-12));
  }

  MetricReport r;
  r.method = "knn-entropy";
  double se = 0.0;
  double mean_logd = mean_and_stderr(logd, &se);
  // negative differential entropy (the decreasing quantity): flip the usual
  // Kozachenko-Leonenko sign
  double vol_unit_ball = 4.0 * M_PI / 3.0;
  double h_diff = digamma(static_cast<double>(n)) - digamma(k) +
                  std::log(vol_unit_ball) + mean_logd;
  r.value = -h_diff;
  r.stderr_ = se;
  return r;
}

namespace {

struct ScoreEval {
  double density;
  Vec3 score;  // grad log f
};

ScoreEval mixture_score(const GaussianMixture& m, const Vec3& v) {
  double s2 = m.sigma * m.sigma;
  Vec3 d1 = v - m.center1;
  Vec3 d2 = v - m.center2;
  double c = std::pow(2.0 * M_PI * s2, -1.5);
  double g1 = c * std::exp(-0.5 * d1.norm2() / s2);
  double g2 = c * std::exp(-0.5 * d2.norm2() / s2);
  double f = 0.5 * (g1 + g2);
  Vec3 grad = (d1 * g1 + d2 * g2) * (-0.5 / s2);
  return {f, f > 0.0 ? grad * (1.0 / f) : Vec3{}};
}

}  // namespace

double weighted_fisher_quadrature(const DensitySpec& spec, double gamma) {
  if (const auto* g = std::get_if<IsotropicGaussian>(&spec)) {
    // isotropic: radial Simpson of (1+r^2)^{gamma/2} (r^2/sigma^4) 4 pi r^2 f(r)
    double s = g->sigma;
    double s2 = s * s;
    double L = 14.0 * s;
    const int n = 1 << 15;  // even
    double h = L / n;
    double c = std::pow(2.0 * M_PI * s2, -1.5);
    auto integrand = [&](double r) {
      double r2 = r * r;
      return std::pow(1.0 + r2, 0.5 * gamma) * (r2 / (s2 * s2)) * 4.0 * M_PI *
             r2 * c * std::exp(-0.5 * r2 / s2);
    };
    double acc = integrand(0.0) + integrand(L);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    return acc * h / 3.0;
  }
  const auto& m = std::get<GaussianMixture>(spec);
  // general mixture: tensor Simpson over a bounding cube
  double L = 8.0 * m.sigma +
             std::max({std::abs(m.center1.x), std::abs(m.center1.y),
                       std::abs(m.center1.z), std::abs(m.center2.x),
                       std::abs(m.center2.y), std::abs(m.center2.z)});
  const int n = 96;  // even
  double h = 2.0 * L / n;
  auto simpson_w = [&](int i) {
    if (i == 0 || i == n) return 1.0;
    return i % 2 ? 4.0 : 2.0;
  };
  double acc = 0.0;
  for (int ix = 0; ix <= n; ++ix)
    for (int iy = 0; iy <= n; ++iy)
      for (int iz = 0; iz <= n; ++iz) {
        Vec3 v{-L + ix * h, -L + iy * h, -L + iz * h};
        ScoreEval e = mixture_score(m, v);
        if (e.density <= 0.0) continue;
        double w = std::pow(1.0 + v.norm2(), 0.5 * gamma);
        acc += simpson_w(ix) * simpson_w(iy) * simpson_w(iz) * w *
               e.score.norm2() * e.density;
      }
  return acc * h * h * h / 27.0;
}

MetricReport weighted_fisher_kde(const std::vector<Vec3>& X, double gamma,
                                 double bandwidth) {
  const std::size_t n = X.size();
  if (n < 500)
    throw std::invalid_argument("weighted_fisher_kde: need at least 500 points");
  double h = bandwidth;
  if (h <= 0.0) {
    // Silverman's rule in 3-D on the averaged marginal deviation
    Vec3 mean{};
    for (const Vec3& x : X) mean += x;
    mean = mean * (1.0 / static_cast<double>(n));
    double var = 0.0;
    for (const Vec3& x : X) var += (x - mean).norm2();
    var /= 3.0 * static_cast<double>(n - 1);
    h = std::sqrt(var) *
        std::pow(4.0 / (5.0 * static_cast<double>(n)), 1.0 / 7.0);
  }
  const double inv_h2 = 1.0 / (h * h);
  std::vector<double> contrib(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    // the self-term (j == i) contributes k(0) to the denominator only; it
    // damps the score where neighbors are scarce, trading a small downward
    // bias for stability against isolated points
    double wsum = 0.0;
    Vec3 num{};
    for (std::size_t j = 0; j < n; ++j) {
      double kij = std::exp(-0.5 * (X[i] - X[j]).norm2() * inv_h2);
      wsum += kij;
      num += (X[j] - X[i]) * kij;
    }
    Vec3 score = num * (inv_h2 / wsum);
    contrib[i] = std::pow(1.0 + X[i].norm2(), 0.5 * gamma) * score.norm2();
  }
  MetricReport r;
  r.method = "fisher-kde-diagnostic";
  r.value = mean_and_stderr(contrib, &r.stderr_);
  return r;
}

double ball_mass(const std::vector<Vec3>& X, const Vec3& center,
                 double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball_mass: radius > 0");
  std::size_t c = 0;
  for (const Vec3& x : X)
    if ((x - center).norm() < radius) ++c;
  return static_cast<double>(c) / static_cast<double>(X.size());
}

MetricReport chaos_pair_gap(const std::vector<Ensemble>& runs,
                            const std::vector<Vec3>& ref, int n_proj,
                            std::uint64_t seed) {
  if (runs.size() < 16)
    throw std::invalid_argument("chaos_pair_gap: need at least 16 runs");
  if (ref.empty()) throw std::invalid_argument("chaos_pair_gap: empty ref");
  const std::size_t m = runs.size();

  // 6-D pair sample from the runs, and a product sample from ref x ref
  std::vector<std::array<double, 6>> pairs(m), prod(m);
  for (std::size_t r = 0; r < m; ++r) {
    if (runs[r].size() < 2)
      throw std::invalid_argument("chaos_pair_gap: runs need >= 2 particles");
    const Vec3& a = runs[r].velocities[0];
    const Vec3& b = runs[r].velocities[1];
    pairs[r] = {a.x, a.y, a.z, b.x, b.y, b.z};
  }
  SeqRng rng(seed);
  for (std::size_t r = 0; r < m; ++r) {
    const Vec3& a = ref[rng.below(ref.size())];
    const Vec3& b = ref[rng.below(ref.size())];
    prod[r] = {a.x, a.y, a.z, b.x, b.y, b.z};
  }

  std::vector<double> per_dir;
  per_dir.reserve(n_proj);
  std::vector<double> px(m), py(m);
  for (int p = 0; p < n_proj; ++p) {
    std::array<double, 6> u;
    double norm2 = 0.0;
    for (double& c : u) {
      c = rng.normal();
      norm2 += c * c;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t i = 0; i < m; ++i) {
      double sx = 0.0, sy = 0.0;
      for (int c = 0; c < 6; ++c) {
        sx += pairs[i][c] * u[c];
        sy += prod[i][c] * u[c];
      }
      px[i] = sx * inv;
      py[i] = sy * inv;
    }
    per_dir.push_back(w2sq_1d(px, py));
  }
  MetricReport r;
  r.method = "chaos-pair-gap";
  r.value = mean_and_stderr(per_dir, &r.stderr_);
  return r;
}

std::vector<BallCheck> entropy_moment_inequality_check(
    const std::vector<Vec3>& X,
    const std::vector<std::pair<Vec3, double>>& sets, double C) {
  MetricReport ent = knn_entropy(X);
  double m2 = 0.0;
  for (const Vec3& x : X) m2 += x.norm2();
  m2 /= static_cast<double>(X.size());

  std::vector<BallCheck> out;
  out.reserve(sets.size());
  for (const auto& [center, radius] : sets) {
    BallCheck c;
    c.center = center;
    c.radius = radius;
    double vol = 4.0 * M_PI * radius * radius * radius / 3.0;
    if (vol >= 1.0) {
      c.skipped = true;
      out.push_back(c);
      continue;
    }
    c.mass = ball_mass(X, center, radius);
    c.bound = (C + ent.value + m2) / (-std::log(vol));
    c.margin = c.bound - c.mass;
    out.push_back(c);
  }
  return out;
}

}  // namespace landau
