#include "landau/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <json.hpp>

#include "landau/sim.hpp"

namespace landau {

std::string AnchorSet::to_json() const {
  nlohmann::json j;
  j["delta0"] = delta0;
  j["kappa0"] = kappa0;
  j["tau0"] = tau0;
  j["anchors"] = nlohmann::json::array();
  for (const Vec3& a : anchors) j["anchors"].push_back({a.x, a.y, a.z});
  return j.dump(2);
}

AnchorSet AnchorSet::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  AnchorSet s;
  s.delta0 = j.at("delta0").get<double>();
  s.kappa0 = j.at("kappa0").get<double>();
  s.tau0 = j.at("tau0").get<double>();
  const auto& arr = j.at("anchors");
  if (arr.size() != 3)
    throw std::invalid_argument("anchor json: need exactly 3 anchors");
  for (int k = 0; k < 3; ++k)
    s.anchors[k] = {arr[k][0].get<double>(), arr[k][1].get<double>(),
                    arr[k][2].get<double>()};
  return s;
}

double BumpSpec::smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return ((6.0 * s - 15.0) * s + 10.0) * s * s * s;
}

double BumpSpec::smoothstep_deriv(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return ((30.0 * s - 60.0) * s + 30.0) * s * s;
}

double BumpSpec::h(const Vec3& v) const { return smoothstep(2.0 - v.norm()); }

Vec3 BumpSpec::grad_h(const Vec3& v) const {
  double r = v.norm();
  if (r == 0.0) return {};
  double d = smoothstep_deriv(2.0 - r);
  if (d == 0.0) return {};
  return v * (-d / r);
}

double BumpSpec::chi(double r) const { return smoothstep(2.0 - r); }

double BumpSpec::chi_deriv(double r) const {
  return -smoothstep_deriv(2.0 - r);
}

bool check_non_alignment(const Vec3& x1, const Vec3& x2, const Vec3& x3,
                         double delta) {
  if (!(delta > 0.0))
    throw std::invalid_argument("check_non_alignment: delta must be positive");
  Vec3 axis = x2 - x1;
  double axis_norm = axis.norm();
  if (axis_norm < 6.0 * std::sqrt(delta)) return false;
  Vec3 d3 = x3 - x1;
  // component of x3-x1 orthogonal to the x1-x2 axis
  double along = dot(d3, axis) / axis_norm;
  double perp2 = std::max(0.0, d3.norm2() - along * along);
  return std::sqrt(perp2) >= 24.0 * delta + 2.0 * std::sqrt(delta) * d3.norm();
}

namespace {

using Cell = std::tuple<long, long, long>;

struct Candidate {
  Vec3 center;
  std::size_t count;
};

// Ball centers on the grid of pitch delta carrying positive empirical mass,
// in lexicographic center order (the deterministic tie-break).
std::vector<Candidate> positive_mass_cells(const std::vector<Vec3>& samples,
                                           double delta, double R) {
  std::map<Cell, std::size_t> counts;
  for (const Vec3& s : samples) {
    // every grid center within distance delta of s lies in this index box
    long ix0 = static_cast<long>(std::floor((s.x - delta) / delta));
    long iy0 = static_cast<long>(std::floor((s.y - delta) / delta));
    long iz0 = static_cast<long>(std::floor((s.z - delta) / delta));
    for (long ix = ix0; ix <= ix0 + 2; ++ix)
      for (long iy = iy0; iy <= iy0 + 2; ++iy)
        for (long iz = iz0; iz <= iz0 + 2; ++iz) {
          Vec3 c{ix * delta, iy * delta, iz * delta};
          if (c.norm() > R) continue;  // grid covers B(0,R) only
          if ((s - c).norm() < delta) ++counts[{ix, iy, iz}];
        }
  }
  std::vector<Candidate> out;
  out.reserve(counts.size());
  for (const auto& [cell, n] : counts)
    out.push_back({{std::get<0>(cell) * delta, std::get<1>(cell) * delta,
                    std::get<2>(cell) * delta},
                   n});
  return out;
}

}  // namespace

AnchorSet select_anchors(const std::vector<Vec3>& samples, double delta,
                         int ell) {
  if (samples.size() < 100)
    throw std::invalid_argument("select_anchors: need at least 100 samples");
  if (!(delta > 0.0) || ell < 1)
    throw std::invalid_argument("select_anchors: need delta > 0 and ell >= 1");

  double m2 = 0.0;
  for (const Vec3& s : samples) m2 += s.norm2();
  m2 /= static_cast<double>(samples.size());
  const double R = 1.0 + std::sqrt(2.0 * m2);

  std::vector<Candidate> cells = positive_mass_cells(samples, delta, R);
  auto best = [](const std::vector<Candidate>& pool,
                 auto&& admissible) -> const Candidate* {
    const Candidate* b = nullptr;
    for (const Candidate& c : pool)
      if (admissible(c.center) && (!b || c.count > b->count)) b = &c;
    return b;  // lexicographic tie-break: pool is in center order
  };

  const double ld = ell * delta;
  const Candidate* c1 = best(cells, [](const Vec3&) { return true; });
  if (!c1) throw AnchorSelectionError(1, "anchor selection: no occupied cell");
  Vec3 x1 = c1->center;

  double excl = 6.0 * std::sqrt(ld);
  const Candidate* c2 =
      best(cells, [&](const Vec3& c) { return (c - x1).norm() >= excl; });
  if (!c2)
    throw AnchorSelectionError(
        2, "anchor selection: all mass inside the exclusion ball around x1");
  Vec3 x2 = c2->center;

  Vec3 axis = x2 - x1;
  double axis_norm = axis.norm();
  const Candidate* c3 = best(cells, [&](const Vec3& c) {
    Vec3 d = c - x1;
    double along = dot(d, axis) / axis_norm;
    double perp = std::sqrt(std::max(0.0, d.norm2() - along * along));
    return perp >= 24.0 * ld + 2.0 * std::sqrt(ld) * d.norm();
  });
  if (!c3)
    throw AnchorSelectionError(
        3, "anchor selection: all mass inside the x1-x2 slab");
  Vec3 x3 = c3->center;

  AnchorSet out;
  out.anchors = {x1, x2, x3};
  out.delta0 = ld / 4.0;  // the triple is non-aligned at 4*delta0 = ell*delta
  double n = static_cast<double>(samples.size());
  out.kappa0 = static_cast<double>(
                   std::min({c1->count, c2->count, c3->count})) /
               n;
  out.n0 = static_cast<int>(samples.size());
  return out;
}

namespace {

// Per-anchor bump-mass integrals (4/kappa0) N^{-1} sum_j h((V_j-x_k)/(2d0)).
std::array<double, 3> anchor_masses(const AnchorSet& anchors,
                                    const Ensemble& ensemble,
                                    const BumpSpec& bumps) {
  std::array<double, 3> r{0.0, 0.0, 0.0};
  const double inv = 1.0 / (2.0 * anchors.delta0);
  for (const Vec3& v : ensemble.velocities)
    for (int k = 0; k < 3; ++k) r[k] += bumps.h((v - anchors.anchors[k]) * inv);
  double scale = 4.0 / (anchors.kappa0 * static_cast<double>(ensemble.size()));
  for (double& x : r) x *= scale;
  return r;
}

}  // namespace

double eval_cl(const AnchorSet& anchors, const Ensemble& ensemble,
               const BumpSpec& bumps) {
  auto m = anchor_masses(anchors, ensemble, bumps);
  return bumps.chi(m[0]) + bumps.chi(m[1]) + bumps.chi(m[2]);
}

Vec3 grad_cl(const AnchorSet& anchors, const Ensemble& ensemble,
             std::size_t i, const BumpSpec& bumps) {
  if (i >= ensemble.size())
    throw std::invalid_argument("grad_cl: index out of range");
  auto m = anchor_masses(anchors, ensemble, bumps);
  const double inv = 1.0 / (2.0 * anchors.delta0);
  const double scale =
      4.0 / (anchors.kappa0 * static_cast<double>(ensemble.size()));
  Vec3 g{};
  for (int k = 0; k < 3; ++k) {
    double cd = bumps.chi_deriv(m[k]);
    if (cd == 0.0) continue;
    Vec3 gh = bumps.grad_h((ensemble.velocities[i] - anchors.anchors[k]) * inv);
    g += gh * (cd * scale * inv);
  }
  return g;
}

Ensemble step_perturbed(const Ensemble& ensemble, const KernelParams& kernel,
                        const AnchorSet& anchors, const BumpSpec& bumps,
                        double dt, const NoiseSource& noise,
                        const NoiseSource& noise2) {
  const double c = eval_cl(anchors, ensemble, bumps);
  Ensemble out = step_em(ensemble, kernel, dt, noise);
  if (c == 0.0) return out;  // perturbation off: bitwise the plain step
  const double sdt = std::sqrt(dt);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Vec3 zeta = noise2.normal3(static_cast<std::uint32_t>(i));
    Vec3 g = grad_cl(anchors, ensemble, i, bumps);
    out.velocities[i] += zeta * (c * sdt) + g * (c * dt);
    if (!out.velocities[i].finite()) throw BlowupError(i, out.time);
  }
  return out;
}

EllipticityReport ellipticity_floor_check(const std::vector<Vec3>& samples,
                                          const AnchorSet& anchors,
                                          double gamma, double delta, double R,
                                          int trials, std::uint64_t seed) {
  EllipticityReport rep;
  rep.trials = trials;
  rep.kappa = std::pow(delta / (R + 3.0), 4.0 + gamma);
  rep.worst_margin = std::numeric_limits<double>::infinity();

  double inf_mass = std::numeric_limits<double>::infinity();
  for (const Vec3& xk : anchors.anchors) {
    std::size_t c = 0;
    for (const Vec3& s : samples)
      if ((s - xk).norm() < delta) ++c;
    inf_mass =
        std::min(inf_mass, static_cast<double>(c) /
                               static_cast<double>(samples.size()));
  }
  rep.min_ball_mass = inf_mass;

  SeqRng rng(seed);
  const double invn = 1.0 / static_cast<double>(samples.size());
  for (int t = 0; t < trials; ++t) {
    Vec3 v = rng.in_ball(R);
    Vec3 xi = rng.unit_vector();
    double lhs = 0.0;
    for (const Vec3& s : samples) lhs += eval_a(gamma, v - s).quad(xi);
    lhs *= invn;
    double bound = rep.kappa * std::pow(1.0 + v.norm(), gamma) * inf_mass;
    if (bound == 0.0) {
      ++rep.vacuous;
      continue;
    }
    double margin = lhs - bound;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < 0.0) ++rep.violations;
  }
  return rep;
}

}  // namespace landau
