#include "landau/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "landau/matrix3.hpp"
#include "landau/sim.hpp"

namespace landau {

std::string CouplingPlan::to_json() const {
  nlohmann::json j;
  j["perm"] = perm;
  j["cost_sq"] = cost_sq;
  return j.dump();
}

CouplingPlan CouplingPlan::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  CouplingPlan p;
  p.perm = j.at("perm").get<std::vector<std::uint32_t>>();
  p.cost_sq = j.at("cost_sq").get<double>();
  return p;
}

namespace {

double pair_cost_sum(const std::vector<Vec3>& X, const std::vector<Vec3>& Y,
                     const std::vector<std::uint32_t>& perm) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i)
    s += (X[i] - Y[perm[i]]).norm2();
  return s;
}

}  // namespace

CouplingPlan optimal_assignment_w2(const std::vector<Vec3>& X,
                                   const std::vector<Vec3>& Y) {
  if (X.size() != Y.size())
    throw std::invalid_argument("assignment: cloud sizes differ");
  if (X.empty()) throw std::invalid_argument("assignment: empty clouds");
  if (X.size() > 4096)
    throw std::invalid_argument(
        "assignment: exact solver capped at 4096 points; use the sliced "
        "surrogate above that");

  const int n = static_cast<int>(X.size());
  const double inf = std::numeric_limits<double>::infinity();
  auto cost = [&](int i, int j) { return (X[i] - Y[j]).norm2(); };

  // Shortest augmenting path with dual potentials (1-based scratch arrays).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  CouplingPlan plan;
  plan.perm.resize(n);
  for (int j = 1; j <= n; ++j)
    plan.perm[p[j] - 1] = static_cast<std::uint32_t>(j - 1);
  plan.cost_sq = pair_cost_sum(X, Y, plan.perm);
  return plan;
}

std::vector<std::vector<std::uint32_t>> enumerate_optimal_perms(
    const std::vector<Vec3>& X, const std::vector<Vec3>& Y) {
  if (X.size() != Y.size())
    throw std::invalid_argument("enumerate_optimal_perms: sizes differ");
  if (X.size() > 8)
    throw std::invalid_argument("enumerate_optimal_perms: sizes <= 8 only");
  std::vector<std::uint32_t> perm(X.size());
  std::iota(perm.begin(), perm.end(), 0u);
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, pair_cost_sum(X, Y, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  const double band = best + 1e-12 * std::max(1.0, best);
  std::vector<std::vector<std::uint32_t>> out;
  do {
    if (pair_cost_sum(X, Y, perm) <= band) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

PairedSample symmetrized_coupling(const std::vector<Vec3>& X,
                                  const std::vector<Vec3>& Y,
                                  std::uint64_t seed) {
  if (X.size() != Y.size())
    throw std::invalid_argument("symmetrized_coupling: sizes differ");
  const std::size_t n = X.size();
  SeqRng rng(seed);

  std::vector<std::uint32_t> tau;
  if (n <= 8) {
    auto opts = enumerate_optimal_perms(X, Y);
    tau = opts[static_cast<std::size_t>(rng.below(opts.size()))];
  } else {
    tau = optimal_assignment_w2(X, Y).perm;
  }

  std::vector<std::uint32_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0u);
  rng.shuffle(sigma);

  PairedSample out;
  out.first.reserve(n);
  out.second.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.first.push_back(X[sigma[i]]);
    out.second.push_back(Y[tau[sigma[i]]]);
  }
  for (std::size_t i = 0; i < n; ++i)
    out.cost_sq += (out.first[i] - out.second[i]).norm2();
  return out;
}

std::pair<Ensemble, Ensemble> step_coupled_pair(
    const Ensemble& sysA, const Ensemble& sysB,
    const std::vector<Vec3>& reference, const KernelParams& kernel,
    double blob_eps, double dt, const NoiseSource& shared_noise,
    double rotation_reg) {
  if (sysA.size() != sysB.size())
    throw std::invalid_argument("step_coupled_pair: system sizes differ");
  if (reference.empty())
    throw std::invalid_argument("step_coupled_pair: empty reference cloud");
  if (!(blob_eps > 0.0 && blob_eps < 1.0))
    throw std::invalid_argument("step_coupled_pair: blob_eps must be in (0,1)");

  KernelParams kblob = kernel;
  kblob.eta = blob_eps;
  Ensemble refE;
  refE.velocities = reference;

  const std::size_t n = sysA.size();
  const double sdt = std::sqrt(dt);
  Ensemble outA, outB;
  outA.time = sysA.time + dt;
  outB.time = sysB.time + dt;
  outA.velocities.resize(n);
  outB.velocities.resize(n);

#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const Vec3& v = sysA.velocities[i];
    const Vec3& w = sysB.velocities[i];
    Vec3 xi = shared_noise.normal3(static_cast<std::uint32_t>(i));

    FieldPair fA = field_ab(kernel, sysA, v);
    SymMat3 rootA = mat3::sqrt_psd(fA.a);
    outA.velocities[i] = v + fA.b * dt + rootA.apply(xi) * sdt;

    // the second system is driven by the frozen reference field, with its
    // shared increment rotated into the optimal Gaussian coupling
    FieldPair fB = field_ab(kblob, refE, w);
    SymMat3 rootB = mat3::sqrt_psd(fB.a);
    SymMat3 blobA = field_a(kblob, sysA, v);
    SymMat3 blobB = field_a(kblob, sysB, w);
    Mat3 U = mat3::coupling_rotation(blobA, blobB, rotation_reg);
    outB.velocities[i] = w + fB.b * dt + rootB.apply(U.apply(xi)) * sdt;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!outA.velocities[i].finite()) throw BlowupError(i, outA.time);
    if (!outB.velocities[i].finite()) throw BlowupError(i, outB.time);
  }
  return {std::move(outA), std::move(outB)};
}

DeltaParts delta_decomposition(const Vec3& v, const Vec3& v_star,
                               const Vec3& w, const Vec3& w_star,
                               double gamma) {
  Vec3 dv = v - v_star;
  Vec3 dw = w - w_star;
  if (dv.norm2() == 0.0 || dw.norm2() == 0.0)
    throw std::invalid_argument(
        "delta_decomposition: coincident particle pairs");
  Vec3 db = eval_b(gamma, dv) - eval_b(gamma, dw);
  SymMat3 ds = eval_sigma(gamma, dv) - eval_sigma(gamma, dw);
  DeltaParts parts;
  parts.delta = 2.0 * dot(v - w, db) + ds.frobenius2();
  parts.delta1 = dot((v - w) + (v_star - w_star), db);
  parts.delta2 = parts.delta - parts.delta1;
  return parts;
}

double delta2_bound_kernel(double x, double y, double gamma) {
  double lo = std::min(x, y), hi = std::max(x, y);
  if (hi == 0.0) return 0.0;
  return std::pow(lo, 1.0 + gamma) / hi;
}

}  // namespace landau
