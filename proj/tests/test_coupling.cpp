#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "landau/coupling.hpp"
#include "landau/ensemble.hpp"
#include "landau/rng.hpp"
#include "landau/sim.hpp"

using namespace landau;

namespace {

std::vector<Vec3> random_cloud(SeqRng& rng, std::size_t n) {
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.normal3());
  return out;
}

double perm_cost(const std::vector<Vec3>& X, const std::vector<Vec3>& Y,
                 const std::vector<std::uint32_t>& perm) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i)
    s += (X[i] - Y[perm[i]]).norm2();
  return s;
}

bool is_permutation_of(const std::vector<std::uint32_t>& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<char> hit(n, 0);
  for (std::uint32_t v : p) {
    if (v >= n || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

}  // namespace

TEST_CASE("assignment solver matches exhaustive search") {
  SeqRng rng(31);
  for (int t = 0; t < 30; ++t) {
    auto X = random_cloud(rng, 8), Y = random_cloud(rng, 8);
    CouplingPlan plan = optimal_assignment_w2(X, Y);
    REQUIRE(is_permutation_of(plan.perm, 8));
    CHECK(plan.cost_sq == doctest::Approx(perm_cost(X, Y, plan.perm))
                              .epsilon(1e-12));
    std::vector<std::uint32_t> perm(8);
    std::iota(perm.begin(), perm.end(), 0u);
    double brute = 1e300;
    do {
      brute = std::min(brute, perm_cost(X, Y, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(plan.cost_sq == doctest::Approx(brute).epsilon(1e-10));
  }
}

TEST_CASE("assignment solver: identical clouds cost zero") {
  SeqRng rng(5);
  auto X = random_cloud(rng, 32);
  CouplingPlan plan = optimal_assignment_w2(X, X);
  CHECK(plan.cost_sq == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("assignment solver: input validation") {
  std::vector<Vec3> a(4), b(5);
  CHECK_THROWS_AS(optimal_assignment_w2(a, b), std::invalid_argument);
  std::vector<Vec3> empty;
  CHECK_THROWS_AS(optimal_assignment_w2(empty, empty), std::invalid_argument);
  std::vector<Vec3> big(4097, Vec3{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(optimal_assignment_w2(big, big), std::invalid_argument);
}

TEST_CASE("exhaustive optimum enumeration") {
  SeqRng rng(41);
  // generic clouds have a unique optimum matching the solver
  for (int t = 0; t < 10; ++t) {
    auto X = random_cloud(rng, 6), Y = random_cloud(rng, 6);
    auto opts = enumerate_optimal_perms(X, Y);
    REQUIRE(opts.size() == 1);
    CHECK(perm_cost(X, Y, opts[0]) ==
          doctest::Approx(optimal_assignment_w2(X, Y).cost_sq));
  }
  // a symmetric square: both pairings tie
  std::vector<Vec3> X = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
  std::vector<Vec3> Y = {{0.0, 1.0, 0.0}, {0.0, -1.0, 0.0}};
  auto ties = enumerate_optimal_perms(X, Y);
  CHECK(ties.size() == 2);
  for (const auto& p : ties)
    CHECK(perm_cost(X, Y, p) == doctest::Approx(4.0));
  // capped at 8 points
  std::vector<Vec3> big(9, Vec3{0.0, 0.0, 0.0});
  CHECK_THROWS_AS(enumerate_optimal_perms(big, big), std::invalid_argument);
}

TEST_CASE("coupling plan serialization round-trip") {
  CouplingPlan p;
  p.perm = {2, 0, 1};
  p.cost_sq = 1.25;
  CouplingPlan q = CouplingPlan::from_json(p.to_json());
  CHECK(q.perm == p.perm);
  CHECK(q.cost_sq == p.cost_sq);
}

TEST_CASE("symmetrized pairing: optimal cost and multiset preservation") {
  SeqRng rng(51);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 4 + t % 5;
    auto X = random_cloud(rng, n), Y = random_cloud(rng, n);
    PairedSample ps = symmetrized_coupling(X, Y, 100 + t);
    REQUIRE(ps.first.size() == n);
    REQUIRE(ps.second.size() == n);
    CHECK(ps.cost_sq == doctest::Approx(optimal_assignment_w2(X, Y).cost_sq));
    // first/second are relabelings of X/Y
    auto sorted = [](std::vector<Vec3> v) {
      std::sort(v.begin(), v.end(), [](const Vec3& a, const Vec3& b) {
        return a.x != b.x ? a.x < b.x : (a.y != b.y ? a.y < b.y : a.z < b.z);
      });
      return v;
    };
    auto sx = sorted(X), sf = sorted(ps.first);
    auto sy = sorted(Y), ss = sorted(ps.second);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK((sx[i] - sf[i]).norm2() == 0.0);
      CHECK((sy[i] - ss[i]).norm2() == 0.0);
    }
  }
}

TEST_CASE("symmetrized pairing: slot occupancy is exchangeable") {
  SeqRng rng(61);
  auto X = random_cloud(rng, 4), Y = random_cloud(rng, 4);
  int hits[4] = {0, 0, 0, 0};
  const int runs = 2000;
  for (int s = 0; s < runs; ++s) {
    PairedSample ps = symmetrized_coupling(X, Y, 1000 + s);
    for (int i = 0; i < 4; ++i)
      if ((ps.first[0] - X[i]).norm2() == 0.0) hits[i]++;
  }
  // each source point lands in slot 0 about a quarter of the time
  for (int i = 0; i < 4; ++i)
    CHECK(static_cast<double>(hits[i]) / runs ==
          doctest::Approx(0.25).epsilon(0.15));
}

TEST_CASE("symmetrized pairing: ties are drawn uniformly") {
  // two optimal pairings; each should be picked about half the time
  std::vector<Vec3> X = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
  std::vector<Vec3> Y = {{0.0, 1.0, 0.0}, {0.0, -1.0, 0.0}};
  int cross = 0;
  const int runs = 2000;
  for (int s = 0; s < runs; ++s) {
    PairedSample ps = symmetrized_coupling(X, Y, 7000 + s);
    for (int i = 0; i < 2; ++i)
      if ((ps.first[i] - X[0]).norm2() == 0.0 &&
          (ps.second[i] - Y[1]).norm2() == 0.0)
        ++cross;
  }
  CHECK(static_cast<double>(cross) / runs ==
        doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("coupled step: degenerate pair reproduces the plain step") {
  Ensemble e = init_ensemble(IsotropicGaussian{1.0}, 24, 71);
  KernelParams kp{-1.0, 0.1, 8};
  CounterNoise noise(9, 0);
  noise.set_step(0);
  Ensemble plain = step_em(e, kp, 1e-3, noise);
  // same system twice, reference equal to its own cloud, matching widths:
  // the rotation is the identity and both updates coincide bitwise
  auto [outA, outB] =
      step_coupled_pair(e, e, e.velocities, kp, kp.eta, 1e-3, noise, 0.0);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK((outA.velocities[i] - plain.velocities[i]).norm2() == 0.0);
    CHECK((outB.velocities[i] - plain.velocities[i]).norm2() == 0.0);
  }
}

TEST_CASE("coupled step: input validation") {
  Ensemble a = init_ensemble(IsotropicGaussian{1.0}, 8, 1);
  Ensemble b = init_ensemble(IsotropicGaussian{1.0}, 9, 2);
  KernelParams kp{-1.0, 0.1, 8};
  ZeroNoise noise;
  CHECK_THROWS_AS(
      step_coupled_pair(a, b, a.velocities, kp, 0.1, 1e-3, noise, 0.0),
      std::invalid_argument);
  std::vector<Vec3> empty;
  CHECK_THROWS_AS(step_coupled_pair(a, a, empty, kp, 0.1, 1e-3, noise, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      step_coupled_pair(a, a, a.velocities, kp, 0.0, 1e-3, noise, 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      step_coupled_pair(a, a, a.velocities, kp, 1.5, 1e-3, noise, 0.0),
      std::invalid_argument);
}

TEST_CASE("pair dissipation split: identity, antisymmetry, quadratic bound") {
  SeqRng rng(81);
  for (double gamma : {-0.5, -1.0, -1.5}) {
    for (int t = 0; t < 5000; ++t) {
      Vec3 v = rng.normal3(), vs = rng.normal3(), w = rng.normal3(),
           ws = rng.normal3();
      if ((v - vs).norm2() == 0.0 || (w - ws).norm2() == 0.0) continue;
      DeltaParts d = delta_decomposition(v, vs, w, ws, gamma);
      CHECK(d.delta == doctest::Approx(d.delta1 + d.delta2).epsilon(1e-12));
      // swapping both pairs flips the sign of the first part
      DeltaParts ds = delta_decomposition(vs, v, ws, w, gamma);
      double scale = std::max({1.0, std::abs(d.delta1), std::abs(ds.delta1)});
      CHECK(std::abs(d.delta1 + ds.delta1) / scale <= 1e-12);
      // the second part obeys the closed-form quadratic bound
      double bound = 4.0 * ((v - w).norm2() + (vs - ws).norm2()) *
                     delta2_bound_kernel((v - vs).norm(), (w - ws).norm(),
                                         gamma);
      CHECK(d.delta2 <= bound + 1e-10 * std::max(1.0, std::abs(bound)));
    }
  }
  Vec3 z{1.0, 0.0, 0.0};
  CHECK_THROWS_AS(delta_decomposition(z, z, z, {0.0, 1.0, 0.0}, -1.0),
                  std::invalid_argument);
}

TEST_CASE("quadratic bound kernel: closed-form values") {
  // min(x,y)^{1+gamma} / max(x,y)
  CHECK(delta2_bound_kernel(1.0, 1.0, -1.0) == doctest::Approx(1.0));
  CHECK(delta2_bound_kernel(2.0, 1.0, -1.0) == doctest::Approx(0.5));
  CHECK(delta2_bound_kernel(1.0, 2.0, -1.0) == doctest::Approx(0.5));
  CHECK(delta2_bound_kernel(4.0, 2.0, -0.5) ==
        doctest::Approx(std::pow(2.0, 0.5) / 4.0));
  CHECK(delta2_bound_kernel(0.0, 0.0, -1.0) == 0.0);
  // symmetric in the two radii
  CHECK(delta2_bound_kernel(0.3, 1.7, -1.2) ==
        doctest::Approx(delta2_bound_kernel(1.7, 0.3, -1.2)));
}
