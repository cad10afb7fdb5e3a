#include <doctest.h>

#include <cmath>
#include <sstream>

#include "landau/ensemble.hpp"
#include "landau/rng.hpp"
#include "landau/sim.hpp"

using namespace landau;

TEST_CASE("mixing: deterministic, sensitive to every word") {
  CHECK(rng::mix(12345) == rng::mix(12345));
  CHECK(rng::mix(12345) != rng::mix(12346));
  CHECK(rng::combine(1, 2, 3, 4) == rng::combine(1, 2, 3, 4));
  CHECK(rng::combine(1, 2, 3, 4) != rng::combine(2, 1, 3, 4));
  CHECK(rng::combine(1, 2, 3, 4) != rng::combine(1, 2, 4, 3));
  CHECK(rng::combine(1, 2) != rng::combine(1, 3));
  for (std::uint64_t w : {0ull, 1ull, ~0ull, 0x123456789abcdefull}) {
    double u = rng::to_unit(rng::mix(w));
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sequential generator: ranges and moments") {
  SeqRng rng(2024);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = rng.normal();
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.03));

  double lo = 1e9, hi = -1e9, mean = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform(-2.0, 3.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    mean += u;
  }
  CHECK(lo >= -2.0);
  CHECK(hi <= 3.0);
  CHECK(mean / n == doctest::Approx(0.5).epsilon(0.05));

  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.unit_vector().norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rng.in_ball(2.0).norm() <= 2.0);
  }
  // |X|^3 / R^3 is uniform on (0,1) for a uniform ball draw
  double cubes = 0.0;
  for (int i = 0; i < n; ++i) {
    double r = rng.in_ball(2.0).norm() / 2.0;
    cubes += r * r * r;
  }
  CHECK(cubes / n == doctest::Approx(0.5).epsilon(0.02));

  bool seen[5] = {false, false, false, false, false};
  for (int i = 0; i < 200; ++i) {
    std::uint64_t k = rng.below(5);
    REQUIRE(k < 5);
    seen[k] = true;
  }
  for (bool s : seen) CHECK(s);
}

TEST_CASE("counter noise: pure function of (seed, stream, step, particle)") {
  CounterNoise a(5, 7), b(5, 7);
  a.set_step(3);
  b.set_step(3);
  Vec3 x10 = a.normal3(10);
  Vec3 x2 = a.normal3(2);
  // order of queries is irrelevant
  CHECK((b.normal3(2) - x2).norm2() == 0.0);
  CHECK((b.normal3(10) - x10).norm2() == 0.0);
  // every key word matters
  CounterNoise other_seed(6, 7), other_stream(5, 8);
  other_seed.set_step(3);
  other_stream.set_step(3);
  CHECK((other_seed.normal3(10) - x10).norm2() != 0.0);
  CHECK((other_stream.normal3(10) - x10).norm2() != 0.0);
  a.set_step(4);
  CHECK((a.normal3(10) - x10).norm2() != 0.0);
  CHECK((x10 - x2).norm2() != 0.0);
}

TEST_CASE("counter noise: near-standard moments across a block") {
  CounterNoise cn(99, 1);
  double sum = 0.0, sum2 = 0.0;
  int n = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    cn.set_step(s);
    for (std::uint32_t i = 0; i < 1000; ++i) {
      Vec3 g = cn.normal3(i);
      for (double c : {g.x, g.y, g.z}) {
        sum += c;
        sum2 += c * c;
        ++n;
      }
    }
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("initial ensembles: determinism and family statistics") {
  const std::size_t n = 20000;
  auto c1 = sample_cloud(IsotropicGaussian{2.0}, n, 77);
  auto c2 = sample_cloud(IsotropicGaussian{2.0}, n, 77);
  auto c3 = sample_cloud(IsotropicGaussian{2.0}, n, 78);
  REQUIRE(c1.size() == n);
  bool same = true, diff = false;
  for (std::size_t i = 0; i < n; ++i) {
    same = same && (c1[i] - c2[i]).norm2() == 0.0;
    diff = diff || (c1[i] - c3[i]).norm2() != 0.0;
  }
  CHECK(same);
  CHECK(diff);

  Ensemble e = init_ensemble(IsotropicGaussian{2.0}, n, 77);
  CHECK(moments(e, 0.0) == doctest::Approx(1.0));
  CHECK(moments(e, 2.0) == doctest::Approx(12.0).epsilon(0.05));
  CHECK(mean_velocity(e).norm() < 0.1);
  CHECK_THROWS_AS(moments(e, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(init_ensemble(IsotropicGaussian{2.0}, 1, 77),
                  std::invalid_argument);

  Ensemble d = init_ensemble(DiagonalGaussian{{4.0, 1.0, 0.25}}, n, 5);
  double vx = 0.0, vy = 0.0, vz = 0.0;
  for (const Vec3& v : d.velocities) {
    vx += v.x * v.x;
    vy += v.y * v.y;
    vz += v.z * v.z;
  }
  CHECK(vx / n == doctest::Approx(4.0).epsilon(0.1));
  CHECK(vy / n == doctest::Approx(1.0).epsilon(0.1));
  CHECK(vz / n == doctest::Approx(0.25).epsilon(0.1));

  Ensemble b = init_ensemble(UniformBall{2.0, {1.0, 0.0, 0.0}}, n, 9);
  for (const Vec3& v : b.velocities)
    CHECK((v - Vec3{1.0, 0.0, 0.0}).norm() <= 2.0);

  Ensemble m = init_ensemble(
      GaussianMixture{{-3.0, 0.0, 0.0}, {3.0, 0.0, 0.0}, 0.5}, n, 11);
  std::size_t left = 0;
  for (const Vec3& v : m.velocities)
    if (v.x < 0.0) ++left;
  CHECK(static_cast<double>(left) / n == doctest::Approx(0.5).epsilon(0.05));

  CHECK_THROWS_AS(init_ensemble(IsotropicGaussian{0.0}, 16, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(init_ensemble(UniformBall{-1.0, {}}, 16, 1),
                  std::invalid_argument);
}

TEST_CASE("drift-only step conserves momentum") {
  Ensemble e = init_ensemble(IsotropicGaussian{1.0}, 32, 21);
  KernelParams k{-1.0, 0.1, 16};
  ZeroNoise zero;
  Vec3 before = mean_velocity(e);
  Ensemble out = step_em(e, k, 1e-3, zero);
  CHECK((mean_velocity(out) - before).norm() <= 1e-12);
  CHECK(out.time == doctest::Approx(e.time + 1e-3));
}

TEST_CASE("stepping is exchangeable under joint relabeling") {
  const std::size_t n = 8;
  Ensemble e = init_ensemble(IsotropicGaussian{1.0}, n, 33);
  KernelParams k{-0.5, 0.1, 16};
  CounterNoise cn(11, 0);
  cn.set_step(0);
  Ensemble out = step_em(e, k, 1e-3, cn);

  std::vector<std::uint32_t> perm = {3, 1, 7, 0, 5, 2, 6, 4};
  Ensemble pe;
  pe.time = e.time;
  for (std::uint32_t p : perm) pe.velocities.push_back(e.velocities[p]);
  PermutedNoise pn(cn, perm);
  Ensemble pout = step_em(pe, k, 1e-3, pn);
  for (std::size_t i = 0; i < n; ++i)
    CHECK((pout.velocities[i] - out.velocities[perm[i]]).norm() <= 1e-12);
}

TEST_CASE("overflowing update reports blow-up") {
  Ensemble e;
  // wide separation with a soft exponent: the drift magnitude per particle
  // is about 3, so one step at dt = 1e308 overflows the representable range
  e.velocities = {{9.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  KernelParams k{-0.5, 0.1, 8};
  ZeroNoise zero;
  CHECK_THROWS_AS(step_em(e, k, 1e308, zero), BlowupError);
  try {
    step_em(e, k, 1e308, zero);
  } catch (const BlowupError& err) {
    CHECK(err.particle < 2);
    CHECK(err.at_time == doctest::Approx(1e308));
  }
  CHECK_THROWS_AS(step_em(e, k, 0.0, zero), std::invalid_argument);
}

TEST_CASE("full run: bitwise determinism and snapshot schedule") {
  SimConfig cfg;
  cfg.n = 16;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;
  cfg.kernel = {-1.0, 0.1, 8};
  cfg.seed = 3;
  cfg.record_every = 2;
  Trajectory t1 = simulate(cfg);
  Trajectory t2 = simulate(cfg);
  // 10 steps, recorded every 2nd, plus the initial state
  REQUIRE(t1.snapshots.size() == 6);
  REQUIRE(t2.snapshots.size() == 6);
  CHECK(t1.snapshots.front().time == 0.0);
  CHECK(t1.snapshots.back().time == doctest::Approx(0.1));
  for (std::size_t s = 0; s < t1.snapshots.size(); ++s)
    for (std::size_t i = 0; i < cfg.n; ++i)
      CHECK((t1.snapshots[s].velocities[i] - t2.snapshots[s].velocities[i])
                .norm2() == 0.0);

  cfg.record_every = 0;  // only first and last
  CHECK(simulate(cfg).snapshots.size() == 2);

  cfg.seed = 4;
  Trajectory t3 = simulate(cfg);
  CHECK((t3.snapshots.back().velocities[0] -
         t1.snapshots.back().velocities[0]).norm2() != 0.0);
}

TEST_CASE("snapshot export format") {
  SimConfig cfg;
  cfg.n = 4;
  cfg.dt = 0.01;
  cfg.t_end = 0.02;
  cfg.kernel = {-1.0, 0.1, 8};
  cfg.record_every = 1;
  Trajectory t = simulate(cfg);
  std::ostringstream os;
  write_snapshot_csv(os, t);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "t,i,vx,vy,vz");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == t.snapshots.size() * cfg.n);
}

TEST_CASE("run configuration validation") {
  SimConfig good;
  good.kernel = {-1.0, 0.1, 8};
  CHECK_NOTHROW(good.validate());

  SimConfig c = good;
  c.n = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = good;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = good;
  c.dt = 1.0;
  c.t_end = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = good;
  c.kernel.eta = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = good;
  c.kernel.gamma = 0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
