#include "landau/studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "landau/metrics.hpp"
#include "landau/rng.hpp"

namespace landau {

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["config"] = config_echo;
  j["seed"] = seed;
  j["version"] = version;
  j["wall_seconds"] = wall_seconds;
  return j.dump(2);
}

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

double quantile_sorted(const std::vector<double>& xs, double q) {
  if (xs.empty()) return 0.0;
  double pos = q * static_cast<double>(xs.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, xs.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

// n distinct elements of pool, deterministic partial Fisher-Yates
std::vector<Vec3> subsample(const std::vector<Vec3>& pool, std::size_t n,
                            std::uint64_t seed) {
  std::vector<std::uint32_t> idx(pool.size());
  std::iota(idx.begin(), idx.end(), 0u);
  SeqRng rng(seed);
  std::vector<Vec3> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(idx.size() - i));
    std::swap(idx[i], idx[j]);
    out.push_back(pool[idx[i]]);
  }
  return out;
}

}  // namespace

RateReport run_rate_study(const Config& config) {
  const SimConfig& base = config.sim;
  if (!(base.kernel.gamma > -1.0 && base.kernel.gamma < 0.0))
    throw ConfigError("rate study: requires gamma in (-1, 0)");
  if (config.n_list.empty()) throw ConfigError("rate study: empty N list");
  for (std::size_t i = 1; i < config.n_list.size(); ++i)
    if (config.n_list[i] <= config.n_list[i - 1])
      throw ConfigError("rate study: N list must be strictly increasing");
  if (config.seeds < 8) throw ConfigError("rate study: need >= 8 seeds per N");
  std::size_t max_n = config.n_list.back();
  if (config.n_ref < 8 * max_n)
    throw ConfigError("rate study: reference under-resolved (n_ref < 8*max N)");

  auto eta_for = [&](std::size_t n) {
    return config.eta_scaling ? std::pow(static_cast<double>(n), -0.5)
                              : base.kernel.eta;
  };

  RateReport report;
  report.n_ref = config.n_ref;
  report.ref_seeds = config.ref_seeds;
  report.ref_eta = eta_for(config.n_ref);

  std::vector<Vec3> pool;
  pool.reserve(config.n_ref * static_cast<std::size_t>(config.ref_seeds));
  for (int r = 0; r < config.ref_seeds; ++r) {
    SimConfig rc = base;
    rc.n = config.n_ref;
    rc.kernel.eta = report.ref_eta;
    rc.seed = rng::combine(base.seed, 0xA11CEull, static_cast<std::uint64_t>(r));
    Trajectory traj = simulate(rc);
    const auto& fin = traj.snapshots.back().velocities;
    pool.insert(pool.end(), fin.begin(), fin.end());
  }

  for (std::size_t n : config.n_list) {
    std::vector<double> w2s;
    for (int s = 0; s < config.seeds; ++s) {
      SimConfig rc = base;
      rc.n = n;
      rc.kernel.eta = eta_for(n);
      rc.seed = rng::combine(base.seed, n, static_cast<std::uint64_t>(s));
      double t0 = now_seconds();
      Trajectory traj = simulate(rc);
      std::vector<Vec3> ref = subsample(
          pool, n, rng::combine(base.seed, 0x5AB5ull, n,
                                static_cast<std::uint64_t>(s)));
      double w2 = w2sq_empirical(traj.snapshots.back().velocities, ref);
      double wall = now_seconds() - t0;
      report.samples.push_back({n, rc.seed, w2, wall});
      w2s.push_back(w2);
    }
    std::sort(w2s.begin(), w2s.end());
    RateRecord rec;
    rec.n = n;
    rec.seeds = config.seeds;
    rec.median_w2sq = quantile_sorted(w2s, 0.5);
    rec.iqr = quantile_sorted(w2s, 0.75) - quantile_sorted(w2s, 0.25);
    report.per_n.push_back(rec);
  }

  if (report.per_n.size() >= 2) {
    std::vector<double> lx, ly;
    for (const RateRecord& r : report.per_n) {
      lx.push_back(std::log(static_cast<double>(r.n)));
      ly.push_back(std::log(r.median_w2sq));
    }
    report.slope = fit_slope(lx, ly);
    report.slope_defined = true;
  }
  return report;
}

void write_rate_csv(std::ostream& out, const RateReport& report) {
  out << "N,seed,w2sq,t_wall\n";
  char buf[128];
  for (const RateSample& s : report.samples) {
    std::snprintf(buf, sizeof(buf), "%zu,%llu,%.17g,%.6g\n", s.n,
                  static_cast<unsigned long long>(s.seed), s.w2sq, s.t_wall);
    out << buf;
  }
}

std::vector<DissipationPoint> run_dissipation_study(const Config& config) {
  const SimConfig& base = config.sim;
  if (base.n < 512) throw ConfigError("dissipation study: need n >= 512");
  if (config.seeds < 16)
    throw ConfigError("dissipation study: need >= 16 seeds");
  if (config.t_checkpoints.empty())
    throw ConfigError("dissipation study: no checkpoints");
  std::vector<double> ts = config.t_checkpoints;
  std::sort(ts.begin(), ts.end());

  std::vector<std::uint64_t> checkpoint_steps;
  for (double t : ts)
    checkpoint_steps.push_back(
        static_cast<std::uint64_t>(std::llround(t / base.dt)));

  std::vector<std::vector<Vec3>> pools(ts.size());
  for (int s = 0; s < config.seeds; ++s) {
    SimConfig rc = base;
    rc.seed = rng::combine(base.seed, 0xD155ull, static_cast<std::uint64_t>(s));
    Ensemble state = init_ensemble(rc.init, rc.n, rc.seed);
    CounterNoise noise(rc.seed, 0);
    std::uint64_t step = 0;
    for (std::size_t c = 0; c < ts.size(); ++c) {
      while (step < checkpoint_steps[c]) {
        noise.set_step(step);
        state = step_em(state, rc.kernel, rc.dt, noise);
        ++step;
      }
      pools[c].insert(pools[c].end(), state.velocities.begin(),
                      state.velocities.end());
    }
  }

  std::vector<DissipationPoint> series;
  for (std::size_t c = 0; c < ts.size(); ++c) {
    DissipationPoint p;
    p.t = ts[c];
    MetricReport ent = knn_entropy(pools[c], config.knn_k);
    p.H_hat = ent.value;
    p.H_stderr = ent.stderr_;
    p.I_hat = weighted_fisher_kde(pools[c], base.kernel.gamma).value;
    double m2 = 0.0;
    for (const Vec3& v : pools[c]) m2 += v.norm2();
    p.m2 = m2 / static_cast<double>(pools[c].size());
    series.push_back(p);
  }
  return series;
}

void write_dissipation_csv(std::ostream& out,
                           const std::vector<DissipationPoint>& series) {
  out << "t,H_hat,H_stderr,I_hat,m2\n";
  char buf[160];
  for (const DissipationPoint& p : series) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.t,
                  p.H_hat, p.H_stderr, p.I_hat, p.m2);
    out << buf;
  }
}

TriggerReport run_trigger_study(const Config& config) {
  const SimConfig& base = config.sim;
  if (config.n_list.empty()) throw ConfigError("trigger study: empty N list");

  std::vector<Vec3> samples =
      sample_cloud(base.init, 10000, rng::combine(base.seed, 0xA2C4ull));
  TriggerReport report;
  report.anchors =
      select_anchors(samples, config.anchors_delta, config.anchors_ell);
  report.anchors.tau0 = config.anchors_tau0;
  // The greedy certificate pins delta0 well below the inter-particle distance
  // of desk-scale ensembles; an override widens the cutoff balls so the
  // cutoff probes mass presence at the resolution the ensemble can represent.
  if (config.anchors_delta0_override > 0.0)
    report.anchors.delta0 = config.anchors_delta0_override;
  BumpSpec bumps;

  const auto steps =
      static_cast<std::uint64_t>(std::llround(base.t_end / base.dt));
  for (std::size_t n : config.n_list) {
    std::vector<double> freqs;
    for (int s = 0; s < config.seeds; ++s) {
      std::uint64_t seed =
          rng::combine(base.seed, 0x7316ull, n, static_cast<std::uint64_t>(s));
      Ensemble state = init_ensemble(base.init, n, seed);
      CounterNoise noise(seed, 0), noise2(seed, 1);
      std::uint64_t active = 0;
      for (std::uint64_t step = 0; step < steps; ++step) {
        if (eval_cl(report.anchors, state, bumps) > 0.0) ++active;
        noise.set_step(step);
        noise2.set_step(step);
        state = step_perturbed(state, base.kernel, report.anchors, bumps,
                               base.dt, noise, noise2);
      }
      double freq = steps == 0 ? 0.0
                               : static_cast<double>(active) /
                                     static_cast<double>(steps);
      report.samples.push_back({n, seed, freq});
      freqs.push_back(freq);
    }
    std::sort(freqs.begin(), freqs.end());
    report.median_per_n.push_back({n, quantile_sorted(freqs, 0.5)});
  }
  return report;
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["all_passed"] = all_passed;
  j["checks"] = nlohmann::json::array();
  for (const CheckResult& c : checks)
    j["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return j.dump(2);
}

}  // namespace landau
