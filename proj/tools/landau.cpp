// Command-line front end: single runs, the convergence-rate / dissipation /
// perturbation studies, anchor selection, and the invariant verifier.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical blow-up,
// 4 verification failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "landau/coupling.hpp"
#include "landau/metrics.hpp"
#include "landau/studies.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

void apply_thread_override() {
#ifdef _OPENMP
  if (const char* env = std::getenv("LANDAU_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

landau::Config build_config(const std::string& config_path,
                            const std::vector<std::string>& overrides) {
  landau::Config cfg;
  if (!config_path.empty()) cfg = landau::load_config_file(config_path);
  for (const std::string& kv : overrides) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw landau::ConfigError("--set expects key=value, got '" + kv + "'");
    landau::config_set(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw landau::ConfigError("cannot open output file " + path);
  out << content;
}

double wall_now() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void write_manifest(const std::string& path, const landau::Config& cfg,
                    double wall) {
  if (path.empty()) return;
  landau::RunManifest m;
  m.config_echo = landau::config_echo(cfg);
  m.seed = cfg.sim.seed;
  m.version = kVersion;
  m.wall_seconds = wall;
  write_file(path, m.to_json());
}

int cmd_simulate(const landau::Config& cfg, const std::string& out_csv,
                 const std::string& out_summary) {
  landau::Trajectory traj = landau::simulate(cfg.sim);
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw landau::ConfigError("cannot open " + out_csv);
    landau::write_snapshot_csv(out, traj);
  }
  nlohmann::json j;
  j["moments"] = nlohmann::json::array();
  for (const landau::Ensemble& e : traj.snapshots)
    j["moments"].push_back({{"t", e.time},
                            {"m2", landau::moments(e, 2.0)},
                            {"m4", landau::moments(e, 4.0)}});
  if (!out_summary.empty())
    write_file(out_summary, j.dump(2));
  else
    std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_rate(const landau::Config& cfg, const std::string& out_csv) {
  landau::RateReport rep = landau::run_rate_study(cfg);
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw landau::ConfigError("cannot open " + out_csv);
    landau::write_rate_csv(out, rep);
  }
  for (const landau::RateRecord& r : rep.per_n)
    std::cout << "N=" << r.n << " median_w2sq=" << r.median_w2sq
              << " iqr=" << r.iqr << "\n";
  if (rep.slope_defined)
    std::cout << "fitted log-log slope: " << rep.slope << "\n";
  else
    std::cout << "fitted log-log slope: undefined (single N)\n";
  std::cout << "reference: n_ref=" << rep.n_ref << " pooled over "
            << rep.ref_seeds << " runs, eta=" << rep.ref_eta << "\n";
  return 0;
}

int cmd_entropy(const landau::Config& cfg, const std::string& out_csv) {
  std::vector<landau::DissipationPoint> series =
      landau::run_dissipation_study(cfg);
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw landau::ConfigError("cannot open " + out_csv);
    landau::write_dissipation_csv(out, series);
  }
  for (const landau::DissipationPoint& p : series)
    std::cout << "t=" << p.t << " H=" << p.H_hat << " (se " << p.H_stderr
              << ") I=" << p.I_hat << " m2=" << p.m2 << "\n";
  return 0;
}

int cmd_perturbed(const landau::Config& cfg, const std::string& out_csv,
                  const std::string& anchors_out) {
  landau::TriggerReport rep = landau::run_trigger_study(cfg);
  if (!anchors_out.empty()) write_file(anchors_out, rep.anchors.to_json());
  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw landau::ConfigError("cannot open " + out_csv);
    out << "N,seed,trigger_freq\n";
    for (const landau::TriggerSample& s : rep.samples)
      out << s.n << "," << s.seed << "," << s.frequency << "\n";
  }
  for (const auto& [n, med] : rep.median_per_n)
    std::cout << "N=" << n << " median trigger frequency=" << med << "\n";
  return 0;
}

int cmd_anchors(const landau::Config& cfg, const std::string& out_json) {
  std::vector<landau::Vec3> samples = landau::sample_cloud(
      cfg.sim.init, std::max<std::size_t>(cfg.sim.n, 10000), cfg.sim.seed);
  landau::AnchorSet anchors =
      landau::select_anchors(samples, cfg.anchors_delta, cfg.anchors_ell);
  anchors.tau0 = cfg.anchors_tau0;
  if (cfg.anchors_delta0_override > 0.0)
    anchors.delta0 = cfg.anchors_delta0_override;
  std::string text = anchors.to_json();
  if (!out_json.empty())
    write_file(out_json, text);
  else
    std::cout << text << "\n";
  return 0;
}

int cmd_coupled(const landau::Config& cfg, const std::string& out_csv) {
  const landau::SimConfig& base = cfg.sim;
  // pooled reference for the frozen limit-law stand-in
  std::vector<landau::Vec3> reference;
  for (int r = 0; r < cfg.ref_seeds; ++r) {
    landau::SimConfig rc = base;
    rc.n = cfg.n_ref;
    rc.seed = landau::rng::combine(base.seed, 0xC0FFEEull,
                                   static_cast<std::uint64_t>(r));
    landau::Trajectory t = landau::simulate(rc);
    const auto& fin = t.snapshots.back().velocities;
    reference.insert(reference.end(), fin.begin(), fin.end());
  }

  double blob = cfg.effective_blob_eps(base.n);
  landau::Ensemble a = landau::init_ensemble(base.init, base.n, base.seed);
  landau::Ensemble b = a;
  landau::CounterNoise noise(base.seed, 0);
  const auto steps =
      static_cast<std::uint64_t>(std::llround(base.t_end / base.dt));
  std::ofstream out;
  if (!out_csv.empty()) {
    out.open(out_csv);
    if (!out) throw landau::ConfigError("cannot open " + out_csv);
    out << "t,mean_pair_dist_sq\n";
  }
  auto emit = [&](double t, double d) {
    if (out.is_open()) out << t << "," << d << "\n";
    std::cout << "t=" << t << " mean pair distance^2=" << d << "\n";
  };
  auto pair_dist = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      s += (a.velocities[i] - b.velocities[i]).norm2();
    return s / static_cast<double>(a.size());
  };
  emit(0.0, pair_dist());
  for (std::uint64_t s = 0; s < steps; ++s) {
    noise.set_step(s);
    auto [na, nb] = landau::step_coupled_pair(a, b, reference, base.kernel,
                                              blob, base.dt, noise);
    a = std::move(na);
    b = std::move(nb);
    if ((s + 1) % std::max<std::uint64_t>(1, base.record_every) == 0 ||
        s + 1 == steps)
      emit(a.time, pair_dist());
  }
  std::cout << "reference resolution: " << reference.size()
            << " points, blob radius " << blob << "\n";
  return 0;
}

int cmd_verify(std::uint64_t seed, const std::string& out_json) {
  landau::VerifyReport rep = landau::verify_suite(seed);
  for (const landau::CheckResult& c : rep.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " — " << c.detail
              << "\n";
  if (!out_json.empty()) write_file(out_json, rep.to_json());
  if (!rep.all_passed) {
    std::cout << "verification FAILED\n";
    return 4;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_override();

  CLI::App app{"Particle-method simulator and verification harness for a "
               "soft-potential kinetic collision model"};
  app.require_subcommand(1);

  std::string config_path, out_csv, out_summary, out_json, anchors_out;
  std::vector<std::string> overrides;
  std::uint64_t verify_seed = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key=value config file");
    sub->add_option("--set", overrides, "override: key=value (repeatable)");
  };

  CLI::App* sim = app.add_subcommand("simulate", "single particle-system run");
  add_common(sim);
  sim->add_option("--out", out_csv, "snapshot CSV path");
  sim->add_option("--summary", out_summary, "moment summary JSON path");

  CLI::App* rate =
      app.add_subcommand("rate", "mean-field convergence-rate study");
  add_common(rate);
  rate->add_option("--out", out_csv, "rate CSV path");

  CLI::App* coupled =
      app.add_subcommand("coupled", "two-system coupled run with shared noise");
  add_common(coupled);
  coupled->add_option("--out", out_csv, "pair-distance CSV path");

  CLI::App* pert =
      app.add_subcommand("perturbed", "perturbation-trigger study");
  add_common(pert);
  pert->add_option("--out", out_csv, "trigger CSV path");
  pert->add_option("--anchors-out", anchors_out, "anchor-set JSON path");

  CLI::App* anch = app.add_subcommand("anchors", "greedy anchor selection");
  add_common(anch);
  anch->add_option("--out", out_json, "anchor-set JSON path");

  CLI::App* ent =
      app.add_subcommand("entropy", "entropy/Fisher dissipation study");
  add_common(ent);
  ent->add_option("--out", out_csv, "dissipation CSV path");

  CLI::App* ver = app.add_subcommand("verify", "run the invariant battery");
  ver->add_option("--seed", verify_seed, "battery seed");
  ver->add_option("--out", out_json, "verdict JSON path");

  std::string manifest_path;
  app.add_option("--manifest", manifest_path,
                 "write a run manifest JSON to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    double t0 = wall_now();
    int rc = 0;
    landau::Config cfg;
    if (!ver->parsed()) cfg = build_config(config_path, overrides);
    if (sim->parsed())
      rc = cmd_simulate(cfg, out_csv, out_summary);
    else if (rate->parsed())
      rc = cmd_rate(cfg, out_csv);
    else if (coupled->parsed())
      rc = cmd_coupled(cfg, out_csv);
    else if (pert->parsed())
      rc = cmd_perturbed(cfg, out_csv, anchors_out);
    else if (anch->parsed())
      rc = cmd_anchors(cfg, out_json);
    else if (ent->parsed())
      rc = cmd_entropy(cfg, out_csv);
    else if (ver->parsed())
      rc = cmd_verify(verify_seed, out_json);
    if (!ver->parsed()) write_manifest(manifest_path, cfg, wall_now() - t0);
    return rc;
  } catch (const landau::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const landau::BlowupError& e) {
    std::cerr << "numerical blow-up at t=" << e.at_time << ", particle "
              << e.particle << "\n";
    return 3;
  } catch (const landau::AnchorSelectionError& e) {
    std::cerr << "anchor selection failed (stage " << e.stage
              << "): " << e.what() << "\n";
    return 2;
  }
}
