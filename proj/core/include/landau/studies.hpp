#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "landau/config.hpp"
#include "landau/perturbation.hpp"

namespace landau {

struct RunManifest {
  std::string config_echo;
  std::uint64_t seed = 0;
  std::string version;
  double wall_seconds = 0.0;

  std::string to_json() const;
};

struct RateSample {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double w2sq = 0.0;
  double t_wall = 0.0;
};

struct RateRecord {
  std::size_t n = 0;
  int seeds = 0;
  double median_w2sq = 0.0;
  double iqr = 0.0;
};

struct RateReport {
  std::vector<RateSample> samples;
  std::vector<RateRecord> per_n;
  double slope = 0.0;  // log-log fit of median against N
  bool slope_defined = false;
  std::size_t n_ref = 0;  // reference-resolution metadata
  int ref_seeds = 0;
  double ref_eta = 0.0;
};

/// Mean-field convergence experiment: simulate each N over many seeds,
/// measure the squared W2 distance of the final cloud to an equal-size
/// subsample of a pooled high-resolution reference, and fit the decay.
/// Requires gamma in (-1,0) and n_ref >= 8 * max N.
RateReport run_rate_study(const Config& config);

/// Header `N,seed,w2sq,t_wall`.
void write_rate_csv(std::ostream& out, const RateReport& report);

struct DissipationPoint {
  double t = 0.0;
  double H_hat = 0.0;  // pooled entropy estimate (integral f log f sign)
  double H_stderr = 0.0;
  double I_hat = 0.0;  // pooled weighted-Fisher plug-in estimate
  double m2 = 0.0;
};

/// Entropy/Fisher/moment time series on pooled multi-seed runs at the
/// configured checkpoint times. Requires n >= 512 and seeds >= 16.
std::vector<DissipationPoint> run_dissipation_study(const Config& config);

/// Header `t,H_hat,H_stderr,I_hat,m2`.
void write_dissipation_csv(std::ostream& out,
                           const std::vector<DissipationPoint>& series);

struct TriggerSample {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double frequency = 0.0;  // fraction of steps with an active cutoff
};

struct TriggerReport {
  AnchorSet anchors;
  std::vector<TriggerSample> samples;
  std::vector<std::pair<std::size_t, double>> median_per_n;
};

/// Perturbation activity experiment: anchors picked from initial-law
/// samples, then perturbed runs per (N, seed) counting the steps where the
/// cutoff functional is positive.
TriggerReport run_trigger_study(const Config& config);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed = true;

  std::string to_json() const;
};

/// The full invariant battery across all modules, at documented trial
/// counts. Deterministic given the seed.
VerifyReport verify_suite(std::uint64_t seed);

}  // namespace landau
