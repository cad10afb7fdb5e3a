#include "landau/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace landau {

double Config::effective_blob_eps(std::size_t n) const {
  if (blob_eps > 0.0) return blob_eps;
  // default blob radius N^{-(1-delta)/3} with delta = 0.2
  return std::pow(static_cast<double>(n), -0.8 / 3.0);
}

namespace {

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value '" + v + "' for key " + key);
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value '" + v + "' for key " + key);
  }
}

std::vector<std::string> split_commas(const std::string& v) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(v);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T* active(InitSpec& spec, const std::string& key) {
  T* p = std::get_if<T>(&spec);
  if (!p)
    throw ConfigError("config: key " + key +
                      " does not apply to the selected init.family");
  return p;
}

}  // namespace

void config_set(Config& cfg, const std::string& key, const std::string& value) {
  SimConfig& s = cfg.sim;
  if (key == "n") {
    s.n = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "dt") {
    s.dt = parse_real(key, value);
  } else if (key == "t_end") {
    s.t_end = parse_real(key, value);
  } else if (key == "gamma") {
    s.kernel.gamma = parse_real(key, value);
  } else if (key == "eta") {
    s.kernel.eta = parse_real(key, value);
  } else if (key == "quad_nodes") {
    s.kernel.quad_nodes = static_cast<int>(parse_int(key, value));
  } else if (key == "seed") {
    s.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "record_every") {
    s.record_every = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "init.family") {
    if (value == "gaussian")
      s.init = IsotropicGaussian{};
    else if (value == "diag-gaussian")
      s.init = DiagonalGaussian{};
    else if (value == "mixture")
      s.init = GaussianMixture{};
    else if (value == "ball")
      s.init = UniformBall{};
    else
      throw ConfigError("config: unknown init.family '" + value + "'");
  } else if (key == "init.sigma") {
    double x = parse_real(key, value);
    if (auto* g = std::get_if<IsotropicGaussian>(&s.init))
      g->sigma = x;
    else
      active<GaussianMixture>(s.init, key)->sigma = x;
  } else if (key == "init.var_x") {
    active<DiagonalGaussian>(s.init, key)->variances.x = parse_real(key, value);
  } else if (key == "init.var_y") {
    active<DiagonalGaussian>(s.init, key)->variances.y = parse_real(key, value);
  } else if (key == "init.var_z") {
    active<DiagonalGaussian>(s.init, key)->variances.z = parse_real(key, value);
  } else if (key == "init.radius") {
    active<UniformBall>(s.init, key)->radius = parse_real(key, value);
  } else if (key == "init.sep") {
    // mixture centers at (+-sep/2, 0, 0)
    auto* m = active<GaussianMixture>(s.init, key);
    double sep = parse_real(key, value);
    m->center1 = {-0.5 * sep, 0.0, 0.0};
    m->center2 = {0.5 * sep, 0.0, 0.0};
  } else if (key == "study.n_list") {
    cfg.n_list.clear();
    for (const std::string& tok : split_commas(value))
      cfg.n_list.push_back(static_cast<std::size_t>(parse_int(key, tok)));
    if (cfg.n_list.empty()) throw ConfigError("config: empty study.n_list");
  } else if (key == "study.seeds") {
    cfg.seeds = static_cast<int>(parse_int(key, value));
  } else if (key == "study.n_ref") {
    cfg.n_ref = static_cast<std::size_t>(parse_int(key, value));
  } else if (key == "study.ref_seeds") {
    cfg.ref_seeds = static_cast<int>(parse_int(key, value));
  } else if (key == "study.eta_scaling") {
    cfg.eta_scaling = parse_int(key, value) != 0;
  } else if (key == "study.t_checkpoints") {
    cfg.t_checkpoints.clear();
    for (const std::string& tok : split_commas(value))
      cfg.t_checkpoints.push_back(parse_real(key, tok));
  } else if (key == "blob.eps") {
    cfg.blob_eps = parse_real(key, value);
  } else if (key == "anchors.delta") {
    cfg.anchors_delta = parse_real(key, value);
  } else if (key == "anchors.ell") {
    cfg.anchors_ell = static_cast<int>(parse_int(key, value));
  } else if (key == "anchors.tau0") {
    cfg.anchors_tau0 = parse_real(key, value);
  } else if (key == "anchors.delta0") {
    cfg.anchors_delta0_override = parse_real(key, value);
  } else if (key == "metrics.knn_k") {
    cfg.knn_k = static_cast<int>(parse_int(key, value));
  } else if (key == "metrics.n_proj") {
    cfg.n_proj = static_cast<int>(parse_int(key, value));
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"n", "particle count"},
      {"dt", "time step"},
      {"t_end", "simulated horizon"},
      {"gamma", "potential exponent in (-2,0)"},
      {"eta", "kernel mollification radius in (0,1)"},
      {"quad_nodes", "ball-quadrature node count (even)"},
      {"seed", "master seed"},
      {"record_every", "snapshot cadence in steps (0: first/last only)"},
      {"init.family", "gaussian | diag-gaussian | mixture | ball"},
      {"init.sigma", "std dev (gaussian, mixture)"},
      {"init.var_x", "x variance (diag-gaussian)"},
      {"init.var_y", "y variance (diag-gaussian)"},
      {"init.var_z", "z variance (diag-gaussian)"},
      {"init.radius", "ball radius (ball)"},
      {"init.sep", "mixture center separation along x"},
      {"study.n_list", "comma-separated particle counts"},
      {"study.seeds", "independent runs per N"},
      {"study.n_ref", "reference cloud resolution"},
      {"study.ref_seeds", "pooled reference runs"},
      {"study.eta_scaling", "1: per-N eta = N^{-1/2} in the rate study"},
      {"study.t_checkpoints", "comma-separated checkpoint times"},
      {"blob.eps", "blob radius (0: auto N^{-0.8/3})"},
      {"anchors.delta", "anchor grid pitch"},
      {"anchors.ell", "anchor separation multiplier"},
      {"anchors.tau0", "anchor refresh window"},
      {"anchors.delta0", "cutoff ball scale override (0: ell*delta/4)"},
      {"metrics.knn_k", "entropy estimator neighbor rank"},
      {"metrics.n_proj", "sliced-distance projection count"},
  };
  return keys;
}

Config parse_config(std::istream& in) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config(in);
}

std::string config_echo(const Config& cfg) {
  std::ostringstream out;
  out.precision(17);
  const SimConfig& s = cfg.sim;
  out << "n = " << s.n << "\ndt = " << s.dt << "\nt_end = " << s.t_end
      << "\ngamma = " << s.kernel.gamma << "\neta = " << s.kernel.eta
      << "\nquad_nodes = " << s.kernel.quad_nodes << "\nseed = " << s.seed
      << "\nrecord_every = " << s.record_every << "\n";
  if (const auto* g = std::get_if<IsotropicGaussian>(&s.init)) {
    out << "init.family = gaussian\ninit.sigma = " << g->sigma << "\n";
  } else if (const auto* d = std::get_if<DiagonalGaussian>(&s.init)) {
    out << "init.family = diag-gaussian\ninit.var_x = " << d->variances.x
        << "\ninit.var_y = " << d->variances.y
        << "\ninit.var_z = " << d->variances.z << "\n";
  } else if (const auto* m = std::get_if<GaussianMixture>(&s.init)) {
    out << "init.family = mixture\ninit.sigma = " << m->sigma
        << "\ninit.sep = " << (m->center2 - m->center1).norm() << "\n";
  } else if (const auto* b = std::get_if<UniformBall>(&s.init)) {
    out << "init.family = ball\ninit.radius = " << b->radius << "\n";
  }
  out << "study.n_list =";
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
    out << (i ? "," : " ") << cfg.n_list[i];
  out << "\nstudy.seeds = " << cfg.seeds << "\nstudy.n_ref = " << cfg.n_ref
      << "\nstudy.ref_seeds = " << cfg.ref_seeds
      << "\nstudy.eta_scaling = " << (cfg.eta_scaling ? 1 : 0)
      << "\nstudy.t_checkpoints =";
  for (std::size_t i = 0; i < cfg.t_checkpoints.size(); ++i)
    out << (i ? "," : " ") << cfg.t_checkpoints[i];
  out << "\nblob.eps = " << cfg.blob_eps
      << "\nanchors.delta = " << cfg.anchors_delta
      << "\nanchors.ell = " << cfg.anchors_ell
      << "\nanchors.tau0 = " << cfg.anchors_tau0
      << "\nanchors.delta0 = " << cfg.anchors_delta0_override
      << "\nmetrics.knn_k = " << cfg.knn_k
      << "\nmetrics.n_proj = " << cfg.n_proj << "\n";
  return out.str();
}

}  // namespace landau
