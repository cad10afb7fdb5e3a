#include "landau/kernel.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "landau/ensemble.hpp"

namespace landau {

void KernelParams::validate() const {
  if (!(gamma > -2.0 && gamma < 0.0))
    throw std::invalid_argument("kernel: gamma must lie in (-2, 0)");
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("kernel: eta must be finite and >= 0");
  if (eta > 0.0 && eta >= 1.0)
    throw std::invalid_argument("kernel: nonzero eta must be < 1");
  if (quad_nodes <= 0 || quad_nodes % 2 != 0)
    throw std::invalid_argument("kernel: quad_nodes must be positive and even");
}

double radial_pow(double r2, double p) {
  if (p == -1.0) return 1.0 / std::sqrt(r2);
  if (p == -0.5) return 1.0 / std::sqrt(std::sqrt(r2));
  if (p == -1.5) {
    double s = std::sqrt(r2);
    return 1.0 / (s * std::sqrt(s));
  }
  if (p == -2.0) return 1.0 / r2;
  return std::pow(r2, 0.5 * p);
}

namespace {

void require_finite(const Vec3& v, const char* who) {
  if (!v.finite()) throw std::invalid_argument(std::string(who) + ": non-finite input");
}

double halton(std::uint32_t i, std::uint32_t base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * (i % base);
    i /= base;
  }
  return r;
}

}  // namespace

SymMat3 eval_a(double gamma, const Vec3& v) {
  require_finite(v, "eval_a");
  double r2 = v.norm2();
  if (r2 == 0.0) return {};
  double w = radial_pow(r2, gamma);
  SymMat3 m = SymMat3::diag(r2, r2, r2) - SymMat3::outer(v);
  return w * m;
}

Vec3 eval_b(double gamma, const Vec3& v) {
  require_finite(v, "eval_b");
  double r2 = v.norm2();
  if (r2 == 0.0) return {};
  return (-2.0 * radial_pow(r2, gamma)) * v;
}

SymMat3 eval_sigma(double gamma, const Vec3& v) {
  require_finite(v, "eval_sigma");
  double r2 = v.norm2();
  if (r2 == 0.0) return {};
  double w = radial_pow(r2, 0.5 * gamma - 1.0);
  SymMat3 m = SymMat3::diag(r2, r2, r2) - SymMat3::outer(v);
  return w * m;
}

const std::vector<Vec3>& ball_nodes(int count) {
  if (count <= 0 || count % 2 != 0)
    throw std::invalid_argument("ball_nodes: count must be positive and even");
  static std::mutex mu;
  static std::map<int, std::vector<Vec3>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(count);
  if (it != cache.end()) return it->second;

  // Halton (2,3,5) points mapped into the unit ball, then symmetrized under
  // u -> -u so every odd integrand cancels exactly.
  std::vector<Vec3> nodes;
  nodes.reserve(count);
  for (int i = 1; i <= count / 2; ++i) {
    double ct = 2.0 * halton(i, 2) - 1.0;
    double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    double phi = 2.0 * M_PI * halton(i, 3);
    double r = std::cbrt(halton(i, 5));
    Vec3 u{r * st * std::cos(phi), r * st * std::sin(phi), r * ct};
    nodes.push_back(u);
    nodes.push_back(-u);
  }
  return cache.emplace(count, std::move(nodes)).first->second;
}

Vec3 eval_b_mollified(const KernelParams& params, const Vec3& x) {
  if (params.eta == 0.0) return eval_b(params.gamma, x);
  require_finite(x, "eval_b_mollified");
  const auto& nodes = ball_nodes(params.quad_nodes);
  Vec3 acc{};
  for (const Vec3& u : nodes) acc += eval_b(params.gamma, x - params.eta * u);
  return acc * (1.0 / static_cast<double>(nodes.size()));
}

SymMat3 eval_a_mollified(const KernelParams& params, const Vec3& x) {
  if (params.eta == 0.0) return eval_a(params.gamma, x);
  require_finite(x, "eval_a_mollified");
  const auto& nodes = ball_nodes(params.quad_nodes);
  SymMat3 acc{};
  for (const Vec3& u : nodes) acc += eval_a(params.gamma, x - params.eta * u);
  return acc * (1.0 / static_cast<double>(nodes.size()));
}

FieldPair field_ab(const KernelParams& params, const Ensemble& ensemble,
                   const Vec3& v) {
  if (ensemble.size() == 0)
    throw std::invalid_argument("field_ab: empty ensemble");
  static const std::vector<Vec3> kZeroNode{Vec3{}};
  const auto& nodes =
      params.eta > 0.0 ? ball_nodes(params.quad_nodes) : kZeroNode;
  const double gamma = params.gamma;
  const double eta = params.eta;

  Vec3 bacc{};
  SymMat3 aacc{};
  for (const Vec3& vj : ensemble.velocities) {
    Vec3 base = v - vj;
    for (const Vec3& u : nodes) {
      Vec3 y = base - eta * u;
      double r2 = y.norm2();
      if (r2 == 0.0) continue;  // kernel convention: a(0)=0, b(0)=0
      double w = radial_pow(r2, gamma);
      bacc += (-2.0 * w) * y;
      aacc += w * (SymMat3::diag(r2, r2, r2) - SymMat3::outer(y));
    }
  }
  double norm = 1.0 / (static_cast<double>(ensemble.size()) *
                       static_cast<double>(nodes.size()));
  return {bacc * norm, aacc * norm};
}

Vec3 field_b(const KernelParams& params, const Ensemble& ensemble,
             const Vec3& v) {
  return field_ab(params, ensemble, v).b;
}

SymMat3 field_a(const KernelParams& params, const Ensemble& ensemble,
                const Vec3& v) {
  return field_ab(params, ensemble, v).a;
}

ExponentReport theoretical_exponents(double gamma, double q) {
  if (!(gamma > -2.0 && gamma < 0.0))
    throw std::invalid_argument("theoretical_exponents: gamma outside (-2,0)");
  if (!(q > 0.0))
    throw std::invalid_argument("theoretical_exponents: q must be positive");
  ExponentReport r;
  r.q_gamma = gamma * gamma / (2.0 + gamma);
  r.p1 = 3.0 / (3.0 + gamma);
  r.alpha = (1.0 - 6.0 / q) * (2.0 + 2.0 * gamma) / 3.0;
  r.p2_defined = q > r.q_gamma;
  r.p2 = r.p2_defined ? (3.0 * q - 3.0 * gamma) / (q - 3.0 * gamma)
                      : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace landau
