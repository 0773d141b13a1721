#include "dephcap/qubit_squash.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dephcap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kThetaPoints = 181;
constexpr std::size_t kPhiPoints = 120;
constexpr double kParamResolution = 1e-8;
constexpr std::size_t kRefineSeeds = 4;

struct KrausPair {
  Eigen::Matrix2cd k1;
  Eigen::Matrix2cd k2;
};

// Same operators as symmetric_qubit_kraus, without the heap round trip.
KrausPair fixed_kraus(const QubitSquashParams& params) {
  const double s = std::sin(params.theta);
  const double c = std::cos(params.theta);
  const cplx e = std::polar(1.0, params.phi);
  const double h = std::numbers::sqrt2 / 2.0;
  KrausPair kp{Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero()};
  if (params.family == QubitFamily::A) {
    kp.k1(0, 0) = s;
    kp.k1(1, 1) = h;
    kp.k2(0, 1) = h;
    kp.k2(1, 0) = e * c;
  } else {
    kp.k1(0, 0) = 1.0;
    kp.k1(1, 1) = h * s;
    kp.k2(0, 1) = h * s;
    kp.k2(1, 1) = e * c;
  }
  return kp;
}

Eigen::Matrix2cd image(const KrausPair& kp, const Eigen::Vector2cd& psi) {
  const Eigen::Vector2cd a = kp.k1 * psi;
  const Eigen::Vector2cd b = kp.k2 * psi;
  return a * a.adjoint() + b * b.adjoint();
}

double h2x2(const Eigen::Matrix2cd& rho) {
  const double t = rho(0, 0).real() + rho(1, 1).real();
  const double diff = rho(0, 0).real() - rho(1, 1).real();
  const double r = std::sqrt(diff * diff + 4.0 * std::norm(rho(0, 1)));
  double h = 0.0;
  for (const double l : {0.5 * (t + r), 0.5 * (t - r)})
    if (l > 0.0) h -= l * std::log2(l);
  return h;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double holevo(double p1, const QubitEnvironment& env, const KrausPair& kp) {
  const Eigen::Matrix2cd r0 = image(kp, env.psi0);
  const Eigen::Matrix2cd r1 = image(kp, env.psi1);
  const double p0 = 1.0 - p1;
  return h2x2(p0 * r0 + p1 * r1) - p0 * h2x2(r0) - p1 * h2x2(r1);
}

double wrap_phi(double phi) {
  phi = std::fmod(phi, 2.0 * kPi);
  return phi < 0.0 ? phi + 2.0 * kPi : phi;
}

SquashSup pattern_search(double p1, const QubitEnvironment& env, SquashSup start) {
  double d_theta = kPi / static_cast<double>(kThetaPoints - 1);
  double d_phi = 2.0 * kPi / static_cast<double>(kPhiPoints);
  SquashSup best = start;
  while (d_theta > kParamResolution || d_phi > kParamResolution) {
    bool moved = false;
    const std::array<std::array<double, 2>, 4> moves{{{d_theta, 0.0}, {-d_theta, 0.0}, {0.0, d_phi}, {0.0, -d_phi}}};
    for (const auto& mv : moves) {
      QubitSquashParams q = best.params;
      q.theta = std::clamp(q.theta + mv[0], 0.0, kPi);
      q.phi = wrap_phi(q.phi + mv[1]);
      const double v = holevo(p1, env, fixed_kraus(q));
      if (v > best.holevo_bits) {
        best = {v, q};
        moved = true;
      }
    }
    if (!moved) {
      d_theta *= 0.5;
      d_phi *= 0.5;
    }
  }
  return best;
}

}  // namespace

QubitEnvironment qubit_environment(double gamma) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("qubit_environment: gamma must be >= 0");
  QubitEnvironment env;
  const std::size_t d_env = env_truncation(gamma);
  std::vector<FockVector> states{FockVector::basis(0, d_env),
                                 coherent_vector(dephasing_env_amplitudes(gamma, 2)[1], d_env)};
  try {
    const GramSchmidtEmbedding emb = gram_schmidt_embed(states);
    env.psi0 = emb.coordinates.col(0);
    env.psi1 = emb.coordinates.col(1);
    // The truncation deficit is below 1e-12; renormalize so the qubit states are exact.
    env.psi1.normalize();
  } catch (const std::domain_error&) {
    env.psi0 = Eigen::Vector2cd(1.0, 0.0);
    env.psi1 = env.psi0;
    env.degenerate = true;
  }
  return env;
}

double squashed_holevo(double p1, const QubitEnvironment& env, const QubitSquashParams& params) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("squashed_holevo: p1 must lie in [0, 1]");
  const KrausChannel ch = symmetric_qubit_kraus(params);  // validates the parameter ranges
  (void)ch;
  return holevo(p1, env, fixed_kraus(params));
}

SquashSup squash_sup(double p1, const QubitEnvironment& env) {
  std::vector<SquashSup> grid;
  grid.reserve(2 * kThetaPoints * kPhiPoints);
  for (const QubitFamily fam : {QubitFamily::A, QubitFamily::B})
    for (std::size_t i = 0; i < kThetaPoints; ++i)
      for (std::size_t j = 0; j < kPhiPoints; ++j) {
        const QubitSquashParams q{fam, kPi * static_cast<double>(i) / static_cast<double>(kThetaPoints - 1),
                                  2.0 * kPi * static_cast<double>(j) / static_cast<double>(kPhiPoints)};
        grid.push_back({holevo(p1, env, fixed_kraus(q)), q});
      }
  const std::size_t seeds = std::min(kRefineSeeds, grid.size());
  std::partial_sort(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(seeds), grid.end(),
                    [](const SquashSup& a, const SquashSup& b) { return a.holevo_bits > b.holevo_bits; });
  SquashSup best = grid.front();
  for (std::size_t s = 0; s < seeds; ++s) {
    const SquashSup r = pattern_search(p1, env, grid[s]);
    if (r.holevo_bits > best.holevo_bits) best = r;
  }
  return best;
}

QubitSquashResult qubit_squash_bound(double gamma, const OptimizerConfig& cfg) {
  cfg.validate();
  const QubitEnvironment env = qubit_environment(gamma);
  const double p_hi = cfg.energy_cap ? std::min(1.0, *cfg.energy_cap) : 1.0;

  QubitSquashResult best;
  best.bound_bits = -std::numeric_limits<double>::infinity();
  auto consider = [&](double p1) {
    const SquashSup inner = squash_sup(p1, env);
    const double v = binary_entropy(p1) - inner.holevo_bits;
    if (v > best.bound_bits) {
      best.bound_bits = v;
      best.p1 = p1;
      best.params = inner.params;
    }
    return v;
  };

  constexpr int kScan = 41;
  std::vector<double> values(kScan);
  int arg = 0;
  for (int i = 0; i < kScan; ++i) {
    values[static_cast<std::size_t>(i)] = consider(p_hi * static_cast<double>(i) / (kScan - 1));
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(arg)]) arg = i;
  }
  if (p_hi > 0.0) {
    const CapacityResult cap = optimize_capacity(gamma, 2, cfg);
    consider(std::clamp(cap.p_star[1], 0.0, p_hi));

    // Golden section on the bracket around the best scan point.
    double a = p_hi * static_cast<double>(std::max(arg - 1, 0)) / (kScan - 1);
    double b = p_hi * static_cast<double>(std::min(arg + 1, kScan - 1)) / (kScan - 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = consider(x1);
    double f2 = consider(x2);
    while (b - a > 1e-10) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = consider(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = consider(x1);
      }
    }
  }
  return best;
}

}  // namespace dephcap
