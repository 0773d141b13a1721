#include "dephcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dephcap/entropy.hpp"
#include "dephcap/parallel.hpp"

namespace dephcap {

namespace {

constexpr double kLn2 = std::numbers::ln2;
// Eigenvalues below this are eigensolver roundoff for a unit-trace matrix.
constexpr double kSpectrumFloor = 1e-14;
constexpr double kMaxStep = 1e4;

struct Evaluation {
  double q = 0.0;          // nats
  std::vector<double> g;  // nats
};

Evaluation evaluate(std::span<const double> p, const Eigen::MatrixXcd& gram) {
  const MixtureSpectrum ms = pure_mixture_spectrum(p, gram);
  const auto d = static_cast<Eigen::Index>(p.size());
  Evaluation ev;
  double h = 0.0;
  for (double pn : p)
    if (pn > 0.0) h -= pn * std::log(pn);
  double s = 0.0;
  Eigen::VectorXd lam_log = Eigen::VectorXd::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double l = ms.eigenvalues(k);
    if (l > 0.0) s -= l * std::log(l);
    if (l > kSpectrumFloor) lam_log(k) = l * std::log(l);
  }
  ev.q = h - s;
  // dQ/dp_n = -ln p_n + <psi_n| ln rho |psi_n>, and
  // <psi_n| ln rho |psi_n> = (1/p_n) sum_k lam_k ln lam_k |V_nk|^2.
  ev.g.assign(p.size(), 0.0);
  const Eigen::VectorXd weighted = ms.eigenvectors.cwiseAbs2() * lam_log;
  for (Eigen::Index n = 0; n < d; ++n) {
    const double pn = p[static_cast<std::size_t>(n)];
    ev.g[static_cast<std::size_t>(n)] =
        pn > 0.0 ? weighted(n) / pn - std::log(pn) : std::numeric_limits<double>::infinity();
  }
  return ev;
}

// max <g, q> over the simplex with sum n q_n <= cap: attained at a vertex
// e_k with k <= cap or at a two-point mixture with energy exactly cap.
double linear_max(std::span<const double> g, std::optional<double> cap) {
  const std::size_t d = g.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < d; ++k)
    if (!cap || static_cast<double>(k) <= *cap) best = std::max(best, g[k]);
  if (cap && *cap < static_cast<double>(d - 1)) {
    const double n_cap = *cap;
    for (std::size_t a = 0; a < d && static_cast<double>(a) <= n_cap; ++a)
      for (std::size_t b = a + 1; b < d; ++b) {
        const double bd = static_cast<double>(b);
        if (bd <= n_cap) continue;
        const double ad = static_cast<double>(a);
        const double wa = (bd - n_cap) / (bd - ad);
        best = std::max(best, wa * g[a] + (1.0 - wa) * g[b]);
      }
  }
  return best;
}

double frank_wolfe_gap(std::span<const double> p, std::span<const double> g, std::optional<double> cap) {
  double inner = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n)
    if (p[n] > 0.0) inner += p[n] * g[n];
  return std::max(linear_max(g, cap) - inner, 0.0);
}

double energy_of(std::span<const double> p) {
  double e = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) e += static_cast<double>(n) * p[n];
  return e;
}

// softmax(logits - lambda n), in place into p.
void tilt(std::span<const double> logits, double lambda, std::vector<double>& p) {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < logits.size(); ++n) top = std::max(top, logits[n] - lambda * static_cast<double>(n));
  double z = 0.0;
  for (std::size_t n = 0; n < logits.size(); ++n) {
    p[n] = std::exp(logits[n] - lambda * static_cast<double>(n) - top);
    z += p[n];
  }
  for (double& v : p) v /= z;
}

// Normalized exp(logits - lambda n) with the smallest lambda >= 0 meeting
// the energy cap. Returns lambda.
double project(std::span<const double> logits, std::optional<double> cap, std::vector<double>& p) {
  tilt(logits, 0.0, p);
  if (!cap || energy_of(p) <= *cap) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  for (;;) {
    tilt(logits, hi, p);
    if (energy_of(p) <= *cap) break;
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::domain_error("energy projection: cap unreachable");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    tilt(logits, mid, p);
    if (energy_of(p) <= *cap)
      hi = mid;
    else
      lo = mid;
  }
  tilt(logits, hi, p);
  return hi;
}

// KKT multiplier of a binding energy constraint: at the optimum
// g_n = c + nu n on the support, so nu is the p-weighted regression slope.
double energy_slope(std::span<const double> p, std::span<const double> g) {
  double mn = 0.0;
  double mg = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    mn += p[n] * static_cast<double>(n);
    mg += p[n] * g[n];
  }
  double cov = 0.0;
  double var = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double dn = static_cast<double>(n) - mn;
    cov += p[n] * dn * (g[n] - mg);
    var += p[n] * dn * dn;
  }
  return var > 0.0 ? cov / var : 0.0;
}

// Uniform on (0, 1) from the raw 64-bit stream; portable across standard libraries.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> start_point(std::size_t d, int index, std::uint64_t seed) {
  std::vector<double> p(d, 1.0 / static_cast<double>(d));
  if (index == 0) return p;
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(index));
  double z = 0.0;
  for (double& v : p) {
    v = -std::log(open_uniform(rng));
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

struct StartOutcome {
  std::vector<double> p;
  double q = 0.0;  // nats
  double gap = 0.0;  // nats
  double multiplier = 0.0;  // nats per photon
  int iterations = 0;
  bool converged = false;
};

StartOutcome ascend(std::vector<double> p0, const Eigen::MatrixXcd& gram, const OptimizerConfig& cfg) {
  const std::size_t d = p0.size();
  const double tol_nats = cfg.objective_tol * kLn2;
  std::vector<double> logits(d);
  for (std::size_t n = 0; n < d; ++n) logits[n] = std::log(p0[n]);
  StartOutcome out;
  out.p.assign(d, 0.0);
  project(logits, cfg.energy_cap, out.p);

  Evaluation cur = evaluate(out.p, gram);
  std::vector<double> trial(d);
  double step = 1.0;
  for (out.iterations = 0; out.iterations < cfg.max_iters; ++out.iterations) {
    out.gap = frank_wolfe_gap(out.p, cur.g, cfg.energy_cap);
    if (out.gap <= tol_nats) {
      out.converged = true;
      break;
    }
    // Steps up to 1 never decrease the objective (it is 1-smooth relative to
    // negative entropy). A longer step is kept when the new gradient still
    // points along the move; by concavity that cannot lose value, and unlike
    // comparing objective values it stays meaningful next to the optimum.
    for (;;) {
      for (std::size_t n = 0; n < d; ++n) logits[n] = std::log(out.p[n]) + step * cur.g[n];
      project(logits, cfg.energy_cap, trial);
      const bool interior = std::all_of(trial.begin(), trial.end(), [](double v) { return v > 0.0; });
      if (step > 1.0 && !interior) {
        step = std::max(1.0, 0.5 * step);
        continue;
      }
      if (!interior) throw std::domain_error("mirror ascent: iterate left the simplex interior");
      Evaluation next = evaluate(trial, gram);
      double slope = 0.0;
      for (std::size_t n = 0; n < d; ++n) slope += next.g[n] * (trial[n] - out.p[n]);
      if (step > 1.0 && slope < 0.0) {
        step = std::max(1.0, 0.5 * step);
        continue;
      }
      out.p.swap(trial);
      cur = std::move(next);
      step = std::min(2.0 * step, kMaxStep);
      break;
    }
  }
  if (!out.converged) {
    out.gap = frank_wolfe_gap(out.p, cur.g, cfg.energy_cap);
    out.converged = out.gap <= tol_nats;
  }
  if (cfg.energy_cap && energy_of(out.p) >= *cfg.energy_cap - 1e-9) out.multiplier = energy_slope(out.p, cur.g);
  out.q = cur.q;
  return out;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters <= 0) throw std::invalid_argument("OptimizerConfig: max_iters must be positive");
  if (!(objective_tol > 0.0)) throw std::invalid_argument("OptimizerConfig: objective_tol must be positive");
  if (multistarts <= 0) throw std::invalid_argument("OptimizerConfig: multistarts must be positive");
  if (energy_cap && !(*energy_cap >= 0.0))
    throw std::invalid_argument("OptimizerConfig: energy cap must be >= 0 (infeasible otherwise)");
}

double mixture_objective(std::span<const double> p, const Eigen::MatrixXcd& g) {
  return evaluate(p, g).q / kLn2;
}

std::vector<double> mixture_objective_gradient(std::span<const double> p, const Eigen::MatrixXcd& g) {
  std::vector<double> grad = evaluate(p, g).g;
  for (double& v : grad) v /= kLn2;
  return grad;
}

CapacityResult maximize_mixture_objective(const GramMatrix& g, const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t d = g.dim();
  if (d == 0) throw std::invalid_argument("maximize_mixture_objective: empty Gram matrix");
  OptimizerDiagnostics diag;
  diag.energy_slack = cfg.energy_cap ? *cfg.energy_cap : std::numeric_limits<double>::infinity();
  if (d == 1 || (cfg.energy_cap && *cfg.energy_cap == 0.0)) {
    diag.converged = true;
    diag.start_values.assign(static_cast<std::size_t>(cfg.multistarts), 0.0);
    diag.start_converged.assign(static_cast<std::size_t>(cfg.multistarts), true);
    return {ProbabilityDistribution::point(0, d), 0.0, diag};
  }

  StartOutcome best;
  bool have = false;
  for (int s = 0; s < cfg.multistarts; ++s) {
    StartOutcome o = ascend(start_point(d, s, cfg.seed), g.entries(), cfg);
    diag.start_values.push_back(o.q / kLn2);
    diag.start_converged.push_back(o.converged);
    if (!have || o.q > best.q) {
      best = std::move(o);
      have = true;
    }
  }
  diag.iterations = best.iterations;
  diag.converged = best.converged;
  diag.fw_gap_bits = best.gap / kLn2;
  diag.energy_multiplier = best.multiplier / kLn2;
  if (cfg.energy_cap) diag.energy_slack = *cfg.energy_cap - energy_of(best.p);
  const double q_bits = best.q / kLn2;
  return {ProbabilityDistribution(std::move(best.p)), q_bits, diag};
}

GramMatrix dephasing_capacity_gram(double gamma, std::size_t d) {
  if (!(gamma >= 0.0)) throw std::invalid_argument("dephasing_capacity_gram: gamma must be >= 0");
  if (d == 0) throw std::invalid_argument("dephasing_capacity_gram: d must be positive");
  std::vector<cplx> amps(d);
  for (std::size_t n = 0; n < d; ++n) amps[n] = std::sqrt(gamma) * static_cast<double>(n);
  return gram_matrix(amps);
}

double capacity_objective(const ProbabilityDistribution& p, double gamma) {
  return p.shannon_entropy() - entropy_of_pure_mixture(p, dephasing_capacity_gram(gamma, p.size()));
}

double reverse_coherent_information(const ProbabilityDistribution& p, double gamma) {
  const double s_in = von_neumann_entropy(DensityMatrix::diagonal(p.values()));
  return s_in - complementary_cq_output(p, gamma).average_entropy();
}

CapacityResult optimize_capacity(double gamma, std::size_t d, const OptimizerConfig& cfg) {
  if (d < 2) throw std::invalid_argument("optimize_capacity: d must be >= 2");
  return maximize_mixture_objective(dephasing_capacity_gram(gamma, d), cfg);
}

BoundsRow locc_bounds(double gamma, std::size_t d, const OptimizerConfig& cfg) {
  const CapacityResult lo = optimize_capacity(gamma, d, cfg);
  const CapacityResult up = optimize_capacity(0.5 * gamma, d, cfg);
  BoundsRow row;
  row.gamma = gamma;
  row.dim = d;
  row.energy_cap = cfg.energy_cap;
  row.lower_bits = lo.q_bits;
  row.upper_bits = up.q_bits;
  row.gap_bits = up.q_bits - lo.q_bits;
  row.iterations = lo.diagnostics.iterations + up.diagnostics.iterations;
  row.converged = lo.diagnostics.converged && up.diagnostics.converged;
  return row;
}

CapacityResult beamsplitter_bound_via_pipeline(double gamma, std::size_t d, const OptimizerConfig& cfg) {
  if (d < 2) throw std::invalid_argument("beamsplitter_bound_via_pipeline: d must be >= 2");
  std::vector<cplx> amps = dephasing_env_amplitudes(gamma, d);
  for (cplx& a : amps) a = beamsplitter_coherent_amplitude(a, kBalancedTransmissivity);
  return maximize_mixture_objective(gram_matrix(amps), cfg);
}

std::vector<BoundsRow> gap_sweep(std::span<const double> gamma_grid, std::size_t d, const OptimizerConfig& cfg,
                                 unsigned threads) {
  if (gamma_grid.empty()) throw std::invalid_argument("gap_sweep: empty gamma grid");
  cfg.validate();
  std::vector<BoundsRow> rows(gamma_grid.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    try {
      rows[i] = locc_bounds(gamma_grid[i], d, cfg);
    } catch (const std::exception& e) {
      rows[i] = BoundsRow{};
      rows[i].gamma = gamma_grid[i];
      rows[i].dim = d;
      rows[i].energy_cap = cfg.energy_cap;
      rows[i].error = e.what();
    }
  });
  return rows;
}

std::vector<SaturationRow> dimension_saturation(double gamma, std::span<const std::size_t> d_list,
                                                const OptimizerConfig& cfg, unsigned threads) {
  if (d_list.empty()) throw std::invalid_argument("dimension_saturation: empty dimension list");
  for (std::size_t i = 1; i < d_list.size(); ++i)
    if (d_list[i] <= d_list[i - 1]) throw std::invalid_argument("dimension_saturation: dimensions must increase");
  cfg.validate();
  std::vector<SaturationRow> rows(d_list.size());
  std::vector<std::string> errors(d_list.size());
  parallel_for(rows.size(), threads, [&](std::size_t i) {
    try {
      rows[i].bounds = locc_bounds(gamma, d_list[i], cfg);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!errors[i].empty()) throw std::runtime_error("dimension_saturation: d = " + std::to_string(d_list[i]) + ": " + errors[i]);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].lower_delta = std::abs(rows[i].bounds.lower_bits - rows[i - 1].bounds.lower_bits);
    rows[i].upper_delta = std::abs(rows[i].bounds.upper_bits - rows[i - 1].bounds.upper_bits);
  }
  return rows;
}

}  // namespace dephcap
