#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/channels.hpp"
#include "dephcap/fock.hpp"

namespace dephcap {

struct OptimizerConfig {
  int max_iters = 10000;
  double objective_tol = 1e-9;  // bits, bound on the Frank-Wolfe gap
  int multistarts = 8;
  std::optional<double> energy_cap;  // absent: whole truncated simplex
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument on non-positive fields or a negative / NaN cap.
  void validate() const;
};

struct OptimizerDiagnostics {
  int iterations = 0;  // of the start that produced the result
  bool converged = false;
  double fw_gap_bits = 0.0;
  /// Multiplier of the energy constraint in bits per photon; 0 when slack.
  double energy_multiplier = 0.0;
  /// N - sum n p_n; +inf without a cap.
  double energy_slack = 0.0;
  std::vector<double> start_values;  // bits, one per multistart
  std::vector<bool> start_converged;
};

struct CapacityResult {
  ProbabilityDistribution p_star;
  double q_bits = 0.0;
  OptimizerDiagnostics diagnostics;
};

/// H(p) - S(sum_n p_n |psi_n><psi_n|) in bits, for unit vectors with Gram matrix g.
double mixture_objective(std::span<const double> p, const Eigen::MatrixXcd& g);

/// Gradient of mixture_objective in bits. Components with p_n = 0 are +inf
/// unless psi_n coincides with another supported vector; callers stay in the
/// interior.
std::vector<double> mixture_objective_gradient(std::span<const double> p, const Eigen::MatrixXcd& g);

/// Maximizes mixture_objective over the simplex with sum n p_n <= energy_cap
/// by mirror ascent, several starts, certified by the Frank-Wolfe gap.
CapacityResult maximize_mixture_objective(const GramMatrix& g, const OptimizerConfig& cfg);

/// Gram matrix of the environment states of the dephasing channel (real
/// amplitudes sqrt(gamma) n; the phase does not change overlaps' moduli and
/// the overlaps are real).
GramMatrix dephasing_capacity_gram(double gamma, std::size_t d);

/// Coherent information of the diagonal input p: H(p) - S(env), via the Gram trick.
double capacity_objective(const ProbabilityDistribution& p, double gamma);

/// S(rho_S) - S(N^c(rho_S)) for diagonal rho_S, from an explicit truncated
/// environment.
double reverse_coherent_information(const ProbabilityDistribution& p, double gamma);

CapacityResult optimize_capacity(double gamma, std::size_t d, const OptimizerConfig& cfg);

struct BoundsRow {
  double gamma = 0.0;
  std::size_t dim = 0;
  std::optional<double> energy_cap;
  double lower_bits = 0.0;
  double upper_bits = 0.0;
  double gap_bits = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string error;  // non-empty when the row failed
};

/// lower = Q(gamma), upper = Q(gamma / 2), optimized independently.
BoundsRow locc_bounds(double gamma, std::size_t d, const OptimizerConfig& cfg);

/// The upper bound computed from the beamsplitter image of the environment:
/// amplitudes -i sqrt(gamma) n pass a balanced beamsplitter, and the
/// optimizer runs on the complex Gram matrix of the transmitted states.
CapacityResult beamsplitter_bound_via_pipeline(double gamma, std::size_t d, const OptimizerConfig& cfg);

/// One row per gamma, in input order. Rows run on up to `threads` workers;
/// a failing row carries its message in BoundsRow::error.
std::vector<BoundsRow> gap_sweep(std::span<const double> gamma_grid, std::size_t d, const OptimizerConfig& cfg,
                                 unsigned threads = 1);

struct SaturationRow {
  BoundsRow bounds;
  /// |bound(d) - bound(previous d)|; absent on the first row.
  std::optional<double> lower_delta;
  std::optional<double> upper_delta;
};

std::vector<SaturationRow> dimension_saturation(double gamma, std::span<const std::size_t> d_list,
                                                const OptimizerConfig& cfg, unsigned threads = 1);

}  // namespace dephcap
