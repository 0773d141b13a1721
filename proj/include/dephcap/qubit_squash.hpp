#pragma once

#include <Eigen/Dense>

#include "dephcap/capacity.hpp"
#include "dephcap/channels.hpp"

namespace dephcap {

/// The d = 2 environment states |0> and |-i sqrt(gamma)> written in the
/// orthonormal basis obtained by Gram-Schmidt from them. When the pair is
/// numerically dependent both map to e_0.
struct QubitEnvironment {
  Eigen::Vector2cd psi0;
  Eigen::Vector2cd psi1;
  bool degenerate = false;
};

QubitEnvironment qubit_environment(double gamma);

/// I(S;E') in bits for labels {0, 1} with P(1) = p1, conditionals psi0/psi1
/// sent through the symmetric qubit channel `params`.
double squashed_holevo(double p1, const QubitEnvironment& env, const QubitSquashParams& params);

struct SquashSup {
  double holevo_bits = 0.0;
  QubitSquashParams params;
};

/// sup over both families, theta and phi of squashed_holevo: a 181 x 120 grid
/// per family, then pattern search from the best grid points down to 1e-8.
SquashSup squash_sup(double p1, const QubitEnvironment& env);

struct QubitSquashResult {
  double bound_bits = 0.0;
  double p1 = 0.0;
  QubitSquashParams params;  // attaining the inner sup at p1
};

/// sup over p1 of H2(p1) - squash_sup(p1). cfg supplies the energy cap (p1 <= N)
/// and the settings of the d = 2 capacity run whose optimum seeds the scan.
QubitSquashResult qubit_squash_bound(double gamma, const OptimizerConfig& cfg);

}  // namespace dephcap
