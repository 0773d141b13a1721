#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dephcap/entropy.hpp"

namespace dephcap {

/// Uniform on (0, 1) built from raw 64-bit output, so draws are identical
/// across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

inline double standard_normal(std::mt19937_64& rng) {
  const double u = unit_uniform(rng);
  const double v = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * 3.14159265358979323846 * v);
}

/// Flat Dirichlet draw on the d-simplex.
inline std::vector<double> random_simplex(std::size_t d, std::mt19937_64& rng) {
  std::vector<double> p(d);
  double z = 0.0;
  for (double& v : p) {
    v = -std::log(unit_uniform(rng));
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

/// Ginibre matrix normalized to unit trace (Hilbert-Schmidt measure for rank = d).
inline Eigen::MatrixXcd random_density_entries(std::size_t d, std::mt19937_64& rng, std::size_t rank = 0) {
  const auto n = static_cast<Eigen::Index>(d);
  const auto r = static_cast<Eigen::Index>(rank == 0 ? d : rank);
  Eigen::MatrixXcd g(n, r);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < r; ++j) g(i, j) = cplx(standard_normal(rng), standard_normal(rng));
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

inline DensityMatrix random_density(std::size_t d, std::mt19937_64& rng, std::size_t rank = 0) {
  return DensityMatrix(random_density_entries(d, rng, rank));
}

}  // namespace dephcap
