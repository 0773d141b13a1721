#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "dephcap/capacity.hpp"
#include "dephcap/qubit_squash.hpp"
#include "dephcap/sampling.hpp"

using namespace dephcap;

namespace {

constexpr double kOneMinusH2OverlapE1 = 0.099954408476464904;  // 1 - H2((1 + e^-1)/2)

OptimizerConfig quick(int starts = 3) {
  OptimizerConfig c;
  c.multistarts = starts;
  return c;
}

// Maximum-entropy distribution on 0..d-1 with mean N: p_n ~ exp(-beta n),
// beta by bisection on the mean.
std::vector<double> geometric_oracle(std::size_t d, double mean) {
  const auto dist = [d](double beta) {
    std::vector<double> p(d);
    double z = 0.0;
    for (std::size_t n = 0; n < d; ++n) z += p[n] = std::exp(-beta * static_cast<double>(n));
    for (double& v : p) v /= z;
    return p;
  };
  const auto mean_of = [](const std::vector<double>& p) {
    double m = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
    return m;
  };
  double lo = 0.0;
  double hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_of(dist(mid)) > mean ? lo : hi) = mid;
  }
  return dist(0.5 * (lo + hi));
}

// Central difference of f along e_n - e_m, refined by one Richardson step.
template <typename F>
double richardson(F f, std::vector<double> p, std::size_t n, std::size_t m, double h) {
  const auto central = [&](double step) {
    std::vector<double> a = p, b = p;
    a[n] += step;
    a[m] -= step;
    b[n] -= step;
    b[m] += step;
    return (f(a) - f(b)) / (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

}  // namespace

TEST_CASE("capacity objective anchors") {
  for (std::size_t d = 2; d <= 10; ++d)
    CHECK(capacity_objective(ProbabilityDistribution::uniform(d), 0.0) ==
          doctest::Approx(std::log2(static_cast<double>(d))).epsilon(1e-13));
  CHECK(std::abs(capacity_objective(ProbabilityDistribution::point(3, 6), 1.3)) < 1e-13);
  CHECK(capacity_objective(ProbabilityDistribution::uniform(2), 2.0) ==
        doctest::Approx(kOneMinusH2OverlapE1).epsilon(1e-12));
}

TEST_CASE("reverse coherent information equals the capacity objective") {
  std::mt19937_64 rng(127);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t d = 2 + rng() % 9;
    const double gamma = 6.0 * unit_uniform(rng);
    const ProbabilityDistribution p(random_simplex(d, rng));
    worst = std::max(worst, std::abs(reverse_coherent_information(p, gamma) - capacity_objective(p, gamma)));
  }
  CHECK(worst <= 1e-12);
  const ProbabilityDistribution p({0.1, 0.6, 0.3});
  CHECK(reverse_coherent_information(p, 0.0) == doctest::Approx(p.shannon_entropy()).epsilon(1e-13));
}

TEST_CASE("capacity objective is concave") {
  std::mt19937_64 rng(131);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t d = 2 + rng() % 9;
    const double gamma = 8.0 * unit_uniform(rng);
    const std::vector<double> p = random_simplex(d, rng);
    const std::vector<double> q = random_simplex(d, rng);
    const double fp = capacity_objective(ProbabilityDistribution(p), gamma);
    const double fq = capacity_objective(ProbabilityDistribution(q), gamma);
    for (const double lam : {0.25, 0.5, 0.75}) {
      std::vector<double> m(d);
      for (std::size_t n = 0; n < d; ++n) m[n] = lam * p[n] + (1.0 - lam) * q[n];
      worst = std::max(worst, lam * fp + (1.0 - lam) * fq - capacity_objective(ProbabilityDistribution(m), gamma));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("analytic gradient matches finite differences") {
  std::mt19937_64 rng(137);
  for (int i = 0; i < 40; ++i) {
    const std::size_t d = 2 + rng() % 9;
    const double gamma = 4.0 * unit_uniform(rng);
    const GramMatrix g = dephasing_capacity_gram(gamma, d);
    std::vector<double> p = random_simplex(d, rng);
    for (double& v : p) v = 0.9 * v + 0.1 / static_cast<double>(d);  // keep 1e-4 steps inside
    const auto f = [&](const std::vector<double>& x) { return mixture_objective(x, g.entries()); };
    const std::vector<double> grad = mixture_objective_gradient(p, g.entries());
    for (std::size_t n = 1; n < d; ++n) {
      const double fine = richardson(f, p, n, 0, 1e-6);
      const double coarse = richardson(f, p, n, 0, 1e-4);
      CHECK(std::abs(fine - coarse) <= 1e-6);
      CHECK(std::abs((grad[n] - grad[0]) - fine) <= 1e-7);
    }
  }
}

TEST_CASE("optimizer configuration is validated") {
  OptimizerConfig c;
  c.energy_cap = -0.5;
  CHECK_THROWS_AS(optimize_capacity(1.0, 4, c), std::invalid_argument);
  c.energy_cap.reset();
  c.multistarts = 0;
  CHECK_THROWS_AS(optimize_capacity(1.0, 4, c), std::invalid_argument);
  CHECK_THROWS_AS(optimize_capacity(1.0, 1, OptimizerConfig{}), std::invalid_argument);
}

TEST_CASE("noiseless channel: uniform input, log2 d") {
  for (std::size_t d = 2; d <= 10; ++d) {
    const CapacityResult r = optimize_capacity(0.0, d, quick());
    CHECK(r.diagnostics.converged);
    CHECK(r.q_bits == doctest::Approx(std::log2(static_cast<double>(d))).epsilon(1e-10));
    for (std::size_t n = 0; n < d; ++n) CHECK(std::abs(r.p_star[n] - 1.0 / static_cast<double>(d)) <= 1e-6);
  }
}

TEST_CASE("orthogonal environment kills the capacity") {
  const CapacityResult r = optimize_capacity(144.0, 2, quick());
  CHECK(r.q_bits <= 1e-6);
  CHECK(r.q_bits >= -1e-12);
}

TEST_CASE("energy-constrained noiseless channel is maximum entropy") {
  for (const double mean : {0.3, 1.5, 3.0}) {
    OptimizerConfig c = quick();
    c.energy_cap = mean;
    const CapacityResult r = optimize_capacity(0.0, 10, c);
    const std::vector<double> oracle = geometric_oracle(10, mean);
    for (std::size_t n = 0; n < 10; ++n) CHECK(std::abs(r.p_star[n] - oracle[n]) <= 1e-6);
    CHECK(std::abs(r.q_bits - ProbabilityDistribution(oracle).shannon_entropy()) <= 1e-8);
    CHECK(std::abs(r.diagnostics.energy_slack) <= 1e-9);
    CHECK(r.diagnostics.energy_multiplier > 0.0);
  }
  OptimizerConfig zero = quick();
  zero.energy_cap = 0.0;
  const CapacityResult r0 = optimize_capacity(0.7, 6, zero);
  CHECK(r0.q_bits == 0.0);
  CHECK(r0.p_star[0] == 1.0);
}

TEST_CASE("multistarts agree and the KKT report is consistent") {
  for (const double gamma : {0.3, 1.0, 2.5, 6.0})
    for (const std::size_t d : {3u, 6u, 10u})
      for (const std::optional<double> cap : {std::optional<double>{}, std::optional<double>{1.0}, std::optional<double>{4.0}}) {
        CAPTURE(gamma);
        CAPTURE(d);
        OptimizerConfig c;
        c.energy_cap = cap;
        const CapacityResult r = optimize_capacity(gamma, d, c);
        CHECK(r.diagnostics.converged);
        CHECK(r.diagnostics.fw_gap_bits <= c.objective_tol);
        double lo = r.q_bits;
        double hi = r.q_bits;
        for (std::size_t s = 0; s < r.diagnostics.start_values.size(); ++s)
          if (r.diagnostics.start_converged[s]) {
            lo = std::min(lo, r.diagnostics.start_values[s]);
            hi = std::max(hi, r.diagnostics.start_values[s]);
          }
        CHECK(hi - lo <= 1e-7);
        if (cap) {
          const double slack = r.diagnostics.energy_slack;
          const bool slack_ok = slack >= 1e-9 && r.diagnostics.energy_multiplier == 0.0;
          const bool binding = std::abs(slack) <= 1e-9;
          CHECK((slack_ok || binding));
          CHECK(slack >= -1e-9);
        }
      }
}

TEST_CASE("optimum dominates random feasible inputs") {
  std::mt19937_64 rng(139);
  const double gamma = 1.7;
  const CapacityResult r = optimize_capacity(gamma, 7, quick());
  for (int i = 0; i < 200; ++i)
    CHECK(capacity_objective(ProbabilityDistribution(random_simplex(7, rng)), gamma) <= r.q_bits + 1e-12);
}

TEST_CASE("LOCC bounds") {
  for (std::size_t d = 2; d <= 10; ++d) {
    const BoundsRow row = locc_bounds(0.0, d, quick());
    CHECK(row.lower_bits == doctest::Approx(std::log2(static_cast<double>(d))).epsilon(1e-10));
    CHECK(std::abs(row.gap_bits) <= 1e-9);
  }
  const BoundsRow row = locc_bounds(3.0, 2, quick());
  CHECK(row.lower_bits <= row.upper_bits);
  CHECK(row.upper_bits <= 1.0 + 1e-9);
  CHECK(row.converged);
}

TEST_CASE("beamsplitter pipeline reproduces the halved-noise capacity") {
  for (const std::size_t d : {2u, 5u})
    for (const double gamma : {0.0, 0.4, 1.5, 4.0, 9.0}) {
      const double bs = beamsplitter_bound_via_pipeline(gamma, d, quick()).q_bits;
      CHECK(std::abs(bs - optimize_capacity(0.5 * gamma, d, quick()).q_bits) <= 1e-9);
    }
  CHECK(beamsplitter_bound_via_pipeline(0.0, 4, quick()).q_bits == doctest::Approx(2.0).epsilon(1e-10));
  // uniform input through the transmitted environment at gamma = 4: overlap e^{-1}
  std::vector<cplx> amps = dephasing_env_amplitudes(4.0, 2);
  for (cplx& a : amps) a = beamsplitter_coherent_amplitude(a, kBalancedTransmissivity);
  const std::vector<double> half{0.5, 0.5};
  CHECK(mixture_objective(half, gram_matrix(amps).entries()) == doctest::Approx(kOneMinusH2OverlapE1).epsilon(1e-12));
}

TEST_CASE("environment entropy ignores input coherences") {
  std::mt19937_64 rng(149);
  for (int i = 0; i < 30; ++i) {
    const std::size_t d = 2 + rng() % 4;
    const double gamma = 3.0 * unit_uniform(rng);
    const KrausChannel half = dephasing_kraus(0.5 * gamma, d);
    const Eigen::MatrixXcd rho = random_density_entries(d, rng);
    const Eigen::MatrixXcd diag = rho.diagonal().asDiagonal();
    const double env_rho = von_neumann_entropy(complementary_from_kraus(half, DensityMatrix(rho)));
    const double env_diag = von_neumann_entropy(complementary_from_kraus(half, DensityMatrix(diag)));
    CHECK(std::abs(env_rho - env_diag) <= 1e-9);
    // so the bound functional at rho never beats its value at diag(rho)
    const double f_rho = von_neumann_entropy(DensityMatrix(rho)) - env_rho;
    const double f_diag = von_neumann_entropy(DensityMatrix(diag)) - env_diag;
    CHECK(f_rho <= f_diag + 1e-9);
    std::vector<double> p(d);
    for (std::size_t n = 0; n < d; ++n) p[n] = rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real();
    CHECK(std::abs(f_diag - capacity_objective(ProbabilityDistribution(p), 0.5 * gamma)) <= 1e-9);
  }
}

TEST_CASE("gap sweep") {
  std::vector<double> grid;
  for (int i = 0; i <= 24; ++i) grid.push_back(0.5 * i);
  const std::vector<BoundsRow> rows = gap_sweep(grid, 4, quick(), 2);
  REQUIRE(rows.size() == grid.size());
  CHECK(std::abs(rows.front().gap_bits) <= 1e-9);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].gamma == grid[i]);
    CHECK(rows[i].error.empty());
    CHECK(rows[i].gap_bits >= -1e-9);
    CHECK(rows[i].lower_bits >= -1e-9);
    CHECK(rows[i].upper_bits <= 2.0 + 1e-9);
    if (i > 0) CHECK(rows[i].lower_bits <= rows[i - 1].lower_bits + 1e-8);
  }
  const std::vector<double> bad{1.0, -2.0, 3.0};
  const std::vector<BoundsRow> mixed = gap_sweep(bad, 3, quick());
  CHECK(mixed[0].error.empty());
  CHECK_FALSE(mixed[1].error.empty());
  CHECK(mixed[2].error.empty());
  CHECK_THROWS_AS(gap_sweep(std::vector<double>{}, 3, quick()), std::invalid_argument);
}

TEST_CASE("dimension saturation") {
  const std::vector<std::size_t> ds{2, 3, 4, 5, 6};
  const std::vector<SaturationRow> rows = dimension_saturation(3.0, ds, quick(), 2);
  REQUIRE(rows.size() == ds.size());
  CHECK_FALSE(rows[0].upper_delta.has_value());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].bounds.lower_bits >= rows[i - 1].bounds.lower_bits - 1e-9);
    CHECK(rows[i].bounds.upper_bits >= rows[i - 1].bounds.upper_bits - 1e-9);
    CHECK(*rows[i].upper_delta == doctest::Approx(rows[i].bounds.upper_bits - rows[i - 1].bounds.upper_bits));
  }
  const std::vector<double> g{3.0};
  const BoundsRow sweep2 = gap_sweep(g, 2, quick()).front();
  CHECK(std::abs(sweep2.lower_bits - rows[0].bounds.lower_bits) <= 1e-12);
  CHECK(std::abs(sweep2.upper_bits - rows[0].bounds.upper_bits) <= 1e-12);
  const std::vector<std::size_t> unsorted{4, 3};
  CHECK_THROWS_AS(dimension_saturation(1.0, unsorted, quick()), std::invalid_argument);
}

TEST_CASE("qubit environment coordinates") {
  const double gamma = 2.2;
  const QubitEnvironment env = qubit_environment(gamma);
  CHECK_FALSE(env.degenerate);
  CHECK(std::abs(env.psi0(0) - 1.0) < 1e-15);
  CHECK(std::abs(env.psi1(0) - std::exp(-gamma / 2.0)) < 1e-12);
  CHECK(std::abs(std::abs(env.psi1(1)) - std::sqrt(1.0 - std::exp(-gamma))) < 1e-12);
  CHECK(qubit_environment(0.0).degenerate);
}

TEST_CASE("squashed Holevo matches the generic Kraus path") {
  std::mt19937_64 rng(151);
  for (int i = 0; i < 50; ++i) {
    const double gamma = 8.0 * unit_uniform(rng) + 0.05;
    const double p1 = unit_uniform(rng);
    const QubitSquashParams params{i % 2 ? QubitFamily::A : QubitFamily::B, std::numbers::pi * unit_uniform(rng),
                                   2.0 * std::numbers::pi * unit_uniform(rng)};
    const QubitEnvironment env = qubit_environment(gamma);
    const KrausChannel ch = symmetric_qubit_kraus(params);
    std::vector<DensityMatrix> outs;
    for (const auto* psi : {&env.psi0, &env.psi1})
      outs.push_back(ch.apply(DensityMatrix(Eigen::MatrixXcd(*psi * psi->adjoint()))));
    const double generic = holevo_information(CQState::mixed(ProbabilityDistribution({1.0 - p1, p1}), outs));
    CHECK(std::abs(squashed_holevo(p1, env, params) - generic) <= 1e-10);
  }
  CHECK_THROWS_AS(squashed_holevo(1.5, qubit_environment(1.0), {}), std::invalid_argument);
}

TEST_CASE("qubit squash bound") {
  const QubitSquashResult zero = qubit_squash_bound(0.0, quick(1));
  CHECK(zero.bound_bits == doctest::Approx(1.0).epsilon(1e-12));
  for (const double gamma : {1.0, 4.0}) {
    const QubitSquashResult r = qubit_squash_bound(gamma, quick(1));
    CHECK(r.bound_bits >= optimize_capacity(gamma, 2, quick(1)).q_bits - 1e-9);
    CHECK(r.params.theta >= 0.0);
    CHECK(r.params.theta <= std::numbers::pi);
    CHECK(r.p1 >= 0.0);
    CHECK(r.p1 <= 1.0);
    if (gamma > 2.0 && gamma < 8.0)
      CHECK(r.bound_bits <= beamsplitter_bound_via_pipeline(gamma, 2, quick(1)).q_bits + 1e-9);
  }
}
