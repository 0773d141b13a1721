#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "dephcap/fock.hpp"
#include "dephcap/sampling.hpp"

using namespace dephcap;

namespace {

// Amplitude from the plain series, valid for small |alpha| and m.
cplx series_amplitude(cplx alpha, int m) {
  cplx power = 1.0;
  double fact = 1.0;
  for (int k = 1; k <= m; ++k) {
    power *= alpha;
    fact *= k;
  }
  return std::exp(-0.5 * std::norm(alpha)) * power / std::sqrt(fact);
}

}  // namespace

TEST_CASE("FockVector validates its norm bookkeeping") {
  Eigen::VectorXcd v(2);
  v << 0.6, 0.8;
  CHECK_NOTHROW(FockVector(v, 0.0));
  CHECK_THROWS_AS(FockVector(v, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(FockVector(0.5 * v, -0.75), std::invalid_argument);
  const FockVector half(0.5 * v, 0.75);
  CHECK(half.squared_norm() + half.norm_deficit() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(FockVector::normalized(Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

TEST_CASE("ProbabilityDistribution checks the simplex and computes energy") {
  CHECK_THROWS_AS(ProbabilityDistribution({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(ProbabilityDistribution({1.1, -0.1}), std::invalid_argument);
  const ProbabilityDistribution p({0.25, 0.25, 0.5});
  CHECK(p.energy() == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(p.shannon_entropy() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(ProbabilityDistribution::uniform(8).shannon_entropy() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(ProbabilityDistribution::point(2, 4).energy() == 2.0);
}

TEST_CASE("vacuum coherent vector") {
  const FockVector v = coherent_vector(0.0, 4);
  CHECK(std::abs(v.amplitudes()(0) - cplx(1.0)) < 1e-15);
  for (int m = 1; m < 4; ++m) CHECK(std::abs(v.amplitudes()(m)) == 0.0);
  CHECK(v.norm_deficit() == 0.0);
  CHECK_THROWS_AS(coherent_vector(1.0, 0), std::invalid_argument);
}

TEST_CASE("coherent amplitudes match the direct series") {
  const FockVector v = coherent_vector(1.0, 32);
  CHECK(std::norm(v.amplitudes()(0)) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK(std::norm(v.amplitudes()(3)) == doctest::Approx(0.061313240195240387).epsilon(1e-14));
  const cplx alpha(0.7, -1.3);
  const FockVector w = coherent_vector(alpha, 20);
  for (int m = 0; m < 20; ++m) CHECK(std::abs(w.amplitudes()(m) - series_amplitude(alpha, m)) < 1e-14);
}

TEST_CASE("coherent vector tail mass is the Poisson tail") {
  const FockVector v = coherent_vector(cplx(0.0, -2.0), 64);
  CHECK(v.norm_deficit() <= 1e-12);
  CHECK(v.norm_deficit() >= 0.0);
  // mean 4, truncated at 10 levels
  const FockVector t = coherent_vector(cplx(0.0, -2.0), 10);
  CHECK(t.norm_deficit() == doctest::Approx(0.0081322427969338632).epsilon(1e-12));
}

TEST_CASE("large amplitudes stay finite") {
  const double a = std::sqrt(900.0);
  const FockVector v = coherent_vector(a, env_truncation(900.0));
  CHECK(std::isfinite(v.amplitudes().squaredNorm()));
  CHECK(v.squared_norm() + v.norm_deficit() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v.norm_deficit() <= 1e-12);
}

TEST_CASE("poisson_upper_tail against frozen high-precision values") {
  struct Case {
    double mu;
    std::size_t n;
    double tail;
  };
  const Case cases[] = {
      {4.0, 10, 0.0081322427969338632},   {4.0, 64, 5.2335931912314532e-53},
      {1.0, 5, 0.0036598468273437123},    {100.0, 180, 4.1048515842011111e-13},
      {900.0, 1200, 1.0495032671776437e-21}, {0.5, 3, 0.014387677966970687},
      {20.0, 20, 0.52974273316076001},
  };
  for (const Case& c : cases) {
    CAPTURE(c.mu);
    CAPTURE(c.n);
    CHECK(poisson_upper_tail(c.mu, c.n) == doctest::Approx(c.tail).epsilon(1e-10));
  }
  CHECK(poisson_upper_tail(3.0, 0) == 1.0);
}

TEST_CASE("env_truncation keeps every tail below 1e-12") {
  for (const double mu : {0.0, 0.3, 1.0, 9.0, 81.0, 400.0, 1089.0}) {
    const std::size_t d = env_truncation(mu);
    CHECK(d == static_cast<std::size_t>(std::ceil(mu + 10.0 * std::sqrt(mu) + 20.0)));
    CHECK(poisson_upper_tail(mu, d) <= 1e-12);
  }
}

TEST_CASE("coherent_overlap closed form") {
  CHECK(std::abs(coherent_overlap(cplx(1.5, -0.5), cplx(1.5, -0.5)) - 1.0) < 1e-15);
  const cplx z(1.2, 0.7);
  const double expect = std::exp(-0.5 * std::norm(z));
  CHECK(std::abs(coherent_overlap(0.0, z) - expect) < 1e-15);
  // truncated inner-product oracle at 128 levels
  const FockVector v0 = coherent_vector(0.0, 128);
  const FockVector vz = coherent_vector(z, 128);
  CHECK(std::abs(v0.inner(vz) - coherent_overlap(0.0, z)) < 1e-12);
  const cplx a(0.0, -1.0);
  const cplx b(0.0, -2.0);
  CHECK(std::norm(coherent_overlap(a, b)) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK(std::abs(coherent_vector(a, 128).inner(coherent_vector(b, 128)) - coherent_overlap(a, b)) < 1e-12);
  // far apart in log space: no overflow, just zero
  CHECK(std::abs(coherent_overlap(40.0, -40.0)) == 0.0);
}

TEST_CASE("overlap equals the large-truncation inner product") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const cplx a(3.0 * standard_normal(rng), 3.0 * standard_normal(rng));
    const cplx b(3.0 * standard_normal(rng), 3.0 * standard_normal(rng));
    const auto d = static_cast<std::size_t>(4.0 * std::max(std::norm(a), std::norm(b)) + 40.0);
    const cplx num = coherent_vector(a, d).inner(coherent_vector(b, d));
    CHECK(std::abs(num - coherent_overlap(a, b)) < 1e-10);
  }
}

TEST_CASE("gram_matrix special cases") {
  const std::vector<cplx> same(4, cplx(0.3, 0.2));
  const GramMatrix g1 = gram_matrix(same);
  CHECK((g1.entries() - Eigen::MatrixXcd::Ones(4, 4)).cwiseAbs().maxCoeff() < 1e-14);

  const std::vector<cplx> pair{0.0, cplx(0.0, -std::sqrt(2.0))};
  CHECK(std::abs(gram_matrix(pair)(0, 1)) == doctest::Approx(0.36787944117144233).epsilon(1e-14));

  const std::vector<cplx> far{0.0, 12.0, 24.0, cplx(0.0, 12.0)};
  CHECK((gram_matrix(far).entries() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("GramMatrix rejects invalid matrices") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(GramMatrix{m}, std::invalid_argument);  // not Hermitian
  m(1, 0) = 0.5;
  m(1, 1) = 0.9;
  CHECK_THROWS_AS(GramMatrix{m}, std::invalid_argument);  // diagonal
  m(1, 1) = 1.0;
  m(0, 1) = m(1, 0) = 2.0;
  CHECK_THROWS_AS(GramMatrix{m}, std::invalid_argument);  // indefinite
}

TEST_CASE("random Gram matrices are Hermitian PSD with unit diagonal") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 1 + rng() % 10;
    std::vector<cplx> amps(d);
    for (auto& a : amps) a = cplx(2.0 * standard_normal(rng), 2.0 * standard_normal(rng));
    const GramMatrix g = gram_matrix(amps);
    const auto& e = g.entries();
    CHECK((e - e.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((e.diagonal().array() - 1.0).abs().maxCoeff() <= 1e-12);
    CHECK(g.min_eigenvalue() >= -1e-10);
  }
}

TEST_CASE("squared norm plus deficit is one") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const cplx a(4.0 * standard_normal(rng), 4.0 * standard_normal(rng));
    const std::size_t d = 1 + rng() % 80;
    const FockVector v = coherent_vector(a, d);
    CHECK(v.norm_deficit() >= 0.0);
    CHECK(std::abs(v.squared_norm() + v.norm_deficit() - 1.0) <= 1e-12);
  }
}

TEST_CASE("dephasing environment amplitudes") {
  const auto a = dephasing_env_amplitudes(2.0, 3);
  REQUIRE(a.size() == 3);
  CHECK(std::abs(a[0]) == 0.0);
  CHECK(std::abs(a[2] - cplx(0.0, -2.0 * std::sqrt(2.0))) < 1e-15);
}
