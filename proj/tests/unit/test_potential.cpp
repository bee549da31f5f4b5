#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "qbe/potential.hpp"
#include "qbe/rng.hpp"

using namespace qbe;
using test::random_q;

namespace {

// central difference of F along a coefficient direction
double fd_gradient_coeff(const Potential& pot, const SymTraceless3& q, int i,
                         double h) {
  SymTraceless3 qp = q, qm = q;
  qp[i] += h;
  qm[i] -= h;
  return (pot.value(qp) - pot.value(qm)) / (2.0 * h);
}

}  // namespace

TEST_CASE("polynomial potential value matches the invariant formula") {
  SplitMix64 rng(21u);
  const PolynomialPotential pot(0.7, -0.4, 1.3);
  for (int it = 0; it < 200; ++it) {
    const SymTraceless3 q = random_q(rng);
    const double z = q.norm2();
    const double want = 0.5 * 0.7 * z + (-0.4 / 3.0) * trace_cube(q) + 0.25 * 1.3 * z * z;
    CHECK(pot.value(q) == doctest::Approx(want).epsilon(1e-13));
  }
  SymTraceless3 zero;
  CHECK(pot.value(zero) == 0.0);
}

TEST_CASE("gradient formula aQ + bQ^2 + c|Q|^2 Q and its projection") {
  SplitMix64 rng(22u);
  const PolynomialPotential pot(1.1, 0.6, 0.9);
  for (int it = 0; it < 200; ++it) {
    const SymTraceless3 q = random_q(rng);
    const Mat3 qm = q.to_mat();
    const Mat3 want = 1.1 * qm + 0.6 * (qm * qm) + 0.9 * q.norm2() * qm;
    const Mat3 got = pot.gradient(q);
    for (int k = 0; k < 9; ++k)
      CHECK(got.m[k] == doctest::Approx(want.m[k]).epsilon(1e-12));
    // projection = coefficients of the traceless symmetric part
    const SymTraceless3 pg = pot.projected_gradient(q);
    const SymTraceless3 pg2 = SymTraceless3::from_mat(got);
    for (int i = 0; i < 5; ++i)
      CHECK(pg[i] == doctest::Approx(pg2[i]).epsilon(1e-12));
  }
}

TEST_CASE("projected gradient agrees with finite differences of the value") {
  SplitMix64 rng(23u);
  const PolynomialPotential pot(1.0, 0.5, 1.0);
  const double h = 1e-5;
  for (int it = 0; it < 100; ++it) {
    const SymTraceless3 q = random_q(rng);
    const SymTraceless3 pg = pot.projected_gradient(q);
    for (int i = 0; i < 5; ++i) {
      const double fd = fd_gradient_coeff(pot, q, i, h);
      CHECK(pg[i] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("curvature at zero equals the quadratic coefficient") {
  CHECK(PolynomialPotential(2.5, -3.0, 4.0).curvature_at_zero() == 2.5);
  CHECK(PolynomialPotential(-0.75, 1.0, 1.0).curvature_at_zero() == -0.75);
}

TEST_CASE("hypotheses hold for a = 1, b = 0, c = 1") {
  const PolynomialPotential pot(1.0, 0.0, 1.0);
  const auto rep = verify_hypotheses(pot);
  CHECK(rep.positivity_ok);
  CHECK(rep.growth_ok);
  CHECK_FALSE(rep.witness.has_value());
  // dF:Q = |Q|^2 + |Q|^4 >= 0 everywhere, so the search keeps the default
  // split of the sampled range
  CHECK(rep.r1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.r2 == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.lambda.has_value());
  // F/|Q|^2 = 1/2 + |Q|^2/4 has infimum 1/2 near the origin
  CHECK(*rep.lambda == doctest::Approx(0.5).epsilon(0.02));
  // and supremum 3/4 at |Q| = 1
  CHECK(rep.alpha == doctest::Approx(0.75).epsilon(0.02));
  CHECK(rep.samples > 1000);
}

TEST_CASE("cubic term within the confining range keeps the hypotheses") {
  const PolynomialPotential pot(1.0, 0.5, 1.0);
  const auto rep = verify_hypotheses(pot);
  CHECK(rep.positivity_ok);
  CHECK(rep.growth_ok);
  CHECK(rep.r2 > 0.0);
  CHECK(rep.r1 > 0.0);
  CHECK(rep.r1 <= rep.r2);
}

TEST_CASE("negative quadratic coefficient fails positivity and growth") {
  const PolynomialPotential pot(-0.5, 0.0, 1.0);
  const auto rep = verify_hypotheses(pot);
  // F = -|Q|^2/4 + |Q|^4/4 < 0 near zero, and dF:Q < 0 there as well
  CHECK_FALSE(rep.positivity_ok);
  CHECK_FALSE(rep.growth_ok);
  CHECK(rep.r1 == 0.0);
  CHECK(rep.r2 == 0.0);
  REQUIRE(rep.witness.has_value());
  CHECK(pot.value(*rep.witness) < 0.0);
}

TEST_CASE("strong cubic term breaks positivity") {
  const PolynomialPotential pot(1.0, 10.0, 1.0);
  const auto rep = verify_hypotheses(pot);
  CHECK_FALSE(rep.positivity_ok);
  REQUIRE(rep.witness.has_value());
  CHECK(pot.value(*rep.witness) <= 0.0);
}

TEST_CASE("report description carries the verdicts") {
  const auto good = describe(verify_hypotheses(PolynomialPotential(1.0, 0.0, 1.0)));
  CHECK(good.find("positivity_ok=1") != std::string::npos);
  CHECK(good.find("growth_ok=1") != std::string::npos);
  CHECK(good.find("r2=") != std::string::npos);
  const auto bad = describe(verify_hypotheses(PolynomialPotential(-0.5, 0.0, 1.0)));
  CHECK(bad.find("positivity_ok=0") != std::string::npos);
}
