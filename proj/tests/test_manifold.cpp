#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "rheat/manifold.hpp"

using namespace rheat;
using oracles::urand;

namespace {
const RealInterval kOmega = interval_two_pi();
}

TEST_CASE("published constant rows satisfy the hypothesis") {
  struct Row {
    double theta_num, theta_den;  // theta = pi * num/den
    double r_c, lambda_printed;
  };
  const Row rows[] = {{0.0, 1.0, 9.77, 0.99},
                      {1.0, 8.0, 9.02, 0.98},
                      {1.0, 4.0, 6.88, 0.98},
                      {3.0, 8.0, 3.68, 0.96}};
  for (const Row& r : rows) {
    RealInterval theta = scale(interval_pi(), r.theta_num / r.theta_den);
    ManifoldCertificate cert =
        hypothesis_check(theta, kOmega, RealInterval(r.r_c), RealInterval(0.01),
                         RealInterval(0.06));
    CHECK(cert.hypothesis_ok);
    CHECK(std::fabs(cert.lambda.hi - r.lambda_printed) < 0.01);
    CHECK(cert.lambda.hi < 1.0);
    // r_c sits just below the necessary ceiling mu/4
    CHECK(r.r_c < cert.mu.lo / 4.0);
  }
}

TEST_CASE("degenerate radii pass trivially") {
  ManifoldCertificate cert =
      hypothesis_check(RealInterval(0.0), kOmega, RealInterval(0.0),
                       RealInterval(1e-9), RealInterval(0.06));
  CHECK(cert.hypothesis_ok);
  CHECK(cert.lambda.hi < 1e-6);
}

TEST_CASE("choose_rho: feasibility and failure") {
  // the published pi/4 row is feasible; the near-optimal rho is far below the
  // round value 0.06 used in the table
  RealInterval mu = center_rate_mu(scale(interval_pi(), 0.25), kOmega);
  auto rho = choose_rho(mu, RealInterval(6.88), RealInterval(0.01));
  REQUIRE(rho.has_value());
  CHECK(rho->hi < 0.06);
  ManifoldCertificate cert =
      hypothesis_check(scale(interval_pi(), 0.25), kOmega, RealInterval(6.88),
                       RealInterval(0.01), *rho);
  CHECK(cert.hypothesis_ok);  // the strict gap inequality is re-verified here

  // r_c = mu/4 violates the necessary inequality
  RealInterval quarter = scale(mu, 0.25);
  CHECK(!choose_rho(mu, quarter, RealInterval(0.01)).has_value());

  // scalar-oracle cross-check at mu = 20, r_c = 1, r_s = 0.1: the quadratic
  // 4 r_s rho^2 - gap rho + 2 r_s < 0 derived by isolating rho in the gap
  // inequality, solved in long double
  auto r2 = choose_rho(RealInterval(20.0), RealInterval(1.0), RealInterval(0.1));
  REQUIRE(r2.has_value());
  long double gap = 20.0L - 4.0L - 0.2L;
  long double A = gap / 0.8L;
  long double lower = A - 0.5L * std::sqrt(4.0L * A * A - 2.0L);
  CHECK(r2->hi == Catch::Approx((double)(lower * 1.05L)).epsilon(1e-9));
  // the chosen rho satisfies the gap inequality it was derived from
  RealInterval d2 = scale(RealInterval(1.0), 2.0) +
                    scale((RealInterval(1.0) + *r2) * RealInterval(0.1), 2.0);
  RealInterval d3 = scale(*r2 * (RealInterval(1.0) + *r2 * RealInterval(0.1)) +
                              RealInterval(0.1),
                          2.0);
  CHECK((d3 / (RealInterval(20.0) - d2)).hi < r2->lo);
}

TEST_CASE("lambda agrees with its factored form") {
  for (int rep = 0; rep < 200; ++rep) {
    RealInterval theta(urand(-1.3, 1.3));
    RealInterval r_c(urand(0.0, 3.0)), r_s(urand(1e-4, 0.5)), rho(urand(1e-3, 0.2));
    ManifoldCertificate cert = hypothesis_check(theta, kOmega, r_c, r_s, rho);
    if (!(cert.ok_d1 && cert.ok_d4)) continue;
    RealInterval m1 = cert.mu - cert.d1, m4 = cert.mu - cert.d4;
    RealInterval factored =
        scale((rho * (r_c + rho * r_s) + r_s), 2.0) * scale(r_s, 2.0) / (m1 * m4) +
        scale(r_c + rho * r_s, 2.0) / m1;
    CHECK(factored.lo <= cert.lambda.hi);
    CHECK(cert.lambda.lo <= factored.hi);
  }
}

TEST_CASE("lambda is monotone in the radii") {
  RealInterval theta(0.2);
  RealInterval rho(0.01);
  double prev = 0.0;
  for (double rc : {1.0, 2.0, 4.0}) {
    ManifoldCertificate c =
        hypothesis_check(theta, kOmega, RealInterval(rc), RealInterval(0.01), rho);
    REQUIRE(c.ok_d1);
    CHECK(c.lambda.hi >= prev);
    prev = c.lambda.hi;
  }
  prev = 0.0;
  for (double rs : {0.01, 0.1, 0.3}) {
    ManifoldCertificate c =
        hypothesis_check(theta, kOmega, RealInterval(2.0), RealInterval(rs), rho);
    REQUIRE(c.ok_d1);
    CHECK(c.lambda.hi >= prev);
    prev = c.lambda.hi;
  }
}

TEST_CASE("trapping membership around a contracted state") {
  // a well-contracted state: |a0| ~ 2 leaves a wide gap mu - 4 r_c, so the
  // near-optimal rho is small enough to fit inside the 2% inflation collar
  FourierVec state(2);
  // Re(e^{i pi/3} a0) < 0: a0 = -2 e^{-i pi/3} ~ (-1, 1.732)
  state.coeff(0) = ComplexInterval(-1.0, 1.732);
  state.coeff(1) = ComplexInterval(0.003, 0.001);
  state.coeff(-1) = ComplexInterval(0.003, 0.001);
  RealInterval theta = scale(interval_pi(), 1.0 / 3.0);
  RealInterval eps(0.0, 1e-6);
  ManifoldCertificate cert = trapping_membership(state, eps, theta, kOmega);
  CHECK(cert.hypothesis_ok);
  CHECK(cert.membership_ok);
  CHECK(cert.lambda.hi < 1.0);
  CHECK(cert.rho.hi < 0.01);

  // same magnitudes on the wrong side of the half-plane must fail
  FourierVec bad = state;
  bad.coeff(0) = ComplexInterval(1.0, -1.732);
  ManifoldCertificate cbad = trapping_membership(bad, eps, theta, kOmega);
  CHECK(!cbad.membership_ok);
}

TEST_CASE("membership fails when the radii are infeasible") {
  FourierVec big(1);
  big.coeff(0) = ComplexInterval(-12.0, 0.0);  // |a0| > mu/4 at theta = 0
  ManifoldCertificate cert =
      trapping_membership(big, RealInterval(0.0), RealInterval(0.0), kOmega);
  CHECK(!cert.pass());
  CHECK(cert.note.find("no feasible rho") != std::string::npos);
}
