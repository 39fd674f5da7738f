#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "rheat/evolution.hpp"

using namespace rheat;
using oracles::urand;

namespace {

ChebFourier zero_series(double h, int n = 4, int N = 2) {
  return ChebFourier(0.0, h, n, N);
}

TailConstants handmade_tc(double W_inf, double W_inf_bar, double W_inf_sup,
                          double norm_X_s, double W_m) {
  TailConstants tc;
  tc.h = RealInterval(0.1);
  tc.W_inf = RealInterval(W_inf);
  tc.W_inf_bar = RealInterval(W_inf_bar);
  tc.W_inf_sup = RealInterval(W_inf_sup);
  tc.W_inf_step = RealInterval(W_inf_sup);
  tc.norm_X_s = RealInterval(norm_X_s);
  tc.kappa = RealInterval(1.0) -
             scale(RealInterval(W_m) * tc.W_inf_bar * isq(tc.norm_X_s), 4.0);
  return tc;
}

}  // namespace

TEST_CASE("tail constants for the zero solution") {
  const double h = 2.5e-3;
  RealInterval theta = scale(interval_pi(), 1.0 / 3.0);
  TailConstants tc = tail_constants(zero_series(h), 0, theta, interval_two_pi(),
                                    RealInterval(1.0));
  // mu_1 = omega^2 cos(pi/3) = 2 pi^2
  const long double two_pi_sq = 2.0L * 3.14159265358979323846264338328L *
                                3.14159265358979323846264338328L;
  CHECK(tc.mu.contains((double)two_pi_sq));

  // W_inf = (1 - e^{-mu h})/mu at abar = 0
  long double mu = two_pi_sq;
  long double want = -std::expm1l(-mu * h) / mu;
  CHECK(tc.W_inf.contains((double)want));
  CHECK(tc.W_inf_sup.contains(1.0));
  CHECK(tc.kappa.contains(1.0));
  CHECK(tc.tail_ok());
}

TEST_CASE("tail constants with a constant profile") {
  const double h = 2.5e-3;
  ChebFourier abar(0.0, h, 3, 0);
  abar.coeff(0, 0) = ComplexInterval(15.0, 0.0);
  RealInterval theta = scale(interval_pi(), 1.0 / 3.0);
  TailConstants tc =
      tail_constants(abar, 0, theta, interval_two_pi(), RealInterval(1.0));
  CHECK(tc.norm_X.contains(15.0));
  long double mu = 2.0L * 3.14159265358979323846264338328L *
                   3.14159265358979323846264338328L;
  long double x = 30.0L - mu;
  long double want = std::expm1l(x * h) / x;
  CHECK(tc.W_inf.contains((double)want));
  CHECK((double)want == Catch::Approx(2.533e-3).epsilon(2e-3));
}

TEST_CASE("W_h assembly: hand matrix oracle") {
  TailConstants tc = handmade_tc(0.1, 0.01, 1.0, 1.0, 1.0);
  CHECK(tc.kappa.contains(0.96));
  EvolutionBound b = assemble_Wh(RealInterval(1.0), tc);
  CHECK(b.m11.contains(1.0 / 0.96));
  CHECK(b.m12.contains(0.2 / 0.96));
  CHECK(b.m22.contains(1.0 + 0.04 / 0.96));
  CHECK(b.W_h.contains(1.25));
}

TEST_CASE("W_h degenerates to max(W_m, W_inf_sup) without side modes") {
  TailConstants tc = handmade_tc(0.3, 0.05, 1.7, 0.0, 2.0);
  EvolutionBound b = assemble_Wh(RealInterval(2.0), tc);
  CHECK(b.W_h.contains(2.0));  // max(2.0, 1.7)
  CHECK(b.m12.contains(0.0));

  TailConstants tc2 = handmade_tc(0.3, 0.05, 2.5, 0.0, 2.0);
  CHECK(assemble_Wh(RealInterval(2.0), tc2).W_h.contains(2.5));
}

TEST_CASE("W_h is monotone in the side-mode norm") {
  double prev = 0.0;
  for (double s : {0.0, 0.5, 1.0, 1.5}) {
    TailConstants tc = handmade_tc(0.1, 0.001, 1.0, s, 1.0);
    double wh = assemble_Wh(RealInterval(1.0), tc).W_h.hi;
    CHECK(wh >= prev - 1e-15);
    prev = wh;
  }
}

TEST_CASE("assembly requires a positive coupling margin") {
  TailConstants tc = handmade_tc(0.5, 0.5, 1.0, 2.0, 1.0);  // kappa = 1 - 8 < 0
  CHECK(!tc.tail_ok());
  CHECK_THROWS_AS(assemble_Wh(RealInterval(1.0), tc), std::domain_error);
}

TEST_CASE("lemma quadrature harness: zero profile hits equality") {
  TailConstants tc = tail_constants(zero_series(0.01), 0, RealInterval(0.0),
                                    interval_two_pi(), RealInterval(1.0));
  LemmaCheckReport rep = lemma_bounds_check(tc, 25);
  CHECK(rep.violations == 0);
  CHECK(rep.max_excess <= 0.0);
  CHECK(rep.certified > rep.samples / 2);
}

TEST_CASE("lemma quadrature harness: random dissipative profiles") {
  for (int set = 0; set < 20; ++set) {
    const double h = urand(1e-3, 0.02);
    ChebFourier abar(0.0, h, 3, 1);
    // keep ||abar||_X < mu/2 so the tail genuinely decays
    double amp = urand(0.0, 9.0);
    abar.coeff(0, 0) = ComplexInterval(amp, 0.0);
    abar.coeff(0, 1) = ComplexInterval(urand(-2.0, 2.0), urand(-1.0, 1.0));
    TailConstants tc = tail_constants(abar, set % 3, RealInterval(urand(-1.2, 1.2)),
                                      interval_two_pi(), RealInterval(1.0));
    LemmaCheckReport rep = lemma_bounds_check(tc, 50, 100 + set);
    CHECK(rep.violations == 0);
    CHECK(rep.max_excess <= 0.0);
  }
}
