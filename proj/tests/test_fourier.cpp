#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "rheat/fourier.hpp"

using namespace rheat;
using oracles::cplx;
using oracles::urand;

namespace {

FourierVec phi_initial() {
  FourierVec u(1);
  u.coeff(0) = ComplexInterval(50.0, 0.0);
  u.coeff(1) = ComplexInterval(-25.0, 0.0);
  u.coeff(-1) = ComplexInterval(-25.0, 0.0);
  return u;
}

FourierVec random_vec(int N, double span) {
  FourierVec v(N);
  for (int k = -N; k <= N; ++k)
    v.coeff(k) = ComplexInterval(urand(-span, span), urand(-span, span));
  return v;
}

std::vector<cplx> midpoints(const FourierVec& v) {
  std::vector<cplx> out(2 * v.N + 1);
  for (int k = -v.N; k <= v.N; ++k) out[k + v.N] = v.coeff(k).mid();
  return out;
}

}  // namespace

TEST_CASE("convolution identity element") {
  FourierVec delta(0);
  delta.coeff(0) = ComplexInterval::one();
  FourierVec b = random_vec(3, 2.0);
  FourierVec r = convolve(delta, b);
  for (int k = -3; k <= 3; ++k) {
    CHECK(r.at(k).re.contains(b.coeff(k).re));
    CHECK(r.at(k).im.contains(b.coeff(k).im));
  }
}

TEST_CASE("convolution against brute-force double sum") {
  FourierVec a(1);
  a.coeff(0) = ComplexInterval::one();
  a.coeff(1) = ComplexInterval::one();
  FourierVec sq = convolve(a, a);
  CHECK(sq.at(0).re.contains(1.0));
  CHECK(sq.at(1).re.contains(2.0));
  CHECK(sq.at(2).re.contains(1.0));

  FourierVec phi = phi_initial();
  FourierVec p2 = convolve(phi, phi);
  auto oracle = oracles::conv_bruteforce(midpoints(phi), 1, midpoints(phi), 1);
  CHECK(p2.at(0).contains(oracle[0 + 2]));
  CHECK(p2.at(0).re.contains(3750.0));
  CHECK(p2.at(1).re.contains(-2500.0));
  CHECK(p2.at(-1).re.contains(-2500.0));
  CHECK(p2.at(2).re.contains(625.0));
  CHECK(p2.at(-2).re.contains(625.0));

  for (int rep = 0; rep < 50; ++rep) {
    FourierVec x = random_vec(4, 3.0), y = random_vec(3, 3.0);
    FourierVec c = convolve(x, y);
    auto brute = oracles::conv_bruteforce(midpoints(x), 4, midpoints(y), 3);
    for (int k = -7; k <= 7; ++k) CHECK(c.at(k).contains(brute[k + 7]));
  }
}

TEST_CASE("ell1 norm") {
  CHECK(ell1_norm(phi_initial()).contains(100.0));
  CHECK(ell1_norm(FourierVec(2)).contains(0.0));
  FourierVec a(0);
  a.coeff(0) = ComplexInterval(3.0, 4.0);
  CHECK(ell1_norm(a).contains(5.0));
}

TEST_CASE("projection split and zero-mode strip") {
  FourierVec phi = phi_initial();
  TailSplit s = project_split(phi, 0);
  CHECK(s.finite.N == 0);
  CHECK(s.finite.coeff(0).re.contains(50.0));
  CHECK(s.tail_norm.contains(50.0));

  FourierVec stripped = strip_zero_mode(phi);
  CHECK(stripped.coeff(0).re.contains(0.0));
  CHECK(ell1_norm(stripped).contains(50.0));

  TailSplit all = project_split(phi, 5);
  CHECK(all.tail_norm.lo == 0.0);
  CHECK(all.tail_norm.hi == 0.0);
}

TEST_CASE("split consistency: norm <= finite + tail") {
  for (int rep = 0; rep < 200; ++rep) {
    FourierVec a = random_vec(5, 4.0);
    TailSplit s = project_split(a, 2);
    RealInterval lhs = ell1_norm(a);
    RealInterval rhs = ell1_norm(s.finite) + s.tail_norm;
    CHECK(lhs.lo <= rhs.hi);
    CHECK(rhs.hi >= lhs.hi - 1e-12 * std::max(1.0, lhs.hi));
  }
}

TEST_CASE("laplacian symbol") {
  RealInterval omega = interval_two_pi();
  FourierVec z(0);
  z.coeff(0) = ComplexInterval(7.0, -2.0);
  FourierVec lz = apply_laplacian(z, omega);
  CHECK(lz.coeff(0).re.contains(0.0));
  CHECK(lz.coeff(0).im.contains(0.0));

  FourierVec a(1);
  a.coeff(1) = ComplexInterval::one();
  FourierVec la = apply_laplacian(a, omega);
  const double four_pi_sq = 4.0 * 3.14159265358979323846 * 3.14159265358979323846;
  CHECK(la.coeff(1).re.contains(-four_pi_sq));

  // linearity within mutual enclosure
  FourierVec x = random_vec(3, 2.0), y = random_vec(3, 2.0);
  FourierVec l_sum = apply_laplacian(x + y, omega);
  FourierVec sum_l = apply_laplacian(x, omega) + apply_laplacian(y, omega);
  for (int k = -3; k <= 3; ++k) {
    CHECK(l_sum.at(k).re.lo <= sum_l.at(k).re.hi);
    CHECK(sum_l.at(k).re.lo <= l_sum.at(k).re.hi);
  }
}

TEST_CASE("Banach algebra inequality fuzz") {
  for (int rep = 0; rep < 300; ++rep) {
    FourierVec a = random_vec(5, 2.0), b = random_vec(4, 2.0);
    RealInterval lhs = ell1_norm(convolve(a, b));
    RealInterval rhs = ell1_norm(a) * ell1_norm(b);
    CHECK(lhs.lo <= rhs.hi);
  }
}

TEST_CASE("convolution commutativity") {
  for (int rep = 0; rep < 100; ++rep) {
    FourierVec a = random_vec(3, 2.0), b = random_vec(5, 2.0);
    FourierVec ab = convolve(a, b), ba = convolve(b, a);
    for (int k = -8; k <= 8; ++k) {
      CHECK(ab.at(k).re.lo <= ba.at(k).re.hi);
      CHECK(ba.at(k).re.lo <= ab.at(k).re.hi);
      CHECK(ab.at(k).im.lo <= ba.at(k).im.hi);
      CHECK(ba.at(k).im.lo <= ab.at(k).im.hi);
    }
  }
}
