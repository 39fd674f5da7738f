#pragma once

// Assembles the uniform evolution-operator bound W_h from the finite-band
// bound W_m and the closed-form tail constants.

#include "rheat/chebyshev.hpp"
#include "rheat/interval.hpp"

namespace rheat {

/// Closed-form constants controlling the tail modes |k| > m over one step.
/// drift = 2||abar||_X - mu is the exponential rate of the tail bound
/// W(t,s) <= e^{drift (t-s)}; kappa > 0 is the finite/tail coupling margin.
struct TailConstants {
  int m = 0;
  RealInterval h;
  RealInterval mu;          // (m+1)^2 omega^2 cos(theta)
  RealInterval norm_X;      // sup_t ||abar(t)||_{l1}
  RealInterval norm_X_s;    // same with the zero mode removed
  RealInterval drift;       // 2 norm_X - mu
  RealInterval W_inf;       // (e^{drift h} - 1)/drift
  RealInterval W_inf_bar;   // (W_inf - h)/drift
  RealInterval W_inf_sup;   // sup of e^{drift (t-s)} over the simplex
  RealInterval W_inf_step;  // e^{drift h}, a bound at (t_hi, t_lo)
  RealInterval kappa;       // 1 - 4 W_m W_inf_bar norm_X_s^2

  bool tail_ok() const { return kappa.valid() && kappa.lo > 0.0; }
};

inline RealInterval tail_rate_mu(int m, const RealInterval& theta,
                                 const RealInterval& omega) {
  const double mp1 = double(m + 1);
  return scale(isq(omega) * icos(theta), mp1 * mp1);
}

/// All tail constants for one validated step. W_m enters only through kappa.
inline TailConstants tail_constants(const ChebFourier& abar, int m,
                                    const RealInterval& theta,
                                    const RealInterval& omega,
                                    const RealInterval& W_m, int sup_pieces = 8) {
  TailConstants tc;
  tc.m = m;
  tc.h = abar.h();
  tc.mu = tail_rate_mu(m, theta, omega);
  tc.norm_X = sup_norm_X(abar, sup_pieces);
  tc.norm_X_s = sup_norm_X(strip_zero_mode(abar), sup_pieces);
  tc.drift = scale(tc.norm_X, 2.0) - tc.mu;
  tc.W_inf = imax(expm1_div(tc.drift, tc.h), RealInterval(0.0));
  tc.W_inf_bar = imax(expm1_div2(tc.drift, tc.h), RealInterval(0.0));
  tc.W_inf_sup = iexp(imax(tc.drift, RealInterval(0.0)) * tc.h);
  tc.W_inf_step = iexp(tc.drift * tc.h);
  tc.kappa = RealInterval(1.0) -
             scale(W_m * tc.W_inf_bar * isq(tc.norm_X_s), 4.0);
  return tc;
}

/// The 2x2 finite/tail block bound and its l^1 norm.
struct EvolutionBound {
  RealInterval m11, m12, m21, m22;
  RealInterval W_h;
};

inline EvolutionBound assemble_Wh(const RealInterval& W_m, const TailConstants& tc) {
  if (!tc.tail_ok())
    throw std::domain_error("assemble_Wh: kappa must be positive");
  const RealInterval invk = RealInterval(1.0) / tc.kappa;
  EvolutionBound b;
  b.m11 = W_m * invk;
  b.m12 = scale(W_m * tc.W_inf * tc.norm_X_s, 2.0) * invk;
  b.m21 = b.m12;
  b.m22 = tc.W_inf_sup + scale(W_m * isq(tc.W_inf) * isq(tc.norm_X_s), 4.0) * invk;
  b.W_h = imax(b.m11 + b.m21, b.m12 + b.m22);
  return b;
}

/// Test-harness check of the closed-form constants against direct interval
/// quadrature of the tail bound w(t,s) = e^{drift (t-s)} at sampled (t,s).
/// Not part of the proof chain.
struct LemmaCheckReport {
  int samples = 0;
  int violations = 0;  // quadrature lower bound exceeds the constant
  int certified = 0;   // quadrature upper bound is below the constant
  double max_excess = -1e300;
};

namespace detail {

// one-dimensional composite interval rectangle rule for e^{drift (u - base)}
inline RealInterval quad_exp(const RealInterval& drift, double lo, double hi,
                             double base, int cells) {
  RealInterval total(0.0);
  for (int i = 0; i < cells; ++i) {
    const double a = lo + (hi - lo) * i / cells;
    const double b = lo + (hi - lo) * (i + 1) / cells;
    const RealInterval u(a - base, b - base);
    total += iexp(drift * u) * (RealInterval(b) - RealInterval(a));
  }
  return total;
}

}  // namespace detail

inline LemmaCheckReport lemma_bounds_check(const TailConstants& tc, int samples,
                                           unsigned seed = 7u, int cells = 48) {
  LemmaCheckReport rep;
  const double h = tc.h.hi;
  unsigned state = seed;
  auto next01 = [&state]() {
    state = state * 1664525u + 1013904223u;
    return double(state >> 8) / double(1u << 24);
  };
  auto record = [&rep](const RealInterval& got, const RealInterval& bound) {
    ++rep.samples;
    if (got.lo > bound.hi) ++rep.violations;
    if (got.hi <= bound.hi) ++rep.certified;
    rep.max_excess = std::max(rep.max_excess, got.lo - bound.hi);
  };

  for (int i = 0; i < samples; ++i) {
    double s = next01() * h, t = next01() * h;
    if (s > t) std::swap(s, t);
    if (i == 0) s = t;  // degenerate diagonal case
    // pointwise sup bound
    record(iexp(tc.drift * (RealInterval(t) - RealInterval(s))), tc.W_inf_sup);
    // single integrals, both orientations:
    //   int_s^t e^{drift (tau - s)} dtau  and  int_s^t e^{drift (t - tau)} dtau
    record(detail::quad_exp(tc.drift, s, t, s, cells), tc.W_inf);
    record(detail::quad_exp(-tc.drift, s, t, t, cells), tc.W_inf);
    // iterated integral: outer tau in [s,t], inner over sigma in [s,tau],
    // kernel e^{drift (tau - sigma)}
    RealInterval dbl(0.0);
    for (int o = 0; o < cells; ++o) {
      const double a = s + (t - s) * o / cells;
      const double b = s + (t - s) * (o + 1) / cells;
      // e^{drift (tau - sigma)} = e^{drift (tau - a)} e^{drift (a - sigma)}
      // with tau in [a,b]; the sigma piece inside [a,tau] is enclosed crudely.
      const RealInterval shift = iexp(tc.drift * RealInterval(0.0, b - a));
      RealInterval inner = detail::quad_exp(-tc.drift, s, a, a, cells) * shift;
      inner += RealInterval(0.0, std::max(shift.hi * (b - a), 0.0));
      dbl += inner * (RealInterval(b) - RealInterval(a));
    }
    record(dbl, tc.W_inf_bar);
  }
  return rep;
}

}  // namespace rheat
