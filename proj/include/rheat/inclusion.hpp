#pragma once

// Local existence on one step: initial-error bound, defect bound, and the
// contraction radius from the quadratic sufficiency condition
// W_h [eps + h (2 rho^2 + delta)] <= rho.

#include <string>

#include "rheat/chebyshev.hpp"
#include "rheat/evolution.hpp"

namespace rheat {

/// eps >= ||prev - abar(t_lo)||_{l1}: rigorous initial mismatch.
inline RealInterval initial_error(const ChebFourier& abar, const FourierVec& prev) {
  const FourierVec start = eval_at_start(abar);
  const int N = std::max(prev.N, start.N);
  RealInterval eps(0.0);
  for (int k = -N; k <= N; ++k) eps += cabs(prev.at(k) - start.at(k));
  return eps;
}

/// Rigorous sup-in-time bound of the residual of abar, split into the
/// resolved-mode part (|k| <= N) and the convolution overflow (N < |k| <= 2N).
struct DefectBound {
  RealInterval delta;
  RealInterval finite_part, tail_part;
};

inline DefectBound defect_bound(const ChebFourier& abar, const RealInterval& theta,
                                const RealInterval& omega) {
  const ChebFourier asq = cheb_convolve(abar, abar);
  const ChebFourier ad = differentiate(abar);
  const ComplexInterval eith = unit_phase(theta);
  const RealInterval w2 = isq(omega);
  const int N = abar.N;

  RealInterval finite(0.0);
  for (int k = -N; k <= N; ++k) {
    const ComplexInterval lam = eith * scale(w2, double(k) * double(k));
    for (int l = 0; l < asq.n; ++l) {
      ComplexInterval g = ad.at(l, k) + lam * abar.at(l, k) - eith * asq.at(l, k);
      RealInterval m = cabs(g);
      finite += (l == 0) ? m : scale(m, 2.0);
    }
  }
  // |e^{i theta} z| = |z|: the tail is a pure convolution overflow
  RealInterval tail(0.0);
  for (int k = -asq.N; k <= asq.N; ++k) {
    if (std::abs(k) <= N) continue;
    for (int l = 0; l < asq.n; ++l) {
      RealInterval m = cabs(asq.at(l, k));
      tail += (l == 0) ? m : scale(m, 2.0);
    }
  }
  return {finite + tail, finite, tail};
}

/// Outcome of the radius solve. success means f_eps(rho) <= rho was
/// re-verified by direct interval evaluation and 2 W_h h rho < 1.
struct InclusionResult {
  RealInterval eps, delta, W_h, h;
  RealInterval rho;          // upper endpoint is the verified radius
  RealInterval contraction;  // 2 W_h h rho
  bool success = false;
  std::string failure;
};

inline InclusionResult solve_radius(const RealInterval& eps, const RealInterval& delta,
                                    const RealInterval& W_h, const RealInterval& h) {
  InclusionResult out;
  out.eps = eps;
  out.delta = delta;
  out.W_h = W_h;
  out.h = h;

  const RealInterval a2 = scale(W_h * h, 2.0);        // quadratic coefficient
  const RealInterval c = W_h * (eps + h * delta);     // constant term
  if (c.valid() && c.hi <= 0.0) {
    out.rho = RealInterval(0.0);
    out.contraction = RealInterval(0.0);
    out.success = true;
    return out;
  }
  const RealInterval disc = RealInterval(1.0) - scale(a2 * c, 4.0);
  if (!(disc.valid() && disc.lo > 0.0)) {
    out.failure = "inclusion failure: negative discriminant (shrink h or refine abar)";
    return out;
  }
  RealInterval root;
  if (a2.hi <= 0.0) {
    root = c;  // the map degenerates to a constant
  } else {
    root = (RealInterval(1.0) - isqrt(disc)) / scale(a2, 2.0);
  }
  double lo = std::max(root.lo, 0.0);
  double rv = std::max(detail::upn(root.hi, 2), 0.0);

  // guard against rounding in the quadratic formula: re-verify the
  // sufficiency inequality at the returned radius, nudging up if needed
  bool verified = false;
  for (int attempt = 0; attempt < 6 && !verified; ++attempt) {
    const RealInterval r(rv);
    const RealInterval f = W_h * (eps + h * (scale(isq(r), 2.0) + delta));
    if (f.valid() && f.hi <= rv)
      verified = true;
    else
      rv = detail::upn(rv * (1.0 + 1e-12), 4) + (rv == 0.0 ? 1e-300 : 0.0);
  }
  if (!verified) {
    out.failure = "inclusion failure: contraction inequality not re-verifiable";
    return out;
  }
  out.rho = RealInterval(std::min(lo, rv), rv);
  out.contraction = scale(W_h * h * RealInterval(rv), 2.0);
  if (!(out.contraction.hi < 1.0)) {
    out.failure = "inclusion failure: contraction factor not below 1";
    return out;
  }
  out.success = true;
  return out;
}

}  // namespace rheat
