#pragma once

// Global-existence closer: hypothesis constants of the center-stable
// manifold fixed point, the near-optimal Lipschitz parameter rho, and the
// trapping-region membership test for a validated state.

#include <optional>
#include <string>

#include "rheat/fourier.hpp"
#include "rheat/interval.hpp"

namespace rheat {

/// Constants and flags of one manifold certificate. pass() requires every
/// hypothesis inequality rigorously strict; membership additionally places
/// the state enclosure inside the trapping region.
struct ManifoldCertificate {
  RealInterval theta, mu;
  RealInterval r_c, r_s, rho;
  RealInterval d1, d2, d3, d4, lambda;
  bool ok_d1 = false, ok_d2 = false, ok_d4 = false;
  bool ok_rho_gap = false;  // d3/(mu - d2) < rho
  bool ok_lambda = false;   // lambda < 1
  bool hypothesis_ok = false;

  // membership data (set by trapping_membership)
  bool membership_checked = false;
  bool membership_ok = false;
  RealInterval a0_abs;        // |a_0| enclosure upper
  RealInterval a0_dir;        // Re(e^{i theta} a_0) enclosure
  RealInterval dist_lo;       // lower bound of dist(a_0, boundary of B_c)
  RealInterval rho_rs;        // rho * ||x_s|| bound
  std::string note;

  bool pass() const { return hypothesis_ok && membership_ok; }
};

inline RealInterval center_rate_mu(const RealInterval& theta, const RealInterval& omega) {
  return isq(omega) * icos(theta);
}

/// Near-optimal Lipschitz parameter. Isolating rho in d3/(mu - d2) < rho
/// gives 4 r_s rho^2 + rho (4 r_c + 2 r_s - mu) + 2 r_s < 0, i.e. the monic
/// quadratic rho^2 - rho (mu - 4 r_c - 2 r_s)/(4 r_s) + 1/2 < 0; the lower
/// root is taken and inflated by `inflation` into the strict interior.
/// Requires mu > 4 r_c + 2 r_s.
inline std::optional<RealInterval> choose_rho(const RealInterval& mu,
                                              const RealInterval& r_c,
                                              const RealInterval& r_s,
                                              double inflation = 0.05) {
  if (!(r_s.lo > 0.0)) return std::nullopt;
  const RealInterval gap = mu - scale(r_c, 4.0) - scale(r_s, 2.0);
  if (!(gap.lo > 0.0)) return std::nullopt;
  const RealInterval b_half = gap / scale(r_s, 8.0);  // -B/2 of the monic quadratic
  const RealInterval disc = isq(scale(b_half, 2.0)) - RealInterval(2.0);
  if (!(disc.valid() && disc.lo > 0.0)) return std::nullopt;
  // stable product form of the lower root; the difference form cancels badly
  const RealInterval root =
      RealInterval(1.0) / (scale(b_half, 2.0) + isqrt(disc));
  if (!(root.valid() && root.lo > 0.0)) return std::nullopt;
  // a single chosen value strictly inside the feasible interval; the strict
  // inequality d3/(mu - d2) < rho is re-verified downstream, not assumed
  const double chosen = root.hi * (1.0 + inflation);
  return RealInterval(chosen);
}

/// Evaluates the fixed-point hypothesis constants at given radii.
inline ManifoldCertificate hypothesis_check(const RealInterval& theta,
                                            const RealInterval& omega,
                                            const RealInterval& r_c,
                                            const RealInterval& r_s,
                                            const RealInterval& rho) {
  ManifoldCertificate cert;
  cert.theta = theta;
  cert.mu = center_rate_mu(theta, omega);
  cert.r_c = r_c;
  cert.r_s = r_s;
  cert.rho = rho;

  const RealInterval two(2.0);
  cert.d1 = scale(r_c, 2.0) + (RealInterval(1.0) + scale(rho, 2.0)) * r_s;
  cert.d2 = scale(r_c, 2.0) + scale((RealInterval(1.0) + rho) * r_s, 2.0);
  cert.d3 = scale(rho * (r_c + rho * r_s) + r_s, 2.0);
  cert.d4 = scale(r_c + scale(rho * r_s, 2.0) + r_s, 2.0);

  cert.ok_d1 = cert.d1.valid() && cert.d1.hi < cert.mu.lo;
  cert.ok_d2 = cert.d2.valid() && cert.d2.hi < cert.mu.lo;
  cert.ok_d4 = cert.d4.valid() && cert.d4.hi < cert.mu.lo;

  if (cert.ok_d1 && cert.ok_d2 && cert.ok_d4) {
    const RealInterval m1 = cert.mu - cert.d1;
    const RealInterval m2 = cert.mu - cert.d2;
    const RealInterval m4 = cert.mu - cert.d4;
    cert.ok_rho_gap = (cert.d3 / m2).hi < rho.lo;
    cert.lambda = scale((rho * (r_c + rho * r_s) + r_s) * two * r_s, 2.0) / (m1 * m4) +
                  scale(r_c + rho * r_s, 2.0) / m1;
    cert.ok_lambda = cert.lambda.valid() && cert.lambda.hi < 1.0;
  }
  cert.hypothesis_ok = cert.ok_d1 && cert.ok_d2 && cert.ok_d4 && cert.ok_rho_gap &&
                       cert.ok_lambda;
  return cert;
}

struct TrappingMargins {
  double r_c_inflation = 0.02;  // extra share of the side-mode mass added to r_c
  double rho_inflation = 0.05;
};

/// Builds the trapping region around a validated endpoint enclosure
/// (state, eps) and decides membership:
///   r_c = (|a0|+eps) + margin (||a^(s)||+eps),  r_s = ||a^(s)||+eps,
/// a0 must satisfy Re(e^{i theta} a0) <= 0, and rho r_s must stay below the
/// distance of a0 to the boundary of the half-disc.
inline ManifoldCertificate trapping_membership(const FourierVec& state,
                                               const RealInterval& eps,
                                               const RealInterval& theta,
                                               const RealInterval& omega,
                                               const TrappingMargins& margins = {}) {
  const ComplexInterval a0 = state.at(0);
  const RealInterval a0_abs = cabs(a0) + eps;  // disc enclosure of the true a_0
  const RealInterval side = ell1_norm(strip_zero_mode(state)) + eps;

  const RealInterval r_c = a0_abs + scale(side, margins.r_c_inflation);
  const RealInterval r_s = side;
  const RealInterval mu = center_rate_mu(theta, omega);

  std::optional<RealInterval> rho = choose_rho(mu, r_c, r_s, margins.rho_inflation);
  ManifoldCertificate cert;
  if (!rho) {
    cert.theta = theta;
    cert.mu = mu;
    cert.r_c = r_c;
    cert.r_s = r_s;
    cert.note = "no feasible rho (mu <= 4 r_c + 2 r_s or empty root interval)";
    return cert;
  }
  cert = hypothesis_check(theta, omega, r_c, r_s, *rho);
  cert.membership_checked = true;
  cert.a0_abs = a0_abs;

  // Re(e^{i theta} a0) over the enclosure; the eps-disc widens it by eps
  const ComplexInterval dir = unit_phase(theta) * a0;
  cert.a0_dir = dir.re + RealInterval(-eps.hi, eps.hi);

  // distance of a0 to the two boundary pieces: the arc and the dividing line
  cert.dist_lo = imin(r_c - a0_abs, -cert.a0_dir);
  cert.rho_rs = *rho * r_s;

  const bool in_halfplane = cert.a0_dir.hi <= 0.0;
  const bool in_disc = a0_abs.hi <= r_c.hi;  // true by construction of r_c
  const bool strict_interior = cert.rho_rs.hi < cert.dist_lo.lo;
  cert.membership_ok = cert.hypothesis_ok && in_halfplane && in_disc && strict_interior;
  if (!in_halfplane) cert.note = "state leaves the dissipative half-plane";
  else if (!strict_interior) cert.note = "state too close to the boundary of B_c";
  return cert;
}

}  // namespace rheat
