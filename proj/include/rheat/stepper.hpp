#pragma once

// Chains validated steps along a piecewise-linear contour in complex time:
// per-step validation, the endpoint operator bounds W_J / W_t, the pointwise
// error recursion, and the halving/band-raising retry policy.

#include <functional>
#include <string>
#include <vector>

#include "rheat/approx.hpp"
#include "rheat/evolution.hpp"
#include "rheat/inclusion.hpp"
#include "rheat/variational.hpp"

namespace rheat {

/// Everything verified on one step. The chain invariant is
///   eps_out = W_t * eps_in + W_J * h * (2 rho^2 + delta) + eps_hat,
/// where eps_hat is the junction mismatch against the next step's series
/// (zero on the final step), so eps_in of step i+1 equals eps_out of step i.
struct StepCertificate {
  int index = 0;
  double t_lo = 0.0, t_hi = 0.0;
  RealInterval theta;
  std::string theta_label;
  int N = 0, n = 0, m = 0;
  double nu = 0.0;
  std::string status = "ok";

  RealInterval W_m, sup_Phi, sup_Psi, Phi_end_norm;
  RealInterval mu, norm_X, norm_X_s, drift;
  RealInterval W_inf, W_inf_bar, W_inf_sup, W_inf_step, kappa;
  RealInterval W_h, W_J, W_t;
  RealInterval eps_in, delta, rho, contraction;
  RealInterval eps_hat, eps_out;

  std::vector<RadiiBounds> fwd_bounds, adj_bounds;
};

/// One leg of the contour: the path parameter t is arclength along the ray
/// direction e^{i theta}, split into equal nominal steps of size h.
struct ContourSegment {
  RealInterval theta;
  std::string theta_label = "0";
  double t_start = 0.0, t_end = 0.0;
  double h = 0.0;
  int m = 0, N = 14, n = 13;
  double nu = 1.4;

  int steps() const {
    return std::max(1, int(std::llround((t_end - t_start) / h)));
  }
};

struct ContourSchedule {
  std::vector<ContourSegment> segments;
};

/// The W_{J_i} and W_{t_i} endpoint bounds from the validated pieces.
struct EndpointBounds {
  RealInterval W_J, W_t;
};

inline EndpointBounds endpoint_bounds(const WmInfo& wm, const TailConstants& tc,
                                      const RealInterval& W_m, const RealInterval& h) {
  if (!tc.tail_ok()) throw std::domain_error("endpoint_bounds: kappa must be positive");
  const RealInterval invk = RealInterval(1.0) / tc.kappa;
  const RealInterval p = wm.Phi_end_norm;
  const RealInterval q = wm.sup_Psi;
  const RealInterval s = tc.norm_X_s;
  const RealInterval tail22 =
      tc.W_inf_sup + scale(W_m * isq(tc.W_inf) * isq(s), 4.0) * invk;
  const RealInterval couple = scale(W_m * tc.W_inf * isq(s), 4.0) * invk;  // 4 W_m W_inf s^2 / k
  const RealInterval lower = scale(W_m * tc.W_inf * s, 2.0) * invk;

  EndpointBounds out;
  const RealInterval j11 = p * q * (RealInterval(1.0) + h * couple);
  const RealInterval j12 = scale(p * h * q * s, 2.0) * tail22;
  out.W_J = imax(j11 + lower, j12 + tail22);

  const RealInterval t11 = p * (RealInterval(1.0) + h * q * couple);
  const RealInterval t22 = tc.W_inf_step + scale(W_m * isq(tc.W_inf) * isq(s), 4.0) * invk;
  out.W_t = imax(t11 + lower, j12 + t22);
  return out;
}

/// Junction mismatch between two consecutive approximate series.
inline RealInterval endpoint_mismatch(const ChebFourier& prev, const ChebFourier& next) {
  if (prev.t_hi != next.t_lo)
    throw std::invalid_argument("endpoint_mismatch: intervals are not adjacent");
  const FourierVec a = eval_at_end(prev);
  const FourierVec b = eval_at_start(next);
  const int N = std::max(a.N, b.N);
  RealInterval out(0.0);
  for (int k = -N; k <= N; ++k) out += cabs(a.at(k) - b.at(k));
  return out;
}

/// Snapshot handed to the per-step callback: the state enclosure is
/// (endpoint, eps) meaning ||a_true(t) - endpoint||_{l1} <= eps.hi.
struct StepState {
  const StepCertificate& cert;
  const FourierVec& endpoint;
  RealInterval eps;
  double t;
  RealInterval theta;
};

struct RunOptions {
  RealInterval eps0 = RealInterval(0.0);  // initial pointwise error
  int max_steps = 100000;
  int max_halvings = 6;
  int sup_pieces = 8;
  double newton_tol = 1e-12;
  // return true to stop the run early (reported as stopped_early)
  std::function<bool(const StepState&)> after_step;
};

struct ContourResult {
  std::vector<StepCertificate> certs;
  bool completed = false;
  bool stopped_early = false;
  std::string failure;
  FourierVec final_state;
  RealInterval final_eps = RealInterval(0.0);
  double final_t = 0.0;
};

namespace stepdetail {

struct ChainState {
  FourierVec ref;       // enclosure of abar_i(t_i)
  RealInterval eps;     // pointwise bound at the reference
  double t = 0.0;
  bool has_open_cert = false;  // last cert awaits its junction mismatch
};

struct StepOutcome {
  bool ok = false;
  std::string reason;
  StepCertificate cert;
  FourierVec endpoint;
  RealInterval eps_end;
  RealInterval mismatch;  // initial_error of this series vs the incoming state
  ChebFourier abar;
};

inline StepOutcome try_step(const ChainState& st, double t_a, double t_b,
                            const ContourSegment& seg, int m_eff,
                            const RunOptions& opt) {
  StepOutcome out;
  StepCertificate& c = out.cert;
  c.t_lo = t_a;
  c.t_hi = t_b;
  c.theta = seg.theta;
  c.theta_label = seg.theta_label;
  c.N = seg.N;
  c.n = seg.n;
  c.m = m_eff;
  c.nu = seg.nu;

  const RealInterval omega = interval_two_pi();
  approx::SolveConfig cfg;
  cfg.N = seg.N;
  cfg.n = seg.n;
  cfg.theta = seg.theta.mid();
  cfg.t_lo = t_a;
  cfg.t_hi = t_b;
  cfg.newton_tol = opt.newton_tol;

  std::vector<approx::cplx> u0(2 * size_t(seg.N) + 1, approx::cplx(0, 0));
  for (int k = -seg.N; k <= seg.N; ++k)
    if (std::abs(k) <= st.ref.N) u0[k + seg.N] = st.ref.at(k).mid();

  try {
    out.abar = approx::solve_step(u0, cfg);
  } catch (const solver_failure& e) {
    out.reason = e.what();
    return out;
  }

  try {
    out.mismatch = initial_error(out.abar, st.ref);
    const RealInterval eps_in = st.eps + out.mismatch;
    c.eps_in = eps_in;

    ValidationOptions vopt;
    vopt.nu = seg.nu;
    ValidationResult fwd =
        validate_matrix(out.abar, m_eff, seg.theta, omega, false, vopt);
    if (!fwd.ok) {
      out.reason = "forward " + fwd.failure;
      return out;
    }
    ValidationResult adj =
        validate_matrix(out.abar, m_eff, seg.theta, omega, true, vopt);
    if (!adj.ok) {
      out.reason = "adjoint " + adj.failure;
      return out;
    }
    c.fwd_bounds = fwd.matrix.bounds;
    c.adj_bounds = adj.matrix.bounds;

    WmInfo wm = compute_Wm(fwd.matrix, adj.matrix, opt.sup_pieces);
    c.W_m = wm.W_m;
    c.sup_Phi = wm.sup_Phi;
    c.sup_Psi = wm.sup_Psi;
    c.Phi_end_norm = wm.Phi_end_norm;

    TailConstants tc =
        tail_constants(out.abar, m_eff, seg.theta, omega, wm.W_m, opt.sup_pieces);
    c.mu = tc.mu;
    c.norm_X = tc.norm_X;
    c.norm_X_s = tc.norm_X_s;
    c.drift = tc.drift;
    c.W_inf = tc.W_inf;
    c.W_inf_bar = tc.W_inf_bar;
    c.W_inf_sup = tc.W_inf_sup;
    c.W_inf_step = tc.W_inf_step;
    c.kappa = tc.kappa;
    if (!tc.tail_ok()) {
      out.reason = "tail-coupling failure: kappa <= 0";
      return out;
    }
    c.W_h = assemble_Wh(wm.W_m, tc).W_h;

    DefectBound db = defect_bound(out.abar, seg.theta, omega);
    c.delta = db.delta;

    InclusionResult inc = solve_radius(eps_in, db.delta, c.W_h, tc.h);
    if (!inc.success) {
      out.reason = inc.failure;
      return out;
    }
    c.rho = inc.rho;
    c.contraction = inc.contraction;

    EndpointBounds eb = endpoint_bounds(wm, tc, wm.W_m, tc.h);
    c.W_J = eb.W_J;
    c.W_t = eb.W_t;

    const RealInterval incr = scale(isq(RealInterval(c.rho.hi)), 2.0) + db.delta;
    out.eps_end = c.W_t * eps_in + c.W_J * tc.h * incr;
    c.eps_hat = RealInterval(0.0);
    c.eps_out = out.eps_end;
    out.endpoint = eval_at_end(out.abar);
    out.ok = true;
    return out;
  } catch (const enclosure_error& e) {
    out.reason = std::string("enclosure failure: ") + e.what();
    return out;
  }
}

}  // namespace stepdetail

/// Runs the whole schedule, one certificate per validated (sub)step. On a
/// step failure the step is halved (rebuilding the approximate solution) up
/// to max_halvings deep, then the band m is raised by 2 once; if that fails
/// the run aborts and reports partial results.
inline ContourResult run_contour(const FourierVec& u0, const ContourSchedule& schedule,
                                 const RunOptions& opt = {}) {
  ContourResult res;
  stepdetail::ChainState st;
  st.ref = u0;
  st.eps = opt.eps0;
  st.t = schedule.segments.empty() ? 0.0 : schedule.segments.front().t_start;

  auto finalize_prev = [&](const RealInterval& mismatch) {
    if (!res.certs.empty() && st.has_open_cert) {
      StepCertificate& prev = res.certs.back();
      prev.eps_hat = mismatch;
      prev.eps_out = prev.eps_out + mismatch;
    }
  };

  // depth-first halving over one nominal step
  std::function<bool(double, double, int, const ContourSegment&, int, bool)> attempt =
      [&](double a, double b, int depth, const ContourSegment& seg, int m_eff,
          bool m_raised) -> bool {
    if (int(res.certs.size()) >= opt.max_steps) {
      res.failure = "step budget exhausted";
      return false;
    }
    stepdetail::StepOutcome oc = stepdetail::try_step(st, a, b, seg, m_eff, opt);
    if (oc.ok) {
      // the new series fixes the junction mismatch of the previous certificate
      finalize_prev(oc.mismatch);
      oc.cert.index = int(res.certs.size()) + 1;
      res.certs.push_back(oc.cert);
      st.ref = oc.endpoint;
      st.eps = oc.eps_end;
      st.t = b;
      st.has_open_cert = true;
      if (opt.after_step) {
        StepState view{res.certs.back(), st.ref, st.eps, st.t, seg.theta};
        if (opt.after_step(view)) {
          res.stopped_early = true;
          return false;
        }
      }
      return true;
    }
    if (depth < opt.max_halvings) {
      const double mid = 0.5 * (a + b);
      if (mid > a && mid < b)
        return attempt(a, mid, depth + 1, seg, m_eff, m_raised) &&
               attempt(mid, b, depth + 1, seg, m_eff, m_raised);
    }
    if (!m_raised) return attempt(a, b, depth, seg, m_eff + 2, true);
    res.failure = "step at t in [" + std::to_string(a) + ", " + std::to_string(b) +
                  "] failed after halving and band raise: " + oc.reason;
    return false;
  };

  for (const ContourSegment& seg : schedule.segments) {
    const int steps = seg.steps();
    for (int i = 0; i < steps; ++i) {
      const double a = seg.t_start + (seg.t_end - seg.t_start) * i / steps;
      const double b = seg.t_start + (seg.t_end - seg.t_start) * (i + 1) / steps;
      if (!attempt(a, b, 0, seg, seg.m, false)) {
        res.final_state = st.ref;
        res.final_eps = st.eps;
        res.final_t = st.t;
        return res;
      }
    }
  }
  res.completed = true;
  res.final_state = st.ref;
  res.final_eps = st.eps;
  res.final_t = st.t;
  return res;
}

/// CSV rows (i, t, eps, rho, W_h, delta) for plotting.
inline void write_csv(std::ostream& os, const std::vector<StepCertificate>& certs) {
  os << "i,t,eps,rho,W_h,delta\n";
  char buf[256];
  for (const StepCertificate& c : certs) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", c.index,
                  c.t_hi, c.eps_out.hi, c.rho.hi, c.W_h.hi, c.delta.hi);
    os << buf;
  }
}

}  // namespace rheat
