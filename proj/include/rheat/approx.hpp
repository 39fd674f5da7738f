#pragma once

// Nonrigorous numerical pipeline: approximate solutions of the Galerkin
// system as Chebyshev series, and approximate fundamental-matrix columns as
// Newton starting points for the rigorous validation. Plain floating point
// throughout; outputs are promoted to point intervals.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "rheat/chebyshev.hpp"

namespace rheat {

/// Thrown when the approximate Newton solve does not converge; the caller is
/// expected to shrink the step.
struct solver_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace approx {

using cplx = std::complex<double>;

struct SolveConfig {
  int N = 14;
  int n = 13;
  double theta = 0.0;
  double omega = 2.0 * 3.14159265358979323846;
  double t_lo = 0.0;
  double t_hi = 1.0;
  double newton_tol = 1e-12;
  int max_iter = 30;
};

namespace detail {

inline int id(int ell, int k, int n, int N) {
  (void)n;
  return ell * (2 * N + 1) + (k + N);
}

// symmetric-extension lookup on a stored (l >= 0) coefficient table
inline cplx ext(const std::vector<cplx>& c, int n, int N, int l, int k) {
  int al = std::abs(l);
  if (al >= n || k < -N || k > N) return {0.0, 0.0};
  return c[size_t(al) * (2 * N + 1) + (k + N)];
}

// Galerkin RHS in the rescaled variable: dc/dtau = (h/2) e^{i th} (-k^2 w^2 c + c*c)
inline std::vector<cplx> nonlinear_rhs(const std::vector<cplx>& a, int N,
                                       double half_h_times, cplx eith, double omega) {
  std::vector<cplx> out(2 * N + 1);
  for (int k = -N; k <= N; ++k) {
    cplx conv(0.0, 0.0);
    for (int k1 = std::max(-N, k - N); k1 <= std::min(N, k + N); ++k1)
      conv += a[k1 + N] * a[(k - k1) + N];
    out[k + N] = half_h_times * eith *
                 (-double(k) * double(k) * omega * omega * a[k + N] + conv);
  }
  return out;
}

// Chebyshev interpolation at second-kind (extrema) nodes; input samples[j] is
// the value at tau_j = cos(pi j / (n-1)), output in the doubled storage
// convention (first unweighted, rest doubled).
inline std::vector<cplx> fit_from_extrema(const std::vector<std::vector<cplx>>& samples,
                                          int n, int width) {
  const int m = n - 1;
  std::vector<cplx> stored(size_t(n) * width);
  for (int w = 0; w < width; ++w) {
    for (int l = 0; l <= m; ++l) {
      cplx acc = 0.5 * (samples[0][w] + (l % 2 ? -1.0 : 1.0) * samples[m][w]);
      for (int j = 1; j < m; ++j)
        acc += samples[j][w] * std::cos(M_PI * double(j) * double(l) / double(m));
      cplx a_l = (2.0 / m) * acc;
      // interpolant is sum'' a_l T_l (first and last halved); to stored form:
      cplx math = (l == 0 || l == m) ? 0.5 * a_l : a_l;
      stored[size_t(l) * width + w] = (l == 0) ? math : 0.5 * math;
    }
  }
  return stored;
}

}  // namespace detail

/// RK4 trajectory of the Galerkin system sampled at the Chebyshev extrema
/// nodes, used to seed Newton.
inline std::vector<cplx> seed_by_rk4(const std::vector<cplx>& u0,
                                     const SolveConfig& cfg, int substeps = 8) {
  const int n = cfg.n, N = cfg.N, width = 2 * N + 1;
  const double h = cfg.t_hi - cfg.t_lo;
  const cplx eith = std::polar(1.0, cfg.theta);
  std::vector<std::vector<cplx>> samples(n);  // samples[j] at tau_j = cos(pi j/(n-1))
  std::vector<cplx> y = u0;
  samples[n - 1] = y;  // tau = -1
  for (int j = n - 1; j >= 1; --j) {
    const double tau_a = std::cos(M_PI * double(j) / double(n - 1));
    const double tau_b = std::cos(M_PI * double(j - 1) / double(n - 1));
    const double dt = (tau_b - tau_a) / substeps;
    for (int s = 0; s < substeps; ++s) {
      auto f = [&](const std::vector<cplx>& a) {
        return detail::nonlinear_rhs(a, N, 0.5 * h, eith, cfg.omega);
      };
      std::vector<cplx> k1 = f(y), tmp(y.size());
      for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
      std::vector<cplx> k2 = f(tmp);
      for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
      std::vector<cplx> k3 = f(tmp);
      for (size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + dt * k3[i];
      std::vector<cplx> k4 = f(tmp);
      for (size_t i = 0; i < y.size(); ++i)
        y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    samples[j - 1] = y;
  }
  return detail::fit_from_extrema(samples, n, width);
}

namespace detail {

// Integrated-form residual of the nonlinear problem on stored coefficients.
inline std::vector<cplx> residual(const std::vector<cplx>& c,
                                  const std::vector<cplx>& u0,
                                  const SolveConfig& cfg) {
  const int n = cfg.n, N = cfg.N, width = 2 * N + 1;
  const double h = cfg.t_hi - cfg.t_lo;
  const cplx eith = std::polar(1.0, cfg.theta);
  const cplx nl_fac = 0.5 * h * eith;

  // psi_{l,k} = lambda_k c_{l,k} + nl_fac (c*c)_{l,k}, support l <= 2n-2
  const int psi_len = 2 * n - 1;
  std::vector<cplx> psi(size_t(psi_len) * width, cplx(0, 0));
  for (int l1 = -(n - 1); l1 <= n - 1; ++l1)
    for (int k1 = -N; k1 <= N; ++k1) {
      cplx x = ext(c, n, N, l1, k1);
      if (x == cplx(0.0, 0.0)) continue;
      for (int l2 = -(n - 1); l2 <= n - 1; ++l2) {
        int l = l1 + l2;
        if (l < 0 || l >= psi_len) continue;
        for (int k2 = std::max(-N, -N + k1 - 0); k2 <= N; ++k2) {
          int k = k1 + k2;
          if (k < -N || k > N) continue;
          psi[size_t(l) * width + (k + N)] += nl_fac * x * ext(c, n, N, l2, k2);
        }
      }
    }
  for (int k = -N; k <= N; ++k) {
    const cplx lam = -0.5 * h * eith * cfg.omega * cfg.omega * double(k) * double(k);
    for (int l = 0; l < n; ++l)
      psi[size_t(l) * width + (k + N)] += lam * c[size_t(l) * width + (k + N)];
  }

  std::vector<cplx> f(size_t(n) * width);
  for (int k = -N; k <= N; ++k) {
    cplx s = c[0 * width + (k + N)];
    for (int j = 1; j < n; ++j)
      s += 2.0 * (j % 2 ? -1.0 : 1.0) * c[size_t(j) * width + (k + N)];
    f[0 * width + (k + N)] = s - u0[k + N];
    for (int l = 1; l < n; ++l) {
      cplx v = 2.0 * double(l) * c[size_t(l) * width + (k + N)];
      v += psi[size_t(l + 1) * width + (k + N)];
      v -= psi[size_t(l - 1) * width + (k + N)];
      f[size_t(l) * width + (k + N)] = v;
    }
  }
  return f;
}

inline Eigen::MatrixXcd jacobian(const std::vector<cplx>& c, const SolveConfig& cfg) {
  const int n = cfg.n, N = cfg.N, width = 2 * N + 1;
  const int dim = n * width;
  const double h = cfg.t_hi - cfg.t_lo;
  const cplx eith = std::polar(1.0, cfg.theta);
  const cplx nl_fac = 0.5 * h * eith;
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(dim, dim);

  // d(c*c)_{L,k} / dc_{l2,k2} = 2 (c~_{L-l2,k-k2} + [l2>=1] c~_{L+l2,k-k2})
  auto dconv = [&](int L, int k, int l2, int k2) -> cplx {
    cplx v = ext(c, n, N, L - l2, k - k2);
    if (l2 >= 1) v += ext(c, n, N, L + l2, k - k2);
    return 2.0 * v;
  };

  for (int k = -N; k <= N; ++k) {
    const cplx lam = -0.5 * h * eith * cfg.omega * cfg.omega * double(k) * double(k);
    for (int j = 0; j < n; ++j)
      J(id(0, k, n, N), id(j, k, n, N)) =
          (j == 0) ? 1.0 : 2.0 * (j % 2 ? -1.0 : 1.0);
    for (int l = 1; l < n; ++l) {
      const int row = id(l, k, n, N);
      J(row, id(l, k, n, N)) += 2.0 * double(l);
      if (l + 1 <= n - 1) J(row, id(l + 1, k, n, N)) += lam;
      J(row, id(l - 1, k, n, N)) -= lam;
      for (int l2 = 0; l2 < n; ++l2)
        for (int k2 = -N; k2 <= N; ++k2) {
          cplx d = dconv(l + 1, k, l2, k2) - dconv(l - 1, k, l2, k2);
          if (d != cplx(0.0, 0.0)) J(row, id(l2, k2, n, N)) += nl_fac * d;
        }
    }
  }
  return J;
}

}  // namespace detail

/// Approximate solution of the Galerkin system on [t_lo, t_hi] with
/// a(t_lo) = u0, as a point-interval ChebFourier.
inline ChebFourier solve_step(const std::vector<cplx>& u0, const SolveConfig& cfg) {
  if (int(u0.size()) != 2 * cfg.N + 1)
    throw std::invalid_argument("solve_step: u0 must have 2N+1 entries");
  if (cfg.n < 2) throw std::invalid_argument("solve_step: need n >= 2");

  const int width = 2 * cfg.N + 1, dim = cfg.n * width;
  std::vector<cplx> c = seed_by_rk4(u0, cfg);

  double last = std::numeric_limits<double>::infinity();
  bool ok = false;
  for (int it = 0; it < cfg.max_iter; ++it) {
    std::vector<cplx> f = detail::residual(c, u0, cfg);
    double fn = 0.0;
    for (const cplx& z : f) fn = std::max(fn, std::abs(z));
    if (fn <= cfg.newton_tol) {
      ok = true;
      break;
    }
    if (!(fn < 1e12) || (it > 6 && fn > 0.5 * last && fn > 1e3 * cfg.newton_tol))
      break;  // diverging
    last = fn;
    Eigen::MatrixXcd J = detail::jacobian(c, cfg);
    Eigen::VectorXcd rhs(dim);
    for (int i = 0; i < dim; ++i) rhs(i) = f[i];
    Eigen::VectorXcd dx = J.partialPivLu().solve(rhs);
    for (int i = 0; i < dim; ++i) c[i] -= dx(i);
  }
  if (!ok) {
    std::vector<cplx> f = detail::residual(c, u0, cfg);
    double fn = 0.0;
    for (const cplx& z : f) fn = std::max(fn, std::abs(z));
    if (fn > cfg.newton_tol)
      throw solver_failure("solve_step: Newton did not converge (|f| = " +
                           std::to_string(fn) + ")");
  }

  ChebFourier out(cfg.t_lo, cfg.t_hi, cfg.n, cfg.N);
  for (int l = 0; l < cfg.n; ++l)
    for (int k = -cfg.N; k <= cfg.N; ++k)
      out.coeff(l, k) = ComplexInterval(c[size_t(l) * width + (k + cfg.N)]);
  return out;
}

/// Linear variational problem on the band |k| <= m around an approximate
/// solution. The adjoint flavor is the same system with sign-flipped diagonal
/// and the reflected, negated multiplication operator.
struct VariationalSpec {
  const ChebFourier* abar = nullptr;  // point intervals
  int m = 0;
  int n_col = 0;  // 0 means "use abar->n"
  bool adjoint = false;
  double theta = 0.0;
  double omega = 2.0 * 3.14159265358979323846;
};

namespace detail {

// coefficients of the coupling series g (= abar or its reflection), midpoints
inline std::vector<cplx> coupling_mid(const VariationalSpec& spec) {
  const ChebFourier& a = *spec.abar;
  std::vector<cplx> g(size_t(a.n) * (2 * a.N + 1));
  for (int l = 0; l < a.n; ++l)
    for (int k = -a.N; k <= a.N; ++k)
      g[size_t(l) * (2 * a.N + 1) + (k + a.N)] =
          spec.adjoint ? a.coeff(l, -k).mid() : a.coeff(l, k).mid();
  return g;
}

}  // namespace detail

/// Solves the 2m+1 column problems (identity data at t_lo) in one LU pass.
inline std::vector<ChebFourier> solve_variational_columns(const VariationalSpec& spec) {
  const ChebFourier& a = *spec.abar;
  const int m = spec.m, n = spec.n_col > 0 ? spec.n_col : a.n;
  const int width = 2 * m + 1, dim = n * width;
  const double h = a.t_hi - a.t_lo;
  const cplx eith = std::polar(1.0, spec.theta);
  const double lam_sign = spec.adjoint ? 1.0 : -1.0;
  const cplx sigma = (spec.adjoint ? -1.0 : 1.0) * h * eith;
  const std::vector<cplx> g = detail::coupling_mid(spec);

  auto gx = [&](int l, int k) { return detail::ext(g, a.n, a.N, l, k); };
  auto id2 = [&](int l, int k) { return l * width + (k + m); };

  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = -m; k <= m; ++k) {
    const cplx lam =
        lam_sign * 0.5 * h * eith * spec.omega * spec.omega * double(k) * double(k);
    for (int j = 0; j < n; ++j)
      J(id2(0, k), id2(j, k)) = (j == 0) ? 1.0 : 2.0 * (j % 2 ? -1.0 : 1.0);
    for (int l = 1; l < n; ++l) {
      const int row = id2(l, k);
      J(row, id2(l, k)) += 2.0 * double(l);
      if (l + 1 <= n - 1) J(row, id2(l + 1, k)) += lam;
      J(row, id2(l - 1, k)) -= lam;
      for (int l2 = 0; l2 < n; ++l2)
        for (int k2 = -m; k2 <= m; ++k2) {
          cplx d = gx(l + 1 - l2, k - k2) - gx(l - 1 - l2, k - k2);
          if (l2 >= 1) d += gx(l + 1 + l2, k - k2) - gx(l - 1 + l2, k - k2);
          if (d != cplx(0.0, 0.0)) J(row, id2(l2, k2)) += sigma * d;
        }
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
  std::vector<ChebFourier> cols;
  cols.reserve(width);
  for (int j = -m; j <= m; ++j) {
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim);
    rhs(id2(0, j)) = 1.0;  // unit initial datum in mode j
    Eigen::VectorXcd x = lu.solve(rhs);
    ChebFourier col(a.t_lo, a.t_hi, n, m);
    for (int l = 0; l < n; ++l)
      for (int k = -m; k <= m; ++k)
        col.coeff(l, k) = ComplexInterval(cplx(x(id2(l, k))));
    cols.push_back(std::move(col));
  }
  return cols;
}

}  // namespace approx
}  // namespace rheat
