#pragma once

// Rigorous enclosure of the fundamental matrices of the band-limited
// variational problem by a Newton-Kantorovich argument on Chebyshev
// coefficient space, and the uniform bound W_m derived from them.

#include <optional>
#include <string>

#include "rheat/approx.hpp"
#include "rheat/chebyshev.hpp"
#include "rheat/interval_matrix.hpp"
#include "rheat/parallel.hpp"

namespace rheat {

/// Newton-Kantorovich bounds for one validated column. success means
/// Z0 + Z1 < 1 rigorously and r_min >= Y0/(1 - Z0 - Z1).
struct RadiiBounds {
  RealInterval Y0, Z0, Z1, r_min;
  bool success = false;
};

/// Validated fundamental-matrix series: one Chebyshev column per unit datum,
/// each with a radius in the nu-weighted coefficient norm containing the
/// true solution.
struct ChebMatrix {
  int m = 0;
  bool adjoint = false;
  double nu = 1.0;
  std::vector<ChebFourier> cols;      // size 2m+1, Fourier band m
  std::vector<RealInterval> radius;   // per-column validation radius
  std::vector<RadiiBounds> bounds;

  double t_lo() const { return cols.at(0).t_lo; }
  double t_hi() const { return cols.at(0).t_hi; }
};

namespace var {

/// The linear problem d c_k/dtau = lambda_k c_k + sigma (g * c)_k on the band
/// |k| <= m, in the rescaled variable. The forward problem has
/// lambda_k = -(h/2) e^{i th} w^2 k^2 and sigma = +h e^{i th} with g the
/// approximate solution; the adjoint flips both signs and reflects g in k.
struct VarProblem {
  ChebFourier g;
  ComplexInterval sigma;
  ComplexInterval lam_unit;  // lambda_k = lam_unit * k^2
  int m = 0;
  int n = 0;  // column Chebyshev order
  RealInterval nu;

  ComplexInterval lambda(int k) const {
    return lam_unit * RealInterval(double(k) * double(k));
  }
  int dim() const { return n * (2 * m + 1); }
  int idx(int ell, int k) const { return ell * (2 * m + 1) + (k + m); }
};

inline VarProblem make_problem(const ChebFourier& abar, int m, int n_col,
                               const RealInterval& theta, const RealInterval& omega,
                               bool adjoint, double nu) {
  VarProblem p;
  p.g = adjoint ? reflect_modes(abar) : abar;
  p.m = m;
  p.n = n_col > 0 ? n_col : abar.n;
  p.nu = RealInterval(nu);
  const ComplexInterval eith = unit_phase(theta);
  const RealInterval h = abar.h();
  const RealInterval half_h = scale(h, 0.5);
  const double lam_sign = adjoint ? 1.0 : -1.0;
  p.lam_unit = eith * scale(isq(omega) * half_h, lam_sign);
  p.sigma = eith * scale(h, adjoint ? -1.0 : 1.0);
  return p;
}

/// Jacobian of the finite projection, as an interval matrix.
inline IntervalMatrix build_Df(const VarProblem& p) {
  const int m = p.m, n = p.n;
  IntervalMatrix J(p.dim(), p.dim());
  auto gx = [&](int l, int k) { return p.g.at(std::abs(l), k); };
  for (int k = -m; k <= m; ++k) {
    const ComplexInterval lam = p.lambda(k);
    for (int j = 0; j < n; ++j)
      J.at(p.idx(0, k), p.idx(j, k)) =
          ComplexInterval(j == 0 ? 1.0 : (j % 2 ? -2.0 : 2.0), 0.0);
    for (int l = 1; l < n; ++l) {
      const int row = p.idx(l, k);
      J.at(row, p.idx(l, k)) += ComplexInterval(2.0 * l, 0.0);
      if (l + 1 <= n - 1) J.at(row, p.idx(l + 1, k)) += lam;
      J.at(row, p.idx(l - 1, k)) -= lam;
      for (int l2 = 0; l2 < n; ++l2)
        for (int k2 = -m; k2 <= m; ++k2) {
          ComplexInterval d = gx(l + 1 - l2, k - k2) - gx(l - 1 - l2, k - k2);
          if (l2 >= 1) d += gx(l + 1 + l2, k - k2) - gx(l - 1 + l2, k - k2);
          J.at(row, p.idx(l2, k2)) += p.sigma * d;
        }
    }
  }
  return J;
}

/// Numerical inverse of the midpoint matrix, promoted to point intervals.
inline IntervalMatrix numeric_inverse(const IntervalMatrix& M) {
  const int d = M.rows;
  Eigen::MatrixXcd mid(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) mid(i, j) = M.at(i, j).mid();
  Eigen::MatrixXcd inv = mid.partialPivLu().inverse();
  IntervalMatrix A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A.at(i, j) = ComplexInterval(std::complex<double>(inv(i, j)));
  return A;
}

/// Weighted operator norm of B = Id - A Df on the truncated block:
/// max over columns (l2,k2) of nu^{-l2} sum_{l1,k1} |B| nu^{l1}.
inline RealInterval bound_Z0(const IntervalMatrix& A, const IntervalMatrix& Df,
                             const RealInterval& nu, int m, int n) {
  const IntervalMatrix B = IntervalMatrix::identity(A.rows) - A * Df;
  const int width = 2 * m + 1;
  std::vector<RealInterval> nupow(n, RealInterval(1.0));
  for (int l = 1; l < n; ++l) nupow[l] = nupow[l - 1] * nu;
  RealInterval best(0.0);
  for (int l2 = 0; l2 < n; ++l2)
    for (int k2 = 0; k2 < width; ++k2) {
      RealInterval colsum(0.0);
      for (int l1 = 0; l1 < n; ++l1)
        for (int k1 = 0; k1 < width; ++k1)
          colsum += cabs(B.at(l1 * width + k1, l2 * width + k2)) * nupow[l1];
      best = imax(best, colsum / nupow[l2]);
    }
  return best;
}

/// Component bounds z-hat for the truncation defect A(Df - Adagger):
/// row 0 sees the alternating initial-condition tail, rows 1..n-1 the
/// coupling into discarded Chebyshev modes, and row n-1 additionally the
/// diagonal coupling to the first discarded coefficient.
inline std::vector<RealInterval> zhat_components(const VarProblem& p) {
  const int m = p.m, n = p.n, width = 2 * m + 1;
  const RealInterval abs_sigma = cabs(p.sigma);
  std::vector<RealInterval> nupow(2 * n + 2, RealInterval(1.0));
  for (size_t l = 1; l < nupow.size(); ++l) nupow[l] = nupow[l - 1] * p.nu;

  // Psi(l,k) = max over |k2|<=m, l2 in [n, l+n-1] of |g_{l2-l,k-k2}| / nu^{l2}
  auto psi_bound = [&](int l, int k) {
    RealInterval best(0.0);
    for (int k2 = -m; k2 <= m; ++k2)
      for (int l2 = n; l2 <= l + n - 1; ++l2) {
        RealInterval e = cabs(p.g.at(l2 - l, k - k2)) / nupow[size_t(l2)];
        best = imax(best, e);
      }
    return best;
  };

  std::vector<RealInterval> zh(size_t(n) * width, RealInterval(0.0));
  const RealInterval two_nun = RealInterval(2.0) / nupow[size_t(n)];
  for (int k = -m; k <= m; ++k) {
    zh[size_t(p.idx(0, k))] = two_nun;
    for (int l = 1; l < n; ++l) {
      RealInterval v = (psi_bound(l - 1, k) + psi_bound(l + 1, k)) * abs_sigma;
      if (l == n - 1) v += cabs(p.lambda(k)) / nupow[size_t(n)];
      zh[size_t(p.idx(l, k))] = v;
    }
  }
  return zh;
}

struct Z1Parts {
  RealInterval total, finite, tail;
};

/// Z1 bound: weighted image of z-hat under |A| plus the closed-form tail.
inline Z1Parts bound_Z1(const IntervalMatrix& A, const VarProblem& p) {
  const int m = p.m, n = p.n, width = 2 * m + 1;
  const std::vector<RealInterval> zh = zhat_components(p);
  std::vector<RealInterval> nupow(n + 1, RealInterval(1.0));
  for (int l = 1; l <= n; ++l) nupow[l] = nupow[l - 1] * p.nu;

  RealInterval finite(0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < width; ++k) {
      RealInterval row(0.0);
      for (int j = 0; j < p.dim(); ++j)
        row += cabs(A.at(l * width + k, j)) * zh[size_t(j)];
      finite += row * nupow[l];
    }

  const RealInterval nu_term = p.nu + RealInterval(1.0) / p.nu;
  const RealInterval lam_m = cabs(p.lambda(m));
  const RealInterval gnorm = weighted_norm(p.g, p.nu);
  RealInterval tail = nu_term * (lam_m + scale(cabs(p.sigma) * gnorm, 4.0));
  tail = tail / RealInterval(2.0 * n);

  return {finite + tail, finite, tail};
}

/// Weighted residual norm ||A f(cbar)|| for the column with unit datum in
/// mode j0. The residual has finitely many nonzero rows, so this is an exact
/// interval computation.
inline RealInterval residual_y0(const ChebFourier& col, int j0, const VarProblem& p,
                                const IntervalMatrix& A) {
  const int m = p.m, n = p.n, width = 2 * m + 1;
  const ChebFourier conv = cheb_convolve(p.g, col);
  const int L = conv.n;  // f rows run to conv.n (psi support is conv.n - 1)

  auto psi_at = [&](int l, int k) {
    return p.lambda(k) * col.at(l, k) + p.sigma * conv.at(l, k);
  };

  // rows of f(cbar) for |k| <= m, l = 0..L
  std::vector<ComplexInterval> f(size_t(L + 1) * width);
  for (int k = -m; k <= m; ++k) {
    ComplexInterval s = col.at(0, k);
    for (int j = 1; j < col.n; ++j)
      s += col.at(j, k) * RealInterval(j % 2 ? -2.0 : 2.0);
    if (k == j0) s -= ComplexInterval::one();
    f[size_t(0) * width + (k + m)] = s;
    for (int l = 1; l <= L; ++l) {
      ComplexInterval v = col.at(l, k) * RealInterval(2.0 * l);
      v += psi_at(l + 1, k);
      v -= psi_at(l - 1, k);
      f[size_t(l) * width + (k + m)] = v;
    }
  }

  std::vector<RealInterval> nupow(L + 2, RealInterval(1.0));
  for (int l = 1; l <= L + 1; ++l) nupow[l] = nupow[l - 1] * p.nu;

  RealInterval y0(0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < width; ++k) {
      ComplexInterval av = ComplexInterval::zero();
      for (int j = 0; j < p.dim(); ++j) av += A.at(l * width + k, j) * f[size_t(j)];
      y0 += cabs(av) * nupow[l];
    }
  for (int l = n; l <= L; ++l) {
    RealInterval rowsum(0.0);
    for (int k = 0; k < width; ++k) rowsum += cabs(f[size_t(l) * width + k]);
    y0 += rowsum * nupow[l] / RealInterval(2.0 * l);
  }
  return y0;
}

}  // namespace var

struct ValidationOptions {
  int n_col = 0;        // 0: reuse the order of abar
  double nu = 1.4;      // Chebyshev decay rate of the weighted norm
  double r_inflation = 0.01;
};

struct ValidationResult {
  bool ok = false;
  std::string failure;
  ChebMatrix matrix;
  RealInterval Z0, Z1;
};

/// Validates the forward (or adjoint) fundamental matrix columns around
/// abar. Column solves and residual bounds run concurrently.
inline ValidationResult validate_matrix(const ChebFourier& abar, int m,
                                        const RealInterval& theta,
                                        const RealInterval& omega, bool adjoint,
                                        const ValidationOptions& opt = {}) {
  ValidationResult res;
  var::VarProblem prob =
      var::make_problem(abar, m, opt.n_col, theta, omega, adjoint, opt.nu);

  approx::VariationalSpec spec;
  spec.abar = &abar;
  spec.m = m;
  spec.n_col = prob.n;
  spec.adjoint = adjoint;
  spec.theta = theta.mid();
  spec.omega = omega.mid();
  std::vector<ChebFourier> cols = approx::solve_variational_columns(spec);

  const IntervalMatrix Df = var::build_Df(prob);
  const IntervalMatrix A = var::numeric_inverse(Df);
  res.Z0 = var::bound_Z0(A, Df, prob.nu, m, prob.n);
  res.Z1 = var::bound_Z1(A, prob).total;
  const RealInterval gap = RealInterval(1.0) - res.Z0 - res.Z1;
  if (!(gap.lo > 0.0)) {
    res.failure = "radii failure: Z0 + Z1 >= 1 (Z0 = " + std::to_string(res.Z0.hi) +
                  ", Z1 = " + std::to_string(res.Z1.hi) + ")";
    return res;
  }

  const int width = 2 * m + 1;
  res.matrix.m = m;
  res.matrix.adjoint = adjoint;
  res.matrix.nu = opt.nu;
  res.matrix.cols = std::move(cols);
  res.matrix.radius.resize(width);
  res.matrix.bounds.resize(width);

  bool all_ok = true;
  parallel_for(width, [&](int j) {
    RadiiBounds rb;
    rb.Z0 = res.Z0;
    rb.Z1 = res.Z1;
    rb.Y0 = var::residual_y0(res.matrix.cols[j], j - m, prob, A);
    rb.r_min = rb.Y0 / gap;
    rb.success = rb.Y0.valid() && rb.r_min.valid();
    res.matrix.bounds[j] = rb;
    res.matrix.radius[j] =
        RealInterval(0.0, detail::upn(rb.r_min.hi * (1.0 + opt.r_inflation), 2));
    if (!rb.success) all_ok = false;
  });
  if (!all_ok) {
    res.failure = "radii failure: invalid Y0 bound";
    return res;
  }
  res.ok = true;
  return res;
}

/// sup over the step of the induced l^1 norm of the validated matrix:
/// per-column Chebyshev majorant (optionally refined by piecewise Clenshaw)
/// plus the validation radius. The nu-weighted radius dominates the sup
/// error with the doubled-storage factor 2 since nu >= 1.
inline RealInterval matrix_sup_norm(const ChebMatrix& M, int pieces = 8) {
  RealInterval best(0.0);
  for (size_t j = 0; j < M.cols.size(); ++j) {
    RealInterval col = sup_norm_X(M.cols[j], pieces) + scale(M.radius[j], 2.0);
    best = imax(best, col);
  }
  return best;
}

/// ||M(t_hi)||_1 including radii.
inline RealInterval matrix_end_norm(const ChebMatrix& M) {
  RealInterval best(0.0);
  for (size_t j = 0; j < M.cols.size(); ++j) {
    RealInterval col = ell1_norm(eval_at_end(M.cols[j])) + scale(M.radius[j], 2.0);
    best = imax(best, col);
  }
  return best;
}

struct WmInfo {
  RealInterval W_m;
  RealInterval sup_Phi, sup_Psi;
  RealInterval Phi_end_norm;
};

/// W_m >= sup_t ||Phi(t)||_1 * sup_s ||Psi(s)||_1.
inline WmInfo compute_Wm(const ChebMatrix& Phi, const ChebMatrix& Psi, int pieces = 8) {
  WmInfo info;
  info.sup_Phi = matrix_sup_norm(Phi, pieces);
  info.sup_Psi = matrix_sup_norm(Psi, pieces);
  info.Phi_end_norm = matrix_end_norm(Phi);
  info.W_m = info.sup_Phi * info.sup_Psi;
  return info;
}

}  // namespace rheat
