#pragma once

#include <iostream>
#include <sstream>
#include <vector>

#include "rheat/fourier.hpp"
#include "rheat/interval.hpp"

namespace rheat {

/// Fourier x Chebyshev coefficient array on a time subinterval [t_lo, t_hi].
///
/// Storage convention everywhere: the value of mode k at time t is
///   a_k(t) = c_{0,k} + 2 sum_{l>=1} c_{l,k} T_l(tau(t)),
/// with tau the affine map [t_lo, t_hi] -> [-1, 1]. The first Chebyshev
/// coefficient is unweighted, the rest are doubled.
struct ChebFourier {
  double t_lo = 0.0, t_hi = 1.0;
  int n = 0;  // Chebyshev order (rows 0..n-1)
  int N = 0;  // Fourier band (columns -N..N)
  std::vector<ComplexInterval> c;

  ChebFourier() = default;
  ChebFourier(double tlo, double thi, int cheb_order, int fourier_band)
      : t_lo(tlo), t_hi(thi), n(cheb_order), N(fourier_band),
        c(size_t(cheb_order) * (2 * size_t(fourier_band) + 1)) {
    if (!(tlo < thi)) throw std::invalid_argument("ChebFourier: t_lo must be < t_hi");
  }

  size_t idx(int ell, int k) const { return size_t(ell) * (2 * size_t(N) + 1) + size_t(k + N); }
  ComplexInterval& coeff(int ell, int k) { return c[idx(ell, k)]; }
  const ComplexInterval& coeff(int ell, int k) const { return c[idx(ell, k)]; }

  ComplexInterval at(int ell, int k) const {
    if (ell < 0 || ell >= n || k < -N || k > N) return ComplexInterval::zero();
    return c[idx(ell, k)];
  }

  /// Rigorous step length t_hi - t_lo.
  RealInterval h() const { return RealInterval(t_hi) - RealInterval(t_lo); }

  bool same_interval(const ChebFourier& o) const {
    return t_lo == o.t_lo && t_hi == o.t_hi;
  }
};

/// Doubly indexed convolution with symmetric extension c_{-l,k} = c_{l,k};
/// exact product-series coefficients in the same storage convention.
inline ChebFourier cheb_convolve(const ChebFourier& a, const ChebFourier& b) {
  if (!a.same_interval(b))
    throw std::invalid_argument("cheb_convolve: time interval mismatch");
  ChebFourier out(a.t_lo, a.t_hi, a.n + b.n - 1, a.N + b.N);
  for (int l1 = -(a.n - 1); l1 <= a.n - 1; ++l1)
    for (int k1 = -a.N; k1 <= a.N; ++k1) {
      const ComplexInterval x = a.coeff(std::abs(l1), k1);
      if (x.is_point() && x.re.lo == 0.0 && x.im.lo == 0.0) continue;
      for (int l2 = -(b.n - 1); l2 <= b.n - 1; ++l2) {
        const int l = l1 + l2;
        if (l < 0) continue;  // result is symmetric in l; keep l >= 0
        for (int k2 = -b.N; k2 <= b.N; ++k2)
          out.coeff(l, k1 + k2) += x * b.coeff(std::abs(l2), k2);
      }
    }
  return out;
}

/// Derivative series (order n-1) by the backward Chebyshev recursion,
/// including the 2/(t_hi - t_lo) chain-rule factor.
inline ChebFourier differentiate(const ChebFourier& a) {
  if (a.n < 1) throw std::invalid_argument("differentiate: need n >= 1");
  const int n_out = std::max(a.n - 1, 1);
  ChebFourier out(a.t_lo, a.t_hi, n_out, a.N);
  const RealInterval chain = RealInterval(2.0) / a.h();
  std::vector<ComplexInterval> math(a.n), deriv(size_t(a.n) + 2);
  for (int k = -a.N; k <= a.N; ++k) {
    // math convention: value = sum b_l T_l with b_0 = c_0, b_l = 2 c_l
    for (int l = 0; l < a.n; ++l)
      math[l] = (l == 0) ? a.coeff(0, k) : a.coeff(l, k) * RealInterval(2.0);
    for (auto& z : deriv) z = ComplexInterval::zero();
    for (int l = a.n - 1; l >= 1; --l)
      deriv[l - 1] = deriv[l + 1] + math[l] * RealInterval(2.0 * l);
    deriv[0] = deriv[0] * RealInterval(0.5);
    for (int l = 0; l < n_out; ++l) {
      ComplexInterval stored = (l == 0) ? deriv[0] : deriv[l] * RealInterval(0.5);
      out.coeff(l, k) = stored * chain;
    }
  }
  return out;
}

/// Value at t_lo, using T_l(-1) = (-1)^l.
inline FourierVec eval_at_start(const ChebFourier& a) {
  FourierVec out(a.N);
  for (int k = -a.N; k <= a.N; ++k) {
    ComplexInterval s = a.coeff(0, k);
    for (int l = 1; l < a.n; ++l)
      s += a.coeff(l, k) * RealInterval(l % 2 ? -2.0 : 2.0);
    out.coeff(k) = s;
  }
  return out;
}

/// Value at t_hi, using T_l(1) = 1.
inline FourierVec eval_at_end(const ChebFourier& a) {
  FourierVec out(a.N);
  for (int k = -a.N; k <= a.N; ++k) {
    ComplexInterval s = a.coeff(0, k);
    for (int l = 1; l < a.n; ++l) s += a.coeff(l, k) * RealInterval(2.0);
    out.coeff(k) = s;
  }
  return out;
}

/// Clenshaw evaluation of every mode over a tau-subinterval of [-1, 1].
inline FourierVec eval_clenshaw(const ChebFourier& a, const RealInterval& tau) {
  FourierVec out(a.N);
  const RealInterval two_tau = scale(tau, 2.0);
  for (int k = -a.N; k <= a.N; ++k) {
    ComplexInterval b1 = ComplexInterval::zero(), b2 = ComplexInterval::zero();
    for (int l = a.n - 1; l >= 1; --l) {
      ComplexInterval math = a.coeff(l, k) * RealInterval(2.0);
      ComplexInterval b0 = math + b1 * two_tau - b2;
      b2 = b1;
      b1 = b0;
    }
    out.coeff(k) = a.coeff(0, k) + b1 * tau - b2;
  }
  return out;
}

inline RealInterval tau_of_t(const ChebFourier& a, const RealInterval& t) {
  const RealInterval num = (t - RealInterval(a.t_lo)) * RealInterval(2.0);
  return num / a.h() - RealInterval(1.0);
}

namespace detail {

// Coefficient-sum majorant of sup_t ||a(t)||_{l1} (|T_l| <= 1).
inline RealInterval coeff_majorant(const ChebFourier& a) {
  RealInterval s(0.0);
  for (int k = -a.N; k <= a.N; ++k)
    for (int l = 0; l < a.n; ++l) {
      RealInterval m = cabs(a.coeff(l, k));
      s += (l == 0) ? m : scale(m, 2.0);
    }
  return s;
}

}  // namespace detail

/// Rigorous upper bound of sup_t ||a(t)||_{l1}. With pieces > 1 the majorant
/// is refined by Clenshaw interval evaluation on subintervals of [-1, 1] and
/// the smaller of the two upper bounds is kept.
inline RealInterval sup_norm_X(const ChebFourier& a, int pieces = 1) {
  RealInterval maj = detail::coeff_majorant(a);
  double lower = 0.0;
  double upper = maj.hi;
  if (pieces > 1) {
    double refined = 0.0;
    for (int p = 0; p < pieces; ++p) {
      const RealInterval tau(-1.0 + 2.0 * p / pieces, -1.0 + 2.0 * (p + 1) / pieces);
      RealInterval nrm = ell1_norm(eval_clenshaw(a, tau));
      refined = std::max(refined, nrm.hi);
      // point evaluation at the piece midpoint gives a valid lower bound on the sup
      RealInterval mid_nrm = ell1_norm(eval_clenshaw(a, RealInterval(tau.mid())));
      lower = std::max(lower, mid_nrm.lo);
    }
    upper = std::min(upper, refined);
  }
  return {std::min(lower, upper), upper};
}

/// Weighted norm sum_{l,k} |c_{l,k}| nu^l on the stored coefficients.
inline RealInterval weighted_norm(const ChebFourier& a, const RealInterval& nu) {
  RealInterval s(0.0);
  RealInterval w(1.0);
  for (int l = 0; l < a.n; ++l) {
    for (int k = -a.N; k <= a.N; ++k) s += cabs(a.coeff(l, k)) * w;
    w *= nu;
  }
  return s;
}

inline ChebFourier strip_zero_mode(const ChebFourier& a) {
  ChebFourier out = a;
  for (int l = 0; l < a.n; ++l) out.coeff(l, 0) = ComplexInterval::zero();
  return out;
}

/// Reflect the Fourier index, k -> -k.
inline ChebFourier reflect_modes(const ChebFourier& a) {
  ChebFourier out(a.t_lo, a.t_hi, a.n, a.N);
  for (int l = 0; l < a.n; ++l)
    for (int k = -a.N; k <= a.N; ++k) out.coeff(l, k) = a.coeff(l, -k);
  return out;
}

// --- serialization (text; %.17g round-trips doubles exactly) ---------------

inline void write_cheb(std::ostream& os, const ChebFourier& a) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "chebfourier v1\nt %.17g %.17g\nsize %d %d\n",
                a.t_lo, a.t_hi, a.n, a.N);
  os << buf;
  for (int l = 0; l < a.n; ++l)
    for (int k = -a.N; k <= a.N; ++k) {
      const ComplexInterval& z = a.coeff(l, k);
      std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n",
                    z.re.lo, z.re.hi, z.im.lo, z.im.hi);
      os << buf;
    }
}

inline ChebFourier read_cheb(std::istream& is) {
  std::string tag, ver;
  is >> tag >> ver;
  if (tag != "chebfourier") throw std::runtime_error("read_cheb: bad header");
  std::string key;
  double tlo, thi;
  int n, N;
  is >> key >> tlo >> thi >> key >> n >> N;
  ChebFourier a(tlo, thi, n, N);
  for (int l = 0; l < n; ++l)
    for (int k = -N; k <= N; ++k) {
      double rl, rh, il, ih;
      is >> rl >> rh >> il >> ih;
      a.coeff(l, k) = ComplexInterval({rl, rh}, {il, ih});
    }
  if (!is) throw std::runtime_error("read_cheb: truncated record");
  return a;
}

}  // namespace rheat
