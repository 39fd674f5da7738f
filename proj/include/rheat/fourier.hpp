#pragma once

#include <vector>

#include "rheat/interval.hpp"

namespace rheat {

/// Finitely supported bi-infinite Fourier coefficient vector over complex
/// intervals: coefficients for |k| <= N, implicitly zero outside.
struct FourierVec {
  int N = 0;
  std::vector<ComplexInterval> c;  // index k + N

  FourierVec() : c(1) {}
  explicit FourierVec(int max_wavenumber)
      : N(max_wavenumber), c(2 * size_t(max_wavenumber) + 1) {}

  ComplexInterval& coeff(int k) { return c[size_t(k + N)]; }
  const ComplexInterval& coeff(int k) const { return c[size_t(k + N)]; }

  /// Coefficient with implicit zeros outside the support.
  ComplexInterval at(int k) const {
    if (k < -N || k > N) return ComplexInterval::zero();
    return c[size_t(k + N)];
  }

  bool valid() const {
    for (const auto& z : c)
      if (!z.valid()) return false;
    return true;
  }
};

/// Exact finite discrete convolution; support grows to N_a + N_b.
inline FourierVec convolve(const FourierVec& a, const FourierVec& b) {
  FourierVec out(a.N + b.N);
  for (int k1 = -a.N; k1 <= a.N; ++k1) {
    const ComplexInterval& x = a.coeff(k1);
    if (x.is_point() && x.re.lo == 0.0 && x.im.lo == 0.0) continue;
    for (int k2 = -b.N; k2 <= b.N; ++k2)
      out.coeff(k1 + k2) += x * b.coeff(k2);
  }
  return out;
}

/// Enclosure of sum_k |a_k|.
inline RealInterval ell1_norm(const FourierVec& a) {
  RealInterval s(0.0);
  for (const auto& z : a.c) s += cabs(z);
  return s;
}

/// Finite modes |k| <= m plus a rigorous bound on the discarded tail mass.
struct TailSplit {
  FourierVec finite;
  RealInterval tail_norm;
};

inline TailSplit project_split(const FourierVec& a, int m) {
  if (m < 0) throw std::invalid_argument("project_split: m must be >= 0");
  TailSplit out;
  out.finite = FourierVec(std::min(m, a.N));
  out.tail_norm = RealInterval(0.0);
  for (int k = -a.N; k <= a.N; ++k) {
    if (std::abs(k) <= m)
      out.finite.coeff(k) = a.coeff(k);
    else
      out.tail_norm += cabs(a.coeff(k));
  }
  return out;
}

inline FourierVec strip_zero_mode(const FourierVec& a) {
  FourierVec out = a;
  out.coeff(0) = ComplexInterval::zero();
  return out;
}

inline FourierVec reflect(const FourierVec& a) {
  FourierVec out(a.N);
  for (int k = -a.N; k <= a.N; ++k) out.coeff(k) = a.coeff(-k);
  return out;
}

/// (L a)_k = -k^2 omega^2 a_k.
inline FourierVec apply_laplacian(const FourierVec& a, const RealInterval& omega) {
  FourierVec out(a.N);
  const RealInterval w2 = isq(omega);
  for (int k = -a.N; k <= a.N; ++k)
    out.coeff(k) = a.coeff(k) * scale(w2, -double(k) * double(k));
  return out;
}

inline FourierVec operator+(const FourierVec& a, const FourierVec& b) {
  FourierVec out(std::max(a.N, b.N));
  for (int k = -out.N; k <= out.N; ++k) out.coeff(k) = a.at(k) + b.at(k);
  return out;
}

inline FourierVec operator-(const FourierVec& a, const FourierVec& b) {
  FourierVec out(std::max(a.N, b.N));
  for (int k = -out.N; k <= out.N; ++k) out.coeff(k) = a.at(k) - b.at(k);
  return out;
}

}  // namespace rheat
