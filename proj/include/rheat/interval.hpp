#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace rheat {

/// Thrown when an operation cannot produce a rigorous enclosure
/// (e.g. division by an interval containing zero).
struct enclosure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double up1(double x) { return std::nextafter(x, kInf); }
inline double dn1(double x) { return std::nextafter(x, -kInf); }

// libm transcendentals are faithful but not correctly rounded; nudge a few
// ulps outward instead of one.
inline double upn(double x, int k) {
  for (int i = 0; i < k; ++i) x = up1(x);
  return x;
}
inline double dnn(double x, int k) {
  for (int i = 0; i < k; ++i) x = dn1(x);
  return x;
}

inline double umul(double a, double b) { return up1(a * b); }

}  // namespace detail

/// Closed real interval [lo, hi] with outward (one-ulp) rounding on every
/// arithmetic result. Invalid intervals (overflow, bad construction) carry
/// NaN endpoints and propagate through all operations.
struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;

  RealInterval() = default;
  explicit RealInterval(double x) : lo(x), hi(x) {}
  RealInterval(double l, double h) : lo(l), hi(h) {}

  static RealInterval invalid() { return {detail::kNaN, detail::kNaN}; }

  bool valid() const {
    return std::isfinite(lo) && std::isfinite(hi) && lo <= hi;
  }
  bool contains(double x) const { return valid() && lo <= x && x <= hi; }
  bool contains(const RealInterval& o) const {
    return valid() && o.valid() && lo <= o.lo && o.hi <= hi;
  }
  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool is_point() const { return lo == hi; }

  /// max(|x|) over the interval, rounded up.
  double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }

  RealInterval operator-() const { return {-hi, -lo}; }
};

inline RealInterval checked(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo <= hi))
    return RealInterval::invalid();
  return {lo, hi};
}

inline bool is_point_zero(const RealInterval& a) { return a.lo == 0.0 && a.hi == 0.0; }

inline RealInterval operator+(const RealInterval& a, const RealInterval& b) {
  if (!a.valid() || !b.valid()) return RealInterval::invalid();
  if (is_point_zero(b)) return a;  // exact
  if (is_point_zero(a)) return b;
  return checked(detail::dn1(a.lo + b.lo), detail::up1(a.hi + b.hi));
}

inline RealInterval operator-(const RealInterval& a, const RealInterval& b) {
  if (!a.valid() || !b.valid()) return RealInterval::invalid();
  if (is_point_zero(b)) return a;  // exact
  if (is_point_zero(a)) return -b;
  return checked(detail::dn1(a.lo - b.hi), detail::up1(a.hi - b.lo));
}

inline RealInterval operator*(const RealInterval& a, const RealInterval& b) {
  if (!a.valid() || !b.valid()) return RealInterval::invalid();
  if (is_point_zero(a) || is_point_zero(b)) return RealInterval(0.0);  // exact
  const double p1 = a.lo * b.lo, p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return checked(detail::dn1(std::min({p1, p2, p3, p4})),
                 detail::up1(std::max({p1, p2, p3, p4})));
}

inline RealInterval operator/(const RealInterval& a, const RealInterval& b) {
  if (!a.valid() || !b.valid()) return RealInterval::invalid();
  if (b.lo <= 0.0 && b.hi >= 0.0)
    throw enclosure_error("interval division by an interval containing 0");
  const double q1 = a.lo / b.lo, q2 = a.lo / b.hi;
  const double q3 = a.hi / b.lo, q4 = a.hi / b.hi;
  return checked(detail::dn1(std::min({q1, q2, q3, q4})),
                 detail::up1(std::max({q1, q2, q3, q4})));
}

inline RealInterval& operator+=(RealInterval& a, const RealInterval& b) { return a = a + b; }
inline RealInterval& operator-=(RealInterval& a, const RealInterval& b) { return a = a - b; }
inline RealInterval& operator*=(RealInterval& a, const RealInterval& b) { return a = a * b; }

/// Exact scaling by a double (the product endpoints are still outward rounded).
inline RealInterval scale(const RealInterval& a, double s) {
  return a * RealInterval(s);
}

/// Enclosure of |x| over the interval.
inline RealInterval iabs(const RealInterval& a) {
  if (!a.valid()) return RealInterval::invalid();
  if (a.lo >= 0.0) return a;
  if (a.hi <= 0.0) return -a;
  return {0.0, std::max(-a.lo, a.hi)};
}

/// Enclosure of x^2 (sharper than a*a when 0 is inside).
inline RealInterval isq(const RealInterval& a) {
  if (!a.valid()) return RealInterval::invalid();
  const double m = a.mag();
  const double u = detail::up1(m * m);
  if (a.lo <= 0.0 && a.hi >= 0.0) return checked(0.0, u);
  const double w = std::min(std::fabs(a.lo), std::fabs(a.hi));
  return checked(detail::dn1(w * w), u);
}

/// Enclosure of sqrt(x intersected with [0, inf)); the callers' true values
/// are nonnegative, a slightly negative lower endpoint is rounding slop.
inline RealInterval isqrt(const RealInterval& a) {
  if (!a.valid()) return RealInterval::invalid();
  if (a.hi < 0.0) throw enclosure_error("isqrt of a negative interval");
  const double l = a.lo > 0.0 ? detail::dn1(std::sqrt(a.lo)) : 0.0;
  return checked(std::max(l, 0.0), detail::up1(std::sqrt(a.hi)));
}

inline RealInterval imax(const RealInterval& a, const RealInterval& b) {
  if (!a.valid() || !b.valid()) return RealInterval::invalid();
  return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)};
}

inline RealInterval imin(const RealInterval& a, const RealInterval& b) {
  if (!a.valid() || !b.valid()) return RealInterval::invalid();
  return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline RealInterval hull(const RealInterval& a, const RealInterval& b) {
  if (!a.valid() || !b.valid()) return RealInterval::invalid();
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

/// x^k for k >= 0 by repeated interval multiplication.
inline RealInterval ipow(const RealInterval& a, int k) {
  RealInterval r(1.0);
  for (int i = 0; i < k; ++i) r *= a;
  return r;
}

inline RealInterval interval_pi() {
  // M_PI is the nearest double below pi.
  return {3.14159265358979311599796346854, detail::up1(3.14159265358979311599796346854)};
}

inline RealInterval interval_two_pi() { return scale(interval_pi(), 2.0); }

/// Enclosure of exp over the interval (monotone; 4-ulp outward slack for libm).
inline RealInterval iexp(const RealInterval& a) {
  if (!a.valid()) return RealInterval::invalid();
  const double l = std::max(detail::dnn(std::exp(a.lo), 4), 0.0);
  const double h = detail::upn(std::exp(a.hi), 4);
  if (!std::isfinite(h)) return RealInterval::invalid();
  return checked(l, h);
}

/// cos on |x| <= pi (all phase angles used here satisfy this).
inline RealInterval icos(const RealInterval& a) {
  if (!a.valid()) return RealInterval::invalid();
  if (a.is_point() && a.lo == 0.0) return RealInterval(1.0);
  const RealInterval pi = interval_pi();
  if (a.lo < -pi.hi || a.hi > pi.hi)
    throw enclosure_error("icos restricted to |x| <= pi");
  const double c1 = std::cos(a.lo), c2 = std::cos(a.hi);
  double hi = detail::upn(std::max(c1, c2), 4);
  double lo = detail::dnn(std::min(c1, c2), 4);
  if (a.lo <= 0.0 && a.hi >= 0.0) hi = 1.0;
  if (a.hi >= pi.lo || a.lo <= -pi.lo) lo = -1.0;
  return checked(std::max(lo, -1.0), std::min(hi, 1.0));
}

/// sin on |x| <= pi.
inline RealInterval isin(const RealInterval& a) {
  if (!a.valid()) return RealInterval::invalid();
  if (a.is_point() && a.lo == 0.0) return RealInterval(0.0);
  const RealInterval pi = interval_pi();
  if (a.lo < -pi.hi || a.hi > pi.hi)
    throw enclosure_error("isin restricted to |x| <= pi");
  const RealInterval half_pi = scale(pi, 0.5);
  const double s1 = std::sin(a.lo), s2 = std::sin(a.hi);
  double hi = detail::upn(std::max(s1, s2), 4);
  double lo = detail::dnn(std::min(s1, s2), 4);
  if (a.hi >= half_pi.lo && a.lo <= half_pi.hi) hi = 1.0;
  if (a.lo <= -half_pi.lo && a.hi >= -half_pi.hi) lo = -1.0;
  return checked(std::max(lo, -1.0), std::min(hi, 1.0));
}

namespace detail {

// Shared series kernel: sum_{j>=j0} x^{j-j0} h^j / j!, with a geometric
// remainder bound. Used for (e^{xh}-1)/x (j0=1) and (e^{xh}-1-xh)/x^2 (j0=2).
inline RealInterval expm1_series(const RealInterval& x, const RealInterval& h,
                                 int j0) {
  const double ux = x.mag(), uh = h.mag();
  double uxh = umul(ux, uh);
  int terms = 16 + static_cast<int>(std::ceil(2.0 * uxh));
  if (terms > 400) return RealInterval::invalid();

  RealInterval term = (j0 == 1) ? h : scale(h * h, 0.5);
  RealInterval sum = term;
  int j = j0;
  for (int i = 0; i < terms; ++i) {
    ++j;
    term = term * x * h / RealInterval(static_cast<double>(j));
    sum += term;
  }
  // |next term| <= mag(term) * ux*uh/(j+1); ratio <= ux*uh/(j+2) <= 1/2.
  const double b = umul(umul(term.mag(), uxh), 1.0 / (j + 1));
  const double q = umul(uxh, 1.0 / (j + 2));
  if (!(q < 0.5)) return RealInterval::invalid();
  const double rem = umul(b, 1.0 / (1.0 - 0.5) /* >= 1/(1-q) */);
  return sum + RealInterval(-rem, rem);
}

}  // namespace detail

/// Enclosure of (e^{x h} - 1)/x, valid for any x (including 0 in x, where the
/// series with remainder is used). The limit value at x = 0 is h.
inline RealInterval expm1_div(const RealInterval& x, const RealInterval& h) {
  if (!x.valid() || !h.valid()) return RealInterval::invalid();
  const bool zero_in_x = (x.lo <= 0.0 && x.hi >= 0.0);
  const double uxh = detail::umul(x.mag(), h.mag());
  if (zero_in_x || uxh < 0.25) return detail::expm1_series(x, h, 1);
  return (iexp(x * h) - RealInterval(1.0)) / x;
}

/// Enclosure of (e^{x h} - 1 - x h)/x^2 == (expm1_div(x,h) - h)/x.
inline RealInterval expm1_div2(const RealInterval& x, const RealInterval& h) {
  if (!x.valid() || !h.valid()) return RealInterval::invalid();
  const bool zero_in_x = (x.lo <= 0.0 && x.hi >= 0.0);
  const double uxh = detail::umul(x.mag(), h.mag());
  if (zero_in_x || uxh < 0.25) return detail::expm1_series(x, h, 2);
  return (expm1_div(x, h) - h) / x;
}

namespace detail {

// Canonical decimal form (digit string sans leading/trailing zeros, exponent
// of the leading digit, sign). Used to decide whether a decimal literal is
// exactly representable as a double.
struct Decimal {
  bool neg = false;
  std::string digits;  // empty means zero
  long exp10 = 0;      // value = 0.digits * 10^exp10
};

inline bool parse_decimal_text(const std::string& s, Decimal& out) {
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    out.neg = (s[i] == '-');
    ++i;
  }
  std::string digits;
  long point_shift = 0;
  bool seen_point = false, seen_digit = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --point_shift;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) return false;
  long e = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      eneg = (s[i] == '-');
      ++i;
    }
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      e = e * 10 + (s[i] - '0');
      if (e > 100000) return false;
    }
    if (eneg) e = -e;
  }
  if (i != s.size()) return false;
  // value = digits * 10^(point_shift + e); normalize to 0.digits form.
  size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) {
    out.digits.clear();
    return true;
  }
  size_t last = digits.find_last_not_of('0');
  out.exp10 = static_cast<long>(digits.size()) + point_shift + e -
              static_cast<long>(first);
  out.digits = digits.substr(first, last - first + 1);
  return true;
}

inline Decimal decimal_of_double(double d) {
  char buf[1200];
  std::snprintf(buf, sizeof(buf), "%.*e", 780, d);
  Decimal dec;
  parse_decimal_text(buf, dec);
  return dec;
}

}  // namespace detail

/// Parse a decimal literal into a rigorous enclosure: a point interval when
/// the value is exactly representable, otherwise one ulp outward on each side.
inline RealInterval parse_decimal(const std::string& s) {
  detail::Decimal in;
  if (!detail::parse_decimal_text(s, in))
    throw std::invalid_argument("parse_decimal: bad literal '" + s + "'");
  const double d = std::strtod(s.c_str(), nullptr);
  if (!std::isfinite(d)) throw std::invalid_argument("parse_decimal: overflow");
  const detail::Decimal got = detail::decimal_of_double(d);
  const bool exact = (in.digits == got.digits) &&
                     (in.digits.empty() ||
                      (in.exp10 == got.exp10 && in.neg == got.neg));
  if (exact) return RealInterval(d);
  return {detail::dn1(d), detail::up1(d)};
}

/// Rectangular complex interval: the set {x + iy : x in re, y in im}.
struct ComplexInterval {
  RealInterval re, im;

  ComplexInterval() = default;
  ComplexInterval(const RealInterval& r, const RealInterval& i) : re(r), im(i) {}
  explicit ComplexInterval(double r, double i = 0.0)
      : re(RealInterval(r)), im(RealInterval(i)) {}
  explicit ComplexInterval(std::complex<double> z)
      : re(RealInterval(z.real())), im(RealInterval(z.imag())) {}

  static ComplexInterval zero() { return ComplexInterval(0.0, 0.0); }
  static ComplexInterval one() { return ComplexInterval(1.0, 0.0); }

  bool valid() const { return re.valid() && im.valid(); }
  bool contains(std::complex<double> z) const {
    return re.contains(z.real()) && im.contains(z.imag());
  }
  bool is_point() const { return re.is_point() && im.is_point(); }
  std::complex<double> mid() const { return {re.mid(), im.mid()}; }
};

inline ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re + b.re, a.im + b.im};
}
inline ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re - b.re, a.im - b.im};
}
inline ComplexInterval operator-(const ComplexInterval& a) { return {-a.re, -a.im}; }
inline ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ComplexInterval operator*(const ComplexInterval& a, const RealInterval& s) {
  return {a.re * s, a.im * s};
}
inline ComplexInterval operator*(const RealInterval& s, const ComplexInterval& a) {
  return a * s;
}
inline ComplexInterval& operator+=(ComplexInterval& a, const ComplexInterval& b) {
  return a = a + b;
}
inline ComplexInterval& operator-=(ComplexInterval& a, const ComplexInterval& b) {
  return a = a - b;
}

inline ComplexInterval conj(const ComplexInterval& a) { return {a.re, -a.im}; }

/// Enclosure of |z|^2 over the rectangle.
inline RealInterval mag2(const ComplexInterval& a) { return isq(a.re) + isq(a.im); }

/// Enclosure of |z| over the rectangle.
inline RealInterval cabs(const ComplexInterval& a) { return isqrt(mag2(a)); }

inline double abs_upper(const ComplexInterval& a) { return cabs(a).hi; }

inline ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b) {
  const RealInterval m2 = mag2(b);
  if (!(m2.lo > 0.0))
    throw enclosure_error("complex interval division by interval containing 0");
  const ComplexInterval num = a * conj(b);
  return {num.re / m2, num.im / m2};
}

/// e^{i theta} as a complex interval.
inline ComplexInterval unit_phase(const RealInterval& theta) {
  return {icos(theta), isin(theta)};
}

}  // namespace rheat
