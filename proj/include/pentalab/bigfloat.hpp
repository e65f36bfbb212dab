#pragma once

// Arbitrary-precision binary floating point on top of MPFR. Every value
// carries its own precision; results of binary operations take the larger
// of the two operand precisions. Nothing reads MPFR's global default.

#include <mpfr.h>

#include <cmath>
#include <string>
#include <utility>

#include "pentalab/exact_linalg.hpp"

namespace pentalab {

inline constexpr mpfr_prec_t kMinPrecision = 128;

class Real {
 public:
  explicit Real(mpfr_prec_t prec) {
    if (prec < kMinPrecision) throw UsageError("Real: precision must be at least 128 bits");
    mpfr_init2(x_, prec);
    mpfr_set_zero(x_, 1);
  }
  Real(long v, mpfr_prec_t prec) : Real(prec) { mpfr_set_si(x_, v, MPFR_RNDN); }
  Real(const Integer& v, mpfr_prec_t prec) : Real(prec) { mpfr_set_z(x_, v.get_mpz_t(), MPFR_RNDN); }
  Real(const Rational& v, mpfr_prec_t prec) : Real(prec) { mpfr_set_q(x_, v.get_mpq_t(), MPFR_RNDN); }

  Real(const Real& o) {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_set(x_, o.x_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(x_, mpfr_get_prec(o.x_));
    mpfr_swap(x_, o.x_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(x_, mpfr_get_prec(o.x_));
      mpfr_set(x_, o.x_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(x_, o.x_);
    return *this;
  }
  ~Real() { mpfr_clear(x_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(x_); }
  mpfr_srcptr get() const { return x_; }
  mpfr_ptr get() { return x_; }

  double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(x_); }
  bool is_zero() const { return mpfr_zero_p(x_) != 0; }

  /// log10 |x|, or -inf for zero; safe far outside the double range.
  double log10_abs() const {
    if (is_zero()) return -INFINITY;
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, x_, MPFR_RNDN);
    return std::log10(std::fabs(m)) + static_cast<double>(e) * std::log10(2.0);
  }

  std::string to_string(int digits = 20) const {
    if (is_zero()) return "0";
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, x_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

#define PENTALAB_REAL_BINOP(op, fn)                                        \
  friend Real operator op(const Real& a, const Real& b) {                  \
    Real r(std::max(a.precision(), b.precision()));                        \
    fn(r.x_, a.x_, b.x_, MPFR_RNDN);                                       \
    return r;                                                              \
  }                                                                        \
  Real& operator op##=(const Real& b) {                                    \
    if (b.precision() > precision()) mpfr_prec_round(x_, b.precision(), MPFR_RNDN); \
    fn(x_, x_, b.x_, MPFR_RNDN);                                           \
    return *this;                                                          \
  }
  PENTALAB_REAL_BINOP(+, mpfr_add)
  PENTALAB_REAL_BINOP(-, mpfr_sub)
  PENTALAB_REAL_BINOP(*, mpfr_mul)
  PENTALAB_REAL_BINOP(/, mpfr_div)
#undef PENTALAB_REAL_BINOP

  friend Real operator-(const Real& a) {
    Real r(a.precision());
    mpfr_neg(r.x_, a.x_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.x_, b.x_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.x_, b.x_) != 0; }

 private:
  mpfr_t x_;
};

#define PENTALAB_REAL_UNARY(name, fn)    \
  inline Real name(const Real& a) {      \
    Real r(a.precision());               \
    fn(r.get(), a.get(), MPFR_RNDN);     \
    return r;                            \
  }
PENTALAB_REAL_UNARY(abs, mpfr_abs)
PENTALAB_REAL_UNARY(log, mpfr_log)
PENTALAB_REAL_UNARY(exp, mpfr_exp)
#undef PENTALAB_REAL_UNARY

/// |a - b| / max(|a|, |b|, 1).
inline Real relative_difference(const Real& a, const Real& b) {
  const mpfr_prec_t prec = std::max(a.precision(), b.precision());
  Real scale(1, prec);
  if (abs(a) > scale) scale = abs(a);
  if (abs(b) > scale) scale = abs(b);
  return abs(a - b) / scale;
}

/// Square matrix of reals in row-major order.
class RealMatrix {
 public:
  RealMatrix(std::size_t n, mpfr_prec_t prec) : n_(n), a_(n * n, Real(prec)) {}

  static RealMatrix identity(std::size_t n, mpfr_prec_t prec) {
    RealMatrix m(n, prec);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Real(1, prec);
    return m;
  }

  std::size_t size() const { return n_; }
  Real& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const Real& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

  friend RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    const mpfr_prec_t prec = a.a_.front().precision();
    RealMatrix out(a.n_, prec);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t j = 0; j < a.n_; ++j) {
        Real s(prec);
        for (std::size_t k = 0; k < a.n_; ++k) s += a(i, k) * b(k, j);
        out(i, j) = std::move(s);
      }
    return out;
  }

  Real trace() const {
    Real s(a_.front().precision());
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
  }

 private:
  std::size_t n_;
  std::vector<Real> a_;
};

/// Inverse by Gauss-Jordan with partial pivoting. Throws IllConditioned when
/// a pivot falls below 2^-(prec/2) times the largest entry.
inline RealMatrix inverse(RealMatrix a) {
  const std::size_t n = a.size();
  const mpfr_prec_t prec = a(0, 0).precision();
  RealMatrix inv = RealMatrix::identity(n, prec);
  Real scale(prec);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (abs(a(r, c)) > scale) scale = abs(a(r, c));
  if (scale.is_zero()) throw IllConditioned("zero matrix");
  Real tiny(prec);
  mpfr_mul_2si(tiny.get(), scale.get(), -static_cast<long>(prec / 2), MPFR_RNDN);

  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (abs(a(r, c)) > abs(a(piv, c))) piv = r;
    if (!(abs(a(piv, c)) > tiny)) throw IllConditioned("matrix is numerically singular");
    if (piv != c)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(a(piv, k), a(c, k));
        std::swap(inv(piv, k), inv(c, k));
      }
    const Real p = a(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      a(c, k) /= p;
      inv(c, k) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      const Real f = a(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

/// Monic characteristic polynomial det(x I - A) = x^n + c_1 x^{n-1} + ... + c_n,
/// returned as (1, c_1, ..., c_n), by the Faddeev-LeVerrier recursion.
inline std::vector<Real> characteristic_polynomial(const RealMatrix& a) {
  const std::size_t n = a.size();
  const mpfr_prec_t prec = a(0, 0).precision();
  std::vector<Real> c;
  c.emplace_back(1, prec);
  RealMatrix m = RealMatrix::identity(n, prec);  // M_1 = I
  for (std::size_t k = 1; k <= n; ++k) {
    RealMatrix am = a * m;
    Real ck = -am.trace() / Real(static_cast<long>(k), prec);
    c.push_back(ck);
    if (k == n) break;
    for (std::size_t i = 0; i < n; ++i) am(i, i) += ck;
    m = std::move(am);
  }
  return c;
}

}  // namespace pentalab
