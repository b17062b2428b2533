#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <iosfwd>
#include <string>

namespace cwl {

using BigInt = mpz_class;
using ExactRational = mpq_class;

// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds the
// lower endpoint toward -inf and the upper toward +inf, so an enclosure of
// the exact operands yields an enclosure of the exact result.
//
// The precision of a result is the larger of its operands' precisions.
class CertifiedValue {
 public:
  explicit CertifiedValue(mpfr_prec_t prec = 64);
  CertifiedValue(const CertifiedValue& other);
  CertifiedValue(CertifiedValue&& other) noexcept;
  CertifiedValue& operator=(const CertifiedValue& other);
  CertifiedValue& operator=(CertifiedValue&& other) noexcept;
  ~CertifiedValue();

  static CertifiedValue exact(long value, mpfr_prec_t prec);
  static CertifiedValue exact(const BigInt& value, mpfr_prec_t prec);
  static CertifiedValue exact(const ExactRational& value, mpfr_prec_t prec);
  // Throws DomainError if lo > hi.
  static CertifiedValue between(const ExactRational& lo, const ExactRational& hi,
                                mpfr_prec_t prec);
  static CertifiedValue pi(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  // Outward-rounded copy at another precision.
  CertifiedValue with_precision(mpfr_prec_t prec) const;
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  double lo_double() const;  // rounded down
  double hi_double() const;  // rounded up
  double midpoint() const;
  double width() const;  // rounded up

  bool contains(double x) const;
  bool contains(const ExactRational& x) const;
  bool contains(const CertifiedValue& inner) const;
  bool overlaps(const CertifiedValue& other) const;
  bool is_exact_zero() const;
  bool is_point() const;
  bool certainly_positive() const;
  bool certainly_nonnegative() const;

  // Decimal endpoint strings, lo rounded down and hi rounded up. digits = 0
  // picks enough digits to represent the working precision.
  std::string lo_string(int digits = 0) const;
  std::string hi_string(int digits = 0) const;

  CertifiedValue& operator+=(const CertifiedValue& rhs);
  CertifiedValue& operator-=(const CertifiedValue& rhs);
  CertifiedValue& operator*=(const CertifiedValue& rhs);
  CertifiedValue& operator/=(const CertifiedValue& rhs);  // rhs must exclude 0

  friend CertifiedValue operator-(const CertifiedValue& x);
  friend CertifiedValue operator+(CertifiedValue a, const CertifiedValue& b) { return a += b; }
  friend CertifiedValue operator-(CertifiedValue a, const CertifiedValue& b) { return a -= b; }
  friend CertifiedValue operator*(CertifiedValue a, const CertifiedValue& b) { return a *= b; }
  friend CertifiedValue operator/(CertifiedValue a, const CertifiedValue& b) { return a /= b; }

  friend CertifiedValue exp(const CertifiedValue& x);
  friend CertifiedValue log(const CertifiedValue& x);  // x must be > 0
  friend CertifiedValue abs(const CertifiedValue& x);
  friend CertifiedValue hull(const CertifiedValue& a, const CertifiedValue& b);

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

CertifiedValue pow(const CertifiedValue& base, unsigned exponent);
// Smallest exact rational >= x.hi() (MPFR values are dyadic, so exact).
ExactRational upper_rational(const CertifiedValue& x);
ExactRational lower_rational(const CertifiedValue& x);

std::ostream& operator<<(std::ostream& os, const CertifiedValue& x);

}  // namespace cwl
