#include "cwl/certified.hpp"

#include <algorithm>
#include <ostream>

#include "cwl/errors.hpp"

namespace cwl {

namespace {

mpfr_prec_t max_prec(const CertifiedValue& a, const CertifiedValue& b) {
  return std::max(a.precision(), b.precision());
}

void set_prec_keep(mpfr_t x, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  if (mpfr_get_prec(x) < prec) mpfr_prec_round(x, prec, rnd);
}

std::string format_endpoint(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(x)) return "0";
  if (mpfr_nan_p(x)) return "nan";
  if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), x, rnd);
  std::string mant(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  // mpfr gives 0.<mant> * 10^exp10; emit d.ddd e(exp10-1)
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
  std::string out = sign + mant.substr(0, 1);
  if (mant.size() > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(static_cast<long>(exp10) - 1);
  return out;
}

}  // namespace

CertifiedValue::CertifiedValue(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

CertifiedValue::CertifiedValue(const CertifiedValue& other) {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

CertifiedValue::CertifiedValue(CertifiedValue&& other) noexcept {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

CertifiedValue& CertifiedValue::operator=(const CertifiedValue& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

CertifiedValue& CertifiedValue::operator=(CertifiedValue&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

CertifiedValue::~CertifiedValue() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

CertifiedValue CertifiedValue::exact(long value, mpfr_prec_t prec) {
  CertifiedValue r(prec);
  mpfr_set_si(r.lo_, value, MPFR_RNDD);
  mpfr_set_si(r.hi_, value, MPFR_RNDU);
  return r;
}

CertifiedValue CertifiedValue::exact(const BigInt& value, mpfr_prec_t prec) {
  CertifiedValue r(prec);
  mpfr_set_z(r.lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, value.get_mpz_t(), MPFR_RNDU);
  return r;
}

CertifiedValue CertifiedValue::exact(const ExactRational& value, mpfr_prec_t prec) {
  CertifiedValue r(prec);
  mpfr_set_q(r.lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, value.get_mpq_t(), MPFR_RNDU);
  return r;
}

CertifiedValue CertifiedValue::between(const ExactRational& lo, const ExactRational& hi,
                                       mpfr_prec_t prec) {
  if (lo > hi) throw DomainError("CertifiedValue::between: lo > hi");
  CertifiedValue r(prec);
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

CertifiedValue CertifiedValue::pi(mpfr_prec_t prec) {
  CertifiedValue r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

CertifiedValue CertifiedValue::with_precision(mpfr_prec_t prec) const {
  CertifiedValue r(prec);
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

double CertifiedValue::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double CertifiedValue::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double CertifiedValue::midpoint() const {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double CertifiedValue::width() const {
  mpfr_t w;
  mpfr_init2(w, precision());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

bool CertifiedValue::contains(double x) const {
  return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0;
}

bool CertifiedValue::contains(const ExactRational& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

bool CertifiedValue::contains(const CertifiedValue& inner) const {
  return mpfr_lessequal_p(lo_, inner.lo_) && mpfr_greaterequal_p(hi_, inner.hi_);
}

bool CertifiedValue::overlaps(const CertifiedValue& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_lessequal_p(other.lo_, hi_);
}

bool CertifiedValue::is_exact_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }
bool CertifiedValue::is_point() const { return mpfr_equal_p(lo_, hi_); }
bool CertifiedValue::certainly_positive() const { return mpfr_sgn(lo_) > 0; }
bool CertifiedValue::certainly_nonnegative() const { return mpfr_sgn(lo_) >= 0; }

std::string CertifiedValue::lo_string(int digits) const {
  return format_endpoint(lo_, digits, MPFR_RNDD);
}

std::string CertifiedValue::hi_string(int digits) const {
  return format_endpoint(hi_, digits, MPFR_RNDU);
}

CertifiedValue& CertifiedValue::operator+=(const CertifiedValue& rhs) {
  mpfr_prec_t p = max_prec(*this, rhs);
  set_prec_keep(lo_, p, MPFR_RNDD);
  set_prec_keep(hi_, p, MPFR_RNDU);
  mpfr_add(lo_, lo_, rhs.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, rhs.hi_, MPFR_RNDU);
  return *this;
}

CertifiedValue& CertifiedValue::operator-=(const CertifiedValue& rhs) {
  mpfr_prec_t p = max_prec(*this, rhs);
  set_prec_keep(lo_, p, MPFR_RNDD);
  set_prec_keep(hi_, p, MPFR_RNDU);
  mpfr_sub(lo_, lo_, rhs.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, rhs.lo_, MPFR_RNDU);
  return *this;
}

CertifiedValue& CertifiedValue::operator*=(const CertifiedValue& rhs) {
  mpfr_prec_t p = max_prec(*this, rhs);
  mpfr_t lo, hi, t;
  mpfr_inits2(p, lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_srcptr xs[2] = {lo_, hi_};
  mpfr_srcptr ys[2] = {rhs.lo_, rhs.hi_};
  mpfr_set_inf(lo, 1);
  mpfr_set_inf(hi, -1);
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      mpfr_min(lo, lo, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      mpfr_max(hi, hi, t, MPFR_RNDU);
    }
  }
  mpfr_set_prec(lo_, p);
  mpfr_set_prec(hi_, p);
  mpfr_set(lo_, lo, MPFR_RNDD);
  mpfr_set(hi_, hi, MPFR_RNDU);
  mpfr_clears(lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  return *this;
}

CertifiedValue& CertifiedValue::operator/=(const CertifiedValue& rhs) {
  if (mpfr_sgn(rhs.lo_) <= 0 && mpfr_sgn(rhs.hi_) >= 0) {
    throw DomainError("CertifiedValue: division by an interval containing 0");
  }
  mpfr_prec_t p = max_prec(*this, rhs);
  mpfr_t lo, hi, t;
  mpfr_inits2(p, lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_srcptr xs[2] = {lo_, hi_};
  mpfr_srcptr ys[2] = {rhs.lo_, rhs.hi_};
  mpfr_set_inf(lo, 1);
  mpfr_set_inf(hi, -1);
  for (auto x : xs) {
    for (auto y : ys) {
      mpfr_div(t, x, y, MPFR_RNDD);
      mpfr_min(lo, lo, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      mpfr_max(hi, hi, t, MPFR_RNDU);
    }
  }
  mpfr_set_prec(lo_, p);
  mpfr_set_prec(hi_, p);
  mpfr_set(lo_, lo, MPFR_RNDD);
  mpfr_set(hi_, hi, MPFR_RNDU);
  mpfr_clears(lo, hi, t, static_cast<mpfr_ptr>(nullptr));
  return *this;
}

CertifiedValue operator-(const CertifiedValue& x) {
  CertifiedValue r(x.precision());
  mpfr_neg(r.lo_, x.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
  return r;
}

CertifiedValue exp(const CertifiedValue& x) {
  CertifiedValue r(x.precision());
  mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

CertifiedValue log(const CertifiedValue& x) {
  if (!x.certainly_positive()) throw DomainError("log of an interval not bounded away from 0");
  CertifiedValue r(x.precision());
  mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

CertifiedValue abs(const CertifiedValue& x) {
  CertifiedValue r(x.precision());
  if (mpfr_sgn(x.lo_) >= 0) {
    r = x;
  } else if (mpfr_sgn(x.hi_) <= 0) {
    r = -x;
  } else {
    mpfr_set_zero(r.lo_, 1);
    mpfr_t nlo;
    mpfr_init2(nlo, x.precision());
    mpfr_neg(nlo, x.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, nlo, x.hi_, MPFR_RNDU);
    mpfr_clear(nlo);
  }
  return r;
}

CertifiedValue hull(const CertifiedValue& a, const CertifiedValue& b) {
  CertifiedValue r(max_prec(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

CertifiedValue pow(const CertifiedValue& base, unsigned exponent) {
  CertifiedValue result = CertifiedValue::exact(1L, base.precision());
  CertifiedValue sq = base;
  // Square-and-multiply on intervals overestimates for mixed-sign bases;
  // even powers of a sign-straddling interval are taken via abs first.
  if (exponent % 2 == 0) sq = abs(base);
  while (exponent > 0) {
    if (exponent & 1U) result *= sq;
    exponent >>= 1U;
    if (exponent > 0) sq *= sq;
  }
  return result;
}

ExactRational upper_rational(const CertifiedValue& x) {
  ExactRational q;
  mpfr_get_q(q.get_mpq_t(), x.hi());
  return q;
}

ExactRational lower_rational(const CertifiedValue& x) {
  ExactRational q;
  mpfr_get_q(q.get_mpq_t(), x.lo());
  return q;
}

std::ostream& operator<<(std::ostream& os, const CertifiedValue& x) {
  return os << '[' << x.lo_string(20) << ", " << x.hi_string(20) << ']';
}

}  // namespace cwl
