#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "cwl/certified.hpp"

namespace cwl::numtheory {

struct PrimeTable {
  std::uint64_t limit = 0;
  std::vector<std::uint64_t> primes;  // every prime <= limit, ascending

  bool contains(std::uint64_t n) const;
};

PrimeTable sieve_primes(std::uint64_t limit);

int mobius(std::uint64_t n);
// mu(0..limit); entry 0 is 0.
std::vector<int> mobius_table(std::uint64_t limit);

// gcd with gcd(a, 0) = a and gcd(0, 0) = 0.
std::uint64_t gcd_conv(std::uint64_t a, std::uint64_t b);

// Product of the primes strictly below M (P_1 = P_2 = 1).
BigInt primorial(unsigned M);
std::vector<std::uint64_t> primes_below(unsigned M);

// Distinct prime divisors by trial division, ascending.
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);
std::uint64_t radical(std::uint64_t n);

// Upsilon(n) = prod_{p | n} (1 - 1/p^2) / (1 - 2/p^2), Upsilon(1) = 1. n >= 1.
ExactRational upsilon_exact(std::uint64_t n);
// Upsilon(0) = 1 / (zeta(2) F), enclosure of width <= eps.
CertifiedValue upsilon_at_zero(double eps);

using UpsilonValue = std::variant<ExactRational, CertifiedValue>;
UpsilonValue upsilon(std::uint64_t n, double eps = 1e-30);

// |mu(n)| * prod_{p | n} 1/(p^2 - 2). n >= 1.
ExactRational upsilon_star_mu(std::uint64_t n);

// Dense table of an arithmetic function on 1..limit.
class ArithmeticFunction {
 public:
  ArithmeticFunction() = default;
  explicit ArithmeticFunction(std::vector<ExactRational> values_from_one)
      : values_(std::move(values_from_one)) {}

  static ArithmeticFunction tabulate(std::uint64_t limit,
                                     const std::function<ExactRational(std::uint64_t)>& f);
  static ArithmeticFunction delta(std::uint64_t limit);  // delta_1
  static ArithmeticFunction one(std::uint64_t limit);
  static ArithmeticFunction identity(std::uint64_t limit);
  static ArithmeticFunction mobius(std::uint64_t limit);
  static ArithmeticFunction upsilon(std::uint64_t limit);
  static ArithmeticFunction upsilon_star_mu(std::uint64_t limit);

  std::uint64_t limit() const { return values_.size(); }
  const ExactRational& operator()(std::uint64_t n) const { return values_.at(n - 1); }
  const std::vector<ExactRational>& values() const { return values_; }

  friend bool operator==(const ArithmeticFunction&, const ArithmeticFunction&) = default;

 private:
  std::vector<ExactRational> values_;
};

// (f * g)(n) = sum_{d | n} f(d) g(n/d) for n <= limit. Both tables must
// have exactly `limit` entries.
ArithmeticFunction dirichlet_convolve(const ArithmeticFunction& f, const ArithmeticFunction& g,
                                      std::uint64_t limit);

// sum_k h(k) floor(A/k) floor(B/k); with h = f * mu this is
// sum_{i<=A, j<=B} f(gcd(i, j)).
ExactRational cesaro_sum(const ArithmeticFunction& h, std::uint64_t A, std::uint64_t B);

// ---------------------------------------------------------------------------
// Euler products prod_{p >= M} (1 - s/p^2)

// Enclosure of sum_p p^{-x} (prime zeta) for integer x >= 2, with absolute
// error below 2^{-prec}.
CertifiedValue prime_zeta(unsigned x, mpfr_prec_t prec);

// A family of products prod_{p >= M}(1 - s/p^2), 0 <= s <= max_s, sharing one
// truncation point N. The primes M <= p <= N are multiplied exactly; the tail
// p > N is enclosed through log prod = -sum_k s^k/k sum_{p>N} p^{-2k}, with
// the inner sums taken from prime zeta values and a geometric remainder bound.
class EulerProducts {
 public:
  EulerProducts(unsigned M, std::uint64_t max_s, mpfr_prec_t prec);

  unsigned M() const { return M_; }
  std::uint64_t max_s() const { return max_s_; }
  std::uint64_t trunc_prime() const { return trunc_prime_; }
  mpfr_prec_t precision() const { return prec_; }
  // Upper bound on the width of log(tail) over all s (series remainder plus
  // enclosure width).
  double tail_bound() const { return tail_bound_; }

  // True when a factor 1 - s/p^2 vanishes (p = M prime, s = M^2).
  bool has_zero_factor(std::uint64_t s) const;
  const CertifiedValue& product(std::uint64_t s) const { return products_.at(s); }
  const ExactRational& finite_part(std::uint64_t s) const { return finite_.at(s); }

 private:
  unsigned M_;
  std::uint64_t max_s_;
  mpfr_prec_t prec_;
  std::uint64_t trunc_prime_ = 0;
  double tail_bound_ = 0.0;
  std::vector<ExactRational> finite_;
  std::vector<CertifiedValue> products_;
};

// The same tail enclosed only by -log(1-x) <= x/(1-x) and sum_{n>N} n^{-2} <=
// 1/N. Much wider than EulerProducts; kept as an independent check.
CertifiedValue elementary_euler_product(unsigned M, std::uint64_t s, std::uint64_t N,
                                        mpfr_prec_t prec);

// prod_{p >= M} (1 - s/p^2) with width <= eps. Requires s <= M^2.
CertifiedValue euler_product_tail(unsigned M, std::uint64_t s, double eps);

struct Constants {
  CertifiedValue inv_zeta2;       // 1/zeta(2) = 6/pi^2
  CertifiedValue feller_tornier;  // F = prod_p (1 - 2/p^2)
  CertifiedValue inv_zeta2_f;     // 1/(zeta(2) F)
};

// Throws std::logic_error if the Euler-product 1/zeta(2) fails to overlap 6/pi^2.
Constants constants(double eps);

// Bits needed so that 2^-bits <= eps, plus `guard`.
mpfr_prec_t bits_for(double eps, mpfr_prec_t guard = 16);

}  // namespace cwl::numtheory
