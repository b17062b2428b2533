#include "cwl/numtheory.hpp"

#include <algorithm>
#include <numeric>

#include "cwl/errors.hpp"

namespace cwl::numtheory {

bool PrimeTable::contains(std::uint64_t n) const {
  return std::binary_search(primes.begin(), primes.end(), n);
}

PrimeTable sieve_primes(std::uint64_t limit) {
  if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2");
  std::vector<bool> composite(limit + 1, false);
  PrimeTable table;
  table.limit = limit;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    table.primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return table;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t radical(std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t r = 1;
  for (auto p : prime_divisors(n)) r *= p;
  return r;
}

int mobius(std::uint64_t n) {
  if (n == 0) throw DomainError("mobius: n must be >= 1");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::vector<int> mobius_table(std::uint64_t limit) {
  // linear sieve
  std::vector<int> mu(limit + 1, 0);
  if (limit == 0) return mu;
  mu[1] = 1;
  std::vector<std::uint64_t> primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (auto p : primes) {
      if (i * p > limit) break;
      composite[i * p] = true;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  return mu;
}

std::uint64_t gcd_conv(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

std::vector<std::uint64_t> primes_below(unsigned M) {
  if (M <= 2) return {};
  return sieve_primes(M - 1).primes;
}

BigInt primorial(unsigned M) {
  if (M == 0) throw DomainError("primorial: M must be >= 1");
  BigInt p = 1;
  for (auto q : primes_below(M)) p *= static_cast<unsigned long>(q);
  return p;
}

ExactRational upsilon_exact(std::uint64_t n) {
  if (n == 0) throw DomainError("upsilon_exact: Upsilon(0) is not rational");
  ExactRational r = 1;
  for (auto p : prime_divisors(n)) {
    BigInt p2 = BigInt(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
    r *= ExactRational(p2 - 1, p2 - 2);
  }
  r.canonicalize();
  return r;
}

UpsilonValue upsilon(std::uint64_t n, double eps) {
  if (n == 0) return upsilon_at_zero(eps);
  return upsilon_exact(n);
}

ExactRational upsilon_star_mu(std::uint64_t n) {
  if (n == 0) throw DomainError("upsilon_star_mu: n must be >= 1");
  if (mobius(n) == 0) return 0;
  BigInt den = 1;
  for (auto p : prime_divisors(n)) {
    den *= BigInt(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p) - 2;
  }
  return ExactRational(BigInt(1), den);
}

ArithmeticFunction ArithmeticFunction::tabulate(
    std::uint64_t limit, const std::function<ExactRational(std::uint64_t)>& f) {
  std::vector<ExactRational> v;
  v.reserve(limit);
  for (std::uint64_t n = 1; n <= limit; ++n) v.push_back(f(n));
  return ArithmeticFunction(std::move(v));
}

ArithmeticFunction ArithmeticFunction::delta(std::uint64_t limit) {
  return tabulate(limit, [](std::uint64_t n) { return ExactRational(n == 1 ? 1 : 0); });
}

ArithmeticFunction ArithmeticFunction::one(std::uint64_t limit) {
  return tabulate(limit, [](std::uint64_t) { return ExactRational(1); });
}

ArithmeticFunction ArithmeticFunction::identity(std::uint64_t limit) {
  return tabulate(limit,
                  [](std::uint64_t n) { return ExactRational(static_cast<unsigned long>(n)); });
}

ArithmeticFunction ArithmeticFunction::mobius(std::uint64_t limit) {
  auto mu = mobius_table(limit);
  return tabulate(limit, [&](std::uint64_t n) { return ExactRational(mu[n]); });
}

ArithmeticFunction ArithmeticFunction::upsilon(std::uint64_t limit) {
  return tabulate(limit, upsilon_exact);
}

ArithmeticFunction ArithmeticFunction::upsilon_star_mu(std::uint64_t limit) {
  return tabulate(limit, numtheory::upsilon_star_mu);
}

ArithmeticFunction dirichlet_convolve(const ArithmeticFunction& f, const ArithmeticFunction& g,
                                      std::uint64_t limit) {
  if (f.limit() != limit || g.limit() != limit) {
    throw DomainError("dirichlet_convolve: table lengths must equal limit");
  }
  std::vector<ExactRational> h(limit, ExactRational(0));
  for (std::uint64_t d = 1; d <= limit; ++d) {
    const ExactRational& fd = f(d);
    if (fd == 0) continue;
    for (std::uint64_t m = d, q = 1; m <= limit; m += d, ++q) {
      const ExactRational& gq = g(q);
      if (gq != 0) h[m - 1] += fd * gq;
    }
  }
  return ArithmeticFunction(std::move(h));
}

ExactRational cesaro_sum(const ArithmeticFunction& h, std::uint64_t A, std::uint64_t B) {
  if (A < 1 || B < 1) throw DomainError("cesaro_sum: A and B must be >= 1");
  const std::uint64_t top = std::min(A, B);
  if (h.limit() < top) throw DomainError("cesaro_sum: h must be defined on 1..min(A, B)");
  ExactRational total = 0;
  for (std::uint64_t k = 1; k <= top; ++k) {
    const ExactRational& hk = h(k);
    if (hk == 0) continue;
    total += hk * ExactRational(static_cast<unsigned long>((A / k) * (B / k)));
  }
  return total;
}

}  // namespace cwl::numtheory
