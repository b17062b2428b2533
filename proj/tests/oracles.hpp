#pragma once

// Slow, independent reference implementations used by the tests.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline int mobius(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

inline std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = lo; p <= hi; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

inline std::uint64_t primorial(unsigned M) {
  std::uint64_t P = 1;
  for (auto p : primes_in(2, M ? M - 1 : 0)) P *= p;
  return P;
}

// prod_{p | n} (1 - 1/p^2) / (1 - 2/p^2) for n >= 1
inline mpq_class upsilon(std::uint64_t n) {
  mpq_class v = 1;
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (n % p == 0 && is_prime(p)) {
      const long p2 = long(p * p);
      v *= mpq_class(p2 - 1, p2 - 2);
    }
  }
  v.canonicalize();
  return v;
}

// Number of cells of the M x M window at residues (u, v) that no prime < M
// hits in both coordinates.
inline std::uint64_t phi(unsigned M, std::uint64_t u, std::uint64_t v) {
  const auto primes = primes_in(2, M ? M - 1 : 0);
  std::uint64_t count = 0;
  for (unsigned k = 1; k <= M; ++k) {
    for (unsigned l = 1; l <= M; ++l) {
      bool hit = false;
      for (auto p : primes) hit = hit || ((u + k) % p == 0 && (v + l) % p == 0);
      count += !hit;
    }
  }
  return count;
}

inline std::map<std::uint64_t, std::uint64_t> phi_histogram(unsigned M) {
  const std::uint64_t P = primorial(M);
  std::map<std::uint64_t, std::uint64_t> h;
  for (std::uint64_t u = 0; u < P; ++u) {
    for (std::uint64_t v = 0; v < P; ++v) ++h[phi(M, u, v)];
  }
  return h;
}

inline std::uint64_t z_count(unsigned M, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = 0;
  for (unsigned k = 1; k <= M; ++k) {
    for (unsigned l = 1; l <= M; ++l) z += std::gcd(a + k, b + l) == 1;
  }
  return z;
}

// Literal quadruple sum over (k, i), (l, j) in {1..N}^2 with Upsilon(0)
// kept apart as a coefficient.
struct QuadSum {
  std::uint64_t zero_count = 0;
  mpq_class rational = 0;
};

inline QuadSum a_n_quadruple(std::uint64_t N) {
  QuadSum s;
  for (std::uint64_t k = 1; k <= N; ++k)
    for (std::uint64_t i = 1; i <= N; ++i)
      for (std::uint64_t l = 1; l <= N; ++l)
        for (std::uint64_t j = 1; j <= N; ++j) {
          const std::uint64_t dx = k > i ? k - i : i - k, dy = l > j ? l - j : j - l;
          const std::uint64_t g = std::gcd(dx, dy);
          if (g == 0) {
            ++s.zero_count;
          } else {
            s.rational += upsilon(g);
          }
        }
  return s;
}

// Double precision prod_{M <= p <= limit} (1 - s/p^2) for s = 0..max_s, times
// an exp(-s/(limit log limit)) tail estimate. Accurate to about s / (limit log^2 limit).
inline std::vector<double> euler_products(unsigned M, unsigned max_s, std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<long double> prod(max_s + 1, 1.0L);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
    if (p < M) continue;
    const long double inv = 1.0L / (static_cast<long double>(p) * p);
    for (unsigned s = 0; s <= max_s; ++s) prod[s] *= 1.0L - s * inv;
  }
  std::vector<double> out(max_s + 1);
  for (unsigned s = 0; s <= max_s; ++s) {
    out[s] = static_cast<double>(prod[s] * std::exp(-(long double)s / (limit * std::log((long double)limit))));
  }
  return out;
}

}  // namespace oracle
