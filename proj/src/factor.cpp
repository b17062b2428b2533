#include "cwl/factor.hpp"

#include <algorithm>

#include "cwl/errors.hpp"

namespace cwl {

namespace {

constexpr unsigned long kTrialLimit = 10000;

bool probably_prime(const BigInt& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

// One nontrivial factor of composite odd n, Brent's cycle variant.
BigInt pollard_brent(const BigInt& n) {
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 128;
    auto f = [&](const BigInt& v) {
      BigInt t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          BigInt d = x - y;
          q = q * abs(d) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        BigInt d = x - ys;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(const BigInt& n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (probably_prime(n)) {
    out.push_back(n);
    return;
  }
  BigInt d = pollard_brent(n);
  split(d, out);
  split(n / d, out);
}

}  // namespace

std::vector<BigInt> distinct_prime_factors(const BigInt& n_in) {
  if (n_in < 1) throw DomainError("distinct_prime_factors: n must be >= 1");
  BigInt n = n_in;
  std::vector<BigInt> out;
  for (unsigned long p = 2; p <= kTrialLimit && BigInt(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.emplace_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
    }
  }
  if (n > 1) split(n, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<BigInt, BigInt> crt(const std::vector<BigInt>& residues,
                              const std::vector<BigInt>& moduli) {
  if (residues.size() != moduli.size()) throw DomainError("crt: size mismatch");
  BigInt x = 0, m = 1;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const BigInt& mi = moduli[i];
    BigInt ri = residues[i] % mi;
    if (ri < 0) ri += mi;
    // x + m t = ri (mod mi)
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), m.get_mpz_t(), mi.get_mpz_t()) == 0 && mi != 1) {
      throw DomainError("crt: moduli are not pairwise coprime");
    }
    BigInt t = (ri - x) % mi;
    if (t < 0) t += mi;
    t = t * inv % mi;
    x += m * t;
    m *= mi;
  }
  return {x, m};
}

}  // namespace cwl
