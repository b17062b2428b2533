#include "cwl/windows.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cwl/errors.hpp"
#include "cwl/factor.hpp"
#include "cwl/numtheory.hpp"
#include "cwl/parallel.hpp"

namespace cwl::windows {

namespace {

constexpr std::uint64_t kDenseMobiusLimit = 1U << 16;

const std::vector<int>& dense_mobius() {
  static const std::vector<int> mu = numtheory::mobius_table(kDenseMobiusLimit);
  return mu;
}

bool fits_u64(const BigInt& x) { return mpz_sgn(x.get_mpz_t()) >= 0 && mpz_fits_ulong_p(x.get_mpz_t()); }

void check_window(const WindowSpec& w) {
  if (w.M < 1) throw DomainError("WindowSpec: M must be >= 1");
  if (w.a < 0 || w.b < 0) throw DomainError("WindowSpec: a and b must be >= 0");
}

// Squarefree divisors of P_M with their Mobius signs.
struct SignedDivisor {
  std::uint64_t d;
  int mu;
};

std::vector<SignedDivisor> primorial_divisors(unsigned M) {
  std::vector<SignedDivisor> out{{1, 1}};
  for (auto p : numtheory::primes_below(M)) {
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) out.push_back({out[i].d * p, -out[i].mu});
  }
  return out;
}

std::uint64_t checked_primorial(unsigned M) {
  BigInt p = numtheory::primorial(M);
  if (!fits_u64(p)) {
    throw ResourceError("P_M does not fit in 64 bits", "P_" + std::to_string(M) + " = " + p.get_str());
  }
  return p.get_ui();
}

std::int64_t z_mobius_dense(unsigned M, std::uint64_t a, std::uint64_t b) {
  const auto& mu = dense_mobius();
  const std::uint64_t top = std::max(a, b) + M;
  std::int64_t total = 0;
  for (std::uint64_t d = 1; d <= top; ++d) {
    if (mu[d] == 0) continue;
    const std::int64_t fa = static_cast<std::int64_t>((M + a % d) / d);
    if (fa == 0) continue;
    const std::int64_t fb = static_cast<std::int64_t>((M + b % d) / d);
    total += mu[d] * fa * fb;
  }
  return total;
}

std::int64_t z_mobius_sparse(unsigned M, const BigInt& a, const BigInt& b) {
  // floor((M + a mod d)/d) > 0 only when d divides one of a+1..a+M.
  std::map<BigInt, int> divisors;
  for (unsigned k = 1; k <= M; ++k) {
    std::vector<std::pair<BigInt, int>> divs{{BigInt(1), 1}};
    for (const auto& p : distinct_prime_factors(a + k)) {
      const std::size_t n = divs.size();
      for (std::size_t i = 0; i < n; ++i) divs.emplace_back(divs[i].first * p, -divs[i].second);
    }
    for (auto& [d, s] : divs) divisors.emplace(std::move(d), s);
  }
  std::int64_t total = 0;
  BigInt r;
  for (const auto& [d, sign] : divisors) {
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    BigInt fa = (r + M) / d;
    if (fa == 0) continue;
    mpz_fdiv_r(r.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t());
    BigInt fb = (r + M) / d;
    total += sign * static_cast<std::int64_t>(fa.get_si() * fb.get_si());
  }
  return total;
}

}  // namespace

bool visible(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b) == 1; }

bool visible(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g == 1;
}

std::uint64_t z_count_direct(const WindowSpec& w) {
  check_window(w);
  std::uint64_t count = 0;
  if (fits_u64(w.a + w.M) && fits_u64(w.b + w.M)) {
    const std::uint64_t a = w.a.get_ui(), b = w.b.get_ui();
    for (unsigned k = 1; k <= w.M; ++k) {
      for (unsigned l = 1; l <= w.M; ++l) count += visible(a + k, b + l);
    }
    return count;
  }
  for (unsigned k = 1; k <= w.M; ++k) {
    for (unsigned l = 1; l <= w.M; ++l) count += visible(BigInt(w.a + k), BigInt(w.b + l));
  }
  return count;
}

std::uint64_t z_count_mobius(const WindowSpec& w) {
  check_window(w);
  std::int64_t total;
  const BigInt top = std::max(w.a, w.b) + w.M;
  if (top <= kDenseMobiusLimit) {
    total = z_mobius_dense(w.M, w.a.get_ui(), w.b.get_ui());
  } else {
    total = z_mobius_sparse(w.M, w.a, w.b);
  }
  if (total < 0) throw std::logic_error("z_count_mobius: negative count");
  return static_cast<std::uint64_t>(total);
}

ResiduePair residue_pair(const WindowSpec& w) {
  check_window(w);
  const std::uint64_t P = checked_primorial(w.M);
  BigInt u, v;
  mpz_fdiv_r_ui(u.get_mpz_t(), w.a.get_mpz_t(), P);
  mpz_fdiv_r_ui(v.get_mpz_t(), w.b.get_mpz_t(), P);
  return ResiduePair{w.M, u.get_ui(), v.get_ui()};
}

SplitSets split_sets(const ResiduePair& r) {
  if (r.M < 1) throw DomainError("ResiduePair: M must be >= 1");
  const std::uint64_t P = checked_primorial(r.M);
  if (r.u >= P || r.v >= P) throw DomainError("ResiduePair: residues must lie in [0, P_M)");
  const auto primes = numtheory::primes_below(r.M);
  SplitSets out;
  out.M = r.M;
  for (unsigned k = 1; k <= r.M; ++k) {
    for (unsigned l = 1; l <= r.M; ++l) {
      const bool hit = std::any_of(primes.begin(), primes.end(), [&](std::uint64_t p) {
        return (r.u + k) % p == 0 && (r.v + l) % p == 0;
      });
      (hit ? out.b_set : out.a_set).push_back(Cell{k, l});
    }
  }
  return out;
}

std::uint64_t phi(const ResiduePair& r) {
  if (r.M < 1) throw DomainError("ResiduePair: M must be >= 1");
  const std::uint64_t P = checked_primorial(r.M);
  if (r.u >= P || r.v >= P) throw DomainError("ResiduePair: residues must lie in [0, P_M)");
  std::int64_t total = 0;
  for (const auto& [d, mu] : primorial_divisors(r.M)) {
    total += mu * static_cast<std::int64_t>((r.M + r.u % d) / d) *
             static_cast<std::int64_t>((r.M + r.v % d) / d);
  }
  return static_cast<std::uint64_t>(total);
}

std::uint64_t phi_upper_bound(unsigned M) {
  const std::uint64_t h = (M - 1) / 2;
  return std::uint64_t(M) * M - h * h;
}

PhiHistogram phi_histogram(unsigned M, const HistogramOptions& opts) {
  if (M < 1) throw DomainError("phi_histogram: M must be >= 1");
  const BigInt P_big = numtheory::primorial(M);
  const BigInt pairs = P_big * P_big;
  if (pairs > opts.budget) {
    throw ResourceError("phi_histogram: P_M^2 exceeds the enumeration budget",
                        "P_M^2 = " + pairs.get_str());
  }
  const std::uint64_t P = P_big.get_ui();
  const auto divs = primorial_divisors(M);
  const std::size_t D = divs.size();

  // factor[x * D + j] = floor((M + x mod d_j) / d_j), shared by both coordinates
  std::vector<std::int32_t> factor(P * D);
  for (std::uint64_t x = 0; x < P; ++x) {
    for (std::size_t j = 0; j < D; ++j) {
      factor[x * D + j] = static_cast<std::int32_t>((M + x % divs[j].d) / divs[j].d);
    }
  }
  std::vector<std::int32_t> signs(D);
  for (std::size_t j = 0; j < D; ++j) signs[j] = divs[j].mu;

  auto partials = run_blocks(0, P, std::max(1U, opts.threads), [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> h(std::size_t(M) * M + 1, 0);
    std::vector<std::int32_t> su(D);
    for (std::uint64_t u = lo; u < hi; ++u) {
      for (std::size_t j = 0; j < D; ++j) su[j] = signs[j] * factor[u * D + j];
      for (std::uint64_t v = 0; v < P; ++v) {
        const std::int32_t* fv = &factor[v * D];
        std::int64_t total = 0;
        for (std::size_t j = 0; j < D; ++j) total += su[j] * fv[j];
        ++h[static_cast<std::uint64_t>(total)];
      }
    }
    return h;
  });
  PhiHistogram merged;
  for (const auto& part : partials) {
    for (std::size_t value = 0; value < part.size(); ++value) {
      if (part[value] != 0) merged[value] += part[value];
    }
  }
  return merged;
}

InvisibleWindow find_invisible_window(unsigned M) {
  if (M < 2) throw DomainError("find_invisible_window: M must be >= 2");
  const std::size_t cells = std::size_t(M) * M;
  std::vector<std::uint64_t> primes;
  for (std::uint64_t limit = 64; primes.size() < cells; limit *= 2) {
    primes.clear();
    for (auto p : numtheory::sieve_primes(limit).primes) {
      if (p >= M) primes.push_back(p);
      if (primes.size() == cells) break;
    }
  }
  std::vector<BigInt> moduli, ra, rb;
  for (unsigned k = 1; k <= M; ++k) {
    for (unsigned l = 1; l <= M; ++l) {
      moduli.emplace_back(static_cast<unsigned long>(primes[(k - 1) * M + (l - 1)]));
      ra.emplace_back(-static_cast<long>(k));
      rb.emplace_back(-static_cast<long>(l));
    }
  }
  auto [a, modulus] = crt(ra, moduli);
  BigInt b = crt(rb, moduli).first;
  InvisibleWindow out{WindowSpec{M, a, b}, modulus, primes};
  if (z_count_direct(out.window) != 0 || z_count_mobius(out.window) != 0) {
    throw std::logic_error("find_invisible_window: constructed window is not invisible");
  }
  return out;
}

}  // namespace cwl::windows
