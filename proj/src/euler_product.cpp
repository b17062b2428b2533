#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "cwl/errors.hpp"
#include "cwl/numtheory.hpp"

namespace cwl::numtheory {

namespace {

bool is_prime_small(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// 2^-e as an exact rational.
ExactRational pow2_neg(unsigned long e) {
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, e);
  return ExactRational(BigInt(1), den);
}

CertifiedValue log_zeta_ui(unsigned long x, mpfr_prec_t prec) {
  // zeta(x) > 1 for x >= 2, so log is well defined and monotone.
  mpfr_t lo, hi;
  mpfr_inits2(prec, lo, hi, static_cast<mpfr_ptr>(nullptr));
  mpfr_zeta_ui(lo, x, MPFR_RNDD);
  mpfr_zeta_ui(hi, x, MPFR_RNDU);
  ExactRational qlo, qhi;
  mpfr_get_q(qlo.get_mpq_t(), lo);
  mpfr_get_q(qhi.get_mpq_t(), hi);
  mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
  if (qlo < 1) qlo = 1;
  return log(CertifiedValue::between(qlo, qhi, prec));
}

struct PrimeZetaCache {
  std::mutex mu;
  std::map<unsigned, CertifiedValue> best;  // x -> most precise enclosure computed so far
};

PrimeZetaCache& prime_zeta_cache() {
  static PrimeZetaCache cache;
  return cache;
}

// n^{1-2k} / (2k-1) >= sum_{m > n} m^{-2k}
ExactRational integer_tail_bound(std::uint64_t n, unsigned k) {
  BigInt np;
  mpz_ui_pow_ui(np.get_mpz_t(), n, 2 * k - 1);
  return ExactRational(BigInt(1), np * (2 * k - 1));
}

}  // namespace

mpfr_prec_t bits_for(double eps, mpfr_prec_t guard) {
  if (!(eps > 0)) throw DomainError("eps must be > 0");
  double b = std::ceil(-std::log2(eps));
  if (b < 16) b = 16;
  return static_cast<mpfr_prec_t>(b) + guard;
}

CertifiedValue prime_zeta(unsigned x, mpfr_prec_t prec) {
  if (x < 2) throw DomainError("prime_zeta: x must be >= 2");
  {
    auto& cache = prime_zeta_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.best.find(x);
    if (it != cache.best.end() && it->second.precision() >= prec) return it->second;
  }
  // P(x) = sum_{n>=1} mu(n)/n log zeta(n x). For the dropped terms n > T,
  // 0 <= log zeta(y) <= zeta(y) - 1 <= 3 * 2^-y, so their total is at most
  // 4 * 2^{-(T+1) x}.
  const unsigned long T = static_cast<unsigned long>((prec + 4 + x - 1) / x) + 1;
  const mpfr_prec_t wp = prec + 16 + static_cast<mpfr_prec_t>(std::log2(double(T)) + 1);
  auto mu = mobius_table(T);
  CertifiedValue sum(wp);
  for (unsigned long n = 1; n <= T; ++n) {
    if (mu[n] == 0) continue;
    CertifiedValue term = log_zeta_ui(n * x, wp);
    term *= CertifiedValue::exact(ExactRational(mu[n], static_cast<long>(n)), wp);
    sum += term;
  }
  ExactRational rem = 4 * pow2_neg((T + 1) * x);
  sum += CertifiedValue::between(-rem, rem, wp);
  CertifiedValue result = sum.with_precision(prec + 8);
  {
    auto& cache = prime_zeta_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.best.find(x);
    if (it == cache.best.end()) {
      cache.best.emplace(x, result);
    } else if (it->second.precision() < result.precision()) {
      it->second = result;
    }
  }
  return result;
}

EulerProducts::EulerProducts(unsigned M, std::uint64_t max_s, mpfr_prec_t prec)
    : M_(M), max_s_(max_s), prec_(prec) {
  if (M == 0) throw DomainError("EulerProducts: M must be >= 1");
  const std::uint64_t m2 = std::uint64_t(M) * M;
  if (max_s > m2) throw DomainError("EulerProducts: s must be <= M^2");

  const std::uint64_t bound = std::max<std::uint64_t>(1024, 16ULL * M);
  auto primes = sieve_primes(bound).primes;
  trunc_prime_ = primes.back();
  const std::uint64_t N = trunc_prime_;

  std::vector<std::uint64_t> head;
  for (auto p : primes) {
    if (p >= M) head.push_back(p);
  }

  // Series length K: N q^{K+1} / (1 - q) <= 2^{-prec-8} with q = max_s / N^2.
  unsigned K = 0;
  if (max_s > 0) {
    const double q = double(max_s) / (double(N) * double(N));
    const double target = -double(prec + 8);
    double lg = std::log2(double(N)) + std::log2(q) - std::log2(1 - q);
    K = 0;
    while (lg > target) {
      lg += std::log2(q);
      ++K;
    }
    K = std::max(K, 1U);
  }
  const mpfr_prec_t ip =
      prec + 40 +
      static_cast<mpfr_prec_t>(std::ceil(K * std::log2(double(std::max<std::uint64_t>(2, max_s)))));

  // S_k = sum_{p > N} p^{-2k}
  std::vector<CertifiedValue> tails;
  tails.reserve(K);
  for (unsigned k = 1; k <= K; ++k) {
    CertifiedValue head_sum(ip);
    for (auto p : primes) {
      BigInt pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, 2 * k);
      head_sum += CertifiedValue::exact(ExactRational(BigInt(1), pk), ip);
    }
    CertifiedValue sk = prime_zeta(2 * k, ip) - head_sum;
    // Clip against 0 <= S_k <= N^{1-2k}/(2k-1); both are valid bounds.
    ExactRational lo = std::max(lower_rational(sk), ExactRational(0));
    ExactRational hi = std::min(upper_rational(sk), integer_tail_bound(N, k));
    tails.push_back(CertifiedValue::between(lo, hi, ip));
  }

  finite_.reserve(max_s + 1);
  products_.reserve(max_s + 1);
  const BigInt n2 = BigInt(static_cast<unsigned long>(N)) * static_cast<unsigned long>(N);
  for (std::uint64_t s = 0; s <= max_s; ++s) {
    BigInt num = 1, den = 1;
    for (auto p : head) {
      BigInt p2 = BigInt(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
      num *= p2 - static_cast<unsigned long>(s);
      den *= p2;
    }
    ExactRational fin(num, den);
    fin.canonicalize();
    finite_.push_back(fin);
    if (s == 0 || fin == 0) {
      products_.push_back(CertifiedValue::exact(fin, prec));
      continue;
    }
    // log(tail) = -sum_k s^k/k S_k - R, 0 <= R <= N (s/N^2)^{K+1} / (1 - s/N^2)
    CertifiedValue series(ip);
    BigInt sk_pow = 1;
    for (unsigned k = 1; k <= K; ++k) {
      sk_pow *= static_cast<unsigned long>(s);
      series += CertifiedValue::exact(ExactRational(sk_pow, BigInt(k)), ip) * tails[k - 1];
    }
    ExactRational ratio(BigInt(static_cast<unsigned long>(s)), n2);
    ratio.canonicalize();
    BigInt rnum, rden;
    mpz_pow_ui(rnum.get_mpz_t(), ratio.get_num_mpz_t(), K + 1);
    mpz_pow_ui(rden.get_mpz_t(), ratio.get_den_mpz_t(), K + 1);
    ExactRational remainder = ExactRational(rnum, rden) *
                              ExactRational(static_cast<unsigned long>(N)) / (1 - ratio);
    CertifiedValue log_tail = -series - CertifiedValue::between(0, remainder, ip);
    CertifiedValue value = CertifiedValue::exact(fin, ip) * exp(log_tail);
    products_.push_back(value.with_precision(prec));
    tail_bound_ = std::max(tail_bound_, remainder.get_d() + series.width());
  }
}

bool EulerProducts::has_zero_factor(std::uint64_t s) const {
  return s <= max_s_ && finite_.at(s) == 0;
}

CertifiedValue elementary_euler_product(unsigned M, std::uint64_t s, std::uint64_t N,
                                        mpfr_prec_t prec) {
  if (s > std::uint64_t(M) * M) throw DomainError("elementary_euler_product: s > M^2");
  if (N < M || N * N <= s) throw DomainError("elementary_euler_product: N too small");
  ExactRational fin = 1;
  for (auto p : sieve_primes(std::max<std::uint64_t>(N, 2)).primes) {
    if (p < M) continue;
    ExactRational p2(static_cast<unsigned long>(p * p));
    fin *= (p2 - static_cast<unsigned long>(s)) / p2;
  }
  if (fin == 0 || s == 0) return CertifiedValue::exact(fin, prec);
  // sum_{p>N} -log(1 - s/p^2) <= (s/N) / (1 - s/N^2)
  ExactRational sN(static_cast<unsigned long>(s), static_cast<unsigned long>(N));
  sN.canonicalize();
  ExactRational x(static_cast<unsigned long>(s), static_cast<unsigned long>(N * N));
  x.canonicalize();
  ExactRational bound = sN / (1 - x);
  CertifiedValue tail = exp(-CertifiedValue::between(0, bound, prec));
  CertifiedValue upper = CertifiedValue::exact(1L, prec);
  return CertifiedValue::exact(fin, prec) * hull(tail, upper);
}

CertifiedValue euler_product_tail(unsigned M, std::uint64_t s, double eps) {
  if (M == 0) throw DomainError("euler_product_tail: M must be >= 1");
  if (s > std::uint64_t(M) * M) throw DomainError("euler_product_tail: s must be <= M^2");
  if (!(eps > 0)) throw DomainError("euler_product_tail: eps must be > 0");
  if (s == std::uint64_t(M) * M && is_prime_small(M)) return CertifiedValue::exact(0L, 64);
  mpfr_prec_t prec = bits_for(eps, 16);
  for (int attempt = 0; attempt < 8; ++attempt, prec *= 2) {
    EulerProducts ep(M, s, prec);
    const CertifiedValue& v = ep.product(s);
    if (v.width() <= eps) return v;
  }
  throw ResourceError("euler_product_tail: width target not reached",
                      "precision above " + std::to_string(prec) + " bits");
}

Constants constants(double eps) {
  if (!(eps > 0)) throw DomainError("constants: eps must be > 0");
  double inner = eps / 16;
  for (int attempt = 0; attempt < 8; ++attempt, inner /= 16) {
    // M = 2 covers every prime.
    CertifiedValue inv_zeta2 = euler_product_tail(2, 1, inner);
    CertifiedValue feller = euler_product_tail(2, 2, inner);
    CertifiedValue ratio = inv_zeta2 / feller;
    if (inv_zeta2.width() > eps || feller.width() > eps || ratio.width() > eps) continue;

    const mpfr_prec_t p = inv_zeta2.precision() + 16;
    CertifiedValue pi = CertifiedValue::pi(p);
    CertifiedValue six_over_pi2 = CertifiedValue::exact(6L, p) / (pi * pi);
    if (!inv_zeta2.overlaps(six_over_pi2)) {
      throw std::logic_error("constants: Euler product for 1/zeta(2) disagrees with 6/pi^2");
    }
    return Constants{std::move(inv_zeta2), std::move(feller), std::move(ratio)};
  }
  std::ostringstream msg;
  msg << "eps=" << std::scientific << eps;
  throw ResourceError("constants: width target not reached", msg.str());
}

CertifiedValue upsilon_at_zero(double eps) { return constants(eps).inv_zeta2_f; }

}  // namespace cwl::numtheory
