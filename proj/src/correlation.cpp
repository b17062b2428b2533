#include "cwl/correlation.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "cwl/errors.hpp"
#include "cwl/numtheory.hpp"
#include "cwl/parallel.hpp"

namespace cwl::correlation {

namespace {

std::uint64_t absdiff(std::uint64_t x, std::uint64_t y) { return x > y ? x - y : y - x; }

// Upsilon(g), g >= 1, as an interval product over p | g.
CertifiedValue upsilon_interval(std::uint64_t g, mpfr_prec_t prec) {
  CertifiedValue v = CertifiedValue::exact(1L, prec);
  for (auto p : numtheory::prime_divisors(g)) {
    CertifiedValue inv_p2 = CertifiedValue::exact(ExactRational(1, long(p * p)), prec);
    CertifiedValue one = CertifiedValue::exact(1L, prec);
    v *= (one - inv_p2) / (one - inv_p2 - inv_p2);
  }
  return v;
}

void check_N(std::uint64_t N, const Options& opts) {
  if (N < 1) throw DomainError("N must be >= 1");
  if (N > opts.max_N) {
    throw ResourceError("N exceeds the configured budget", "N = " + std::to_string(N));
  }
}

}  // namespace

std::uint64_t offset_gcd(const PairOffsets& po) {
  return numtheory::gcd_conv(absdiff(po.i, po.k), absdiff(po.j, po.l));
}

CertifiedValue pair_expectation_for_gcd(std::uint64_t g, double eps) {
  const auto c = numtheory::constants(eps / 4);
  if (g == 0) return c.inv_zeta2;  // F Upsilon(0) = 1/zeta(2)
  return c.feller_tornier *
         CertifiedValue::exact(numtheory::upsilon_exact(g), c.feller_tornier.precision());
}

CertifiedValue pair_expectation(const PairOffsets& po, double eps) {
  return pair_expectation_for_gcd(offset_gcd(po), eps);
}

CertifiedValue rho_for_gcd(std::uint64_t g, double eps) {
  if (g == 0) return CertifiedValue::exact(1L, 64);
  const auto c = numtheory::constants(eps / 64);
  const mpfr_prec_t prec = c.inv_zeta2.precision();
  CertifiedValue one = CertifiedValue::exact(1L, prec);
  CertifiedValue zeta2 = one / c.inv_zeta2;
  CertifiedValue ups = CertifiedValue::exact(numtheory::upsilon_exact(g), prec);
  return (zeta2 * zeta2 * c.feller_tornier * ups - one) / (zeta2 - one);
}

CertifiedValue rho(const PairOffsets& po, double eps) { return rho_for_gcd(offset_gcd(po), eps); }

CertifiedValue rho_lower_bound(double eps) { return rho_for_gcd(1, eps); }

std::vector<std::uint64_t> gcd_weights(std::uint64_t N, const Options& opts) {
  check_N(N, opts);
  auto w = [N](std::uint64_t c) { return c == 0 ? N : 2 * (N - c); };
  auto partials = run_blocks(0, N, std::max(1U, opts.threads), [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> acc(N, 0);
    for (std::uint64_t c = lo; c < hi; ++c) {
      const std::uint64_t wc = w(c);
      for (std::uint64_t d = 0; d < N; ++d) acc[std::gcd(c, d)] += wc * w(d);
    }
    return acc;
  });
  std::vector<std::uint64_t> W(N, 0);
  for (const auto& part : partials) {
    for (std::uint64_t g = 0; g < N; ++g) W[g] += part[g];
  }
  return W;
}

ExactAn a_n_sum_exact(std::uint64_t N, const Options& opts) {
  const auto W = gcd_weights(N, opts);
  // Upsilon depends only on the radical; group weights before the
  // rational arithmetic.
  std::map<std::uint64_t, BigInt> by_radical;
  for (std::uint64_t g = 1; g < N; ++g) {
    if (W[g] != 0) by_radical[numtheory::radical(g)] += static_cast<unsigned long>(W[g]);
  }
  ExactAn out{ExactRational(static_cast<unsigned long>(W[0])), ExactRational(0)};
  for (const auto& [rad, weight] : by_radical) {
    out.rational_part += ExactRational(weight) * numtheory::upsilon_exact(rad);
  }
  return out;
}

CertifiedValue a_n_sum_certified(std::uint64_t N, double eps, const Options& opts) {
  const auto W = gcd_weights(N, opts);
  const double n4 = std::pow(double(N), 4);
  const mpfr_prec_t prec = numtheory::bits_for(eps / n4, 32) + 16;
  std::map<std::uint64_t, CertifiedValue> cache;
  CertifiedValue total(prec);
  for (std::uint64_t g = 1; g < N; ++g) {
    if (W[g] == 0) continue;
    const std::uint64_t rad = numtheory::radical(g);
    auto it = cache.find(rad);
    if (it == cache.end()) it = cache.emplace(rad, upsilon_interval(rad, prec)).first;
    total += CertifiedValue::exact(BigInt(static_cast<unsigned long>(W[g])), prec) * it->second;
  }
  CertifiedValue ups0 = numtheory::upsilon_at_zero(eps / (4 * double(W[0])));
  total += CertifiedValue::exact(BigInt(static_cast<unsigned long>(W[0])), prec) * ups0;
  return total;
}

CertifiedValue second_moment(unsigned M, double eps, const Options& opts) {
  const double m4 = std::pow(double(M), 4);
  const auto c = numtheory::constants(eps / (8 * m4));
  CertifiedValue a = a_n_sum_certified(M, eps / 8, opts);
  return c.feller_tornier * a;
}

CertifiedValue normalized_a_n(std::uint64_t N, double eps, const Options& opts) {
  const double n4 = std::pow(double(N), 4);
  const auto c = numtheory::constants(eps / 64);
  CertifiedValue a = a_n_sum_certified(N, eps * n4 / 64, opts);
  const mpfr_prec_t prec = std::max(a.precision(), c.inv_zeta2.precision());
  CertifiedValue one = CertifiedValue::exact(1L, prec);
  CertifiedValue zeta2 = one / c.inv_zeta2;
  BigInt big_n4;
  mpz_ui_pow_ui(big_n4.get_mpz_t(), N, 4);
  return zeta2 * zeta2 * c.feller_tornier * a / CertifiedValue::exact(big_n4, prec);
}

CertifiedValue variance_ratio(unsigned M, double eps, const Options& opts) {
  // (F A_M - (M^2/zeta(2))^2) / (M^2/zeta(2))^2 = zeta(2)^2 F A_M / M^4 - 1
  CertifiedValue ratio = normalized_a_n(M, eps / 2, opts);
  return ratio - CertifiedValue::exact(1L, ratio.precision());
}

CertifiedValue avg_correlation(std::uint64_t N, double eps, const Options& opts) {
  if (N < 2) throw DomainError("avg_correlation: N must be >= 2");
  const auto c = numtheory::constants(eps / 64);
  CertifiedValue ratio = normalized_a_n(N, eps / 4, opts);
  const mpfr_prec_t prec = ratio.precision();
  CertifiedValue one = CertifiedValue::exact(1L, prec);
  CertifiedValue zeta2 = one / c.inv_zeta2;
  return (ratio - one) / (zeta2 - one);
}

double upsilon_weighted_average(std::uint64_t n, const std::function<double(double, double)>& f) {
  if (n < 1) throw DomainError("upsilon_weighted_average: n must be >= 1");
  const double ups0 = numtheory::upsilon_at_zero(1e-12).midpoint();
  std::vector<double> ups(n + 1, 0.0);
  ups[0] = ups0;
  for (std::uint64_t g = 1; g <= n; ++g) {
    const std::uint64_t rad = numtheory::radical(g);
    ups[g] = rad == g ? numtheory::upsilon_exact(g).get_d() : ups[rad];
  }
  const double inv_n = 1.0 / double(n);
  double total = 0.0;
  for (std::uint64_t i = 0; i <= n; ++i) {
    double row = 0.0;
    for (std::uint64_t j = 0; j <= n; ++j) row += f(i * inv_n, j * inv_n) * ups[std::gcd(i, j)];
    total += row;
  }
  return total * inv_n * inv_n;
}

}  // namespace cwl::correlation
