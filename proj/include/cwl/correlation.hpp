#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "cwl/certified.hpp"

namespace cwl::correlation {

// Two cells (i, j) and (k, l).
struct PairOffsets {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  std::uint64_t k = 0;
  std::uint64_t l = 0;
};

// gcd(|i - k|, |j - l|), with gcd(0, 0) = 0.
std::uint64_t offset_gcd(const PairOffsets& po);

// Limit of E[V(. + k, . + l) V(. + i, . + j)] = F Upsilon(g).
CertifiedValue pair_expectation(const PairOffsets& po, double eps);
CertifiedValue pair_expectation_for_gcd(std::uint64_t g, double eps);

// (zeta(2)^2 F Upsilon(g) - 1) / (zeta(2) - 1); exactly 1 for equal cells.
CertifiedValue rho(const PairOffsets& po, double eps);
CertifiedValue rho_for_gcd(std::uint64_t g, double eps);
// (zeta(2)^2 F - 1) / (zeta(2) - 1), the value at g = 1.
CertifiedValue rho_lower_bound(double eps);

struct Options {
  unsigned threads = 1;
  std::uint64_t max_N = 20000;  // O(N^2) gcd evaluations
};

// W[g] = sum of w(c) w(d) over 0 <= c, d < N with gcd(c, d) = g, where
// w(0) = N and w(c) = 2 (N - c). These are the multiplicities of each gcd
// value among the offset quadruples of K_N x K_N; sum W = N^4.
std::vector<std::uint64_t> gcd_weights(std::uint64_t N, const Options& opts = {});

// A_N = sum over (k,i), (l,j) in K_N of Upsilon(gcd(|i-k|, |j-l|)) written as
// upsilon0_coeff * Upsilon(0) + rational_part.
struct ExactAn {
  ExactRational upsilon0_coeff;
  ExactRational rational_part;
};

ExactAn a_n_sum_exact(std::uint64_t N, const Options& opts = {});
// Same sum with every Upsilon(g) evaluated as an interval product.
CertifiedValue a_n_sum_certified(std::uint64_t N, double eps, const Options& opts = {});

// E[(Z*_M)^2] = F A_M.
CertifiedValue second_moment(unsigned M, double eps, const Options& opts = {});
// Var(Z*_M) / E[Z*_M]^2.
CertifiedValue variance_ratio(unsigned M, double eps, const Options& opts = {});
// N^-4 sum of rho over all quadruples of K_N x K_N.
CertifiedValue avg_correlation(std::uint64_t N, double eps, const Options& opts = {});
// zeta(2)^2 F A_N / N^4, which tends to 1.
CertifiedValue normalized_a_n(std::uint64_t N, double eps, const Options& opts = {});

// n^-2 sum_{0 <= i, j <= n} f(i/n, j/n) Upsilon(gcd(i, j)), Upsilon(0) at the
// corner taken as 1/(zeta(2) F).
double upsilon_weighted_average(std::uint64_t n, const std::function<double(double, double)>& f);

}  // namespace cwl::correlation
