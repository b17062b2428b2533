#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cwl/certified.hpp"
#include "cwl/windows.hpp"

namespace cwl::limitdist {

// xi(M, s) = P_M^{-2} sum_{u,v} C(Phi_M(u,v), s) for s = 0..M^2.
struct XiTable {
  unsigned M = 1;
  std::vector<ExactRational> values;
  std::uint64_t max_phi = 0;

  const ExactRational& operator()(std::uint64_t s) const { return values.at(s); }
};

struct Options {
  unsigned threads = 1;
  mpfr_prec_t precision_bits = 0;  // 0 = max(64, 4 M^2)
  std::uint64_t histogram_budget = 100'000'000;
};

XiTable xi_table(unsigned M, const Options& opts = {});
// Throws DomainError for s > M^2.
ExactRational xi(unsigned M, std::uint64_t s, const Options& opts = {});

// Largest Phi_M value; P(Z*_M = r) = 0 beyond it.
std::uint64_t support_upper(unsigned M, const Options& opts = {});

struct PmfEntry {
  CertifiedValue value;
  bool exact_zero = false;
  std::string zero_reason;  // set iff exact_zero
};

struct DistTable {
  unsigned M = 1;
  std::vector<PmfEntry> pmf;  // r = 0..M^2
  std::uint64_t trunc_prime = 0;
  double tail_bound = 0.0;
  mpfr_prec_t precision_bits = 0;
  std::uint64_t support_upper = 0;

  double max_width() const;
};

// Limit law of the number of coprime pairs in a random M x M window:
// P(Z* = r) = sum_{s >= r} (-1)^{s-r} C(s, r) xi(M, s) prod_{p >= M}(1 - s/p^2),
// every entry enclosed to width <= eps. Precision starts at max(64, 4 M^2)
// bits and doubles up to max(512, 16 M^2); ResourceError beyond that.
DistTable pmf(unsigned M, double eps, const Options& opts = {});

// sum_r r^k pmf(r) as an enclosure (k = 0 gives the total mass).
CertifiedValue pmf_moment(const DistTable& table, unsigned k);

// G(z) = sum_s (z-1)^s xi(M, s) prod_{p >= M}(1 - s/p^2) for |z| <= 1.
CertifiedValue pgf_eval(unsigned M, const ExactRational& z, double eps, const Options& opts = {});

// M^2 / zeta(2).
CertifiedValue mean(unsigned M, double eps);

// E[C(Z*, s)] = xi(M, s) prod_{p >= M}(1 - s/p^2).
CertifiedValue factorial_moment(unsigned M, std::uint64_t s, double eps,
                                const Options& opts = {});

// Total variation between the limit law and Poisson(lambda), lambda the
// midpoint of mean(M); Poisson mass beyond M^2 counted in full.
CertifiedValue poisson_tv_distance(unsigned M, double eps, const Options& opts = {});

// ---------------------------------------------------------------------------
// Counting variable C = sum_j 1_{A_j} over a finite weighted ground set.

class MembershipMatrix {
 public:
  // rows[j][x] = (x in A_j). Throws DomainError unless rectangular with a
  // nonempty ground set.
  explicit MembershipMatrix(std::vector<std::vector<bool>> rows);

  std::size_t sets() const { return rows_.size(); }
  std::size_t ground_size() const { return ground_; }
  bool contains(std::size_t set, std::size_t point) const { return rows_[set][point]; }

 private:
  std::vector<std::vector<bool>> rows_;
  std::size_t ground_ = 0;
};

// P(C = r) from intersection sums S_s = sum_{|J| = s} P(cap_{j in J} A_j):
// P(C = r) = sum_{s >= r} (-1)^{s-r} C(s, r) S_s.
std::vector<ExactRational> waring_from_intersection_sums(const std::vector<ExactRational>& sums);

// Waring's formula with every intersection probability enumerated. weights
// must be nonnegative and sum to 1.
std::vector<ExactRational> waring_distribution(const MembershipMatrix& mm,
                                               const std::vector<ExactRational>& weights);

}  // namespace cwl::limitdist
