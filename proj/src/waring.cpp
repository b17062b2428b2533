#include <bit>

#include "cwl/errors.hpp"
#include "cwl/limitdist.hpp"

namespace cwl::limitdist {

MembershipMatrix::MembershipMatrix(std::vector<std::vector<bool>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw DomainError("MembershipMatrix: at least one set is required");
  ground_ = rows_.front().size();
  if (ground_ == 0) throw DomainError("MembershipMatrix: ground set must be nonempty");
  for (const auto& row : rows_) {
    if (row.size() != ground_) throw DomainError("MembershipMatrix: rows must have equal length");
  }
  if (rows_.size() > 24) throw DomainError("MembershipMatrix: at most 24 sets");
}

std::vector<ExactRational> waring_from_intersection_sums(const std::vector<ExactRational>& sums) {
  const std::size_t t = sums.empty() ? 0 : sums.size() - 1;
  std::vector<ExactRational> out(t + 1, ExactRational(0));
  for (std::size_t r = 0; r <= t; ++r) {
    for (std::size_t s = r; s <= t; ++s) {
      BigInt c;
      mpz_bin_uiui(c.get_mpz_t(), s, r);
      ExactRational term = ExactRational(c) * sums[s];
      if ((s - r) % 2 == 1) {
        out[r] -= term;
      } else {
        out[r] += term;
      }
    }
  }
  return out;
}

std::vector<ExactRational> waring_distribution(const MembershipMatrix& mm,
                                               const std::vector<ExactRational>& weights) {
  if (weights.size() != mm.ground_size()) {
    throw DomainError("waring_distribution: one weight per ground point is required");
  }
  ExactRational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw DomainError("waring_distribution: weights must be nonnegative");
    total += w;
  }
  if (total != 1) throw DomainError("waring_distribution: weights must sum to 1");

  const std::size_t t = mm.sets();
  const std::uint32_t subsets = 1U << t;
  // S_s = sum over |J| = s of P(cap_{j in J} A_j); the empty intersection is
  // the whole ground set.
  std::vector<ExactRational> sums(t + 1, ExactRational(0));
  for (std::uint32_t J = 0; J < subsets; ++J) {
    ExactRational p = 0;
    for (std::size_t x = 0; x < mm.ground_size(); ++x) {
      bool in_all = true;
      for (std::size_t j = 0; j < t && in_all; ++j) {
        if ((J >> j) & 1U) in_all = mm.contains(j, x);
      }
      if (in_all) p += weights[x];
    }
    sums[std::popcount(J)] += p;
  }
  return waring_from_intersection_sums(sums);
}

}  // namespace cwl::limitdist
