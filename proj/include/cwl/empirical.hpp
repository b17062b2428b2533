#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cwl/certified.hpp"
#include "cwl/correlation.hpp"
#include "cwl/limitdist.hpp"
#include "cwl/windows.hpp"

namespace cwl::empirical {

struct ScanConfig {
  std::uint64_t n = 1;
  unsigned parallel_blocks = 1;
  std::uint64_t seed = 0;
  // Exhaustive while n^2 <= exhaustive_cells, otherwise this many uniformly
  // drawn base points.
  std::uint64_t exhaustive_cells = 100'000'000;
  std::uint64_t samples = 1'000'000;
};

// Observed law of Z_M over base points (a, b) in {1..n}^2.
struct EmpiricalPmf {
  unsigned M = 1;
  std::uint64_t n = 1;
  std::map<std::uint64_t, std::uint64_t> counts;  // r -> count
  std::uint64_t total = 0;                        // n^2 unless sampled
  bool sampled = false;
  double standard_error = 0.0;  // max over r of sqrt(p(1-p)/total); 0 when exhaustive

  double frequency(std::uint64_t r) const;
};

EmpiricalPmf empirical_pmf(unsigned M, const ScanConfig& cfg);

// n^-2 #{(i, j) in {1..n}^2 : gcd(i + k, j + l) = 1}.
ExactRational empirical_density_shifted(std::uint64_t k, std::uint64_t l, std::uint64_t n);

struct ConditionalPmf {
  windows::ResiduePair residues;
  EmpiricalPmf pmf;                // total = size of the class; may be 0
  ExactRational class_frequency;  // class size / n^2
};

// Z_M restricted to base points with (a mod P_M, b mod P_M) = (u, v).
ConditionalPmf conditional_pmf(unsigned M, const windows::ResiduePair& r, const ScanConfig& cfg);

// Frequency of every residue class (u, v) mod P_M among {1..n}^2.
std::map<std::pair<std::uint64_t, std::uint64_t>, ExactRational> class_frequencies(unsigned M,
                                                                                   std::uint64_t n);

// n^-2 #{(a, b): a = u_j and b = v_j mod q_j for all j}. Throws DomainError on
// repeated or non-prime moduli and out-of-range residues.
ExactRational residue_joint_frequency(const std::vector<std::uint64_t>& primes,
                                      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& residues,
                                      std::uint64_t n);

// Average of V(a + k, b + l) V(a + i, b + j) over (a, b) in {1..n}^2.
ExactRational empirical_pair_expectation(const correlation::PairOffsets& po, std::uint64_t n);

// n^-2 #{(a, b) in {1..n}^2 : gcd(a, b) = k}.
ExactRational gcd_value_frequency(std::uint64_t k, std::uint64_t n);

// Half the l1 distance between observed frequencies and the limit pmf midpoints.
double tv_distance(const EmpiricalPmf& observed, const limitdist::DistTable& limit);

struct ConvergenceRow {
  std::uint64_t n = 0;
  double value = 0.0;
  double reference = 0.0;
  double gap = 0.0;
};

struct ConvergenceReport {
  std::string id;
  std::vector<ConvergenceRow> rows;
  // max gap * n / log n; only for dirichlet-density
  std::optional<double> fitted_constant;
};

// Registered ids.
const std::vector<std::string>& convergence_ids();

// Throws DomainError for an unknown id or an empty grid.
ConvergenceReport convergence_report(const std::string& id, const std::vector<std::uint64_t>& n_grid,
                                     unsigned threads = 1);

}  // namespace cwl::empirical
