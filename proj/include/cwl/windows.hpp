#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "cwl/certified.hpp"

namespace cwl::windows {

// The M x M window {a+1..a+M} x {b+1..b+M}. a, b >= 0.
struct WindowSpec {
  unsigned M = 1;
  BigInt a = 0;
  BigInt b = 0;
};

// Base point residues (a mod P_M, b mod P_M).
struct ResiduePair {
  unsigned M = 1;
  std::uint64_t u = 0;
  std::uint64_t v = 0;
};

// Cell offsets inside a window, 1 <= k, l <= M.
struct Cell {
  unsigned k;
  unsigned l;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Cells of {1..M}^2 split by whether some prime p < M divides both u+k and
// v+l (b_set) or not (a_set).
struct SplitSets {
  unsigned M = 1;
  std::vector<Cell> a_set;
  std::vector<Cell> b_set;
};

bool visible(std::uint64_t a, std::uint64_t b);
bool visible(const BigInt& a, const BigInt& b);

// Number of coprime pairs in the window, by direct gcd evaluation.
std::uint64_t z_count_direct(const WindowSpec& w);
// Same count through sum_d mu(d) floor((M + a mod d)/d) floor((M + b mod d)/d).
// Only squarefree d dividing some a+k contribute; small windows run the sum
// densely over d <= max(a, b) + M.
std::uint64_t z_count_mobius(const WindowSpec& w);

// Throws ResourceError when P_M does not fit in 64 bits.
ResiduePair residue_pair(const WindowSpec& w);
SplitSets split_sets(const ResiduePair& r);
// Phi_M(u, v) through the Mobius sum over divisors of P_M.
std::uint64_t phi(const ResiduePair& r);
// M^2 - floor((M-1)/2)^2
std::uint64_t phi_upper_bound(unsigned M);

using PhiHistogram = std::map<std::uint64_t, std::uint64_t>;

struct HistogramOptions {
  std::uint64_t budget = 100'000'000;  // max residue pairs P_M^2
  unsigned threads = 1;
};

// Phi value -> number of residue pairs (u, v) in [0, P_M)^2 attaining it.
PhiHistogram phi_histogram(unsigned M, const HistogramOptions& opts = {});

struct InvisibleWindow {
  WindowSpec window;
  BigInt modulus;                     // product of the assigned primes
  std::vector<std::uint64_t> primes;  // row-major, one per cell
};

// A window with no coprime pair, built by giving each cell its own prime
// and solving the congruences a = -k, b = -l (mod p_kl). M >= 2.
InvisibleWindow find_invisible_window(unsigned M);

}  // namespace cwl::windows
