#pragma once

#include <vector>

#include "cwl/certified.hpp"

namespace cwl {

// Distinct prime factors of n >= 1, ascending. Trial division by small
// primes, then Pollard-Brent on the cofactor.
std::vector<BigInt> distinct_prime_factors(const BigInt& n);

// Solve x = r_i (mod m_i) for pairwise coprime moduli; returns (x, prod m_i)
// with 0 <= x < prod m_i.
std::pair<BigInt, BigInt> crt(const std::vector<BigInt>& residues,
                              const std::vector<BigInt>& moduli);

}  // namespace cwl
