#include "cwl/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "cwl/errors.hpp"
#include "cwl/numtheory.hpp"
#include "cwl/parallel.hpp"

namespace cwl::empirical {

namespace {

using Counts = std::vector<std::uint64_t>;

ExactRational ratio(std::uint64_t count, std::uint64_t n) {
  ExactRational q(BigInt(static_cast<unsigned long>(count)), BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n));
  q.canonicalize();
  return q;
}

void check_n(std::uint64_t n) {
  if (n < 1) throw DomainError("n must be >= 1");
}

// Z_M(a, b) for every b in 1..n and every a in [alo, ahi), keeping the M rows
// a+1..a+M as column sums and sliding along both axes.
Counts scan_rows(unsigned M, std::uint64_t n, std::uint64_t alo, std::uint64_t ahi) {
  Counts h(std::size_t(M) * M + 1, 0);
  const std::uint64_t width = n + M;  // columns 1..n+M
  std::vector<std::vector<std::uint8_t>> ring(M, std::vector<std::uint8_t>(width + 1, 0));
  std::vector<std::uint32_t> col(width + 1, 0);
  auto fill = [&](std::vector<std::uint8_t>& row, std::uint64_t x) {
    for (std::uint64_t y = 1; y <= width; ++y) row[y] = std::gcd(x, y) == 1;
  };
  for (unsigned k = 1; k <= M; ++k) {
    auto& row = ring[(alo + k) % M];
    fill(row, alo + k);
    for (std::uint64_t y = 1; y <= width; ++y) col[y] += row[y];
  }
  for (std::uint64_t a = alo; a < ahi; ++a) {
    if (a > alo) {
      // row a leaves, row a+M enters; both share slot a % M
      auto& row = ring[a % M];
      for (std::uint64_t y = 1; y <= width; ++y) col[y] -= row[y];
      fill(row, a + M);
      for (std::uint64_t y = 1; y <= width; ++y) col[y] += row[y];
    }
    std::uint64_t z = 0;
    for (unsigned l = 1; l <= M; ++l) z += col[1 + l];
    ++h[z];
    for (std::uint64_t b = 2; b <= n; ++b) {
      z += col[b + M];
      z -= col[b];
      ++h[z];
    }
  }
  return h;
}

std::uint64_t z_direct(unsigned M, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = 0;
  for (unsigned k = 1; k <= M; ++k) {
    for (unsigned l = 1; l <= M; ++l) z += std::gcd(a + k, b + l) == 1;
  }
  return z;
}

void finish(EmpiricalPmf& out, const Counts& h) {
  out.total = 0;
  for (std::size_t r = 0; r < h.size(); ++r) {
    if (h[r] != 0) out.counts[r] = h[r];
    out.total += h[r];
  }
}

Counts merge(const std::vector<Counts>& parts, std::size_t size) {
  Counts h(size, 0);
  for (const auto& part : parts) {
    for (std::size_t r = 0; r < size; ++r) h[r] += part[r];
  }
  return h;
}

// residues of a in {1..n} mod P: how many a have a mod P = u
std::uint64_t class_size(std::uint64_t n, std::uint64_t P, std::uint64_t u) {
  // a = u + tP with 1 <= a <= n
  const std::uint64_t first = u == 0 ? P : u;
  return first > n ? 0 : (n - first) / P + 1;
}

}  // namespace

double EmpiricalPmf::frequency(std::uint64_t r) const {
  auto it = counts.find(r);
  if (it == counts.end() || total == 0) return 0.0;
  return double(it->second) / double(total);
}

EmpiricalPmf empirical_pmf(unsigned M, const ScanConfig& cfg) {
  if (M < 1) throw DomainError("empirical_pmf: M must be >= 1");
  check_n(cfg.n);
  if (cfg.parallel_blocks < 1) throw DomainError("empirical_pmf: parallel_blocks must be >= 1");
  const long double cells = static_cast<long double>(cfg.n) * cfg.n;
  if (static_cast<long double>(cfg.n) * M > 1e15L) {
    throw ResourceError("empirical_pmf: n * M exceeds the scan budget",
                        "n * M = " + std::to_string(cfg.n * M));
  }
  EmpiricalPmf out;
  out.M = M;
  out.n = cfg.n;
  const std::size_t size = std::size_t(M) * M + 1;
  if (cells <= static_cast<long double>(cfg.exhaustive_cells)) {
    auto parts = run_blocks(1, cfg.n + 1, cfg.parallel_blocks,
                            [&](std::uint64_t lo, std::uint64_t hi) { return scan_rows(M, cfg.n, lo, hi); });
    finish(out, merge(parts, size));
    return out;
  }
  if (cfg.samples < 1) throw DomainError("empirical_pmf: samples must be >= 1");
  // Draw every base point up front so the result does not depend on the split.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::uint64_t> coord(1, cfg.n);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> points(cfg.samples);
  for (auto& p : points) {
    p.first = coord(rng);
    p.second = coord(rng);
  }
  auto parts = run_blocks(0, cfg.samples, cfg.parallel_blocks, [&](std::uint64_t lo, std::uint64_t hi) {
    Counts h(size, 0);
    for (std::uint64_t i = lo; i < hi; ++i) ++h[z_direct(M, points[i].first, points[i].second)];
    return h;
  });
  finish(out, merge(parts, size));
  out.sampled = true;
  for (const auto& [r, c] : out.counts) {
    const double p = double(c) / double(out.total);
    out.standard_error = std::max(out.standard_error, std::sqrt(p * (1 - p) / double(out.total)));
  }
  return out;
}

ExactRational empirical_density_shifted(std::uint64_t k, std::uint64_t l, std::uint64_t n) {
  check_n(n);
  std::uint64_t count = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    for (std::uint64_t j = 1; j <= n; ++j) count += std::gcd(i + k, j + l) == 1;
  }
  return ratio(count, n);
}

ConditionalPmf conditional_pmf(unsigned M, const windows::ResiduePair& r, const ScanConfig& cfg) {
  check_n(cfg.n);
  if (r.M != M) throw DomainError("conditional_pmf: residue pair belongs to a different M");
  const std::uint64_t P = numtheory::primorial(M).get_ui();
  windows::split_sets(r);  // validates the residues
  const std::size_t size = std::size_t(M) * M + 1;
  const std::uint64_t first_a = r.u == 0 ? P : r.u;
  const std::uint64_t rows = class_size(cfg.n, P, r.u);
  auto parts = run_blocks(0, rows, std::max(1U, cfg.parallel_blocks), [&](std::uint64_t lo, std::uint64_t hi) {
    Counts h(size, 0);
    for (std::uint64_t t = lo; t < hi; ++t) {
      const std::uint64_t a = first_a + t * P;
      for (std::uint64_t b = r.v == 0 ? P : r.v; b <= cfg.n; b += P) ++h[z_direct(M, a, b)];
    }
    return h;
  });
  ConditionalPmf out;
  out.residues = r;
  out.pmf.M = M;
  out.pmf.n = cfg.n;
  finish(out.pmf, merge(parts, size));
  out.class_frequency = ratio(out.pmf.total, cfg.n);
  return out;
}

std::map<std::pair<std::uint64_t, std::uint64_t>, ExactRational> class_frequencies(unsigned M,
                                                                                   std::uint64_t n) {
  check_n(n);
  const BigInt P_big = numtheory::primorial(M);
  if (P_big > 1'000'000) throw ResourceError("class_frequencies: too many classes", "P_M = " + P_big.get_str());
  const std::uint64_t P = P_big.get_ui();
  std::map<std::pair<std::uint64_t, std::uint64_t>, ExactRational> out;
  for (std::uint64_t u = 0; u < P; ++u) {
    const std::uint64_t cu = class_size(n, P, u);
    for (std::uint64_t v = 0; v < P; ++v) {
      ExactRational q(BigInt(static_cast<unsigned long>(cu)) * static_cast<unsigned long>(class_size(n, P, v)),
                      BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n));
      q.canonicalize();
      out.emplace(std::make_pair(u, v), q);
    }
  }
  return out;
}

ExactRational residue_joint_frequency(const std::vector<std::uint64_t>& primes,
                                      const std::vector<std::pair<std::uint64_t, std::uint64_t>>& residues,
                                      std::uint64_t n) {
  check_n(n);
  if (primes.size() != residues.size()) {
    throw DomainError("residue_joint_frequency: one residue pair per prime is required");
  }
  std::set<std::uint64_t> seen;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    const std::uint64_t q = primes[j];
    if (q < 2 || numtheory::prime_divisors(q) != std::vector<std::uint64_t>{q}) {
      throw DomainError("residue_joint_frequency: moduli must be prime");
    }
    if (!seen.insert(q).second) throw DomainError("residue_joint_frequency: repeated prime " + std::to_string(q));
    if (residues[j].first >= q || residues[j].second >= q) {
      throw DomainError("residue_joint_frequency: residue out of range");
    }
  }
  // The condition factors over the two coordinates.
  auto count = [&](bool second) {
    std::uint64_t c = 0;
    for (std::uint64_t x = 1; x <= n; ++x) {
      bool ok = true;
      for (std::size_t j = 0; j < primes.size() && ok; ++j) {
        ok = x % primes[j] == (second ? residues[j].second : residues[j].first);
      }
      c += ok;
    }
    return c;
  };
  ExactRational q(BigInt(static_cast<unsigned long>(count(false))) * static_cast<unsigned long>(count(true)),
                  BigInt(static_cast<unsigned long>(n)) * static_cast<unsigned long>(n));
  q.canonicalize();
  return q;
}

ExactRational empirical_pair_expectation(const correlation::PairOffsets& po, std::uint64_t n) {
  check_n(n);
  std::uint64_t count = 0;
  for (std::uint64_t a = 1; a <= n; ++a) {
    for (std::uint64_t b = 1; b <= n; ++b) {
      count += std::gcd(a + po.k, b + po.l) == 1 && std::gcd(a + po.i, b + po.j) == 1;
    }
  }
  return ratio(count, n);
}

ExactRational gcd_value_frequency(std::uint64_t k, std::uint64_t n) {
  check_n(n);
  if (k < 1) throw DomainError("gcd_value_frequency: k must be >= 1");
  std::uint64_t count = 0;
  for (std::uint64_t a = k; a <= n; a += k) {
    for (std::uint64_t b = k; b <= n; b += k) count += std::gcd(a, b) == k;
  }
  return ratio(count, n);
}

double tv_distance(const EmpiricalPmf& observed, const limitdist::DistTable& limit) {
  if (observed.M != limit.M) throw DomainError("tv_distance: M mismatch");
  double l1 = 0.0;
  for (std::size_t r = 0; r < limit.pmf.size(); ++r) {
    const double p = limit.pmf[r].exact_zero ? 0.0 : limit.pmf[r].value.midpoint();
    l1 += std::abs(observed.frequency(r) - p);
  }
  return l1 / 2;
}

const std::vector<std::string>& convergence_ids() {
  static const std::vector<std::string> ids{"dirichlet-density", "shifted-density-5-9", "gcd-frequency-k2",
                                            "pair-expectation-g1", "pmf-tv-m2", "pmf-tv-m3"};
  return ids;
}

ConvergenceReport convergence_report(const std::string& id, const std::vector<std::uint64_t>& n_grid,
                                     unsigned threads) {
  const auto& ids = convergence_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw DomainError("convergence_report: unknown id '" + id + "'");
  }
  if (n_grid.empty()) throw DomainError("convergence_report: empty n grid");
  ConvergenceReport report;
  report.id = id;
  const auto c = numtheory::constants(1e-12);
  const double inv_zeta2 = c.inv_zeta2.midpoint();

  for (std::uint64_t n : n_grid) {
    check_n(n);
    ConvergenceRow row;
    row.n = n;
    if (id == "dirichlet-density") {
      row.value = empirical_density_shifted(0, 0, n).get_d();
      row.reference = inv_zeta2;
    } else if (id == "shifted-density-5-9") {
      row.value = empirical_density_shifted(5, 9, n).get_d();
      row.reference = inv_zeta2;
    } else if (id == "gcd-frequency-k2") {
      row.value = gcd_value_frequency(2, n).get_d();
      row.reference = inv_zeta2 / 4;
    } else if (id == "pair-expectation-g1") {
      row.value = empirical_pair_expectation({0, 0, 1, 0}, n).get_d();
      row.reference = c.feller_tornier.midpoint();
    } else {
      const unsigned M = id == "pmf-tv-m2" ? 2 : 3;
      limitdist::Options lopts;
      lopts.threads = threads;
      const auto limit = limitdist::pmf(M, 1e-10, lopts);
      ScanConfig cfg;
      cfg.n = n;
      cfg.parallel_blocks = threads;
      row.value = tv_distance(empirical_pmf(M, cfg), limit);
      row.reference = 0.0;
    }
    row.gap = std::abs(row.value - row.reference);
    report.rows.push_back(row);
  }
  if (id == "dirichlet-density") {
    double C = 0.0;
    for (const auto& row : report.rows) {
      if (row.n >= 2) C = std::max(C, row.gap * double(row.n) / std::log(double(row.n)));
    }
    report.fitted_constant = C;
  }
  return report;
}

}  // namespace cwl::empirical
