#include <numeric>
#include <random>
#include <sstream>

#include "cwl/cli.hpp"
#include "cwl/correlation.hpp"
#include "cwl/empirical.hpp"
#include "cwl/errors.hpp"
#include "cwl/limitdist.hpp"
#include "cwl/numtheory.hpp"
#include "cwl/windows.hpp"

namespace cwl::cli {

namespace {

constexpr double kCoreTvTolerance = 0.01;

std::string str(const CertifiedValue& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

Check evaluator_check(unsigned M, std::uint64_t seed) {
  Check c{"evaluator equivalence M=" + std::to_string(M), true, ""};
  std::uint64_t tried = 0;
  auto test = [&](const BigInt& a, const BigInt& b) {
    windows::WindowSpec w{M, a, b};
    ++tried;
    const auto d = windows::z_count_direct(w), m = windows::z_count_mobius(w);
    if (d != m && c.passed) {
      c.passed = false;
      c.detail = "a=" + a.get_str() + " b=" + b.get_str() + ": direct " + std::to_string(d) + " vs mobius " +
                 std::to_string(m);
    }
  };
  for (unsigned a = 0; a <= 60; ++a) {
    for (unsigned b = 0; b <= 60; ++b) test(a, b);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> big(0, std::uint64_t(1) << 40);
  for (int i = 0; i < 200; ++i) test(BigInt(static_cast<unsigned long>(big(rng))), BigInt(static_cast<unsigned long>(big(rng))));
  if (c.passed) c.detail = std::to_string(tried) + " windows";
  return c;
}

std::vector<Check> core_suite(const RunConfig& cfg) {
  std::vector<Check> out;
  const unsigned M = cfg.M;
  limitdist::Options lopts;
  lopts.threads = cfg.threads;
  lopts.precision_bits = cfg.precision_bits;
  out.push_back(evaluator_check(M, cfg.seed));

  const auto table = limitdist::pmf(M, 1e-10, lopts);
  const auto mass = limitdist::pmf_moment(table, 0);
  out.push_back({"total mass", mass.contains(1.0), str(mass)});

  const auto m1 = limitdist::pmf_moment(table, 1);
  const auto mean = limitdist::mean(M, 1e-12);
  out.push_back({"mean identity", m1.overlaps(mean), str(m1) + " vs " + str(mean)});

  // xi(M,1) prod_{p>=M}(1 - 1/p^2) = M^2/zeta(2)
  const auto fm1 = limitdist::factorial_moment(M, 1, 1e-12, lopts);
  out.push_back({"xi mean identity", fm1.overlaps(mean), str(fm1) + " vs " + str(mean)});

  correlation::Options copts;
  copts.threads = cfg.threads;
  const auto m2 = limitdist::pmf_moment(table, 2);
  const auto sm = correlation::second_moment(M, 1e-12, copts);
  out.push_back({"second moment", m2.overlaps(sm), str(m2) + " vs " + str(sm)});

  empirical::ScanConfig scfg;
  scfg.n = cfg.n;
  scfg.parallel_blocks = cfg.threads;
  scfg.seed = cfg.seed;
  const auto emp = empirical::empirical_pmf(M, scfg);
  const auto top = emp.counts.empty() ? 0 : emp.counts.rbegin()->first;
  out.push_back({"empirical support", top <= table.support_upper,
                 "largest observed " + std::to_string(top) + ", bound " + std::to_string(table.support_upper)});
  const double tv = empirical::tv_distance(emp, table);
  out.push_back({"empirical tv", tv < kCoreTvTolerance,
                 "tv=" + std::to_string(tv) + " at n=" + std::to_string(cfg.n)});
  return out;
}

std::vector<Check> cesaro_suite(const RunConfig& cfg) {
  const std::uint64_t L = cfg.limit;
  if (L < 1) throw DomainError("verify cesaro: --limit must be >= 1");
  const std::vector<std::pair<std::string, numtheory::ArithmeticFunction>> functions{
      {"delta", numtheory::ArithmeticFunction::delta(L)},
      {"one", numtheory::ArithmeticFunction::one(L)},
      {"identity", numtheory::ArithmeticFunction::identity(L)},
      {"upsilon", numtheory::ArithmeticFunction::upsilon(L)},
      {"mobius", numtheory::ArithmeticFunction::mobius(L)}};
  const auto mu = numtheory::ArithmeticFunction::mobius(L);
  std::vector<Check> out;
  for (const auto& [name, f] : functions) {
    Check c{"cesaro " + name, true, "all A,B <= " + std::to_string(L)};
    const auto h = numtheory::dirichlet_convolve(f, mu, L);
    // running sums D(A, B) = sum_{i<=A, j<=B} f(gcd(i, j)), built row by row
    std::vector<ExactRational> row_prefix(L + 1, ExactRational(0));
    for (std::uint64_t A = 1; A <= L && c.passed; ++A) {
      ExactRational run = 0;
      for (std::uint64_t B = 1; B <= L; ++B) {
        run += f(std::gcd(A, B));
        row_prefix[B] += run;
        const ExactRational got = numtheory::cesaro_sum(h, A, B);
        if (got != row_prefix[B]) {
          c.passed = false;
          c.detail = "A=" + std::to_string(A) + " B=" + std::to_string(B) + ": " + got.get_str() + " vs " +
                     row_prefix[B].get_str();
          break;
        }
      }
    }
    out.push_back(c);
  }
  return out;
}

std::vector<ExactRational> brute_counting(const limitdist::MembershipMatrix& mm,
                                          const std::vector<ExactRational>& w) {
  std::vector<ExactRational> p(mm.sets() + 1, ExactRational(0));
  for (std::size_t x = 0; x < mm.ground_size(); ++x) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < mm.sets(); ++j) c += mm.contains(j, x);
    p[c] += w[x];
  }
  return p;
}

std::vector<Check> waring_suite(const RunConfig& cfg) {
  std::vector<Check> out;
  auto compare = [](Check& c, const limitdist::MembershipMatrix& mm, const std::vector<ExactRational>& w) {
    if (!c.passed) return;
    if (limitdist::waring_distribution(mm, w) != brute_counting(mm, w)) {
      c.passed = false;
      c.detail = "sets=" + std::to_string(mm.sets()) + " ground=" + std::to_string(mm.ground_size());
    }
  };

  // every set system with ground size g <= 3 and t <= 3 sets, uniform weights
  Check exhaustive{"waring exhaustive", true, ""};
  std::uint64_t systems = 0;
  for (std::size_t g = 1; g <= 3; ++g) {
    const std::vector<ExactRational> w(g, ExactRational(1, long(g)));
    for (std::size_t t = 1; t <= 3; ++t) {
      const std::uint64_t total = std::uint64_t(1) << (g * t);
      for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::vector<bool>> rows(t, std::vector<bool>(g));
        for (std::size_t j = 0; j < t; ++j) {
          for (std::size_t x = 0; x < g; ++x) rows[j][x] = (code >> (j * g + x)) & 1U;
        }
        compare(exhaustive, limitdist::MembershipMatrix(rows), w);
        ++systems;
      }
    }
  }
  if (exhaustive.passed) exhaustive.detail = std::to_string(systems) + " systems";
  out.push_back(exhaustive);

  Check random{"waring random", true, ""};
  std::mt19937_64 rng(cfg.seed);
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    const std::size_t g = 1 + rng() % 12, t = 1 + rng() % 5;
    std::vector<std::vector<bool>> rows(t, std::vector<bool>(g));
    for (auto& row : rows) {
      for (std::size_t x = 0; x < g; ++x) row[x] = rng() & 1U;
    }
    std::vector<ExactRational> w(g);
    long sum = 0;
    for (auto& wx : w) {
      wx = long(rng() % 10);
      sum += wx.get_num().get_si();
    }
    if (sum == 0) {
      w[0] = 1;
      sum = 1;
    }
    for (auto& wx : w) wx /= sum;
    compare(random, limitdist::MembershipMatrix(rows), w);
  }
  if (random.passed) random.detail = std::to_string(trials) + " systems, ground <= 12, t <= 5";
  out.push_back(random);
  return out;
}

}  // namespace

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

VerifyReport run_suite(const RunConfig& cfg) {
  VerifyReport report;
  report.suite = cfg.suite;
  if (cfg.suite == "core") {
    report.checks = core_suite(cfg);
  } else if (cfg.suite == "cesaro") {
    report.checks = cesaro_suite(cfg);
  } else if (cfg.suite == "waring") {
    report.checks = waring_suite(cfg);
  } else {
    throw DomainError("verify: unknown suite '" + cfg.suite + "' (core, cesaro, waring)");
  }
  return report;
}

}  // namespace cwl::cli
