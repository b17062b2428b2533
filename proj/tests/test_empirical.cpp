#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "cwl/empirical.hpp"
#include "cwl/errors.hpp"
#include "cwl/limitdist.hpp"
#include "cwl/numtheory.hpp"
#include "oracles.hpp"

namespace emp = cwl::empirical;
using cwl::ExactRational;

namespace {

constexpr double kInvZeta2 = 0.6079271018540266;
constexpr double kF = 0.32263409893924467;

emp::ScanConfig scan(std::uint64_t n, unsigned blocks = 1) {
  emp::ScanConfig c;
  c.n = n;
  c.parallel_blocks = blocks;
  return c;
}

}  // namespace

TEST(EmpiricalPmf, MatchesDirectDoubleLoop) {
  for (unsigned M = 1; M <= 4; ++M) {
    const std::uint64_t n = 60;
    std::map<std::uint64_t, std::uint64_t> expect;
    for (std::uint64_t a = 1; a <= n; ++a)
      for (std::uint64_t b = 1; b <= n; ++b) ++expect[oracle::z_count(M, a, b)];
    const auto got = emp::empirical_pmf(M, scan(n));
    EXPECT_EQ(got.counts, expect) << M;
    EXPECT_EQ(got.total, n * n);
    EXPECT_FALSE(got.sampled);
  }
}

TEST(EmpiricalPmf, DirichletDensityAtOne) {
  const auto e = emp::empirical_pmf(1, scan(1000));
  EXPECT_NEAR(e.frequency(1), kInvZeta2, 0.002);
}

TEST(EmpiricalPmfProperty, CountsPartitionTheSquare) {
  for (unsigned M : {1u, 3u, 5u}) {
    const auto e = emp::empirical_pmf(M, scan(100));
    std::uint64_t total = 0;
    for (const auto& [r, c] : e.counts) {
      total += c;
      EXPECT_LE(r, cwl::limitdist::support_upper(M));
    }
    EXPECT_EQ(total, 10000u);
  }
}

TEST(EmpiricalPmfProperty, BlockCountDoesNotMatter) {
  const auto a = emp::empirical_pmf(3, scan(701, 1));
  for (unsigned blocks : {2u, 3u, 8u}) {
    const auto b = emp::empirical_pmf(3, scan(701, blocks));
    EXPECT_EQ(a.counts, b.counts) << blocks;
  }
}

TEST(EmpiricalPmf, SampledModeIsSeededAndSplitIndependent) {
  emp::ScanConfig c = scan(1'000'000);
  c.samples = 20000;
  c.seed = 42;
  const auto a = emp::empirical_pmf(2, c);
  c.parallel_blocks = 4;
  const auto b = emp::empirical_pmf(2, c);
  EXPECT_TRUE(a.sampled);
  EXPECT_EQ(a.total, 20000u);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_GT(a.standard_error, 0.0);
  c.seed = 43;
  EXPECT_NE(emp::empirical_pmf(2, c).counts, a.counts);
}

TEST(EmpiricalPmf, Errors) {
  EXPECT_THROW(emp::empirical_pmf(0, scan(10)), cwl::DomainError);
  EXPECT_THROW(emp::empirical_pmf(2, scan(0)), cwl::DomainError);
  EXPECT_THROW(emp::empirical_pmf(2, scan(std::uint64_t(1) << 62)), cwl::ResourceError);
}

TEST(ShiftedDensity, Values) {
  EXPECT_EQ(emp::empirical_density_shifted(0, 0, 1), 1);
  EXPECT_NEAR(emp::empirical_density_shifted(0, 0, 1000).get_d(), kInvZeta2, 0.002);
  EXPECT_NEAR(emp::empirical_density_shifted(5, 9, 1000).get_d(), kInvZeta2, 0.01);
}

TEST(ConditionalPmf, OddOddClassBoundedByPhi) {
  const auto c = emp::conditional_pmf(3, {3, 1, 1}, scan(2000));
  EXPECT_EQ(c.pmf.counts.rbegin()->first, 5u);
  EXPECT_NEAR(c.class_frequency.get_d(), 0.25, 1e-9);
}

TEST(ConditionalPmf, TrivialClassEqualsUnconditional) {
  const auto c = emp::conditional_pmf(2, {2, 0, 0}, scan(300));
  EXPECT_EQ(c.pmf.counts, emp::empirical_pmf(2, scan(300)).counts);
  EXPECT_EQ(c.class_frequency, 1);
}

TEST(ConditionalPmf, EmptyClassAtTinyN) {
  const auto c = emp::conditional_pmf(5, {5, 5, 5}, scan(3));
  EXPECT_EQ(c.pmf.total, 0u);
  EXPECT_TRUE(c.pmf.counts.empty());
  EXPECT_EQ(c.class_frequency, 0);
  EXPECT_THROW(emp::conditional_pmf(5, {5, 6, 0}, scan(3)), cwl::DomainError);
}

TEST(ConditionalPmfProperty, ClassesPartitionTheSquare) {
  for (std::uint64_t n : {1, 7, 100, 10000}) {
    ExactRational total = 0;
    for (const auto& [uv, f] : emp::class_frequencies(6, n)) total += f;
    EXPECT_EQ(total, 1) << n;
  }
  for (const auto& [uv, f] : emp::class_frequencies(6, 10000)) EXPECT_NEAR(f.get_d(), 1.0 / 900, 0.01);
}

TEST(ConditionalPmfProperty, ClassSplitSetsMatchWindows) {
  // every window in a class shares the class's b_set
  const cwl::windows::ResiduePair r{5, 3, 4};
  const auto split = cwl::windows::split_sets(r);
  for (std::uint64_t a = 3; a < 400; a += 30) {
    for (std::uint64_t b = 4; b < 400; b += 30) {
      const auto rr = cwl::windows::residue_pair({5, a, b});
      EXPECT_EQ(cwl::windows::split_sets(rr).b_set, split.b_set);
    }
  }
}

TEST(ResidueJointFrequency, Values) {
  EXPECT_EQ(emp::residue_joint_frequency({7}, {{3, 5}}, 700), ExactRational(1, 49));
  EXPECT_NEAR(emp::residue_joint_frequency({2, 3}, {{1, 0}, {2, 1}}, 6000).get_d(), 1.0 / 36, 1e-6);
  EXPECT_NEAR(emp::residue_joint_frequency({2, 5}, {{0, 1}, {3, 4}}, 10000).get_d(), 0.01, 0.005);
  EXPECT_THROW(emp::residue_joint_frequency({3, 3}, {{0, 0}, {1, 1}}, 10), cwl::DomainError);
  EXPECT_THROW(emp::residue_joint_frequency({4}, {{0, 0}}, 10), cwl::DomainError);
  EXPECT_THROW(emp::residue_joint_frequency({3}, {{3, 0}}, 10), cwl::DomainError);
}

TEST(PairExpectation, MatchesLimits) {
  EXPECT_NEAR(emp::empirical_pair_expectation({0, 0, 1, 0}, 2000).get_d(), kF, 0.01);
  EXPECT_NEAR(emp::empirical_pair_expectation({2, 3, 2, 3}, 2000).get_d(), kInvZeta2, 0.01);
  EXPECT_NEAR(emp::empirical_pair_expectation({0, 0, 2, 0}, 2000).get_d(), kF * 1.5, 0.01);
}

TEST(GcdFrequency, Values) {
  EXPECT_NEAR(emp::gcd_value_frequency(1, 1000).get_d(), kInvZeta2, 0.002);
  EXPECT_NEAR(emp::gcd_value_frequency(2, 2000).get_d(), kInvZeta2 / 4, 0.005);
  EXPECT_EQ(emp::gcd_value_frequency(11, 10), 0);
  EXPECT_THROW(emp::gcd_value_frequency(0, 10), cwl::DomainError);
}

TEST(GcdFrequencyProperty, SumsToOne) {
  const std::uint64_t n = 120;
  ExactRational total = 0;
  for (std::uint64_t k = 1; k <= n; ++k) total += emp::gcd_value_frequency(k, n);
  EXPECT_EQ(total, 1);
}

TEST(ConvergenceReport, DirichletGapsShrink) {
  const auto rep = emp::convergence_report("dirichlet-density", {100, 1000, 5000});
  ASSERT_EQ(rep.rows.size(), 3u);
  EXPECT_GT(rep.rows[0].gap, rep.rows[1].gap);
  EXPECT_GT(rep.rows[1].gap, rep.rows[2].gap);
  ASSERT_TRUE(rep.fitted_constant.has_value());
  for (const auto& row : rep.rows) {
    EXPECT_LE(row.gap, *rep.fitted_constant * std::log(double(row.n)) / double(row.n) + 1e-15);
  }
}

TEST(ConvergenceReport, OtherIds) {
  const auto tv = emp::convergence_report("pmf-tv-m2", {100, 1000});
  EXPECT_GT(tv.rows[0].gap, tv.rows[1].gap);
  const auto pe = emp::convergence_report("pair-expectation-g1", {100, 1000});
  EXPECT_GT(pe.rows[0].gap, pe.rows[1].gap);
  EXPECT_FALSE(pe.fitted_constant.has_value());
  EXPECT_THROW(emp::convergence_report("no-such-check", {10}), cwl::DomainError);
  EXPECT_THROW(emp::convergence_report("dirichlet-density", {}), cwl::DomainError);
}
