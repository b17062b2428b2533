#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cwl/errors.hpp"
#include "cwl/limitdist.hpp"
#include "cwl/numtheory.hpp"
#include "oracles.hpp"

namespace ld = cwl::limitdist;
using cwl::CertifiedValue;
using cwl::ExactRational;

namespace {

mpz_class binom(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// P(Z* = r) in long double from the brute-force histogram and oracle products.
std::vector<double> pmf_oracle(unsigned M) {
  const auto hist = oracle::phi_histogram(M);
  const unsigned m2 = M * M;
  const auto prod = oracle::euler_products(M, m2, 3'000'000);
  std::uint64_t total = 0;
  for (const auto& [v, c] : hist) total += c;
  std::vector<double> out(m2 + 1, 0.0);
  // condition on the class, then Waring within it
  for (const auto& [phi, count] : hist) {
    for (unsigned r = 0; r <= phi; ++r) {
      long double acc = 0;
      for (unsigned s = r; s <= phi; ++s) {
        const long double term = binom(s, r).get_d() * binom(phi, s).get_d() * prod[s];
        acc += (s - r) % 2 ? -term : term;
      }
      out[r] += static_cast<double>(acc * count / total);
    }
  }
  return out;
}

}  // namespace

TEST(Xi, KnownValues) {
  EXPECT_EQ(ld::xi(3, 1), ExactRational(27, 4));  // 6.8 to one decimal
  EXPECT_EQ(ld::xi(4, 1), ExactRational(32, 3));
  EXPECT_EQ(ld::xi(2, 0), 1);
  EXPECT_EQ(ld::xi(2, 4), 1);
  EXPECT_EQ(ld::xi(3, 9), 0);
  EXPECT_THROW(ld::xi(3, 10), cwl::DomainError);
}

TEST(XiProperty, BinomialAverageOfHistogram) {
  for (unsigned M = 1; M <= 6; ++M) {
    const auto hist = oracle::phi_histogram(M);
    std::uint64_t total = 0;
    for (const auto& [v, c] : hist) total += c;
    const auto table = ld::xi_table(M);
    for (unsigned s = 0; s <= M * M; ++s) {
      mpz_class acc = 0;
      for (const auto& [v, c] : hist) acc += binom(v, s) * static_cast<unsigned long>(c);
      ExactRational expect(acc, total);
      expect.canonicalize();
      ASSERT_EQ(table(s), expect) << M << " " << s;
    }
    EXPECT_EQ(table.max_phi, hist.rbegin()->first);
    EXPECT_EQ(ld::support_upper(M), hist.rbegin()->first);
  }
}

TEST(Pmf, BernoulliAtOne) {
  const auto t = ld::pmf(1, 1e-10);
  ASSERT_EQ(t.pmf.size(), 2u);
  EXPECT_NEAR(t.pmf[1].value.midpoint(), 0.60792710185402662866, 1e-15);
  EXPECT_NEAR(t.pmf[0].value.midpoint(), 1 - 0.60792710185402662866, 1e-15);
  EXPECT_LE(t.max_width(), 1e-10);
}

TEST(Pmf, TwoByTwoTable) {
  const auto t = ld::pmf(2, 1e-8);
  const double expect[] = {0.2148262596124315, 6.594299101488205, 42.99608227657565, 50.19479236232372};
  for (int r = 0; r < 4; ++r) {
    EXPECT_NEAR(100 * t.pmf[r].value.midpoint(), expect[r], 1e-9) << r;
    EXPECT_FALSE(t.pmf[r].exact_zero);
  }
  EXPECT_TRUE(t.pmf[4].exact_zero);
  EXPECT_FALSE(t.pmf[4].zero_reason.empty());
  EXPECT_LE(t.max_width(), 1e-8);
}

TEST(Pmf, AgreesWithDoubleOracle) {
  for (unsigned M = 1; M <= 5; ++M) {
    const auto t = ld::pmf(M, 1e-12);
    const auto ref = pmf_oracle(M);
    for (std::size_t r = 0; r < t.pmf.size(); ++r) {
      const double v = t.pmf[r].exact_zero ? 0.0 : t.pmf[r].value.midpoint();
      EXPECT_NEAR(v, ref[r], 1e-7) << "M=" << M << " r=" << r;
    }
  }
}

TEST(Pmf, StructuralZeros) {
  const auto t3 = ld::pmf(3, 1e-8);
  EXPECT_TRUE(t3.pmf[9].exact_zero);
  for (int r = 0; r < 9; ++r) EXPECT_FALSE(t3.pmf[r].exact_zero) << r;
  const auto t4 = ld::pmf(4, 1e-8);
  for (int r = 13; r <= 16; ++r) EXPECT_TRUE(t4.pmf[r].exact_zero) << r;
  for (int r = 0; r <= 12; ++r) EXPECT_FALSE(t4.pmf[r].exact_zero) << r;
}

TEST(PmfProperty, MassMeanAndNonnegativity) {
  for (unsigned M = 1; M <= 6; ++M) {
    const auto t = ld::pmf(M, 1e-10);
    EXPECT_TRUE(ld::pmf_moment(t, 0).contains(1.0)) << M;
    EXPECT_TRUE(ld::pmf_moment(t, 1).overlaps(ld::mean(M, 1e-12))) << M;
    for (const auto& e : t.pmf) {
      if (e.exact_zero) {
        EXPECT_FALSE(e.zero_reason.empty());
        continue;
      }
      EXPECT_GE(e.value.hi_double(), 0.0);
      EXPECT_LE(e.value.width(), 1e-10);
    }
  }
}

TEST(PmfProperty, ThreadCountDoesNotChangeEnclosures) {
  ld::Options one, many;
  many.threads = 5;
  const auto a = ld::pmf(5, 1e-12, one), b = ld::pmf(5, 1e-12, many);
  ASSERT_EQ(a.pmf.size(), b.pmf.size());
  for (std::size_t r = 0; r < a.pmf.size(); ++r) {
    EXPECT_EQ(a.pmf[r].value.lo_string(), b.pmf[r].value.lo_string());
    EXPECT_EQ(a.pmf[r].value.hi_string(), b.pmf[r].value.hi_string());
  }
}

TEST(Pmf, Errors) {
  EXPECT_THROW(ld::pmf(0, 1e-8), cwl::DomainError);
  EXPECT_THROW(ld::pmf(2, 0), cwl::DomainError);
  EXPECT_THROW(ld::pmf(3, 1e-300), cwl::ResourceError);
}

TEST(Pgf, AgreesWithPmfSeries) {
  for (unsigned M = 1; M <= 4; ++M) {
    EXPECT_TRUE(ld::pgf_eval(M, 1, 1e-12).contains(1.0));
    EXPECT_TRUE(ld::pgf_eval(M, 0, 1e-12).overlaps(ld::pmf(M, 1e-12).pmf[0].value));
    const auto t = ld::pmf(M, 1e-14);
    const ExactRational z(-1, 3);
    CertifiedValue direct(t.precision_bits);
    for (std::size_t r = 0; r < t.pmf.size(); ++r) {
      if (t.pmf[r].exact_zero) continue;
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 3, r);
      const ExactRational zr(r % 2 ? -1 : 1, den);
      direct += CertifiedValue::exact(zr, t.precision_bits) * t.pmf[r].value;
    }
    EXPECT_TRUE(ld::pgf_eval(M, z, 1e-12).overlaps(direct)) << M;
  }
  EXPECT_THROW(ld::pgf_eval(2, 2, 1e-8), cwl::DomainError);
}

TEST(FactorialMoments, FirstEqualsMean) {
  for (unsigned M = 1; M <= 6; ++M) {
    EXPECT_TRUE(ld::factorial_moment(M, 1, 1e-12).overlaps(ld::mean(M, 1e-12))) << M;
    EXPECT_TRUE(ld::factorial_moment(M, 0, 1e-12).contains(1.0));
  }
  EXPECT_TRUE(ld::factorial_moment(3, 9, 1e-12).is_exact_zero());
}

TEST(FactorialMomentsProperty, MatchBinomialMomentsOfPmf) {
  for (unsigned M = 2; M <= 4; ++M) {
    const auto t = ld::pmf(M, 1e-14);
    for (unsigned s = 0; s <= M * M; ++s) {
      CertifiedValue direct(t.precision_bits);
      for (std::size_t r = s; r < t.pmf.size(); ++r) {
        if (t.pmf[r].exact_zero) continue;
        direct += CertifiedValue::exact(ExactRational(binom(r, s)), t.precision_bits) * t.pmf[r].value;
      }
      const auto fm = ld::factorial_moment(M, s, 1e-12);
      if (fm.is_exact_zero()) {
        EXPECT_LT(std::abs(direct.midpoint()), 1e-12) << M << " " << s;
      } else {
        EXPECT_TRUE(fm.overlaps(direct)) << M << " " << s;
      }
    }
  }
}

TEST(PoissonTv, SmallAndPositive) {
  const auto tv = ld::poisson_tv_distance(3, 1e-8);
  EXPECT_TRUE(tv.certainly_positive());
  EXPECT_LT(tv.hi_double(), 1.0);
}

TEST(Waring, SingleSet) {
  ld::MembershipMatrix mm({{true, false, true}});
  const std::vector<ExactRational> w{ExactRational(1, 2), ExactRational(1, 4), ExactRational(1, 4)};
  EXPECT_EQ(ld::waring_distribution(mm, w), (std::vector<ExactRational>{ExactRational(1, 4), ExactRational(3, 4)}));
}

TEST(Waring, Validation) {
  EXPECT_THROW(ld::MembershipMatrix({}), cwl::DomainError);
  EXPECT_THROW(ld::MembershipMatrix({{true}, {true, false}}), cwl::DomainError);
  ld::MembershipMatrix mm({{true, false}});
  EXPECT_THROW(ld::waring_distribution(mm, {ExactRational(1)}), cwl::DomainError);
  EXPECT_THROW(ld::waring_distribution(mm, {ExactRational(2), ExactRational(-1)}), cwl::DomainError);
  EXPECT_THROW(ld::waring_distribution(mm, {ExactRational(1, 3), ExactRational(1, 3)}), cwl::DomainError);
}

TEST(WaringProperty, MatchesMembershipCounting) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t g = 1 + rng() % 12, t = 1 + rng() % 5;
    std::vector<std::vector<bool>> rows(t, std::vector<bool>(g));
    for (auto& row : rows)
      for (std::size_t x = 0; x < g; ++x) row[x] = rng() % 3 == 0;
    std::vector<ExactRational> w(g, ExactRational(0));
    long sum = 0;
    std::vector<long> raw(g);
    for (auto& r : raw) sum += (r = 1 + long(rng() % 7));
    for (std::size_t x = 0; x < g; ++x) {
      w[x] = ExactRational(raw[x], sum);
      w[x].canonicalize();
    }
    ld::MembershipMatrix mm(rows);
    std::vector<ExactRational> brute(t + 1, ExactRational(0));
    for (std::size_t x = 0; x < g; ++x) {
      std::size_t c = 0;
      for (std::size_t j = 0; j < t; ++j) c += rows[j][x];
      brute[c] += w[x];
    }
    ASSERT_EQ(ld::waring_distribution(mm, w), brute) << "trial " << trial;
  }
}

TEST(WaringProperty, IntersectionSumsFromBinomialMoments) {
  // S_s = E[C(C, s)] for a point mass at C = c gives back the point mass
  for (std::size_t t = 1; t <= 8; ++t) {
    for (std::size_t c = 0; c <= t; ++c) {
      std::vector<ExactRational> sums(t + 1);
      for (std::size_t s = 0; s <= t; ++s) sums[s] = ExactRational(binom(c, s));
      const auto p = ld::waring_from_intersection_sums(sums);
      for (std::size_t r = 0; r <= t; ++r) ASSERT_EQ(p[r], r == c ? 1 : 0);
    }
  }
}
