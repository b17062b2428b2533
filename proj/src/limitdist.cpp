#include "cwl/limitdist.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

#include "cwl/errors.hpp"
#include "cwl/numtheory.hpp"
#include "cwl/parallel.hpp"

namespace cwl::limitdist {

namespace {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  BigInt r;
  if (k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

mpfr_prec_t start_precision(unsigned M, const Options& opts) {
  if (opts.precision_bits > 0) return opts.precision_bits;
  return std::max<mpfr_prec_t>(64, 4 * mpfr_prec_t(M) * M);
}

mpfr_prec_t precision_cap(unsigned M) {
  return std::max<mpfr_prec_t>(512, 16 * mpfr_prec_t(M) * M);
}

struct XiCache {
  std::mutex mu;
  std::map<unsigned, XiTable> tables;
};

XiCache& xi_cache() {
  static XiCache cache;
  return cache;
}

}  // namespace

double DistTable::max_width() const {
  double w = 0;
  for (const auto& e : pmf) w = std::max(w, e.value.width());
  return w;
}

XiTable xi_table(unsigned M, const Options& opts) {
  if (M < 1) throw DomainError("xi_table: M must be >= 1");
  {
    auto& cache = xi_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.tables.find(M);
    if (it != cache.tables.end()) return it->second;
  }
  windows::HistogramOptions hopts;
  hopts.budget = opts.histogram_budget;
  hopts.threads = opts.threads;
  const auto hist = windows::phi_histogram(M, hopts);
  const std::uint64_t m2 = std::uint64_t(M) * M;
  BigInt total = 0;
  for (const auto& [value, count] : hist) total += static_cast<unsigned long>(count);

  XiTable table;
  table.M = M;
  table.max_phi = hist.empty() ? 0 : hist.rbegin()->first;
  table.values.assign(m2 + 1, ExactRational(0));
  for (std::uint64_t s = 0; s <= m2; ++s) {
    BigInt acc = 0;
    for (const auto& [value, count] : hist) {
      if (value >= s) acc += binomial(value, s) * static_cast<unsigned long>(count);
    }
    table.values[s] = ExactRational(acc, total);
    table.values[s].canonicalize();
  }
  {
    auto& cache = xi_cache();
    std::lock_guard<std::mutex> lock(cache.mu);
    cache.tables.emplace(M, table);
  }
  return table;
}

ExactRational xi(unsigned M, std::uint64_t s, const Options& opts) {
  if (s > std::uint64_t(M) * M) throw DomainError("xi: s must be <= M^2");
  return xi_table(M, opts)(s);
}

std::uint64_t support_upper(unsigned M, const Options& opts) { return xi_table(M, opts).max_phi; }

DistTable pmf(unsigned M, double eps, const Options& opts) {
  if (M < 1) throw DomainError("pmf: M must be >= 1");
  if (!(eps > 0)) throw DomainError("pmf: eps must be > 0");
  const XiTable xt = xi_table(M, opts);
  const std::uint64_t m2 = std::uint64_t(M) * M;
  const std::uint64_t top = xt.max_phi;

  // C(s, r) xi(M, s), exact
  std::vector<std::vector<ExactRational>> coeff(top + 1);
  for (std::uint64_t r = 0; r <= top; ++r) {
    for (std::uint64_t s = r; s <= top; ++s) coeff[r].push_back(ExactRational(binomial(s, r)) * xt(s));
  }

  double achieved = 0;
  const mpfr_prec_t cap = precision_cap(M);
  for (mpfr_prec_t prec = start_precision(M, opts); prec <= cap; prec *= 2) {
    numtheory::EulerProducts products(M, top, prec);
    DistTable table;
    table.M = M;
    table.trunc_prime = products.trunc_prime();
    table.tail_bound = products.tail_bound();
    table.precision_bits = prec;
    table.support_upper = top;
    table.pmf.resize(m2 + 1);

    auto blocks = run_blocks(0, m2 + 1, std::max(1U, opts.threads),
                             [&](std::uint64_t lo, std::uint64_t hi) {
      std::vector<PmfEntry> out;
      for (std::uint64_t r = lo; r < hi; ++r) {
        PmfEntry e{CertifiedValue(prec), false, {}};
        if (r > top) {
          e.exact_zero = true;
          e.zero_reason = "r exceeds the largest Phi value " + std::to_string(top);
          out.push_back(std::move(e));
          continue;
        }
        bool any_term = false;
        for (std::uint64_t s = r; s <= top; ++s) {
          const ExactRational& c = coeff[r][s - r];
          if (c == 0 || products.product(s).is_exact_zero()) continue;
          any_term = true;
          CertifiedValue term = CertifiedValue::exact(c, prec) * products.product(s);
          if ((s - r) % 2 == 1) {
            e.value -= term;
          } else {
            e.value += term;
          }
        }
        if (!any_term) {
          e.exact_zero = true;
          e.zero_reason = "every surviving term has a vanishing Euler factor";
        }
        out.push_back(std::move(e));
      }
      return out;
    });
    std::size_t r = 0;
    for (auto& block : blocks) {
      for (auto& e : block) table.pmf[r++] = std::move(e);
    }
    achieved = table.max_width();
    if (achieved <= eps) return table;
  }
  std::ostringstream msg;
  msg << "achieved width " << std::scientific << achieved << " at " << cap << " bits";
  throw ResourceError("pmf: width target not reached at the precision cap", msg.str());
}

CertifiedValue pmf_moment(const DistTable& table, unsigned k) {
  CertifiedValue total(table.precision_bits);
  for (std::size_t r = 0; r < table.pmf.size(); ++r) {
    if (table.pmf[r].exact_zero) continue;
    BigInt rk;
    mpz_ui_pow_ui(rk.get_mpz_t(), r, k);
    total += CertifiedValue::exact(rk, table.precision_bits) * table.pmf[r].value;
  }
  return total;
}

CertifiedValue pgf_eval(unsigned M, const ExactRational& z, double eps, const Options& opts) {
  if (abs(z) > 1) throw DomainError("pgf_eval: |z| must be <= 1");
  if (!(eps > 0)) throw DomainError("pgf_eval: eps must be > 0");
  const XiTable xt = xi_table(M, opts);
  const std::uint64_t top = xt.max_phi;
  for (mpfr_prec_t prec = start_precision(M, opts); prec <= precision_cap(M); prec *= 2) {
    numtheory::EulerProducts products(M, top, prec);
    CertifiedValue total(prec);
    ExactRational zpow = 1;
    for (std::uint64_t s = 0; s <= top; ++s) {
      if (s > 0) zpow *= (z - 1);
      const ExactRational c = zpow * xt(s);
      if (c == 0) continue;
      total += CertifiedValue::exact(c, prec) * products.product(s);
    }
    if (total.width() <= eps) return total;
  }
  std::ostringstream msg;
  msg << "eps=" << std::scientific << eps;
  throw ResourceError("pgf_eval: width target not reached", msg.str());
}

CertifiedValue mean(unsigned M, double eps) {
  if (M < 1) throw DomainError("mean: M must be >= 1");
  const long m2 = long(M) * M;
  const auto c = numtheory::constants(eps / double(m2) / 2);
  return CertifiedValue::exact(m2, c.inv_zeta2.precision()) * c.inv_zeta2;
}

CertifiedValue factorial_moment(unsigned M, std::uint64_t s, double eps, const Options& opts) {
  if (M < 1) throw DomainError("factorial_moment: M must be >= 1");
  if (s > std::uint64_t(M) * M) throw DomainError("factorial_moment: s must be <= M^2");
  const ExactRational x = xi(M, s, opts);
  if (x == 0) return CertifiedValue::exact(0L, 64);
  // width(x * pi) = x * width(pi)
  const double inner = eps / std::max(1.0, x.get_d());
  CertifiedValue p = numtheory::euler_product_tail(M, s, inner);
  return CertifiedValue::exact(x, p.precision()) * p;
}

CertifiedValue poisson_tv_distance(unsigned M, double eps, const Options& opts) {
  const std::uint64_t m2 = std::uint64_t(M) * M;
  const DistTable table = pmf(M, eps / double(4 * (m2 + 1)), opts);
  const mpfr_prec_t prec = table.precision_bits + 32;
  const ExactRational lambda(mean(M, eps).midpoint());

  CertifiedValue lam = CertifiedValue::exact(lambda, prec);
  CertifiedValue weight = exp(-lam);  // e^-lambda lambda^r / r!
  CertifiedValue mass(prec);
  CertifiedValue l1(prec);
  for (std::uint64_t r = 0; r <= m2; ++r) {
    if (r > 0) weight = weight * lam / CertifiedValue::exact(long(r), prec);
    mass += weight;
    l1 += abs(table.pmf[r].value - weight);
  }
  CertifiedValue tail = CertifiedValue::exact(1L, prec) - mass;
  CertifiedValue half = CertifiedValue::exact(ExactRational(1, 2), prec);
  return half * (l1 + tail);
}

}  // namespace cwl::limitdist
