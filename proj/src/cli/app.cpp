#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
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

const std::vector<std::pair<std::string, std::string>> kCommands{
    {"pmf", "limit pmf of Z*_M with enclosures"},
    {"pgf", "probability generating function at --z"},
    {"moments", "mean, second moment, factorial moments"},
    {"corr", "correlation grid over K_N^2"},
    {"avg-corr", "average correlation and normalized A_N"},
    {"constants", "1/zeta(2), F, 1/(zeta(2)F)"},
    {"empirical", "finite-n scan or convergence report"},
    {"shifted-density", "density of gcd(i+k, j+l) = 1"},
    {"invisible", "CRT window with no coprime pair"},
    {"cesaro", "Cesaro identity in an A x B box"},
    {"verify", "run a verification suite"}};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string rational_string(const ExactRational& q) { return q.get_str(); }

limitdist::Options lim_opts(const RunConfig& cfg) {
  limitdist::Options o;
  o.threads = cfg.threads;
  o.precision_bits = cfg.precision_bits;
  return o;
}

correlation::Options corr_opts(const RunConfig& cfg) {
  correlation::Options o;
  o.threads = cfg.threads;
  return o;
}

void need_M(const RunConfig& cfg) {
  if (cfg.M < 1) throw UsageError("--M must be >= 1");
}

Document cmd_pmf(const RunConfig& cfg) {
  need_M(cfg);
  return pmf_document(limitdist::pmf(cfg.M, cfg.eps, lim_opts(cfg)));
}

Document cmd_pgf(const RunConfig& cfg) {
  need_M(cfg);
  ExactRational z;
  if (z.set_str(cfg.z, 10) != 0) throw UsageError("--z must be a rational such as 1/2");
  z.canonicalize();
  const auto g = limitdist::pgf_eval(cfg.M, z, cfg.eps, lim_opts(cfg));
  Document doc;
  doc.json["command"] = "pgf";
  doc.json["M"] = cfg.M;
  doc.json["z"] = rational_string(z);
  doc.json["value"] = enclosure(g);
  doc.csv_header = {"M", "z", "lo", "hi"};
  doc.csv_rows.push_back({std::to_string(cfg.M), rational_string(z), g.lo_string(20), g.hi_string(20)});
  return doc;
}

Document cmd_moments(const RunConfig& cfg) {
  need_M(cfg);
  const auto opts = lim_opts(cfg);
  const auto table = limitdist::pmf(cfg.M, cfg.eps, opts);
  Document doc;
  Json& j = doc.json;
  j["command"] = "moments";
  j["M"] = cfg.M;
  j["mean"] = enclosure(limitdist::pmf_moment(table, 1));
  j["mean_closed_form"] = enclosure(limitdist::mean(cfg.M, cfg.eps));
  j["second_moment"] = enclosure(limitdist::pmf_moment(table, 2));
  j["second_moment_correlation"] = enclosure(correlation::second_moment(cfg.M, cfg.eps, corr_opts(cfg)));
  j["variance_ratio"] = enclosure(correlation::variance_ratio(cfg.M, cfg.eps, corr_opts(cfg)));
  Json rows = Json::array();
  doc.csv_header = {"s", "xi", "lo", "hi"};
  const auto xt = limitdist::xi_table(cfg.M, opts);
  for (std::uint64_t s = 0; s < xt.values.size(); ++s) {
    const auto fm = limitdist::factorial_moment(cfg.M, s, cfg.eps, opts);
    Json row;
    row["s"] = s;
    row["xi"] = rational_string(xt(s));
    row["lo"] = fm.lo_string(20);
    row["hi"] = fm.hi_string(20);
    rows.push_back(row);
    doc.csv_rows.push_back({std::to_string(s), rational_string(xt(s)), fm.lo_string(20), fm.hi_string(20)});
  }
  j["factorial_moments"] = rows;
  return doc;
}

Document cmd_corr(const RunConfig& cfg) {
  if (cfg.N < 1) throw UsageError("--N must be >= 1");
  if (cfg.N > 1000) throw ResourceError("corr: grid too large", "N = " + std::to_string(cfg.N));
  std::map<std::uint64_t, CertifiedValue> by_gcd;
  Document doc;
  Json grid = Json::array();
  doc.csv_header = {"dx", "dy", "g", "lo", "hi"};
  std::uint64_t min_dx = 0, min_dy = 0;
  const CertifiedValue* min_rho = nullptr;
  for (std::uint64_t dx = 0; dx < cfg.N; ++dx) {
    for (std::uint64_t dy = 0; dy < cfg.N; ++dy) {
      const std::uint64_t g = numtheory::gcd_conv(dx, dy);
      auto it = by_gcd.find(g);
      if (it == by_gcd.end()) it = by_gcd.emplace(g, correlation::rho_for_gcd(g, cfg.eps)).first;
      const auto& r = it->second;
      if (g != 0 && (!min_rho || r.midpoint() < min_rho->midpoint())) {
        min_rho = &r;
        min_dx = dx;
        min_dy = dy;
      }
      Json row;
      row["dx"] = dx;
      row["dy"] = dy;
      row["g"] = g;
      row["lo"] = r.lo_string(20);
      row["hi"] = r.hi_string(20);
      grid.push_back(row);
      doc.csv_rows.push_back({std::to_string(dx), std::to_string(dy), std::to_string(g), r.lo_string(20),
                              r.hi_string(20)});
    }
  }
  Json& j = doc.json;
  j["command"] = "corr";
  j["N"] = cfg.N;
  j["lower_bound"] = enclosure(correlation::rho_lower_bound(cfg.eps));
  if (min_rho) {
    Json m = enclosure(*min_rho);
    m["dx"] = min_dx;
    m["dy"] = min_dy;
    j["min"] = m;
  } else {
    j["min"] = nullptr;
  }
  j["grid"] = grid;
  return doc;
}

Document cmd_avg_corr(const RunConfig& cfg) {
  if (cfg.N < 2) throw UsageError("--N must be >= 2");
  const auto opts = corr_opts(cfg);
  const auto norm = correlation::normalized_a_n(cfg.N, cfg.eps, opts);
  const auto avg = correlation::avg_correlation(cfg.N, cfg.eps, opts);
  Document doc;
  doc.json["command"] = "avg-corr";
  doc.json["N"] = cfg.N;
  doc.json["normalized_a_n"] = enclosure(norm);
  doc.json["avg_correlation"] = enclosure(avg);
  doc.csv_header = {"quantity", "lo", "hi"};
  doc.csv_rows.push_back({"normalized_a_n", norm.lo_string(20), norm.hi_string(20)});
  doc.csv_rows.push_back({"avg_correlation", avg.lo_string(20), avg.hi_string(20)});
  return doc;
}

Document cmd_constants(const RunConfig& cfg) {
  const auto c = numtheory::constants(cfg.eps);
  const mpfr_prec_t prec = c.inv_zeta2.precision();
  const auto pi = CertifiedValue::pi(prec);
  const auto six_over_pi2 = CertifiedValue::exact(6L, prec) / (pi * pi);
  Document doc;
  doc.json["command"] = "constants";
  doc.json["inv_zeta2"] = enclosure(c.inv_zeta2);
  doc.json["feller_tornier"] = enclosure(c.feller_tornier);
  doc.json["inv_zeta2_f"] = enclosure(c.inv_zeta2_f);
  doc.json["six_over_pi2"] = enclosure(six_over_pi2);
  doc.csv_header = {"name", "lo", "hi"};
  for (const auto& [name, v] : {std::pair<std::string, const CertifiedValue*>{"inv_zeta2", &c.inv_zeta2},
                                {"feller_tornier", &c.feller_tornier},
                                {"inv_zeta2_f", &c.inv_zeta2_f},
                                {"six_over_pi2", &six_over_pi2}}) {
    doc.csv_rows.push_back({name, v->lo_string(20), v->hi_string(20)});
  }
  return doc;
}

Document cmd_empirical(const RunConfig& cfg) {
  need_M(cfg);
  Document doc;
  Json& j = doc.json;
  if (!cfg.report.empty()) {
    const std::vector<std::uint64_t> grid = cfg.grid.empty() ? std::vector<std::uint64_t>{100, 1000} : cfg.grid;
    const auto rep = empirical::convergence_report(cfg.report, grid, cfg.threads);
    j["command"] = "empirical";
    j["report"] = rep.id;
    Json rows = Json::array();
    doc.csv_header = {"n", "value", "reference", "gap"};
    for (const auto& r : rep.rows) {
      Json row;
      row["n"] = r.n;
      row["value"] = r.value;
      row["reference"] = r.reference;
      row["gap"] = r.gap;
      rows.push_back(row);
      std::ostringstream v, ref, gap;
      v.precision(12);
      ref.precision(12);
      gap.precision(12);
      v << r.value;
      ref << r.reference;
      gap << r.gap;
      doc.csv_rows.push_back({std::to_string(r.n), v.str(), ref.str(), gap.str()});
    }
    j["rows"] = rows;
    if (rep.fitted_constant) j["fitted_constant"] = *rep.fitted_constant;
    return doc;
  }
  empirical::ScanConfig scfg;
  scfg.n = cfg.n;
  scfg.parallel_blocks = cfg.threads;
  scfg.seed = cfg.seed;
  const auto emp = empirical::empirical_pmf(cfg.M, scfg);
  const auto limit = limitdist::pmf(cfg.M, 1e-10, lim_opts(cfg));
  j["command"] = "empirical";
  j["M"] = cfg.M;
  j["n"] = cfg.n;
  j["total"] = emp.total;
  j["sampled"] = emp.sampled;
  if (emp.sampled) {
    j["seed"] = cfg.seed;
    j["standard_error"] = emp.standard_error;
  }
  Json counts = Json::array();
  doc.csv_header = {"r", "count", "frequency", "limit_lo", "limit_hi"};
  for (std::size_t r = 0; r < limit.pmf.size(); ++r) {
    auto it = emp.counts.find(r);
    const std::uint64_t count = it == emp.counts.end() ? 0 : it->second;
    ExactRational freq(BigInt(static_cast<unsigned long>(count)), BigInt(static_cast<unsigned long>(emp.total)));
    freq.canonicalize();
    const auto& e = limit.pmf[r];
    const std::string lo = e.exact_zero ? "0" : e.value.lo_string(20), hi = e.exact_zero ? "0" : e.value.hi_string(20);
    Json row;
    row["r"] = r;
    row["count"] = count;
    row["frequency"] = rational_string(freq);
    row["limit"] = Json{{"lo", lo}, {"hi", hi}};
    counts.push_back(row);
    doc.csv_rows.push_back({std::to_string(r), std::to_string(count), rational_string(freq), lo, hi});
  }
  j["counts"] = counts;
  j["tv_to_limit"] = empirical::tv_distance(emp, limit);
  return doc;
}

Document cmd_shifted_density(const RunConfig& cfg) {
  if (cfg.n < 1) throw UsageError("--n must be >= 1");
  const auto v = empirical::empirical_density_shifted(cfg.k, cfg.l, cfg.n);
  const auto c = numtheory::constants(1e-12);
  Document doc;
  doc.json["command"] = "shifted-density";
  doc.json["k"] = cfg.k;
  doc.json["l"] = cfg.l;
  doc.json["n"] = cfg.n;
  doc.json["value"] = rational_string(v);
  doc.json["decimal"] = v.get_d();
  doc.json["reference"] = enclosure(c.inv_zeta2);
  doc.csv_header = {"k", "l", "n", "value", "decimal"};
  std::ostringstream d;
  d.precision(12);
  d << v.get_d();
  doc.csv_rows.push_back({std::to_string(cfg.k), std::to_string(cfg.l), std::to_string(cfg.n), rational_string(v), d.str()});
  return doc;
}

Document cmd_invisible(const RunConfig& cfg) {
  if (cfg.M < 2) throw UsageError("--M must be >= 2");
  const auto w = windows::find_invisible_window(cfg.M);
  Document doc;
  Json& j = doc.json;
  j["command"] = "invisible";
  j["M"] = cfg.M;
  j["a"] = w.window.a.get_str();
  j["b"] = w.window.b.get_str();
  j["modulus"] = w.modulus.get_str();
  j["primes"] = w.primes;
  j["z_direct"] = windows::z_count_direct(w.window);
  j["z_mobius"] = windows::z_count_mobius(w.window);
  doc.csv_header = {"M", "a", "b", "modulus"};
  doc.csv_rows.push_back({std::to_string(cfg.M), w.window.a.get_str(), w.window.b.get_str(), w.modulus.get_str()});
  return doc;
}

Document cmd_cesaro(const RunConfig& cfg, bool& mismatch) {
  const std::uint64_t A = cfg.A ? cfg.A : cfg.limit, B = cfg.B ? cfg.B : cfg.limit;
  if (A < 1 || B < 1) throw UsageError("--A, --B and --limit must be >= 1");
  const std::uint64_t L = std::max(A, B);
  using AF = numtheory::ArithmeticFunction;
  AF f;
  if (cfg.f == "delta") {
    f = AF::delta(L);
  } else if (cfg.f == "one") {
    f = AF::one(L);
  } else if (cfg.f == "identity") {
    f = AF::identity(L);
  } else if (cfg.f == "upsilon") {
    f = AF::upsilon(L);
  } else if (cfg.f == "mobius") {
    f = AF::mobius(L);
  } else {
    throw UsageError("--f must be one of delta, one, identity, upsilon, mobius");
  }
  const auto h = numtheory::dirichlet_convolve(f, AF::mobius(L), L);
  const ExactRational via = numtheory::cesaro_sum(h, A, B);
  ExactRational direct = 0;
  for (std::uint64_t i = 1; i <= A; ++i) {
    for (std::uint64_t jj = 1; jj <= B; ++jj) direct += f(std::gcd(i, jj));
  }
  mismatch = via != direct;
  Document doc;
  doc.json["command"] = "cesaro";
  doc.json["f"] = cfg.f;
  doc.json["A"] = A;
  doc.json["B"] = B;
  doc.json["cesaro"] = rational_string(via);
  doc.json["direct"] = rational_string(direct);
  doc.json["equal"] = !mismatch;
  doc.csv_header = {"f", "A", "B", "cesaro", "direct", "equal"};
  doc.csv_rows.push_back({cfg.f, std::to_string(A), std::to_string(B), rational_string(via), rational_string(direct),
                          mismatch ? "false" : "true"});
  return doc;
}

Document cmd_verify(const RunConfig& cfg, bool& failed, std::string& first_failure) {
  const auto report = run_suite(cfg);
  Document doc;
  doc.json["command"] = "verify";
  doc.json["suite"] = report.suite;
  doc.json["passed"] = report.passed();
  Json checks = Json::array();
  doc.csv_header = {"check", "passed", "detail"};
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    doc.csv_rows.push_back({c.name, c.passed ? "true" : "false", c.detail});
    if (!c.passed && first_failure.empty()) first_failure = c.name + ": " + c.detail;
  }
  doc.json["checks"] = checks;
  failed = !report.passed();
  return doc;
}

unsigned default_threads() {
  const char* env = std::getenv("CWL_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw UsageError("CWL_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format = "json";
  CLI::App app{"Certified limit law of coprime pairs in lattice windows", "cwl"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--M", cfg.M, "window size");
  app.add_option("--n", cfg.n, "scan size");
  app.add_option("--N", cfg.N, "offset range");
  app.add_option("--eps", cfg.eps, "enclosure width target");
  app.add_option("--precision-bits", cfg.precision_bits, "starting MPFR precision");
  auto* threads_opt = app.add_option("--threads", cfg.threads, "thread budget (default $CWL_THREADS or 1)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "output file");
  app.add_option("--seed", cfg.seed, "seed for sampled scans");
  app.add_option("--suite", cfg.suite, "verify suite: core, cesaro, waring");
  app.add_option("--limit", cfg.limit, "cesaro bound");
  app.add_option("--A", cfg.A, "cesaro box width");
  app.add_option("--B", cfg.B, "cesaro box height");
  app.add_option("--k", cfg.k, "row shift");
  app.add_option("--l", cfg.l, "column shift");
  app.add_option("--z", cfg.z, "pgf argument, rational");
  app.add_option("--f", cfg.f, "cesaro function: delta, one, identity, upsilon, mobius");
  app.add_option("--report", cfg.report, "empirical convergence report id");
  app.add_option("--grid", cfg.grid, "n values for --report")->delimiter(',');
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (threads_opt->count() == 0) cfg.threads = default_threads();
    if (cfg.threads < 1) throw UsageError("--threads must be >= 1");
    if (!(cfg.eps > 0)) throw UsageError("--eps must be > 0");
    cfg.format = format == "csv" ? Format::csv : Format::json;
    cfg.command = app.get_subcommands().front()->get_name();

    Document doc;
    int code = kOk;
    std::string failure;
    if (cfg.command == "pmf") {
      doc = cmd_pmf(cfg);
    } else if (cfg.command == "pgf") {
      doc = cmd_pgf(cfg);
    } else if (cfg.command == "moments") {
      doc = cmd_moments(cfg);
    } else if (cfg.command == "corr") {
      doc = cmd_corr(cfg);
    } else if (cfg.command == "avg-corr") {
      doc = cmd_avg_corr(cfg);
    } else if (cfg.command == "constants") {
      doc = cmd_constants(cfg);
    } else if (cfg.command == "empirical") {
      doc = cmd_empirical(cfg);
    } else if (cfg.command == "shifted-density") {
      doc = cmd_shifted_density(cfg);
    } else if (cfg.command == "invisible") {
      doc = cmd_invisible(cfg);
    } else if (cfg.command == "cesaro") {
      bool mismatch = false;
      doc = cmd_cesaro(cfg, mismatch);
      if (mismatch) {
        code = kCheckFailure;
        failure = "cesaro sum differs from the direct double sum";
      }
    } else {
      bool failed = false;
      doc = cmd_verify(cfg, failed, failure);
      if (failed) code = kCheckFailure;
    }

    const std::string text = render(doc, cfg.format);
    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw UsageError("cannot open --out file " + cfg.out);
      file << text;
    }
    if (code != kOk) err << "check failed: " << failure << "\n";
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << " (" << e.needed() << ")\n";
    return kResource;
  } catch (const std::exception& e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailure;
  }
}

}  // namespace cwl::cli
