#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cwl/certified.hpp"
#include "cwl/limitdist.hpp"

namespace cwl::cli {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kUsage = 2, kResource = 3 };

enum class Format { json, csv };

struct RunConfig {
  std::string command;
  unsigned M = 2;
  std::uint64_t n = 1000;
  std::uint64_t N = 16;
  double eps = 1e-8;
  mpfr_prec_t precision_bits = 0;
  unsigned threads = 1;
  Format format = Format::json;
  std::string out;  // empty = stdout
  std::uint64_t seed = 0;
  std::string suite = "core";
  std::uint64_t limit = 100;
  std::uint64_t A = 0;  // 0 = limit
  std::uint64_t B = 0;
  std::uint64_t k = 0;
  std::uint64_t l = 0;
  std::string z = "1/2";
  std::string f = "upsilon";
  std::string report;
  std::vector<std::uint64_t> grid;
};

using Json = nlohmann::ordered_json;

// A serialized result: canonical JSON plus an optional flat table for CSV.
struct Document {
  Json json;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
};

// serialize.cpp
Json enclosure(const CertifiedValue& x);
std::string rounded_percent(const CertifiedValue& p);
Document pmf_document(const limitdist::DistTable& table);
std::string render(const Document& doc, Format format);

// verify.cpp
struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<Check> checks;
  bool passed() const;
};

// Throws DomainError for an unknown suite.
VerifyReport run_suite(const RunConfig& cfg);

// Parses args (without the program name), runs the command and writes the
// result to `out` or cfg.out. Diagnostics go to `err`. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cwl::cli
