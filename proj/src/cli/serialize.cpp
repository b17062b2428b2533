#include <cstdio>
#include <sstream>

#include "cwl/cli.hpp"

namespace cwl::cli {

namespace {

constexpr int kDigits = 20;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

Json enclosure(const CertifiedValue& x) {
  Json j;
  j["lo"] = x.lo_string(kDigits);
  j["hi"] = x.hi_string(kDigits);
  return j;
}

std::string rounded_percent(const CertifiedValue& p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * p.midpoint());
  return buf;
}

Document pmf_document(const limitdist::DistTable& table) {
  Document doc;
  Json& j = doc.json;
  j["command"] = "pmf";
  j["M"] = table.M;
  j["trunc_prime"] = table.trunc_prime;
  j["tail_bound"] = table.tail_bound;
  j["precision_bits"] = table.precision_bits;
  j["support_upper"] = table.support_upper;
  j["max_width"] = table.max_width();
  Json rows = Json::array();
  doc.csv_header = {"r", "lo", "hi", "exact_zero", "rounded_percent"};
  for (std::size_t r = 0; r < table.pmf.size(); ++r) {
    const auto& e = table.pmf[r];
    Json row;
    row["r"] = r;
    std::string lo = "0", hi = "0", pct = "-";
    if (!e.exact_zero) {
      lo = e.value.lo_string(kDigits);
      hi = e.value.hi_string(kDigits);
      pct = rounded_percent(e.value);
    }
    row["lo"] = lo;
    row["hi"] = hi;
    row["exact_zero"] = e.exact_zero;
    if (e.exact_zero) row["zero_reason"] = e.zero_reason;
    row["rounded_percent"] = pct;
    rows.push_back(row);
    doc.csv_rows.push_back({std::to_string(r), lo, hi, e.exact_zero ? "true" : "false", pct});
  }
  j["pmf"] = rows;
  return doc;
}

std::string render(const Document& doc, Format format) {
  if (format == Format::json) return doc.json.dump(2) + "\n";
  std::ostringstream os;
  for (std::size_t i = 0; i < doc.csv_header.size(); ++i) {
    os << (i ? "," : "") << csv_field(doc.csv_header[i]);
  }
  os << "\n";
  for (const auto& row : doc.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace cwl::cli
