#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace bosonic::cli {

bool CheckRow::pass() const {
  if (informational) return true;
  if (!std::isfinite(measured)) return false;
  return strict ? measured < tolerance : measured <= tolerance;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void write_comment_header(std::ostream& out, int schema_version) { out << "# bosonic-bvp v" << schema_version << "\r\n"; }

void write_check_report(std::ostream& out, const std::vector<CheckRow>& rows, int schema_version) {
  write_comment_header(out, schema_version);
  out << "check_id,anchor,measured,tolerance,pass\r\n";
  for (const auto& r : rows) {
    out << csv_field(r.id) << ',' << csv_field(r.anchor) << ',' << format_number(r.measured) << ','
        << (r.informational ? "inf" : format_number(r.tolerance)) << ',' << (r.informational ? "info" : r.pass() ? "true" : "false")
        << "\r\n";
  }
}

}  // namespace bosonic::cli
