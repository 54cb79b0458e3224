#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bosonic::cli {

struct CheckRow {
  std::string id;
  std::string anchor;    // the property being checked
  double measured = 0.0;
  double tolerance = 0.0;
  bool strict = false;   // pass needs measured < tolerance rather than <=
  bool informational = false;

  bool pass() const;
};

// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
// Fixed-width scientific format shared by every report ("inf"/"nan" spelled out).
std::string format_number(double v);

void write_comment_header(std::ostream& out, int schema_version);
void write_check_report(std::ostream& out, const std::vector<CheckRow>& rows, int schema_version);

}  // namespace bosonic::cli
