#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace nhjj {

/// Shortest round-trip decimal with 17 significant digits.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(const std::string& line) { os_ << "# " << line << '\n'; }
  void header(const std::string& columns) { os_ << columns << '\n'; }

  CsvWriter& field(double v) {
    sep();
    os_ << g17(v);
    return *this;
  }
  CsvWriter& field(long long v) {
    sep();
    os_ << v;
    return *this;
  }
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(std::size_t v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(bool v) { return field(static_cast<long long>(v ? 1 : 0)); }

  void end_row() {
    os_ << '\n';
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostream& os_;
  bool first_ = true;
};

}  // namespace nhjj
