#include "erbm/report.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>

namespace erbm {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void Report::section(const std::string& title) { lines_.push_back({title, "", "", true}); }

void Report::add(const std::string& key, const std::string& value, const std::string& note) {
  lines_.push_back({key, value, note, false});
}

void Report::add(const std::string& key, double value, const std::string& note) {
  add(key, format_double(value), note);
}

void Report::add(const std::string& key, long value, const std::string& note) {
  add(key, std::to_string(value), note);
}

void Report::add_check(const std::string& key, bool pass, double metric, const std::string& tol) {
  if (!pass) ++failed_checks_;
  add(key, std::string(pass ? "PASS" : "FAIL") + " (" + format_double(metric) + ")", "tol " + tol);
}

void Report::print(std::ostream& os) const {
  for (const auto& line : lines_) {
    if (line.is_section) {
      os << "[" << line.key << "]\n";
    } else {
      os << line.key << " = " << line.value;
      if (!line.note.empty()) os << "  # " << line.note;
      os << "\n";
    }
  }
}

std::string Report::str() const {
  std::ostringstream os;
  print(os);
  return os.str();
}

}  // namespace erbm
