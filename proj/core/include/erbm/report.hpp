#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace erbm {

/// Structured key-value report printed as stable `key = value # annotation`
/// lines. Annotations carry tolerances or standard errors so every numeric
/// output line documents its accuracy.
class Report {
 public:
  void section(const std::string& title);
  void add(const std::string& key, const std::string& value, const std::string& note = "");
  void add(const std::string& key, double value, const std::string& note = "");
  void add(const std::string& key, long value, const std::string& note = "");
  void add_check(const std::string& key, bool pass, double metric, const std::string& tol);

  bool all_checks_passed() const { return failed_checks_ == 0; }
  int failed_checks() const { return failed_checks_; }

  void print(std::ostream& os) const;
  std::string str() const;

 private:
  struct Line {
    std::string key;
    std::string value;
    std::string note;
    bool is_section = false;
  };
  std::vector<Line> lines_;
  int failed_checks_ = 0;
};

std::string format_double(double v);

}  // namespace erbm
