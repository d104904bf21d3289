#pragma once

#include <string>
#include <vector>

namespace cartanlab {

/// Flat key/value report with named pass/fail checks, kept in insertion order.
class Report {
 public:
  struct Entry {
    std::string key;
    std::string value;
  };
  struct Check {
    std::string name;
    bool pass;
    std::string detail;
  };

  explicit Report(std::string title = {}) : title_(std::move(title)) {}

  const std::string& title() const { return title_; }
  void add(std::string key, std::string value) { entries_.push_back({std::move(key), std::move(value)}); }
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
  void add(std::string key, long long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, unsigned long long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, int value) { add(std::move(key), static_cast<long long>(value)); }
  void add(std::string key, unsigned long value) { add(std::move(key), static_cast<unsigned long long>(value)); }
  void add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
  void add_number(std::string key, double value);

  void check(std::string name, bool pass, std::string detail = {}) {
    checks_.push_back({std::move(name), pass, std::move(detail)});
  }
  /// Appends the entries and checks of `other`, prefixing keys with `prefix.`.
  void merge(const Report& other, const std::string& prefix);

  bool passed() const;
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<Check>& checks() const { return checks_; }

  /// "key: value" lines, then "check.<name>: pass|fail[ (detail)]", then "result: ...".
  std::string to_text() const;

 private:
  std::string title_;
  std::vector<Entry> entries_;
  std::vector<Check> checks_;
};

}  // namespace cartanlab
