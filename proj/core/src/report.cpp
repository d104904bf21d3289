#include "cartanlab/report.hpp"

#include <algorithm>
#include <cstdio>

namespace cartanlab {

void Report::add_number(std::string key, double value) {
  if (value == 0.0) value = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  add(std::move(key), std::string(buf));
}

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& e : other.entries_) entries_.push_back({prefix + "." + e.key, e.value});
  for (const auto& c : other.checks_) checks_.push_back({prefix + "." + c.name, c.pass, c.detail});
}

bool Report::passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

std::string Report::to_text() const {
  std::string out;
  if (!title_.empty()) out += "report: " + title_ + "\n";
  for (const auto& e : entries_) out += e.key + ": " + e.value + "\n";
  for (const auto& c : checks_) {
    out += "check." + c.name + ": " + (c.pass ? "pass" : "fail");
    if (!c.detail.empty()) out += " (" + c.detail + ")";
    out += "\n";
  }
  out += std::string("result: ") + (passed() ? "pass" : "fail") + "\n";
  return out;
}

}  // namespace cartanlab
