#include "agd/report.hpp"

#include <sstream>

namespace agd {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

void Report::add_pass(std::string name, std::string note) {
  entries_.push_back({std::move(name), CheckStatus::Pass, {}, std::move(note)});
}

void Report::add_fail(std::string name, std::vector<std::string> residuals,
                      std::string note) {
  entries_.push_back(
      {std::move(name), CheckStatus::Fail, std::move(residuals), std::move(note)});
}

void Report::add_skip(std::string name, std::string note) {
  entries_.push_back({std::move(name), CheckStatus::Skipped, {}, std::move(note)});
}

void Report::add(CheckEntry entry) { entries_.push_back(std::move(entry)); }

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& e : other.entries_) {
    CheckEntry copy = e;
    copy.name = prefix.empty() ? e.name : prefix + e.name;
    entries_.push_back(std::move(copy));
  }
}

bool Report::passed() const {
  for (const auto& e : entries_)
    if (e.status == CheckStatus::Fail) return false;
  return true;
}

const CheckEntry* Report::find(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

std::size_t Report::fail_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_)
    if (e.status == CheckStatus::Fail) ++n;
  return n;
}

std::string Report::summary() const {
  std::ostringstream out;
  for (const auto& e : entries_) {
    out << "[" << to_string(e.status) << "] " << e.name;
    if (!e.note.empty()) out << " (" << e.note << ")";
    out << "\n";
    for (const auto& r : e.residuals) out << "    residual: " << r << "\n";
  }
  return out.str();
}

} // namespace agd
