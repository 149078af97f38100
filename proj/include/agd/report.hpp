#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace agd {

enum class CheckStatus { Pass, Fail, Skipped };

std::string_view to_string(CheckStatus s);

// One named identity check. A check passes iff every residual it computed is
// the zero tensor; the nonzero ones are kept, printed, for diagnosis.
struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::vector<std::string> residuals;
  std::string note;
};

class Report {
public:
  void add_pass(std::string name, std::string note = "");
  void add_fail(std::string name, std::vector<std::string> residuals,
                std::string note = "");
  void add_skip(std::string name, std::string note);
  void add(CheckEntry entry);

  // Appends all entries of other, with their names prefixed.
  void merge(const Report& other, const std::string& prefix = "");

  bool passed() const;            // no Fail entries
  bool all_pass_or_skip() const { return passed(); }
  const std::vector<CheckEntry>& entries() const { return entries_; }
  const CheckEntry* find(std::string_view name) const;
  std::size_t fail_count() const;

  std::string summary() const;    // one line per entry, for logs and messages

private:
  std::vector<CheckEntry> entries_;
};

} // namespace agd
