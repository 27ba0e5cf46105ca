#pragma once

// Ordered key/value reports written both as `key = value` lines and as an
// aligned human-readable text block. Reals use shortest round-trip form so
// reruns of the same configuration produce identical files.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "conevort/analysis.hpp"

namespace conevort {

/// Shortest decimal string that reads back to the same double.
std::string format_real(double v);

class Report {
 public:
  explicit Report(std::string title) : title_(std::move(title)) {}

  Report& add(const std::string& key, double value);
  Report& add(const std::string& key, int value);
  Report& add(const std::string& key, std::size_t value);
  Report& add(const std::string& key, bool value);
  Report& add(const std::string& key, const std::string& value);
  Report& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
  Report& add(const std::string& key, const Vec3& value);
  Report& add(const std::string& key, const std::vector<double>& value);
  void append(const Report& other, const std::string& prefix);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  const std::string* find(const std::string& key) const;

  std::string key_values() const;
  std::string text() const;
  /// Writes <stem>.kv and <stem>.txt.
  void write(const std::filesystem::path& stem) const;

 private:
  std::string title_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

Report contraction_summary(const std::vector<ContractionEntry>& entries);
Report sweep_summary(const SweepReport& sweep);
Report certificate_summary(const CertificateReport& cert);

}  // namespace conevort
