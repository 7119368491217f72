/// @file report.hpp
/// @brief Machine-readable `key = value` reports with 17-digit numbers.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace hallmhd {

/// Shortest-safe round-trip text of a double: 17 significant digits.
std::string format_double(double v);

/// Ordered key/value pairs; setting an existing key replaces its value in place.
class KeyValueReport {
 public:
  void set(const std::string& key, double v);
  void set(const std::string& key, int v);
  void set(const std::string& key, long long v);
  void set(const std::string& key, bool v);
  void set(const std::string& key, const std::string& v);
  void set(const std::string& key, const char* v) { set(key, std::string(v)); }

  const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }
  /// Value text of `key`, or empty if absent.
  std::string get(const std::string& key) const;

  void write(std::ostream& os) const;
  void write(const std::filesystem::path& path) const;

 private:
  void put(const std::string& key, std::string v);
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace hallmhd
