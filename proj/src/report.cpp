#include "hallmhd/report.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hallmhd {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void KeyValueReport::put(const std::string& key, std::string v) {
  for (auto& [k, old] : entries_) {
    if (k == key) {
      old = std::move(v);
      return;
    }
  }
  entries_.emplace_back(key, std::move(v));
}

void KeyValueReport::set(const std::string& key, double v) { put(key, format_double(v)); }
void KeyValueReport::set(const std::string& key, int v) { put(key, std::to_string(v)); }
void KeyValueReport::set(const std::string& key, long long v) { put(key, std::to_string(v)); }
void KeyValueReport::set(const std::string& key, bool v) { put(key, v ? "true" : "false"); }
void KeyValueReport::set(const std::string& key, const std::string& v) { put(key, v); }

std::string KeyValueReport::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return {};
}

void KeyValueReport::write(std::ostream& os) const {
  for (const auto& [k, v] : entries_) os << k << " = " << v << "\n";
}

void KeyValueReport::write(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write report " + path.string());
  write(os);
}

}  // namespace hallmhd
