#include "landau/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace landau {

std::uint64_t fnv1a(const std::string& s)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a_hex(const std::string& s)
{
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(s));
  return buf;
}

std::string fmt17(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Provenance& Provenance::add(const std::string& key, const std::string& value)
{
  fields.emplace_back(key, value);
  return *this;
}

Provenance& Provenance::add(const std::string& key, double value) { return add(key, fmt17(value)); }

Provenance& Provenance::add(const std::string& key, long long value) { return add(key, std::to_string(value)); }

void Provenance::write_comment_header(std::ostream& out) const
{
  for (const auto& [k, v] : fields) {
    out << "# " << k << '=' << v << '\n';
  }
}

nlohmann::ordered_json Provenance::to_json() const
{
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : fields) {
    j[k] = v;
  }
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

}  // namespace landau
