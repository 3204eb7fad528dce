#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace landau {

std::uint64_t fnv1a(const std::string& s);
/// 16 lowercase hex digits of fnv1a(s)
std::string fnv1a_hex(const std::string& s);

/// Shortest round-trip decimal form (%.17g).
std::string fmt17(double x);

inline constexpr const char* kLibraryVersion = "1.0.0";

/// Ordered key/value record attached to every artifact.
///
/// Contains no timestamps or host data, so identical inputs give identical
/// bytes.
struct Provenance
{
  std::vector<std::pair<std::string, std::string>> fields;

  Provenance& add(const std::string& key, const std::string& value);
  Provenance& add(const std::string& key, double value);
  Provenance& add(const std::string& key, long long value);
  Provenance& add(const std::string& key, int value) { return add(key, static_cast<long long>(value)); }

  /// one "# key=value" line per field
  void write_comment_header(std::ostream& out) const;
  nlohmann::ordered_json to_json() const;
};

/// Writes text to path, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace landau
