#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace netsample {

/// One `key = value` line and where it came from.
struct KeyValueEntry {
  std::string section;  // "" for keys before the first [section]
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// INI-style document: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Order is preserved; a key repeated within a section is an error.
class KeyValueDocument {
 public:
  static KeyValueDocument parse(std::istream& in, std::string source);
  static KeyValueDocument load(const std::filesystem::path& path);

  const std::string& source() const noexcept { return source_; }
  const std::vector<KeyValueEntry>& entries() const noexcept { return entries_; }
  const KeyValueEntry* find(std::string_view section, std::string_view key) const noexcept;

  /// Distinct section names in order of first appearance (headers without
  /// keys included).
  const std::vector<std::string>& sections() const noexcept { return sections_; }

  void set(std::string section, std::string key, std::string value);

 private:
  std::string source_;
  std::vector<KeyValueEntry> entries_;
  std::vector<std::string> sections_;
};

/// Comma-separated list with surrounding whitespace trimmed; empty input
/// gives an empty list.
std::vector<std::string> split_list(std::string_view value);

}  // namespace netsample
