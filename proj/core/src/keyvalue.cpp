#include "netsample/keyvalue.hpp"

#include <algorithm>
#include <fstream>

#include "netsample/csv.hpp"
#include "netsample/error.hpp"

namespace netsample {

KeyValueDocument KeyValueDocument::parse(std::istream& in, std::string source) {
  KeyValueDocument doc;
  doc.source_ = std::move(source);
  std::string section;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = csv::trim(raw);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(doc.source_, line, "unterminated section header");
      section = std::string(csv::trim(text.substr(1, text.size() - 2)));
      if (section.empty()) throw ParseError(doc.source_, line, "empty section name");
      if (std::find(doc.sections_.begin(), doc.sections_.end(), section) == doc.sections_.end()) {
        doc.sections_.push_back(section);
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(doc.source_, line, "expected `key = value`, got `" + std::string(text) + "`");
    }
    std::string key(csv::trim(text.substr(0, eq)));
    std::string_view value = csv::trim(text.substr(eq + 1));
    // trailing comment after whitespace
    for (const char* marker : {" #", "\t#", " ;", "\t;"}) {
      if (const auto pos = value.find(marker); pos != std::string_view::npos) {
        value = csv::trim(value.substr(0, pos));
      }
    }
    if (key.empty()) throw ParseError(doc.source_, line, "empty key");
    if (doc.find(section, key)) {
      throw ParseError(doc.source_, line,
                       "duplicate key `" + key + "` in section [" + section + "]");
    }
    doc.entries_.push_back({section, std::move(key), std::string(value), line});
  }
  return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  return parse(in, path.string());
}

const KeyValueEntry* KeyValueDocument::find(std::string_view section,
                                            std::string_view key) const noexcept {
  for (const auto& e : entries_) {
    if (e.section == section && e.key == key) return &e;
  }
  return nullptr;
}

void KeyValueDocument::set(std::string section, std::string key, std::string value) {
  for (auto& e : entries_) {
    if (e.section == section && e.key == key) {
      e.value = std::move(value);
      e.line = 0;
      return;
    }
  }
  if (!section.empty() &&
      std::find(sections_.begin(), sections_.end(), section) == sections_.end()) {
    sections_.push_back(section);
  }
  entries_.push_back({std::move(section), std::move(key), std::move(value), 0});
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  if (csv::trim(value).empty()) return out;
  for (auto field : csv::split(value, ',')) out.emplace_back(field);
  return out;
}

}  // namespace netsample
