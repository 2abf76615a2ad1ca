#include "attend/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "attend/graph.hpp"

namespace attend {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(sep, start);
    const auto item = trim(s.substr(start, end == std::string_view::npos ? s.size() - start : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

Config Config::parse(std::istream& in) {
  Config config;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      if (section.empty()) throw ParseError(line_no, "empty section name");
      config.sections_[section];
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    std::string key = trim(std::string_view(text).substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    if (section.empty()) throw ParseError(line_no, "key outside of a section");
    config.sections_[section][key] = trim(std::string_view(text).substr(eq + 1));
  }
  return config;
}

Config Config::parse_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return parse(in);
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = std::move(value);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  const auto kv = it->second.find(key);
  return kv == it->second.end() ? fallback : kv->second;
}

namespace {
[[noreturn]] void bad_value(const std::string& section, const std::string& key, const std::string& value,
                            const char* expected) {
  throw std::invalid_argument("config [" + section + "] " + key + " = '" + value + "' is not " + expected);
}
}  // namespace

double Config::get_double(const std::string& section, const std::string& key, double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string value = get_string(section, key, "");
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) bad_value(section, key, value, "a number");
    return parsed;
  } catch (const std::logic_error&) {
    bad_value(section, key, value, "a number");
  }
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string value = get_string(section, key, "");
  if (value.empty() || value[0] == '-') bad_value(section, key, value, "a nonnegative integer");
  try {
    std::size_t used = 0;
    const auto parsed = std::stoull(value, &used);
    if (used != value.size()) bad_value(section, key, value, "a nonnegative integer");
    return parsed;
  } catch (const std::logic_error&) {
    bad_value(section, key, value, "a nonnegative integer");
  }
}

std::size_t Config::get_size(const std::string& section, const std::string& key,
                             std::size_t fallback) const {
  return static_cast<std::size_t>(get_u64(section, key, fallback));
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string value = get_string(section, key, "");
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(section, key, value, "a boolean");
}

std::vector<std::string> Config::get_list(const std::string& section, const std::string& key,
                                          const std::vector<std::string>& fallback) const {
  if (!has(section, key)) return fallback;
  return split_list(get_string(section, key, ""));
}

void Config::require_known(const std::string& section,
                           std::initializer_list<std::string_view> known) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return;
  for (const auto& [key, value] : it->second) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown config key [" + section + "] " + key);
    }
  }
}

void Config::require_sections(std::initializer_list<std::string_view> sections) const {
  for (const auto& [name, keys] : sections_) {
    if (std::find(sections.begin(), sections.end(), name) == sections.end()) {
      throw std::invalid_argument("unknown config section [" + name + "]");
    }
  }
}

std::string Config::canonical() const {
  std::ostringstream out;
  for (const auto& [name, keys] : sections_) {
    for (const auto& [key, value] : keys) out << '[' << name << "] " << key << " = " << value << '\n';
  }
  return out.str();
}

}  // namespace attend
