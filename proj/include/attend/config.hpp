#pragma once

// INI-style configuration: "[section]" headers and "key = value" lines;
// '#' or ';' starts a comment line.

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace attend {

class Config {
 public:
  static Config parse(std::istream& in);
  static Config parse_string(std::string_view text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, std::string value);

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::size_t get_size(const std::string& section, const std::string& key,
                       std::size_t fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Comma-separated list; surrounding whitespace trimmed per item.
  std::vector<std::string> get_list(const std::string& section, const std::string& key,
                                    const std::vector<std::string>& fallback) const;

  /// Throws if `section` holds a key outside `known`, or if a section outside
  /// `sections` is present.
  void require_known(const std::string& section, std::initializer_list<std::string_view> known) const;
  void require_sections(std::initializer_list<std::string_view> sections) const;

  /// Sorted "[section] key = value" lines; stable input for fingerprints.
  std::string canonical() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// 64-bit FNV-1a of `text` as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

std::string trim(std::string_view s);
std::vector<std::string> split_list(std::string_view s, char sep = ',');

}  // namespace attend
