#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rohoi::config {

struct Section {
  std::string units;
  std::map<std::string, std::vector<double>> values;
};

// Parsed severity-ladder file: `key = v1, v2, ...` lines grouped under
// `[section]` headers, `#` comments. The hash covers the exact file bytes.
class LadderFile {
 public:
  // Throws kConfig with the line number on malformed input.
  static LadderFile parse(std::string text, std::string source = "<memory>");
  static LadderFile load(const std::filesystem::path& path);
  // The version-1 ladder shipped with the toolkit (config/ladder_v1.cfg).
  static const LadderFile& builtin();

  int version() const noexcept { return version_; }
  const std::string& text() const noexcept { return text_; }
  const std::string& source() const noexcept { return source_; }
  const std::string& hash() const noexcept { return hash_; }

  bool has_section(std::string_view name) const;
  // Throws kConfig if absent.
  const Section& section(std::string_view name) const;
  const std::map<std::string, Section, std::less<>>& sections() const noexcept {
    return sections_;
  }

 private:
  int version_ = 0;
  std::string text_;
  std::string source_;
  std::string hash_;
  std::map<std::string, Section, std::less<>> sections_;
};

// Path from the ROHOI_LADDER environment variable, or empty.
std::filesystem::path ladder_path_from_env();

}  // namespace rohoi::config
