#include "rohoi/config/ladder_file.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>

#include "builtin_ladder.hpp"
#include "rohoi/error.hpp"
#include "rohoi/util/hash.hpp"

namespace rohoi::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw Error(ErrorCode::kConfig,
              source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<double> parse_numbers(std::string_view list, const std::string& source,
                                  int line) {
  std::vector<double> out;
  while (true) {
    auto comma = list.find(',');
    std::string item(trim(list.substr(0, comma)));
    if (item.empty()) fail(source, line, "empty value in list");
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(item.c_str(), &end);
    if (errno != 0 || end != item.c_str() + item.size() || !std::isfinite(v)) {
      fail(source, line, "not a finite number: '" + item + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

LadderFile LadderFile::parse(std::string text, std::string source) {
  LadderFile file;
  file.source_ = std::move(source);
  file.hash_ = util::sha256_hex(text);

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  Section* current = nullptr;
  bool have_version = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(file.source_, line_no, "unterminated section header");
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (name.empty()) fail(file.source_, line_no, "empty section name");
      auto [it, inserted] = file.sections_.try_emplace(name);
      if (!inserted) fail(file.source_, line_no, "duplicate section [" + name + "]");
      current = &it->second;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(file.source_, line_no, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(file.source_, line_no, "empty key or value");
    if (current == nullptr) {
      if (key != "version") fail(file.source_, line_no, "only 'version' may precede sections");
      auto nums = parse_numbers(value, file.source_, line_no);
      if (nums.size() != 1 || nums[0] != std::floor(nums[0]) || nums[0] < 1)
        fail(file.source_, line_no, "version must be a positive integer");
      file.version_ = static_cast<int>(nums[0]);
      have_version = true;
      continue;
    }
    if (key == "units") {
      current->units = std::string(value);
      if (current->units != "px" && current->units != "rel" &&
          current->units != "mixed" && current->units != "none") {
        fail(file.source_, line_no, "units must be px, rel, mixed or none");
      }
      continue;
    }
    if (current->values.contains(key)) fail(file.source_, line_no, "duplicate key '" + key + "'");
    current->values.emplace(key, parse_numbers(value, file.source_, line_no));
  }
  if (!have_version) throw Error(ErrorCode::kConfig, file.source_ + ": missing 'version'");
  file.text_ = std::move(text);
  return file;
}

LadderFile LadderFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open ladder file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), {});
  return parse(std::move(text), path.string());
}

const LadderFile& LadderFile::builtin() {
  static const LadderFile file = parse(std::string(kBuiltinLadderText), "builtin:ladder_v1.cfg");
  return file;
}

bool LadderFile::has_section(std::string_view name) const {
  return sections_.find(name) != sections_.end();
}

const Section& LadderFile::section(std::string_view name) const {
  auto it = sections_.find(name);
  if (it == sections_.end()) {
    throw Error(ErrorCode::kConfig,
                source_ + ": missing section [" + std::string(name) + "]");
  }
  return it->second;
}

std::filesystem::path ladder_path_from_env() {
  const char* v = std::getenv("ROHOI_LADDER");
  return v ? std::filesystem::path(v) : std::filesystem::path();
}

}  // namespace rohoi::config
