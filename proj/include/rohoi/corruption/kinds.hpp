#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rohoi::corruption {

// Registry order is the benchmark's canonical order and doubles as the
// corruption id fed into stream derivation; never reorder.
enum class Kind : std::uint8_t {
  kMotionBlur,      // MB
  kDefocusBlur,     // DB
  kGaussianBlur,    // GauB
  kGlassBlur,       // GB
  kGaussianNoise,   // GauN
  kShotNoise,       // ShN
  kSaltPepper,      // S&P
  kJpeg,            // JPEG
  kSpeckleNoise,    // SN
  kPacketLoss,      // PL
  kExposure,        // EXP
  kRainbow,         // RE
  kOcclusion,       // OCC
  kVignette,        // VE
  kMoire,           // MP
  kScreenCrack,     // SC
  kElastic,         // ET
  kPerspective,     // PD
  kPixelate,        // PIX
  kZoomBlur,        // ZB
};

inline constexpr int kKindCount = 20;
inline constexpr int kSeverityCount = 5;

enum class Family : std::uint8_t {
  kOpticalSystem,       // OS
  kSensorCompression,   // SCT
  kEnvironmental,       // EI
  kGeometricScene,      // G&S
};

struct KindInfo {
  Kind kind;
  std::string_view abbrev;  // as printed in tables, e.g. "S&P"
  std::string_view slug;    // filesystem-safe, e.g. "SP"
  std::string_view name;
  Family family;
};

const std::array<KindInfo, kKindCount>& registry();
const KindInfo& info(Kind kind);
std::string_view family_abbrev(Family family);

inline std::uint8_t kind_id(Kind kind) { return static_cast<std::uint8_t>(kind); }

// Accepts the table abbreviation or slug, case-sensitive ("S&P" or "SP").
std::optional<Kind> parse_kind(std::string_view text);
// Throws kRegistry with the list of valid kinds.
Kind require_kind(std::string_view text);

// One line per family: "OS: MB DB GauB GB".
std::string describe_registry();

}  // namespace rohoi::corruption
