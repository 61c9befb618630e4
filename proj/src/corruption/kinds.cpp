#include "rohoi/corruption/kinds.hpp"

#include "rohoi/error.hpp"

namespace rohoi::corruption {

namespace {

constexpr std::array<KindInfo, kKindCount> kRegistry = {{
    {Kind::kMotionBlur, "MB", "MB", "motion blur", Family::kOpticalSystem},
    {Kind::kDefocusBlur, "DB", "DB", "defocus blur", Family::kOpticalSystem},
    {Kind::kGaussianBlur, "GauB", "GauB", "gaussian blur", Family::kOpticalSystem},
    {Kind::kGlassBlur, "GB", "GB", "glass blur", Family::kOpticalSystem},
    {Kind::kGaussianNoise, "GauN", "GauN", "gaussian noise", Family::kSensorCompression},
    {Kind::kShotNoise, "ShN", "ShN", "shot noise", Family::kSensorCompression},
    {Kind::kSaltPepper, "S&P", "SP", "salt-and-pepper noise", Family::kSensorCompression},
    {Kind::kJpeg, "JPEG", "JPEG", "jpeg artifacts", Family::kSensorCompression},
    {Kind::kSpeckleNoise, "SN", "SN", "speckle noise", Family::kSensorCompression},
    {Kind::kPacketLoss, "PL", "PL", "packet loss", Family::kSensorCompression},
    {Kind::kExposure, "EXP", "EXP", "exposure", Family::kEnvironmental},
    {Kind::kRainbow, "RE", "RE", "rainbow effect", Family::kEnvironmental},
    {Kind::kOcclusion, "OCC", "OCC", "occlusion", Family::kEnvironmental},
    {Kind::kVignette, "VE", "VE", "vignette effect", Family::kEnvironmental},
    {Kind::kMoire, "MP", "MP", "moire pattern", Family::kGeometricScene},
    {Kind::kScreenCrack, "SC", "SC", "screen crack", Family::kGeometricScene},
    {Kind::kElastic, "ET", "ET", "elastic transform", Family::kGeometricScene},
    {Kind::kPerspective, "PD", "PD", "perspective distortion", Family::kGeometricScene},
    {Kind::kPixelate, "PIX", "PIX", "pixelation", Family::kGeometricScene},
    {Kind::kZoomBlur, "ZB", "ZB", "zoom blur", Family::kGeometricScene},
}};

}  // namespace

const std::array<KindInfo, kKindCount>& registry() { return kRegistry; }

const KindInfo& info(Kind kind) { return kRegistry[kind_id(kind)]; }

std::string_view family_abbrev(Family family) {
  switch (family) {
    case Family::kOpticalSystem: return "OS";
    case Family::kSensorCompression: return "SCT";
    case Family::kEnvironmental: return "EI";
    case Family::kGeometricScene: return "G&S";
  }
  return "?";
}

std::optional<Kind> parse_kind(std::string_view text) {
  for (const auto& k : kRegistry)
    if (text == k.abbrev || text == k.slug) return k.kind;
  return std::nullopt;
}

Kind require_kind(std::string_view text) {
  if (auto k = parse_kind(text)) return *k;
  std::string valid;
  for (const auto& k : kRegistry) {
    if (!valid.empty()) valid += ' ';
    valid += k.abbrev;
  }
  throw Error(ErrorCode::kRegistry, "unknown corruption kind '" +
                                        std::string(text) + "'; valid kinds: " + valid);
}

std::string describe_registry() {
  std::string out;
  for (Family f : {Family::kOpticalSystem, Family::kSensorCompression,
                   Family::kEnvironmental, Family::kGeometricScene}) {
    out += family_abbrev(f);
    out += ':';
    for (const auto& k : kRegistry) {
      if (k.family != f) continue;
      out += ' ';
      out += k.abbrev;
    }
    out += '\n';
  }
  return out;
}

}  // namespace rohoi::corruption
