#include "rohoi/corruption/ladder.hpp"

#include <cmath>
#include <set>

#include "rohoi/error.hpp"

namespace rohoi::corruption {

namespace {

constexpr auto kInc = Trend::kIncreasing;
constexpr auto kDec = Trend::kDecreasing;
constexpr auto kConst = Trend::kConstant;

}  // namespace

std::vector<ParamSpec> param_schema(Kind kind) {
  switch (kind) {
    case Kind::kMotionBlur:
      return {{"kernel_length_px", kInc, true, true, 1, 255},
              {"angle_deg", kConst, false, false, -360, 360}};
    case Kind::kDefocusBlur:
      return {{"radius_px", kInc, true, false, 0, 127}};
    case Kind::kGaussianBlur:
      return {{"sigma_px", kInc, false, false, 1e-3, 64}};
    case Kind::kGlassBlur:
      return {{"sigma_px", kInc, false, false, 1e-3, 64},
              {"max_displacement_px", kInc, true, false, 0, 64},
              {"iterations", kInc, true, false, 1, 64}};
    case Kind::kGaussianNoise:
      return {{"sigma", kInc, false, false, 0, 1}};
    case Kind::kShotNoise:
      return {{"photons", kDec, false, false, 1e-3, 1e6}};
    case Kind::kSaltPepper:
      return {{"probability", kInc, false, false, 0, 1}};
    case Kind::kJpeg:
      return {{"quality", kDec, true, false, 1, 100}};
    case Kind::kSpeckleNoise:
      return {{"sigma", kInc, false, false, 0, 10}};
    case Kind::kPacketLoss:
      return {{"regions", kInc, true, false, 0, 10000},
              {"height_rel", kInc, false, false, 0, 1},
              {"width_min_rel", kConst, false, false, 0, 1}};
    case Kind::kExposure:
      return {{"gain", kInc, false, false, 1, 100},
              {"gamma", kInc, false, false, 1, 100}};
    case Kind::kRainbow:
      return {{"intensity", kInc, false, false, 0, 1},
              {"band_width_rel", kInc, false, false, 1e-3, 10},
              {"channel_shift_px", kInc, false, false, 0, 1000},
              {"hue_cycles", kConst, false, false, 0, 100}};
    case Kind::kOcclusion:
      return {{"count", kInc, true, false, 1, 1000},
              {"area_rel", kInc, false, false, 0, 1},
              {"aspect_max", kConst, false, false, 1, 100}};
    case Kind::kVignette:
      return {{"inner_radius_rel", kDec, false, false, 0, 1},
              {"strength", kInc, false, false, 0, 1}};
    case Kind::kMoire:
      return {{"frequency_per_px", kInc, false, false, 0, 0.5},
              {"contrast", kInc, false, false, 0, 1},
              {"angle_offset_deg", kConst, false, false, 0, 90}};
    case Kind::kScreenCrack:
      return {{"cracks", kInc, true, false, 1, 1000},
              {"length_rel", kInc, false, false, 0, 10},
              {"crack_alpha", kInc, false, false, 0, 1},
              {"glare_streaks", kInc, true, false, 0, 1000},
              {"glare_intensity", kInc, false, false, 0, 1}};
    case Kind::kElastic:
      return {{"magnitude_rel", kInc, false, false, 0, 1},
              {"smoothing_rel", kConst, false, false, 1e-3, 1}};
    case Kind::kPerspective:
      return {{"inset_x_rel", kInc, false, false, 0, 0.45},
              {"inset_y_rel", kInc, false, false, 0, 0.45}};
    case Kind::kPixelate:
      return {{"block_px", kInc, true, false, 1, 4096}};
    case Kind::kZoomBlur:
      return {{"max_zoom", kInc, false, false, 1, 10},
              {"layers", kInc, true, false, 1, 256}};
  }
  return {};
}

SeverityLadder::SeverityLadder(const config::LadderFile& file)
    : hash_(file.hash()), version_(file.version()) {
  for (const auto& ki : registry()) {
    const std::string where = file.source() + " [" + std::string(ki.slug) + "]";
    const config::Section& sec = file.section(ki.slug);
    if (sec.units.empty()) throw Error(ErrorCode::kConfig, where + ": missing 'units'");
    units_[kind_id(ki.kind)] = sec.units;

    auto schema = param_schema(ki.kind);
    std::set<std::string, std::less<>> known;
    for (const ParamSpec& spec : schema) {
      known.emplace(spec.name);
      auto it = sec.values.find(std::string(spec.name));
      if (it == sec.values.end()) {
        throw Error(ErrorCode::kConfig,
                    where + ": missing key '" + std::string(spec.name) + "'");
      }
      const auto& v = it->second;
      const std::string key = where + "." + std::string(spec.name);
      const std::size_t want = spec.trend == Trend::kConstant ? 1 : kSeverityCount;
      if (v.size() != want) {
        throw Error(ErrorCode::kConfig, key + ": expected " + std::to_string(want) +
                                            " value(s), got " + std::to_string(v.size()));
      }
      for (double x : v) {
        if (x < spec.min || x > spec.max)
          throw Error(ErrorCode::kConfig, key + ": value out of range");
        if (spec.integer && x != std::floor(x))
          throw Error(ErrorCode::kConfig, key + ": values must be integers");
        if (spec.odd && static_cast<long long>(x) % 2 == 0)
          throw Error(ErrorCode::kConfig, key + ": values must be odd");
      }
      for (std::size_t i = 1; i < v.size(); ++i) {
        bool ok = spec.trend == Trend::kIncreasing ? v[i] > v[i - 1] : v[i] < v[i - 1];
        if (!ok) {
          throw Error(ErrorCode::kConfig,
                      key + ": values must be strictly " +
                          (spec.trend == Trend::kIncreasing ? "increasing" : "decreasing"));
        }
      }
      params_[kind_id(ki.kind)].emplace_back(std::string(spec.name), v);
    }
    for (const auto& [name, _] : sec.values)
      if (!known.contains(name))
        throw Error(ErrorCode::kConfig, where + ": unknown key '" + name + "'");
  }
}

const SeverityLadder& SeverityLadder::builtin() {
  static const SeverityLadder ladder(config::LadderFile::builtin());
  return ladder;
}

const std::vector<double>& SeverityLadder::lookup(Kind kind,
                                                  std::string_view param) const {
  for (const auto& [name, values] : params_[kind_id(kind)])
    if (name == param) return values;
  throw Error(ErrorCode::kConfig, "ladder has no parameter " +
                                      std::string(info(kind).slug) + "." +
                                      std::string(param));
}

double SeverityLadder::value(Kind kind, std::string_view param, int severity) const {
  require_severity(severity);
  const auto& v = lookup(kind, param);
  return v.size() == 1 ? v[0] : v[static_cast<std::size_t>(severity - 1)];
}

int SeverityLadder::int_value(Kind kind, std::string_view param, int severity) const {
  return static_cast<int>(std::lround(value(kind, param, severity)));
}

double SeverityLadder::constant(Kind kind, std::string_view param) const {
  return lookup(kind, param).front();
}

void require_severity(int severity) {
  if (severity < 1 || severity > kSeverityCount) {
    throw Error(ErrorCode::kInvalidArgument,
                "severity must be in 1..5, got " + std::to_string(severity));
  }
}

}  // namespace rohoi::corruption
