#include "rohoi/corruption/corrupt.hpp"

#include "rohoi/error.hpp"

namespace rohoi::corruption {

ImageBuffer apply_corruption(const ImageBuffer& img, const CorruptionSpec& spec,
                             std::uint64_t image_id, const SeverityLadder& ladder) {
  if (kind_id(spec.kind) >= kKindCount)
    throw Error(ErrorCode::kRegistry,
                "unknown corruption id " + std::to_string(kind_id(spec.kind)));
  require_severity(spec.severity);
  if (img.empty()) throw Error(ErrorCode::kInvalidArgument, "apply_corruption: empty image");
  RngStream stream = raster::derive_stream(spec.seed, image_id, kind_id(spec.kind),
                                           static_cast<std::uint8_t>(spec.severity));
  switch (info(spec.kind).family) {
    case Family::kOpticalSystem:
      return os_blur(img, spec.kind, spec.severity, stream, ladder);
    case Family::kSensorCompression:
      return sct_degrade(img, spec.kind, spec.severity, stream, ladder);
    case Family::kEnvironmental:
      return ei_effect(img, spec.kind, spec.severity, stream, ladder);
    case Family::kGeometricScene:
      return gs_distort(img, spec.kind, spec.severity, stream, ladder);
  }
  throw Error(ErrorCode::kRegistry, "unknown corruption family");
}

}  // namespace rohoi::corruption
