#include "rohoi/masking/mask.hpp"

#include <algorithm>
#include <cmath>

#include "rohoi/error.hpp"
#include "rohoi/raster/image_io.hpp"

namespace rohoi::masking {

namespace {

struct IPoint {
  long long x;
  long long y;
  auto operator<=>(const IPoint&) const = default;
};

long long cross(const IPoint& o, const IPoint& a, const IPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; drops collinear points.
template <typename P>
std::vector<P> monotone_chain(std::vector<P> pts) {
  auto less = [](const P& a, const P& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const P& a, const P& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P> hull(2 * pts.size());
  std::size_t k = 0;
  for (const P& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    const P& p = pts[i];
    while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

// Leftmost and rightmost set pixel per row; enough to determine the hull.
template <typename F>
void for_row_extremes(const BinaryMask& m, F&& f) {
  for (int y = 0; y < m.height(); ++y) {
    int lo = -1, hi = -1;
    for (int x = 0; x < m.width(); ++x)
      if (m.get(x, y)) {
        if (lo < 0) lo = x;
        hi = x;
      }
    if (lo >= 0) f(y, lo, hi);
  }
}

void validate_ratio(CoverRatio r, const char* what) {
  if (!(r.w > 0.0 && r.w <= 1.0 && r.h > 0.0 && r.h <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": ratios must lie in (0, 1]");
}

}  // namespace

MaskLevel level_from_index(int index) {
  if (index < 1 || index > kLevelCount)
    throw Error(ErrorCode::kInvalidLevel, "mask level must be 1..4, got " + std::to_string(index));
  return static_cast<MaskLevel>(index);
}

std::string_view level_name(MaskLevel l) {
  switch (l) {
    case MaskLevel::kClean: return "w1";
    case MaskLevel::kLow: return "w2";
    case MaskLevel::kMiddle: return "w3";
    case MaskLevel::kHigh: return "w4";
  }
  return "w?";
}

std::optional<MaskLevel> parse_level(std::string_view text) {
  if (text.starts_with("w")) text.remove_prefix(1);
  else if (text.starts_with("\xCF\x89")) text.remove_prefix(2);  // ω
  if (text.size() != 1 || text[0] < '1' || text[0] > '4') return std::nullopt;
  return static_cast<MaskLevel>(text[0] - '0');
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw Error(ErrorCode::kInvalidArgument, "negative mask size");
  bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::optional<PixelBounds> BinaryMask::bounds() const noexcept {
  PixelBounds b{width_, height_, -1, -1};
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (get(x, y)) {
        b.x0 = std::min(b.x0, x);
        b.y0 = std::min(b.y0, y);
        b.x1 = std::max(b.x1, x);
        b.y1 = std::max(b.y1, y);
      }
  if (b.x1 < 0) return std::nullopt;
  return b;
}

bool BinaryMask::subset_of(const BinaryMask& other) const {
  if (!same_shape(other)) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

BinaryMask& BinaryMask::operator|=(const BinaryMask& other) {
  if (!same_shape(other)) throw Error(ErrorCode::kInvalidArgument, "mask union: size mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
  return *this;
}

InstanceMask instance_from_box(int width, int height, const Rect& b) {
  if (!(b.w >= 0 && b.h >= 0 && b.x >= 0 && b.y >= 0 && b.x + b.w <= width &&
        b.y + b.h <= height))
    throw Error(ErrorCode::kInvalidArgument, "instance box outside the image");
  InstanceMask inst{BinaryMask(width, height), b};
  for (int y = 0; y < height; ++y) {
    double cy = y + 0.5;
    if (cy < b.y || cy >= b.y + b.h) continue;
    for (int x = 0; x < width; ++x) {
      double cx = x + 0.5;
      if (cx >= b.x && cx < b.x + b.w) inst.mask.set(x, y);
    }
  }
  return inst;
}

MaskLadder::MaskLadder()
    : MaskLadder({CoverRatio{0.4, 0.4}, CoverRatio{0.5, 0.5}, CoverRatio{0.6, 0.6}}, 2, 6) {}

MaskLadder::MaskLadder(std::array<CoverRatio, 3> ratios, int dilation_min, int dilation_max)
    : ratios_(ratios), dmin_(dilation_min), dmax_(dilation_max) {
  for (std::size_t i = 0; i < ratios_.size(); ++i) {
    const auto& r = ratios_[i];
    if (!(r.w > 0.0 && r.w <= 1.0 && r.h > 0.0 && r.h <= 1.0))
      throw Error(ErrorCode::kConfig, "mask cover ratios must lie in (0, 1]");
    if (i > 0 && (r.w < ratios_[i - 1].w || r.h < ratios_[i - 1].h))
      throw Error(ErrorCode::kConfig, "mask cover ratios must be non-decreasing from w2 to w4");
  }
  if (dmin_ < 0 || dmax_ < dmin_)
    throw Error(ErrorCode::kConfig, "mask dilation range must satisfy 0 <= min <= max");
}

MaskLadder MaskLadder::from_file(const config::LadderFile& file) {
  const config::Section& sec = file.section("mask");
  auto get = [&](const char* key, std::size_t n) -> const std::vector<double>& {
    auto it = sec.values.find(key);
    if (it == sec.values.end())
      throw Error(ErrorCode::kConfig, file.source() + " [mask]: missing key '" + key + "'");
    if (it->second.size() != n)
      throw Error(ErrorCode::kConfig, file.source() + " [mask]." + key + ": expected " +
                                          std::to_string(n) + " value(s)");
    return it->second;
  };
  const auto& cw = get("cover_w", 3);
  const auto& chh = get("cover_h", 3);
  const auto& dmin = get("dilation_min_px", 1);
  const auto& dmax = get("dilation_max_px", 1);
  for (const auto& [key, _] : sec.values)
    if (key != "cover_w" && key != "cover_h" && key != "dilation_min_px" &&
        key != "dilation_max_px")
      throw Error(ErrorCode::kConfig, file.source() + " [mask]: unknown key '" + key + "'");
  if (dmin[0] != std::floor(dmin[0]) || dmax[0] != std::floor(dmax[0]))
    throw Error(ErrorCode::kConfig, file.source() + " [mask]: dilation radii must be integers");
  return MaskLadder({CoverRatio{cw[0], chh[0]}, CoverRatio{cw[1], chh[1]}, CoverRatio{cw[2], chh[2]}},
                    static_cast<int>(dmin[0]), static_cast<int>(dmax[0]));
}

CoverRatio MaskLadder::ratio(MaskLevel level) const {
  int i = level_index(level);
  if (i < 2 || i > 4) throw Error(ErrorCode::kInvalidLevel, "level has no cover ratio");
  return ratios_[static_cast<std::size_t>(i - 2)];
}

BinaryMask dilate(const BinaryMask& m, int radius) {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "dilation radius must be >= 0");
  if (radius == 0) return m;
  const int w = m.width(), h = m.height();
  // Running counts along rows, then along columns.
  BinaryMask rows(w, h);
  std::vector<int> prefix(static_cast<std::size_t>(std::max(w, h)) + 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + (m.get(x, y) ? 1 : 0);
    for (int x = 0; x < w; ++x) {
      int lo = std::max(0, x - radius), hi = std::min(w, x + radius + 1);
      if (prefix[hi] - prefix[lo] > 0) rows.set(x, y);
    }
  }
  BinaryMask out(w, h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) prefix[y + 1] = prefix[y] + (rows.get(x, y) ? 1 : 0);
    for (int y = 0; y < h; ++y) {
      int lo = std::max(0, y - radius), hi = std::min(h, y + radius + 1);
      if (prefix[hi] - prefix[lo] > 0) out.set(x, y);
    }
  }
  return out;
}

BinaryMask convex_hull(const BinaryMask& m) {
  std::vector<IPoint> pts;
  for_row_extremes(m, [&](int y, int lo, int hi) {
    pts.push_back({lo, y});
    if (hi != lo) pts.push_back({hi, y});
  });
  if (pts.empty()) throw Error(ErrorCode::kEmptyMask, "convex hull of an empty mask");
  auto hull = monotone_chain(std::move(pts));

  long long x0 = hull[0].x, x1 = hull[0].x, y0 = hull[0].y, y1 = hull[0].y;
  for (const auto& p : hull) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  // Closed fill in exact integer arithmetic: centers on an edge are inside.
  BinaryMask out(m.width(), m.height());
  const std::size_t n = hull.size();
  for (long long y = y0; y <= y1; ++y)
    for (long long x = x0; x <= x1; ++x) {
      IPoint p{x, y};
      // A two-point hull is a segment; the bounding box bounds its extent.
      bool inside = n != 2 || cross(hull[0], hull[1], p) == 0;
      for (std::size_t i = 0; n > 2 && i < n && inside; ++i)
        if (cross(hull[i], hull[(i + 1) % n], p) < 0) inside = false;
      if (inside) out.set(static_cast<int>(x), static_cast<int>(y));
    }
  return out;
}

std::vector<Point2> outline_polygon(const BinaryMask& m) {
  std::vector<Point2> pts;
  for_row_extremes(m, [&](int y, int lo, int hi) {
    pts.push_back({double(lo), double(y)});
    pts.push_back({double(lo), double(y + 1)});
    pts.push_back({double(hi + 1), double(y)});
    pts.push_back({double(hi + 1), double(y + 1)});
  });
  if (pts.empty()) throw Error(ErrorCode::kDegenerateGeometry, "outline of an empty mask");
  return monotone_chain(std::move(pts));
}

BinaryMask rasterize_polygon(const std::vector<Point2>& poly, int width, int height) {
  BinaryMask out(width, height);
  const std::size_t n = poly.size();
  if (n < 3) return out;
  double minx = poly[0].x, maxx = poly[0].x, miny = poly[0].y, maxy = poly[0].y;
  for (const auto& p : poly) {
    minx = std::min(minx, p.x);
    maxx = std::max(maxx, p.x);
    miny = std::min(miny, p.y);
    maxy = std::max(maxy, p.y);
  }
  int px0 = std::max(0, static_cast<int>(std::floor(minx - 0.5)));
  int px1 = std::min(width - 1, static_cast<int>(std::ceil(maxx)));
  int py0 = std::max(0, static_cast<int>(std::floor(miny - 0.5)));
  int py1 = std::min(height - 1, static_cast<int>(std::ceil(maxy)));
  for (int y = py0; y <= py1; ++y)
    for (int x = px0; x <= px1; ++x) {
      Point2 c{x + 0.5, y + 0.5};
      bool inside = true;
      for (std::size_t i = 0; i < n && inside; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % n];
        double v = cross(a, b, c);
        if (v > 0) continue;
        const double dx = b.x - a.x, dy = b.y - a.y;
        bool top_left = (dy == 0 && dx > 0) || dy < 0;
        if (!(v == 0 && top_left)) inside = false;
      }
      if (inside) out.set(x, y);
    }
  return out;
}

BinaryMask scale_to_cover(const BinaryMask& hull, const Rect& bbox, CoverRatio r) {
  validate_ratio(r, "scale_to_cover");
  auto poly = outline_polygon(hull);
  if (poly.size() < 3) throw Error(ErrorCode::kDegenerateGeometry, "hull has zero area");
  double area2 = 0, cx = 0, cy = 0;
  double minx = poly[0].x, maxx = poly[0].x, miny = poly[0].y, maxy = poly[0].y;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    double c = a.x * b.y - b.x * a.y;
    area2 += c;
    cx += (a.x + b.x) * c;
    cy += (a.y + b.y) * c;
    minx = std::min(minx, a.x);
    maxx = std::max(maxx, a.x);
    miny = std::min(miny, a.y);
    maxy = std::max(maxy, a.y);
  }
  if (area2 == 0) throw Error(ErrorCode::kDegenerateGeometry, "hull has zero area");
  cx /= 3.0 * area2;
  cy /= 3.0 * area2;
  const double sx = r.w * bbox.w / (maxx - minx);
  const double sy = r.h * bbox.h / (maxy - miny);
  if (!(sx > 0) || !(sy > 0))
    throw Error(ErrorCode::kDegenerateGeometry, "cover target has zero size");
  if (sx == 1.0 && sy == 1.0) return hull;
  for (auto& p : poly) {
    p.x = cx + (p.x - cx) * sx;
    p.y = cy + (p.y - cy) * sy;
  }
  return rasterize_polygon(poly, hull.width(), hull.height());
}

BinaryMask build_semantic_mask(const InstanceMask& inst, MaskLevel level,
                               const MaskLadder& ladder, RngStream& stream) {
  if (level == MaskLevel::kClean) return BinaryMask(inst.mask.width(), inst.mask.height());
  int radius = stream.uniform_int(ladder.dilation_min(), ladder.dilation_max());
  BinaryMask hull = convex_hull(dilate(inst.mask, radius));
  return scale_to_cover(hull, inst.bbox, ladder.ratio(level));
}

BinaryMask build_image_mask(int width, int height, const std::vector<InstanceMask>& instances,
                            MaskLevel level, const MaskLadder& ladder,
                            std::uint64_t global_seed, std::uint64_t image_id, MaskMode mode) {
  BinaryMask out(width, height);
  if (level == MaskLevel::kClean || instances.empty()) return out;
  for (const auto& inst : instances)
    if (inst.mask.width() != width || inst.mask.height() != height)
      throw Error(ErrorCode::kInvalidArgument, "instance mask size differs from the image");
  RngStream base = raster::derive_stream(global_seed, image_id, kMaskStreamId, 0);
  auto build_one = [&](std::size_t i) {
    // Instances with no pixels have nothing to occlude.
    if (instances[i].mask.none()) return;
    RngStream s = base.fork(i);
    out |= build_semantic_mask(instances[i], level, ladder, s);
  };
  if (mode == MaskMode::kSingle) {
    RngStream pick = base.fork(0xFFFFFFFFull);
    build_one(static_cast<std::size_t>(
        pick.uniform_int(0, static_cast<int>(instances.size()) - 1)));
  } else {
    for (std::size_t i = 0; i < instances.size(); ++i) build_one(i);
  }
  return out;
}

ImageBuffer apply_mask(const ImageBuffer& img, const BinaryMask& m) {
  if (img.width() != m.width() || img.height() != m.height())
    throw Error(ErrorCode::kInvalidArgument, "apply_mask: mask size differs from the image");
  ImageBuffer out = img;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (m.get(x, y))
        for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = 0.0f;
  return out;
}

BinaryMask read_mask_png(const std::filesystem::path& path, int width, int height) {
  ImageBuffer img = raster::read_image(path);
  if (img.width() != width || img.height() != height)
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": mask size differs from the image");
  BinaryMask m(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (raster::to_byte(img.at(x, y, 0)) >= 128) m.set(x, y);
  return m;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& m) {
  ImageBuffer img(m.width(), m.height(), 1);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (m.get(x, y)) img.at(x, y, 0) = 1.0f;
  raster::write_png(path, img);
}

}  // namespace rohoi::masking
