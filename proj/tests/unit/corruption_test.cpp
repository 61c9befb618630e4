#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "rohoi/config/ladder_file.hpp"
#include "rohoi/corruption/corrupt.hpp"
#include "rohoi/corruption/kinds.hpp"
#include "rohoi/corruption/ladder.hpp"
#include "rohoi/error.hpp"
#include "rohoi/raster/image_io.hpp"
#include "support/images.hpp"

namespace {

using namespace rohoi::corruption;
using rohoi::Error;
using rohoi::ErrorCode;
using rohoi::raster::derive_stream;
using rohoi::raster::psnr;
namespace rt = rohoi::testing;

const SeverityLadder& L() { return SeverityLadder::builtin(); }

ImageBuffer run(const ImageBuffer& img, Kind k, int sev, std::uint64_t seed = 1,
                std::uint64_t image_id = 0) {
  return apply_corruption(img, {k, sev, seed}, image_id);
}

// ---- registry and ladder ----

TEST(Registry, TwentyKindsInFourFamilies) {
  const auto& reg = registry();
  ASSERT_EQ(reg.size(), 20u);
  std::map<Family, int> per;
  for (const auto& ki : reg) ++per[ki.family];
  EXPECT_EQ(per[Family::kOpticalSystem], 4);
  EXPECT_EQ(per[Family::kSensorCompression], 6);
  EXPECT_EQ(per[Family::kEnvironmental], 4);
  EXPECT_EQ(per[Family::kGeometricScene], 6);
  const char* order[] = {"MB", "DB", "GauB", "GB", "GauN", "ShN", "S&P", "JPEG", "SN", "PL",
                         "EXP", "RE", "OCC", "VE", "MP", "SC", "ET", "PD", "PIX", "ZB"};
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(reg[i].abbrev, order[i]);
    EXPECT_EQ(kind_id(reg[i].kind), i);
  }
}

TEST(Registry, ParseAbbrevAndSlug) {
  EXPECT_EQ(parse_kind("S&P"), Kind::kSaltPepper);
  EXPECT_EQ(parse_kind("SP"), Kind::kSaltPepper);
  EXPECT_EQ(parse_kind("GauN"), Kind::kGaussianNoise);
  EXPECT_FALSE(parse_kind("gaun"));
  try {
    require_kind("Fog");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRegistry);
    EXPECT_NE(std::string(e.what()).find("GauN"), std::string::npos);
  }
}

TEST(Registry, DescribeListsFamilies) {
  auto d = describe_registry();
  EXPECT_NE(d.find("OS: MB DB GauB GB"), std::string::npos);
  EXPECT_NE(d.find("SCT: GauN ShN S&P JPEG SN PL"), std::string::npos);
  EXPECT_NE(d.find("EI: EXP RE OCC VE"), std::string::npos);
  EXPECT_NE(d.find("G&S: MP SC ET PD PIX ZB"), std::string::npos);
}

TEST(Ladder, BuiltinValuesAndMonotone) {
  EXPECT_DOUBLE_EQ(L().value(Kind::kGaussianNoise, "sigma", 3), 0.12);
  EXPECT_EQ(L().int_value(Kind::kPixelate, "block_px", 5), 12);
  EXPECT_EQ(L().int_value(Kind::kJpeg, "quality", 1), 25);
  EXPECT_EQ(L().units(Kind::kPacketLoss), "rel");
  for (const auto& ki : registry())
    for (const auto& ps : param_schema(ki.kind)) {
      if (ps.trend == Trend::kConstant) continue;
      for (int s = 1; s < 5; ++s) {
        double a = L().value(ki.kind, ps.name, s), b = L().value(ki.kind, ps.name, s + 1);
        if (ps.trend == Trend::kIncreasing) EXPECT_LT(a, b) << ki.abbrev << "." << ps.name;
        else EXPECT_GT(a, b) << ki.abbrev << "." << ps.name;
      }
    }
}

TEST(Ladder, RejectsNonMonotoneFile) {
  std::string text = rohoi::config::LadderFile::builtin().text();
  auto pos = text.find("sigma = 0.04, 0.08, 0.12, 0.18, 0.26");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 36, "sigma = 0.04, 0.08, 0.08, 0.18, 0.26");
  try {
    SeverityLadder bad(rohoi::config::LadderFile::parse(text));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("GauN"), std::string::npos);
  }
}

TEST(Ladder, HashTracksFileBytes) {
  const auto& f = rohoi::config::LadderFile::builtin();
  auto same = rohoi::config::LadderFile::parse(f.text());
  auto changed = rohoi::config::LadderFile::parse(f.text() + "\n# trailing comment\n");
  EXPECT_EQ(same.hash(), f.hash());
  EXPECT_NE(changed.hash(), f.hash());
  EXPECT_EQ(f.version(), 1);
  auto disk = rohoi::config::LadderFile::load(ROHOI_LADDER_PATH);
  EXPECT_EQ(disk.hash(), f.hash());
}

TEST(Ladder, MalformedLineNamesLine) {
  try {
    rohoi::config::LadderFile::parse("version = 1\n[MB]\nkernel_length_px 3 5\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(Request, SeverityOutOfRange) {
  auto img = rt::reference_photo(16, 16);
  for (int s : {0, 6}) {
    try {
      run(img, Kind::kMotionBlur, s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
    }
  }
}

TEST(Request, FamilyMismatchIsRegistryError) {
  auto img = rt::reference_photo(16, 16);
  auto s = derive_stream(0, 0, 0, 1);
  try {
    os_blur(img, Kind::kPixelate, 1, s, L());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRegistry);
  }
}

// ---- properties across all kinds ----

TEST(AllKinds, DeterministicAndShapePreserving) {
  auto img = rt::reference_photo(48, 40);
  for (const auto& ki : registry())
    for (int s = 1; s <= 5; ++s) {
      auto a = run(img, ki.kind, s, 99, 5);
      auto b = run(img, ki.kind, s, 99, 5);
      ASSERT_TRUE(a.same_shape(img)) << ki.abbrev << s;
      EXPECT_EQ(a, b) << ki.abbrev << s;
      for (float v : a.data()) ASSERT_TRUE(v >= 0.0f && v <= 1.0f) << ki.abbrev << s;
    }
}

TEST(AllKinds, StochasticKindsDependOnImageId) {
  auto img = rt::reference_photo(48, 40);
  for (Kind k : {Kind::kGaussianNoise, Kind::kSaltPepper, Kind::kOcclusion, Kind::kElastic})
    EXPECT_NE(run(img, k, 3, 1, 0), run(img, k, 3, 1, 1)) << info(k).abbrev;
}

TEST(AllKinds, ConstantInvariantUnderValuePreservingKinds) {
  ImageBuffer img(33, 27, 3, 0.4f);
  for (Kind k : {Kind::kMotionBlur, Kind::kDefocusBlur, Kind::kGaussianBlur, Kind::kGlassBlur,
                 Kind::kPixelate, Kind::kElastic, Kind::kPerspective, Kind::kZoomBlur})
    for (int s = 1; s <= 5; ++s) {
      auto out = run(img, k, s);
      for (float v : out.data()) ASSERT_NEAR(v, 0.4f, 1e-6) << info(k).abbrev << s;
    }
}

// ---- optical ----

TEST(Optical, HorizontalStripesSurviveHorizontalMotionBlur) {
  ImageBuffer img(32, 32, 1);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x) img.at(x, y, 0) = (y % 4 < 2) ? 0.8f : 0.2f;
  for (int s = 1; s <= 5; ++s) {
    auto out = run(img, Kind::kMotionBlur, s);
    for (std::size_t i = 0; i < img.data().size(); ++i)
      ASSERT_NEAR(out.data()[i], img.data()[i], 1e-6);
  }
}

TEST(Optical, GaussianBlurPsnrNonIncreasing) {
  auto img = rt::reference_photo(64, 64);
  double prev = INFINITY;
  for (int s = 1; s <= 5; ++s) {
    double p = psnr(img, run(img, Kind::kGaussianBlur, s));
    EXPECT_LE(p, prev);
    prev = p;
  }
}

TEST(Optical, GlassBlurUsesStream) {
  auto img = rt::reference_photo(32, 32);
  auto s1 = derive_stream(1, 0, kind_id(Kind::kGlassBlur), 3);
  auto s2 = derive_stream(2, 0, kind_id(Kind::kGlassBlur), 3);
  EXPECT_NE(glass_blur(img, 1.0, 3, 2, s1), glass_blur(img, 1.0, 3, 2, s2));
}

// ---- sensor / compression ----

TEST(Sensor, GaussianNoiseStdMatchesLadder) {
  auto img = rt::reference_photo(64, 64);
  auto out = run(img, Kind::kGaussianNoise, 3, 7);
  double n = 0, s = 0, s2 = 0;
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    double d = double(out.data()[i]) - img.data()[i];
    s += d;
    s2 += d * d;
    ++n;
  }
  double sd = std::sqrt(s2 / n - (s / n) * (s / n));
  EXPECT_NEAR(sd, 0.12, 0.012);
}

TEST(Sensor, GaussianNoiseZeroMeanOnGray) {
  ImageBuffer img(64, 64, 3, 0.5f);
  EXPECT_NEAR(rt::mean_of(run(img, Kind::kGaussianNoise, 1, 3)), 0.5, 0.01);
}

TEST(Sensor, SaltAndPepperFraction) {
  auto img = rt::reference_photo(96, 96);
  for (int sev = 1; sev <= 5; ++sev) {
    auto out = run(img, Kind::kSaltPepper, sev, 11);
    std::size_t altered = 0, zeros = 0;
    for (int y = 0; y < 96; ++y)
      for (int x = 0; x < 96; ++x) {
        bool changed = false;
        for (int c = 0; c < 3; ++c) changed |= out.at(x, y, c) != img.at(x, y, c);
        altered += changed;
        zeros += out.at(x, y, 0) == 0.0f;
      }
    double p = L().value(Kind::kSaltPepper, "probability", sev);
    double frac = altered / (96.0 * 96.0);
    EXPECT_NEAR(frac, p, 0.15 * p) << sev;
    EXPECT_NEAR(double(zeros) / altered, 0.5, 0.12) << sev;
  }
}

TEST(Sensor, ShotNoiseStaysCentered) {
  ImageBuffer img(64, 64, 1, 0.5f);
  EXPECT_NEAR(rt::mean_of(run(img, Kind::kShotNoise, 3, 2)), 0.5, 0.02);
}

TEST(Sensor, SpeckleLeavesBlackAlone) {
  ImageBuffer img(20, 20, 3, 0.0f);
  EXPECT_EQ(run(img, Kind::kSpeckleNoise, 5), img);
}

TEST(Sensor, JpegHigherSeverityLowerPsnr) {
  auto img = rt::reference_photo(64, 64);
  EXPECT_LT(psnr(img, run(img, Kind::kJpeg, 5)), psnr(img, run(img, Kind::kJpeg, 1)));
}

TEST(Sensor, JpegOutputIsEightBitQuantized) {
  auto img = rt::reference_photo(32, 32);
  auto out = run(img, Kind::kJpeg, 3);
  for (float v : out.data()) ASSERT_EQ(v, rohoi::raster::from_byte(rohoi::raster::to_byte(v)));
}

TEST(Sensor, PacketLossTouchesRowsOnly) {
  auto img = rt::reference_photo(64, 64);
  auto out = run(img, Kind::kPacketLoss, 5, 4);
  EXPECT_NE(out, img);
  int changed_rows = 0;
  for (int y = 0; y < 64; ++y) {
    bool any = false;
    for (int x = 0; x < 64 && !any; ++x) any = out.at(x, y, 0) != img.at(x, y, 0);
    changed_rows += any;
  }
  EXPECT_LT(changed_rows, 64);
}

// ---- environmental ----

TEST(Environment, VignetteKeepsBlack) {
  ImageBuffer img(30, 20, 3, 0.0f);
  for (int s = 1; s <= 5; ++s) EXPECT_EQ(run(img, Kind::kVignette, s), img);
}

TEST(Environment, VignetteDarkensCornersNotCenter) {
  ImageBuffer img(41, 41, 1, 0.8f);
  auto out = vignette(img, 0.5, 0.9);
  EXPECT_FLOAT_EQ(out.at(20, 20, 0), 0.8f);
  EXPECT_LT(out.at(0, 0, 0), 0.2f);
}

TEST(Environment, OcclusionZeroFractionAtLeastLadderArea) {
  auto img = rt::reference_photo(80, 60);
  for (int s = 1; s <= 5; ++s) {
    auto out = run(img, Kind::kOcclusion, s, 21);
    std::size_t zeros = 0;
    for (int y = 0; y < 60; ++y)
      for (int x = 0; x < 80; ++x)
        zeros += out.at(x, y, 0) == 0 && out.at(x, y, 1) == 0 && out.at(x, y, 2) == 0;
    EXPECT_GE(zeros / (80.0 * 60.0), L().value(Kind::kOcclusion, "area_rel", s)) << s;
  }
}

TEST(Environment, OverExposureSaturates) {
  ImageBuffer img(64, 64, 3, 0.5f);
  // Ramp around mid-gray so part of the range reaches saturation.
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = 0.35f + 0.3f * x / 63.0f;
  double gain = L().value(Kind::kExposure, "gain", 5);
  double gamma = L().value(Kind::kExposure, "gamma", 5);
  auto out = exposure(img, gain, gamma, ExposureDirection::kOver);
  std::size_t sat = 0;
  for (float v : out.data()) sat += v == 1.0f;
  EXPECT_GT(rt::mean_of(out), 0.5);
  EXPECT_GE(sat, out.data().size() / 100);
  auto under = exposure(img, gain, gamma, ExposureDirection::kUnder);
  EXPECT_LT(rt::mean_of(under), rt::mean_of(img));
}

TEST(Environment, OverExposureOnFlatMidGray) {
  ImageBuffer img(64, 64, 3, 0.5f);
  auto out = exposure(img, L().value(Kind::kExposure, "gain", 5),
                      L().value(Kind::kExposure, "gamma", 5), ExposureDirection::kOver);
  std::size_t sat = 0;
  for (float v : out.data()) sat += v == 1.0f;
  EXPECT_GT(rt::mean_of(out), 0.5);
  EXPECT_GE(sat, out.data().size() / 100);
}

TEST(Environment, ExposureDirectionComesFromStream) {
  ImageBuffer img(16, 16, 3, 0.5f);
  bool saw_over = false, saw_under = false;
  for (std::uint64_t id = 0; id < 40; ++id) {
    double m = rt::mean_of(run(img, Kind::kExposure, 3, 0, id));
    saw_over |= m > 0.5;
    saw_under |= m < 0.5;
  }
  EXPECT_TRUE(saw_over);
  EXPECT_TRUE(saw_under);
}

TEST(Environment, RainbowNeedsColor) {
  ImageBuffer gray(16, 16, 1, 0.5f);
  try {
    run(gray, Kind::kRainbow, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidChannels);
  }
  auto img = rt::reference_photo(32, 32);
  EXPECT_NE(run(img, Kind::kRainbow, 2), img);
}

// ---- geometric / scene ----

TEST(Geometric, PixelateCheckerboardToHalf) {
  auto img = rt::checkerboard(8, 8, 1);
  auto out = pixelate(img, 2);
  for (float v : out.data()) EXPECT_FLOAT_EQ(v, 0.5f);
}

TEST(Geometric, PixelatePartialTilesAverageWhatExists) {
  ImageBuffer img(3, 1, 1, std::vector<float>{0.0f, 1.0f, 0.25f});
  auto out = pixelate(img, 2);
  EXPECT_FLOAT_EQ(out.at(0, 0, 0), 0.5f);
  EXPECT_FLOAT_EQ(out.at(1, 0, 0), 0.5f);
  EXPECT_FLOAT_EQ(out.at(2, 0, 0), 0.25f);
}

TEST(Geometric, PerspectiveCornersLandOnLadderQuad) {
  const int w = 101, h = 81;
  for (int s = 1; s <= 5; ++s) {
    double ix = L().value(Kind::kPerspective, "inset_x_rel", s);
    double iy = L().value(Kind::kPerspective, "inset_y_rel", s);
    auto quad = perspective_quad(w, h, ix, iy);
    // Insets are fractions of the pixel-center extent.
    EXPECT_NEAR(quad[0].x, ix * (w - 1), 1e-9);
    EXPECT_NEAR(quad[0].y, iy * (h - 1), 1e-9);
    EXPECT_NEAR(quad[1].x, (w - 1) * (1 - ix), 1e-9);
    EXPECT_NEAR(quad[1].y, iy * (h - 1), 1e-9);
    EXPECT_NEAR(quad[2].x, w - 1, 1e-9);
    EXPECT_NEAR(quad[2].y, h - 1, 1e-9);
    EXPECT_NEAR(quad[3].x, 0, 1e-9);
    EXPECT_NEAR(quad[3].y, h - 1, 1e-9);
    // A marker image with one bright pixel per source corner.
    ImageBuffer marker(w, h, 1, 0.0f);
    marker.at(0, 0, 0) = marker.at(w - 1, 0, 0) = 1.0f;
    marker.at(w - 1, h - 1, 0) = marker.at(0, h - 1, 0) = 1.0f;
    auto out = perspective(marker, ix, iy);
    for (const auto& q : quad) {
      int qx = static_cast<int>(std::lround(q.x)), qy = static_cast<int>(std::lround(q.y));
      float best = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          int x = std::clamp(qx + dx, 0, w - 1), y = std::clamp(qy + dy, 0, h - 1);
          best = std::max(best, out.at(x, y, 0));
        }
      EXPECT_GT(best, 0.2f) << "severity " << s << " corner " << q.x << "," << q.y;
    }
  }
}

TEST(Geometric, ZoomBlurKeepsCenter) {
  auto img = rt::reference_photo(65, 65);
  auto out = zoom_blur(img, 1.2, 8);
  EXPECT_NEAR(out.at(32, 32, 0), img.at(32, 32, 0), 1e-5);
  EXPECT_NE(out, img);
}

TEST(Geometric, ElasticDisplacementGrowsWithMagnitude) {
  auto img = rt::reference_photo(64, 64);
  auto s1 = derive_stream(3, 0, kind_id(Kind::kElastic), 1);
  auto s2 = derive_stream(3, 0, kind_id(Kind::kElastic), 1);
  auto weak = elastic(img, 0.01, 0.04, s1);
  auto strong = elastic(img, 0.05, 0.04, s2);
  EXPECT_GT(psnr(img, weak), psnr(img, strong));
}

TEST(Geometric, MoireAndCrackChangeImage) {
  auto img = rt::reference_photo(48, 48);
  EXPECT_NE(run(img, Kind::kMoire, 1), img);
  EXPECT_NE(run(img, Kind::kScreenCrack, 1), img);
  EXPECT_LT(psnr(img, run(img, Kind::kScreenCrack, 5, 2)),
            psnr(img, run(img, Kind::kScreenCrack, 1, 2)));
}

}  // namespace
