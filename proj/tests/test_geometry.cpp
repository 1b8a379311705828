// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "lerf/error.hpp"
#include "lerf/geometry.hpp"
#include "support.hpp"

namespace lerf {
namespace {

TEST(BackProjectScale, PixelCentres) {
  EXPECT_EQ(back_project_scale(1.0, 7.0), 7.0);
  EXPECT_EQ(back_project_scale(2.0, 0.0), -0.25);
  EXPECT_EQ(back_project_scale(2.0, 1.0), 0.25);
  EXPECT_THROW(back_project_scale(0.0, 1.0), ParameterError);
  EXPECT_THROW(back_project_scale(-2.0, 1.0), ParameterError);
}

TEST(BackProjectHomography, IdentityAndScale) {
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 6; ++x) {
      const SourcePoint p = back_project_homography(kIdentity3, y, x, 5, 6);
      EXPECT_TRUE(p.valid);
      EXPECT_EQ(p.y, y);
      EXPECT_EQ(p.x, x);
    }
  const Matrix3 half = {0.5, 0, 0, 0, 0.5, 0, 0, 0, 1};
  for (int t = 0; t < 8; ++t) {
    const SourcePoint p = back_project_homography(half, t, 7 - t, 4, 4);
    EXPECT_NEAR(p.y, back_project_scale(2.0, t), 1e-15);
    EXPECT_NEAR(p.x, back_project_scale(2.0, 7 - t), 1e-15);
  }
}

TEST(BackProjectHomography, DegenerateWIsInvalid) {
  // Third row (1, 0, -0.5): w = x_t + 0.5 - 0.5 = 0 at tx = 0.
  const Matrix3 m = {1, 0, 0, 0, 1, 0, 1, 0, -0.5};
  EXPECT_FALSE(back_project_homography(m, 0, 0, 4, 4).valid);
  const Matrix3 neg = {1, 0, 0, 0, 1, 0, 0, 0, -1};
  EXPECT_FALSE(back_project_homography(neg, 1, 1, 4, 4).valid);
}

TEST(BackProjectHomography, HalfPixelMargin) {
  const Matrix3 shift = {1, 0, 0.5, 0, 1, 0, 0, 0, 1};  // src = t + 0.5
  EXPECT_TRUE(back_project_homography(shift, 0, 3, 4, 4).valid);   // x = 3.5
  const Matrix3 shift2 = {1, 0, 0.51, 0, 1, 0, 0, 0, 1};
  EXPECT_FALSE(back_project_homography(shift2, 0, 3, 4, 4).valid);
}

TEST(Homography, ComposeWithInverseIsIdentity) {
  const Matrix3 m = {1.05, 0.08, -3.0, -0.04, 0.97, 2.5, 1e-4, -2e-4, 1.0};
  const Matrix3 inv = inverse(m);
  const Matrix3 prod = multiply(m, inv);
  for (int i = 0; i < 9; ++i) EXPECT_NEAR(prod[i], kIdentity3[i], 1e-12);

  // Mapping with inv and then with m returns the start point.
  for (int y = 5; y < 40; y += 7)
    for (int x = 5; x < 40; x += 9) {
      const SourcePoint a = back_project_homography(inv, y, x, 64, 64);
      const SourcePoint b = back_project_homography(m, a.y, a.x, 64, 64);
      EXPECT_NEAR(b.y, y, 1e-9);
      EXPECT_NEAR(b.x, x, 1e-9);
    }
  EXPECT_THROW(inverse({1, 2, 3, 2, 4, 6, 0, 0, 1}), ParameterError);
  EXPECT_NEAR(determinant({2, 0, 0, 0, 3, 0, 0, 0, 4}), 24.0, 1e-15);
}

TEST(SampleGrid, ScaleByTwoAnchor) {
  const SampleGrid g = build_sample_grid(ScaleTransform{2.0, 2.0}, 4, 4, 8, 8);
  EXPECT_EQ(g.base_y[0], -1);
  EXPECT_EQ(g.base_x[0], -1);
  EXPECT_DOUBLE_EQ(g.frac_y[0], 0.75);
  EXPECT_DOUBLE_EQ(g.frac_x[0], 0.75);
  EXPECT_EQ(g.valid.count(), 64u);
}

TEST(SampleGrid, IdentityScaleAndZeroFlowAgree) {
  const SampleGrid a = build_sample_grid(ScaleTransform{1.0, 1.0}, 5, 7, 5, 7);
  FlowField f{5, 7, std::vector<float>(35, 0.0f), std::vector<float>(35, 0.0f)};
  const SampleGrid b = build_sample_grid(f, 5, 7, 5, 7);
  const SampleGrid c = build_sample_grid(HomographyTransform{}, 5, 7, 5, 7);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 7; ++x) {
      const std::size_t i = a.index(y, x);
      EXPECT_EQ(a.base_y[i], y);
      EXPECT_EQ(a.base_x[i], x);
      EXPECT_EQ(a.frac_y[i], 0.0);
      EXPECT_EQ(a.frac_x[i], 0.0);
      for (const SampleGrid* o : {&b, &c}) {
        EXPECT_EQ(o->base_y[i], a.base_y[i]);
        EXPECT_EQ(o->base_x[i], a.base_x[i]);
        EXPECT_EQ(o->frac_y[i], a.frac_y[i]);
        EXPECT_EQ(o->frac_x[i], a.frac_x[i]);
      }
    }
  EXPECT_EQ(c.valid.count(), 35u);
}

TEST(SampleGrid, FractionsAndReconstruction) {
  const Matrix3 m = {0.9, 0.1, 1.3, -0.05, 1.1, -0.7, 2e-3, 1e-3, 1.0};
  const SampleGrid g = build_sample_grid(HomographyTransform{m}, 30, 40, 30, 40);
  std::size_t valid = 0;
  for (std::size_t i = 0; i < g.valid.bits.size(); ++i) {
    if (!g.valid.bits[i]) continue;
    ++valid;
    EXPECT_GE(g.frac_y[i], 0.0);
    EXPECT_LT(g.frac_y[i], 1.0);
    EXPECT_GE(g.frac_x[i], 0.0);
    EXPECT_LT(g.frac_x[i], 1.0);
    EXPECT_NEAR(g.base_y[i] + g.frac_y[i], g.src_y[i], 1e-12);
    EXPECT_NEAR(g.base_x[i] + g.frac_x[i], g.src_x[i], 1e-12);
  }
  EXPECT_GT(valid, 0u);
  EXPECT_LT(valid, g.valid.bits.size());
}

TEST(SampleGrid, ForwardMatrixIsInverted) {
  const Matrix3 m = {1.1, 0.05, 2.0, 0.02, 0.95, -1.0, 1e-4, 0.0, 1.0};
  const SampleGrid a = build_sample_grid(HomographyTransform{inverse(m)}, 20, 20, 20, 20);
  const SampleGrid b = build_sample_grid(
      HomographyTransform{m, HomographyDirection::kSourceToTarget}, 20, 20, 20, 20);
  for (std::size_t i = 0; i < a.src_y.size(); ++i) {
    EXPECT_EQ(a.valid.bits[i], b.valid.bits[i]);
    EXPECT_NEAR(a.src_y[i], b.src_y[i], 1e-12);
  }
}

TEST(SampleGrid, Errors) {
  FlowField f{4, 4, std::vector<float>(16), std::vector<float>(16)};
  EXPECT_THROW(build_sample_grid(f, 4, 4, 4, 5), ShapeError);
  EXPECT_THROW(build_sample_grid(HomographyTransform{{1, 2, 3, 2, 4, 6, 0, 0, 1}}, 4, 4, 4, 4),
               ParameterError);
  EXPECT_THROW(build_sample_grid(ScaleTransform{0.0, 1.0}, 4, 4, 4, 4), ParameterError);
  EXPECT_THROW(build_sample_grid(ScaleTransform{}, 4, 4, 0, 4), ParameterError);
}

TEST(SampleGrid, FarAwayPointsStayInvalid) {
  const Matrix3 m = {1e6, 0, 0, 0, 1e6, 0, 0, 0, 1};
  const SampleGrid g = build_sample_grid(HomographyTransform{m}, 8, 8, 8, 8);
  EXPECT_EQ(g.valid.count(), 0u);
}

TEST(ScaledDims, FloorWithTolerance) {
  EXPECT_EQ(scaled_dims(10, 10, 1.0 / 3.0, 0.5), std::make_pair(3, 5));
  EXPECT_EQ(scaled_dims(3, 5, 3.0, 2.4), std::make_pair(9, 12));
  EXPECT_EQ(scaled_dims(1, 1, 0.1, 0.1), std::make_pair(1, 1));
}

TEST(ValidMaskTest, Intersect) {
  ValidMask a(2, 2, true), b(2, 2, true);
  b.bits[3] = 0;
  a.bits[0] = 0;
  EXPECT_EQ(intersect(a, b).count(), 2u);
  EXPECT_THROW(intersect(a, ValidMask(3, 2, true)), ShapeError);
}

TEST(HomographyFile, RoundTripAndErrors) {
  const auto dir = test::temp_dir("hfile");
  const Matrix3 m = {1.0 / 3.0, 0.1, -2.5, 1e-7, 0.999, 3.25, 1e-4, -1e-5, 1.0};
  write_homography(m, dir / "m.txt");
  EXPECT_EQ(read_homography(dir / "m.txt"), m);
  std::ofstream(dir / "short.txt") << "1 0 0 0 1 0 0 0";
  EXPECT_THROW(read_homography(dir / "short.txt"), FormatError);
  std::ofstream(dir / "bad.txt") << "1 0 0 0 x 0 0 0 1";
  EXPECT_THROW(read_homography(dir / "bad.txt"), FormatError);
  std::ofstream(dir / "long.txt") << "1 0 0 0 1 0 0 0 1 7";
  EXPECT_THROW(read_homography(dir / "long.txt"), FormatError);
  EXPECT_THROW(read_homography(dir / "none.txt"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(FloFile, RoundTripAndErrors) {
  const auto dir = test::temp_dir("flo");
  FlowField f{3, 4, {}, {}};
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> u(-5.0f, 5.0f);
  for (int i = 0; i < 12; ++i) {
    f.dx.push_back(u(rng));
    f.dy.push_back(u(rng));
  }
  write_flo(f, dir / "f.flo");
  const FlowField g = read_flo(dir / "f.flo");
  EXPECT_EQ(g.height, 3);
  EXPECT_EQ(g.width, 4);
  EXPECT_EQ(g.dx, f.dx);
  EXPECT_EQ(g.dy, f.dy);

  // Middlebury layout: magic, width, height, then interleaved (u, v).
  std::ifstream is(dir / "f.flo", std::ios::binary);
  float magic = 0.0f, first[2];
  std::int32_t w = 0, h = 0;
  is.read(reinterpret_cast<char*>(&magic), 4);
  is.read(reinterpret_cast<char*>(&w), 4);
  is.read(reinterpret_cast<char*>(&h), 4);
  is.read(reinterpret_cast<char*>(first), 8);
  EXPECT_EQ(magic, 202021.25f);
  EXPECT_EQ(w, 4);
  EXPECT_EQ(h, 3);
  EXPECT_EQ(first[0], f.dx[0]);
  EXPECT_EQ(first[1], f.dy[0]);

  std::filesystem::resize_file(dir / "f.flo", 40);
  EXPECT_THROW(read_flo(dir / "f.flo"), FormatError);
  std::ofstream(dir / "bad.flo", std::ios::binary) << "PIEHxxxxxxxxxxxx";
  EXPECT_THROW(read_flo(dir / "bad.flo"), FormatError);
  EXPECT_THROW(read_flo(dir / "missing.flo"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace lerf
