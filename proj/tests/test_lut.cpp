// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "lerf/error.hpp"
#include "lerf/fixture_banks.hpp"
#include "lerf/lut.hpp"
#include "support.hpp"

namespace lerf {
namespace {

LutIndex index_of_bytes(int a, int b, int c, int d) {
  const std::array<double, 4> px{a / 255.0, b / 255.0, c / 255.0, d / 255.0};
  return quantize_index(px);
}

// Affine function of the four corner sample values, per channel.
double affine(const std::array<double, 4>& v, int ch) {
  static const double coef[3][5] = {{0.11, -0.37, 0.25, 0.6, -0.2},
                                    {1.3, 0.4, -0.2, 0.15, 0.05},
                                    {-0.5, 0.9, 0.3, -0.7, 0.33}};
  return coef[ch][0] + coef[ch][1] * v[0] + coef[ch][2] * v[1] + coef[ch][3] * v[2] +
         coef[ch][4] * v[3];
}

// Table holding the affine function of the 8-bit byte values (scaled by
// 1/256 so it stays inside the int16 range) sampled at the LUT corners.
LutTable affine_table(int c_out) {
  LutTable t(PatternName::kS, RotationRole::kDeg0_180, c_out);
  for (int i0 = 0; i0 < 17; ++i0)
    for (int i1 = 0; i1 < 17; ++i1)
      for (int i2 = 0; i2 < 17; ++i2)
        for (int i3 = 0; i3 < 17; ++i3) {
          const std::array<double, 4> v{16.0 * i0 / 256, 16.0 * i1 / 256, 16.0 * i2 / 256,
                                        16.0 * i3 / 256};
          for (int ch = 0; ch < c_out; ++ch) t.set(LutTable::cell(i0, i1, i2, i3), ch, affine(v, ch));
        }
  return t;
}

TEST(QuantizeIndex, ShiftAndMask) {
  const auto zero = index_of_bytes(0, 255, 128, 17);
  EXPECT_EQ(zero.corner, (std::array<int, 4>{0, 15, 8, 1}));
  EXPECT_EQ(zero.fraction, (std::array<int, 4>{0, 15, 0, 1}));
  const std::array<double, 4> out_of_range{-0.2, 1.4, 0.5, 0.5 / 255};
  const auto q = quantize_index(out_of_range);
  EXPECT_EQ(q.corner[0], 0);
  EXPECT_EQ(q.corner[1], 15);
  EXPECT_EQ(q.fraction[1], 15);
  EXPECT_EQ(q.corner[2] * 16 + q.fraction[2], 128);  // round(127.5)
  EXPECT_EQ(q.fraction[3], 1);                        // round(0.5)
}

TEST(SimplexCorners, WeightsSumToSixteenAndWalkUpward) {
  for (const auto& idx : {index_of_bytes(3, 200, 77, 150), index_of_bytes(0, 0, 0, 0),
                          index_of_bytes(255, 255, 255, 255), index_of_bytes(5, 5, 5, 5)}) {
    const auto s = simplex_corners(idx);
    int sum = 0;
    for (int w : s.weight) {
      EXPECT_GE(w, 0);
      sum += w;
    }
    EXPECT_EQ(sum, 16);
    EXPECT_EQ(s.cell[0], LutTable::cell(idx.corner[0], idx.corner[1], idx.corner[2], idx.corner[3]));
    EXPECT_EQ(s.cell[4], LutTable::cell(idx.corner[0] + 1, idx.corner[1] + 1, idx.corner[2] + 1,
                                        idx.corner[3] + 1));
  }
}

TEST(SimplexInterp, ExactOnStoredCorners) {
  const LutTable t = affine_table(3);
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> k(0, 15);
  for (int i = 0; i < 500; ++i) {
    const int a = k(rng), b = k(rng), c = k(rng), d = k(rng);
    double out[3];
    simplex_interp(t, index_of_bytes(16 * a, 16 * b, 16 * c, 16 * d), out);
    for (int ch = 0; ch < 3; ++ch) EXPECT_EQ(out[ch], t.decoded(LutTable::cell(a, b, c, d), ch));
  }
}

TEST(SimplexInterp, ConstantCellGivesConstant) {
  LutTable t(PatternName::kX, RotationRole::kDeg90_270, 1);
  for (std::size_t c = 0; c < kLutCells; ++c) t.set(c, 0, 0.8125);
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> b(0, 255);
  for (int i = 0; i < 1000; ++i) {
    double out[1];
    simplex_interp(t, index_of_bytes(b(rng), b(rng), b(rng), b(rng)), out);
    EXPECT_EQ(out[0], 0.8125);
  }
}

TEST(SimplexInterp, ReproducesAffineFunctions) {
  // The table stores affine(byte / 256) at byte = 16 k, so the exact answer
  // for any byte vector is affine(byte / 256) up to int16 rounding.
  const LutTable t = affine_table(3);
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> b(0, 255);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int v[4] = {b(rng), b(rng), b(rng), b(rng)};
    double out[3];
    simplex_interp(t, index_of_bytes(v[0], v[1], v[2], v[3]), out);
    const std::array<double, 4> x{v[0] / 256.0, v[1] / 256.0, v[2] / 256.0, v[3] / 256.0};
    for (int ch = 0; ch < 3; ++ch) worst = std::max(worst, std::abs(out[ch] - affine(x, ch)));
  }
  EXPECT_LE(worst, 0.5 / kLutFixedPointScale + 1e-12);
}

TEST(SimplexInterp, ConvexCombination) {
  LutTable t(PatternName::kS, RotationRole::kDeg0_180, 1);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> e(-30000, 30000);
  for (auto& v : t.entries()) v = static_cast<std::int16_t>(e(rng));
  std::uniform_int_distribution<int> b(0, 255);
  for (int i = 0; i < 2000; ++i) {
    const auto idx = index_of_bytes(b(rng), b(rng), b(rng), b(rng));
    const auto s = simplex_corners(idx);
    double lo = 1e9, hi = -1e9;
    for (std::size_t k = 0; k < 5; ++k) {
      lo = std::min(lo, t.decoded(s.cell[k], 0));
      hi = std::max(hi, t.decoded(s.cell[k], 0));
    }
    double out[1];
    simplex_interp(t, idx, out);
    EXPECT_GE(out[0], lo - 1e-12);
    EXPECT_LE(out[0], hi + 1e-12);
  }
}

TEST(SimplexInterp, ExhaustiveBoundaryCellsStayInside) {
  // Every combination of the extreme and near-boundary bytes per input.
  const int probe[] = {0, 1, 15, 16, 17, 239, 240, 241, 254, 255};
  for (int a : probe)
    for (int b : probe)
      for (int c : probe)
        for (int d : probe) {
          const auto s = simplex_corners(index_of_bytes(a, b, c, d));
          for (std::size_t k = 0; k < 5; ++k) {
            if (s.weight[k] == 0) continue;
            ASSERT_LT(s.cell[k], kLutCells);
          }
          for (std::size_t k = 0; k < 5; ++k) ASSERT_LT(s.cell[k], kLutCells);
        }
}

TEST(SimplexInterp, WrongLengthIsFormatError) {
  LutTable t(PatternName::kS, RotationRole::kDeg0_180, 1, std::vector<std::int16_t>(10));
  double out[1];
  EXPECT_THROW(simplex_interp(t, index_of_bytes(1, 2, 3, 4), out), FormatError);
}

TEST(LutTableTest, FixedPointEncoding) {
  LutTable t(PatternName::kC, RotationRole::kDeg0_180, 3);
  t.set(5, 2, 1.0);
  EXPECT_EQ(t.entries()[5 * 3 + 2], 4096);
  t.set(6, 0, -0.95);
  EXPECT_EQ(t.decoded(6, 0), std::round(-0.95 * 4096) / 4096);
  EXPECT_THROW(t.set(0, 0, 8.0), ParameterError);
  EXPECT_THROW(LutTable(PatternName::kS, RotationRole::kDeg0_180, 2), ConfigurationError);
}

TEST(PatternTest, OffsetsAndRotation) {
  EXPECT_EQ(Pattern::of(PatternName::kC).offsets[3], (PixelOffset{0, 3}));
  EXPECT_EQ(Pattern::of(PatternName::kX).offsets[2], (PixelOffset{2, 2}));
  for (PatternName n : {PatternName::kS, PatternName::kC, PatternName::kX})
    EXPECT_EQ(Pattern::of(n).offsets[0], (PixelOffset{0, 0}));
  EXPECT_EQ(rotate_offset({0, 1}, 1), (PixelOffset{1, 0}));
  EXPECT_EQ(rotate_offset({1, 3}, 2), (PixelOffset{-1, -3}));
  EXPECT_EQ(rotate_offset({1, 3}, 4), (PixelOffset{1, 3}));
  EXPECT_EQ(rotate_offset(rotate_offset({2, -1}, 1), 3), (PixelOffset{2, -1}));
  EXPECT_EQ(to_string(PatternName::kX), "X");
}

TEST(BankFile, RoundTripIsByteExact) {
  const LutBank bank = make_structure_bank(KernelKind::kAnisoGaussian, true);
  const auto bytes = serialize_lut_bank(bank);
  const std::size_t table3 = 4 + kLutCells * 3 * 2;
  EXPECT_EQ(bytes.size(), 10 + 6 * table3 + 3 * (4 + kLutCells * 2));
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "LERF");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
  EXPECT_EQ(bytes[6], 2);
  EXPECT_EQ(bytes[7], 4);
  EXPECT_EQ(bytes[8], 6);
  EXPECT_EQ(bytes[9], 3);
  const LutBank back = deserialize_lut_bank(bytes);
  EXPECT_EQ(back, bank);
  EXPECT_EQ(serialize_lut_bank(back), bytes);

  const auto dir = test::temp_dir("bank");
  save_lut_bank(bank, dir / "b.lerf");
  EXPECT_EQ(load_lut_bank(dir / "b.lerf"), bank);
  std::filesystem::remove_all(dir);
}

TEST(BankFile, EntriesAreLittleEndian) {
  LutBank bank = make_isotropic_bank(KernelKind::kAmplifiedLinear);
  bank.f_tables[0].entries()[0] = -2;  // 0xfffe
  bank.f_tables[0].entries()[1] = 0x0102;
  const auto bytes = serialize_lut_bank(bank);
  EXPECT_EQ(bytes[14], 0xfe);
  EXPECT_EQ(bytes[15], 0xff);
  EXPECT_EQ(bytes[16], 0x02);
  EXPECT_EQ(bytes[17], 0x01);
}

TEST(BankFile, CorruptInputsAreFormatErrors) {
  const auto good = serialize_lut_bank(make_isotropic_bank(KernelKind::kAmplifiedLinear));
  auto expect_format = [](std::vector<std::uint8_t> b, const std::string& needle) {
    try {
      deserialize_lut_bank(b);
      ADD_FAILURE() << "accepted corrupt bank (" << needle << ")";
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto b = good;
  b[0] = 'X';
  expect_format(b, "offset 0");
  b = good;
  b[4] = 2;
  expect_format(b, "version");
  b = good;
  b[6] = 9;
  expect_format(b, "family");
  b = good;
  b[7] = 5;
  expect_format(b, "bits");
  b = good;
  b[10] = 7;
  expect_format(b, "pattern");
  b = good;
  b[12] = 7;
  expect_format(b, "c_out");
  expect_format(std::vector<std::uint8_t>(good.begin(), good.begin() + 1000), "truncated");
  expect_format(std::vector<std::uint8_t>(good.begin(), good.begin() + 6), "truncated");
  b = good;
  b.push_back(0);
  expect_format(b, "trailing");
  expect_format({}, "truncated");
}

TEST(BankFile, FamilyAndChannelMismatch) {
  // Gaussian tables (c_out 3) declared as an amplified-linear bank.
  auto bytes = serialize_lut_bank(make_isotropic_bank(KernelKind::kAnisoGaussian));
  bytes[6] = 1;
  EXPECT_THROW(deserialize_lut_bank(bytes), ConfigurationError);
  LutBank bad;
  bad.family = KernelKind::kLinear;
  EXPECT_THROW(bad.validate(), ConfigurationError);
  LutBank empty;
  EXPECT_THROW(empty.validate(), ConfigurationError);
  const auto dir = test::temp_dir("bankio");
  EXPECT_THROW(load_lut_bank(dir / "missing.lerf"), IoError);
  std::filesystem::remove_all(dir);
}

TEST(BankFile, FingerprintTracksContent) {
  LutBank a = make_isotropic_bank(KernelKind::kAmplifiedLinear);
  LutBank b = a;
  EXPECT_EQ(bank_fingerprint(a), bank_fingerprint(b));
  b.f_tables[2].entries()[100] += 1;
  EXPECT_NE(bank_fingerprint(a), bank_fingerprint(b));
}

TEST(Predict, IsotropicBankGivesFrozenParams) {
  const ImageBuffer img = test::random_image(9, 11, 3, 12);
  const HyperParamMap g = predict_hyperparams(img, make_isotropic_bank(KernelKind::kAnisoGaussian));
  EXPECT_EQ(g.channels, 3);
  EXPECT_EQ(g.height, 9);
  EXPECT_EQ(g.width, 11);
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 11; ++x) EXPECT_EQ(g.gaussian(y, x), (GaussianParams{0.0, 1.0, 1.0}));
  const HyperParamMap l = predict_hyperparams(img, make_isotropic_bank(KernelKind::kAmplifiedLinear));
  EXPECT_EQ(l.channels, 1);
  for (double v : l.values) EXPECT_EQ(v, 1.0);
}

TEST(Predict, ConstantImageGivesConstantMap) {
  const LutBank bank = make_structure_bank(KernelKind::kAnisoGaussian, false);
  const HyperParamMap m = predict_hyperparams(test::constant_image(8, 8, 1, 0.4), bank);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) EXPECT_EQ(m.gaussian(y, x), m.gaussian(0, 0));
}

ImageBuffer rotate180(const ImageBuffer& img) {
  ImageBuffer out(img.height(), img.width(), img.channels(), img.colorspace());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < img.height(); ++y)
      for (int x = 0; x < img.width(); ++x)
        out.at(c, img.height() - 1 - y, img.width() - 1 - x) = img.at(c, y, x);
  return out;
}

TEST(Predict, HalfTurnEquivarianceIsBitwise) {
  for (KernelKind fam : {KernelKind::kAnisoGaussian, KernelKind::kAmplifiedLinear}) {
    const LutBank bank = make_structure_bank(fam, false);
    const ImageBuffer img = test::random_image(17, 23, 3, 21);
    const HyperParamMap a = predict_hyperparams(img, bank);
    const HyperParamMap b = predict_hyperparams(rotate180(img), bank);
    for (int y = 0; y < 17; ++y)
      for (int x = 0; x < 23; ++x)
        for (int c = 0; c < a.channels; ++c)
          ASSERT_EQ(a.at(y, x, c), b.at(16 - y, 22 - x, c));
  }
}

TEST(Predict, OutputsRespectBounds) {
  const LutBank bank = make_structure_bank(KernelKind::kAnisoGaussian, false);
  const HyperParamMap m = predict_hyperparams(test::random_image(20, 20, 1, 4), bank);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) {
      const GaussianParams p = m.gaussian(y, x);
      EXPECT_EQ(clamp_hyperparams(p), p);
    }
}

TEST(Predict, VerticalEdgeNarrowsAcrossEdge) {
  // Step along x: the kernel should be tighter in x than in y.
  ImageBuffer img(12, 12, 1);
  for (int y = 0; y < 12; ++y)
    for (int x = 6; x < 12; ++x) img.at(0, y, x) = 1.0;
  const HyperParamMap m =
      predict_hyperparams(img, make_structure_bank(KernelKind::kAnisoGaussian, false));
  const GaussianParams p = m.gaussian(6, 5);
  EXPECT_GT(p.inv_sigma_x, p.inv_sigma_y);
  EXPECT_NEAR(p.rho, 0.0, 1e-3);
}

TEST(Predict, QuarterTurnRemapForGaussianTables) {
  // A bank whose only table is a quarter-turn table storing a constant
  // anisotropic triple predicts the remapped triple.
  LutBank bank;
  bank.family = KernelKind::kAnisoGaussian;
  LutTable t(PatternName::kS, RotationRole::kDeg90_270, 3);
  for (std::size_t c = 0; c < kLutCells; ++c) {
    t.set(c, 0, 0.5);
    t.set(c, 1, 3.0);
    t.set(c, 2, 1.0);
  }
  bank.f_tables.push_back(t);
  const HyperParamMap m = predict_hyperparams(test::random_image(4, 4, 1, 1), bank);
  EXPECT_EQ(m.gaussian(2, 2), (GaussianParams{-0.5, 1.0, 3.0}));
}

TEST(Enhancer, ZeroTablesAreIdentityAndRangeIsClamped) {
  LutBank bank = make_isotropic_bank(KernelKind::kAnisoGaussian);
  for (PatternName p : {PatternName::kS, PatternName::kC, PatternName::kX})
    bank.g_tables.emplace_back(p, RotationRole::kDeg0_180, 1);
  const ImageBuffer img = test::random_image(10, 10, 3, 6);
  EXPECT_EQ(test::max_abs_diff(apply_g_enhancer(img, bank), img), 0.0);

  for (auto& t : bank.g_tables)
    for (std::size_t c = 0; c < kLutCells; ++c) t.set(c, 0, 0.75);
  const ImageBuffer up = apply_g_enhancer(img, bank);
  for (double v : up.data()) {
    EXPECT_LE(v, 1.0);
    EXPECT_GE(v, 0.0);
  }
  EXPECT_THROW(apply_g_enhancer(img, make_isotropic_bank(KernelKind::kAnisoGaussian)),
               ConfigurationError);
}

TEST(Enhancer, StructureResidualLeavesFlatRegionsAlone) {
  const LutBank bank = make_structure_bank(KernelKind::kAnisoGaussian, true);
  const ImageBuffer flat = test::constant_image(8, 8, 3, 0.6);
  EXPECT_LT(test::max_abs_diff(apply_g_enhancer(flat, bank), flat), 2.0 / 255.0);
}

}  // namespace
}  // namespace lerf
