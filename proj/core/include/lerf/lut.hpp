// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Look-up-table replacement of the hyper-parameter network.
///
/// Every table is indexed by four pixels picked by an indexing pattern
/// (S: 2x2 square, C: horizontal run, X: diagonal run). Pixel bytes are
/// split into a 4-bit cell index and a 4-bit fraction; values between the
/// 17 samples per axis are recovered with 4-simplex interpolation. Tables
/// come in two rotation roles: 0/180 degree tables are averaged over the two
/// point-symmetric rotations, 90/270 degree tables are evaluated on rotated
/// patterns and their Gaussian predictions are mapped back to the canonical
/// orientation before averaging.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lerf/hyperparam_map.hpp"
#include "lerf/image.hpp"
#include "lerf/kernels.hpp"

namespace lerf {

inline constexpr int kLutBits = 4;
inline constexpr int kLutSamples = 17;
inline constexpr std::size_t kLutCells = 17u * 17u * 17u * 17u;
inline constexpr double kLutFixedPointScale = 4096.0;

enum class PatternName : std::uint8_t { kS = 0, kC = 1, kX = 2 };

struct PixelOffset {
  int dy = 0;
  int dx = 0;
  friend bool operator==(const PixelOffset&, const PixelOffset&) = default;
};

struct Pattern {
  PatternName name = PatternName::kS;
  std::array<PixelOffset, 4> offsets{};

  static Pattern of(PatternName name);
};

std::string to_string(PatternName name);

/// Rotates a pattern offset by k quarter turns: (dy, dx) -> (dx, -dy) per
/// turn, which matches sampling a pattern on the image rotated by k * 90
/// degrees counter-clockwise.
PixelOffset rotate_offset(PixelOffset o, int quarter_turns) noexcept;

enum class RotationRole : std::uint8_t { kDeg0_180 = 0, kDeg90_270 = 1 };

class LutTable {
 public:
  LutTable() = default;
  LutTable(PatternName pattern, RotationRole role, int c_out);
  LutTable(PatternName pattern, RotationRole role, int c_out,
           std::vector<std::int16_t> entries);

  PatternName pattern() const noexcept { return pattern_; }
  RotationRole role() const noexcept { return role_; }
  int c_out() const noexcept { return c_out_; }

  std::span<const std::int16_t> entries() const noexcept { return entries_; }
  std::span<std::int16_t> entries() noexcept { return entries_; }

  static std::size_t cell(int i0, int i1, int i2, int i3) noexcept {
    return ((static_cast<std::size_t>(i0) * 17 + i1) * 17 + i2) * 17 + i3;
  }
  double decoded(std::size_t cell, int ch) const noexcept {
    return entries_[cell * c_out_ + ch] / kLutFixedPointScale;
  }

  /// Stores value at a corner; throws ParameterError when it does not fit
  /// the int16 fixed-point range.
  void set(std::size_t cell, int ch, double value);

  friend bool operator==(const LutTable&, const LutTable&) = default;

 private:
  PatternName pattern_ = PatternName::kS;
  RotationRole role_ = RotationRole::kDeg0_180;
  int c_out_ = 1;
  std::vector<std::int16_t> entries_;
};

struct LutIndex {
  std::array<int, 4> corner{};    // in [0, 15]
  std::array<int, 4> fraction{};  // in [0, 15]
};

/// v = round(sample * 255); corner = v >> 4; fraction = v & 15.
LutIndex quantize_index(std::span<const double, 4> pixels);

/// The five simplex vertices and their integer weights (summing to 16).
struct SimplexCorners {
  std::array<std::size_t, 5> cell{};
  std::array<int, 5> weight{};
};

SimplexCorners simplex_corners(const LutIndex& index) noexcept;

/// 4-D tetrahedral interpolation; out must hold c_out values. Throws
/// FormatError when the table does not hold 17^4 * c_out entries.
void simplex_interp(const LutTable& table, const LutIndex& index,
                    std::span<double> out);

struct LutBank {
  KernelKind family = KernelKind::kAnisoGaussian;
  std::vector<LutTable> f_tables;
  std::vector<LutTable> g_tables;

  /// Throws ConfigurationError when the family is not adaptive, c_out does
  /// not match the family, g tables are not single-channel or a table has
  /// the wrong length.
  void validate() const;
  bool has_enhancer() const noexcept { return !g_tables.empty(); }

  friend bool operator==(const LutBank&, const LutBank&) = default;
};

/// Luma plane used for LUT indexing (1-channel images pass through).
ImageBuffer lut_input_plane(const ImageBuffer& img);

/// Directional-ensemble prediction of per-pixel hyper-parameters.
HyperParamMap predict_hyperparams(const ImageBuffer& img, const LutBank& bank);

/// Adds the LUT-predicted residual to every channel and clamps to [0,1].
ImageBuffer apply_g_enhancer(const ImageBuffer& img, const LutBank& bank);

std::vector<std::uint8_t> serialize_lut_bank(const LutBank& bank);
LutBank deserialize_lut_bank(std::span<const std::uint8_t> bytes);
void save_lut_bank(const LutBank& bank, const std::filesystem::path& path);
LutBank load_lut_bank(const std::filesystem::path& path);

/// FNV-1a over the serialized bank; echoed in benchmark reports.
std::uint64_t bank_fingerprint(const LutBank& bank);

/// Value of LUT sample k along one axis: min(16 k, 255) / 255.
inline double lut_sample_value(int k) noexcept {
  return (k >= 16 ? 255.0 : 16.0 * k) / 255.0;
}

}  // namespace lerf
