// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Back-projection of target pixels into the source image for scaling,
/// homographic and flow-field warps.
///
/// Pixel centres sit at half-integer positions: target pixel t covers the
/// continuous interval [t, t+1), so its centre is t + 0.5. Source
/// coordinates are reported in "sample index" units where integer values
/// land exactly on source pixel centres.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "lerf/image.hpp"

namespace lerf {

/// Row-major 3x3 matrix.
using Matrix3 = std::array<double, 9>;

inline constexpr Matrix3 kIdentity3 = {1, 0, 0, 0, 1, 0, 0, 0, 1};

double determinant(const Matrix3& m) noexcept;
/// Throws ParameterError when |det| <= 1e-12.
Matrix3 inverse(const Matrix3& m);
Matrix3 multiply(const Matrix3& a, const Matrix3& b) noexcept;

struct ScaleTransform {
  double r_h = 1.0;
  double r_w = 1.0;
};

enum class HomographyDirection : std::uint8_t {
  kTargetToSource,  // backward map, used as is
  kSourceToTarget,  // forward map, inverted once at grid build
};

struct HomographyTransform {
  Matrix3 m = kIdentity3;
  HomographyDirection direction = HomographyDirection::kTargetToSource;
};

/// Backward displacement field in pixels, one (dx, dy) pair per target
/// pixel: source = target + displacement.
struct FlowField {
  int height = 0;
  int width = 0;
  std::vector<float> dx;
  std::vector<float> dy;
};

using GeometricTransform =
    std::variant<ScaleTransform, HomographyTransform, FlowField>;

struct SourcePoint {
  double y = 0.0;
  double x = 0.0;
  bool valid = false;
};

/// Per-axis scale back-projection: (t + 0.5) / r - 0.5.
double back_project_scale(double r, double t);
SourcePoint back_project_scale(double r_h, double r_w, double ty, double tx);

/// Applies a target->source homography to the centre of target pixel
/// (ty, tx). Invalid when the homogeneous w <= 1e-9 or the result leaves
/// [-0.5, W-0.5] x [-0.5, H-0.5].
SourcePoint back_project_homography(const Matrix3& m, double ty, double tx,
                                    int src_h, int src_w);

struct ValidMask {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;

  ValidMask() = default;
  ValidMask(int h, int w, bool value)
      : height(h), width(w),
        bits(static_cast<std::size_t>(h) * static_cast<std::size_t>(w),
             value ? 1 : 0) {}

  bool at(int y, int x) const noexcept {
    return bits[static_cast<std::size_t>(y) * width + x] != 0;
  }
  std::size_t count() const noexcept;
};

/// Intersection of two masks of identical size.
ValidMask intersect(const ValidMask& a, const ValidMask& b);

struct SampleGrid {
  int target_h = 0;
  int target_w = 0;
  std::vector<double> src_y, src_x;
  std::vector<int> base_y, base_x;
  std::vector<double> frac_y, frac_x;
  ValidMask valid;

  std::size_t index(int y, int x) const noexcept {
    return static_cast<std::size_t>(y) * target_w + x;
  }
};

/// Back-projects every target pixel and splits the source coordinate into
/// the integer anchor of its 2x2 support and the fractional offset.
SampleGrid build_sample_grid(const GeometricTransform& transform, int src_h,
                             int src_w, int target_h, int target_w,
                             BoundaryPolicy policy = {});

/// Output dimensions floor(src * r) per axis (at least 1).
std::pair<int, int> scaled_dims(int src_h, int src_w, double r_h, double r_w);

/// Nine whitespace separated reals, row-major.
Matrix3 read_homography(const std::filesystem::path& path);
void write_homography(const Matrix3& m, const std::filesystem::path& path);

/// Middlebury .flo: float32 magic 202021.25, int32 width, int32 height,
/// then interleaved float32 (u, v) per pixel, little-endian.
FlowField read_flo(const std::filesystem::path& path);
void write_flo(const FlowField& flow, const std::filesystem::path& path);

}  // namespace lerf
