// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Planar raster container, color conversion, boundary handling, separable
/// Gaussian filtering and PNG I/O.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lerf {

enum class BitDepth : std::uint8_t { k8Bit, kFloat };
enum class ColorSpace : std::uint8_t { kRgb, kY, kGeneric };

/// Planar image with samples in the canonical [0,1] range. Sample (c, y, x)
/// lives at data()[(c * height + y) * width + x].
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int height, int width, int channels,
              ColorSpace colorspace = ColorSpace::kGeneric,
              BitDepth depth = BitDepth::kFloat);
  ImageBuffer(int height, int width, int channels, std::vector<double> data,
              ColorSpace colorspace = ColorSpace::kGeneric,
              BitDepth depth = BitDepth::kFloat);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_);
  }
  bool empty() const noexcept { return data_.empty(); }

  BitDepth depth() const noexcept { return depth_; }
  ColorSpace colorspace() const noexcept { return colorspace_; }
  void set_depth(BitDepth depth) noexcept { depth_ = depth; }
  void set_colorspace(ColorSpace cs) noexcept { colorspace_ = cs; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }
  std::span<const double> plane(int c) const noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }
  std::span<double> plane(int c) noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * pixel_count(),
            pixel_count()};
  }

  double at(int c, int y, int x) const noexcept { return data_[index(c, y, x)]; }
  double& at(int c, int y, int x) noexcept { return data_[index(c, y, x)]; }

  bool same_shape(const ImageBuffer& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

 private:
  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * height_ + y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
  BitDepth depth_ = BitDepth::kFloat;
  ColorSpace colorspace_ = ColorSpace::kGeneric;
};

struct BoundaryPolicy {
  enum class Mode : std::uint8_t { kReplicate };
  Mode mode = Mode::kReplicate;
};

inline int clamp_coord(int v, int size) noexcept {
  return v < 0 ? 0 : (v >= size ? size - 1 : v);
}

/// Replicate-padded read of a single sample; any integer coordinate is legal.
inline double sample_clamped(const ImageBuffer& img, int c, int y, int x) noexcept {
  return img.at(c, clamp_coord(y, img.height()), clamp_coord(x, img.width()));
}

/// All channels of the pixel at (row, col) under the boundary policy.
std::vector<double> pad_read(const ImageBuffer& img, int row, int col,
                             BoundaryPolicy policy = {});

/// Reads an 8-bit grayscale or RGB PNG into the canonical [0,1] domain.
/// Throws IoError when the file cannot be opened and FormatError when it is
/// not an 8-bit, alpha-free PNG.
ImageBuffer load_image(const std::filesystem::path& path);

/// Clamps to [0,1], quantizes to 8 bits and writes a PNG (1 or 3 channels).
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

/// Rounds every sample to the nearest 1/255 step after clamping to [0,1].
ImageBuffer quantize_8bit(const ImageBuffer& img);

/// ITU-R BT.601 limited-range luma:
/// Y = (16 + 65.481 R + 128.553 G + 24.966 B) / 255.
ImageBuffer rgb_to_luma(const ImageBuffer& rgb);

/// Single luma plane: rgb_to_luma for 3 channels, a copy for 1 channel.
ImageBuffer luma_plane(const ImageBuffer& img);

/// Truncated (radius ceil(3 sigma)) normalized Gaussian taps, centre first
/// at index radius.
std::vector<double> gaussian_taps(double sigma);

/// Separable Gaussian blur with replicate boundary. sigma must be > 0.
ImageBuffer gaussian_filter(const ImageBuffer& img, double sigma);

/// Axis-separable variant. A sigma of exactly 0 leaves that axis untouched.
ImageBuffer gaussian_filter(const ImageBuffer& img, double sigma_y,
                            double sigma_x);

/// Copy of the rectangle [top, top+height) x [left, left+width).
ImageBuffer crop(const ImageBuffer& img, int top, int left, int height,
                 int width);

}  // namespace lerf
