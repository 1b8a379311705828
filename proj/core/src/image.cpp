// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "lerf/error.hpp"
#include "lerf/parallel.hpp"

namespace lerf {

namespace {

void check_dims(int height, int width, int channels) {
  if (height <= 0 || width <= 0)
    throw ShapeError("image dimensions must be positive, got " +
                     std::to_string(height) + "x" + std::to_string(width));
  if (channels != 1 && channels != 3)
    throw ShapeError("image must have 1 or 3 channels, got " +
                     std::to_string(channels));
}

// RAII guard for png_image so every error path frees libpng state.
struct PngImage {
  png_image image{};
  PngImage() {
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }
  PngImage(const PngImage&) = delete;
  PngImage& operator=(const PngImage&) = delete;
};

std::uint8_t to_byte(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

// Filters one axis in place-free fashion: out[i] = sum_k taps[k] in[i+k-r],
// replicate boundary.
void filter_rows(const ImageBuffer& src, ImageBuffer& dst,
                 const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size()) / 2;
  const int w = src.width();
  const int h = src.height();
  for (int c = 0; c < src.channels(); ++c) {
    parallel_rows(h, [&](int y0, int y1) {
      for (int y = y0; y < y1; ++y) {
        for (int x = 0; x < w; ++x) {
          const double centre = src.at(c, y, x);
          double acc = 0.0;
          for (int k = -radius; k <= radius; ++k)
            acc += taps[k + radius] * (src.at(c, y, clamp_coord(x + k, w)) - centre);
          dst.at(c, y, x) = centre + acc;
        }
      }
    });
  }
}

void filter_cols(const ImageBuffer& src, ImageBuffer& dst,
                 const std::vector<double>& taps) {
  const int radius = static_cast<int>(taps.size()) / 2;
  const int w = src.width();
  const int h = src.height();
  for (int c = 0; c < src.channels(); ++c) {
    parallel_rows(h, [&](int y0, int y1) {
      for (int y = y0; y < y1; ++y) {
        for (int x = 0; x < w; ++x) {
          const double centre = src.at(c, y, x);
          double acc = 0.0;
          for (int k = -radius; k <= radius; ++k)
            acc += taps[k + radius] * (src.at(c, clamp_coord(y + k, h), x) - centre);
          dst.at(c, y, x) = centre + acc;
        }
      }
    });
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int height, int width, int channels,
                         ColorSpace colorspace, BitDepth depth)
    : height_(height),
      width_(width),
      channels_(channels),
      depth_(depth),
      colorspace_(colorspace) {
  check_dims(height, width, channels);
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), 0.0);
}

ImageBuffer::ImageBuffer(int height, int width, int channels,
                         std::vector<double> data, ColorSpace colorspace,
                         BitDepth depth)
    : height_(height),
      width_(width),
      channels_(channels),
      data_(std::move(data)),
      depth_(depth),
      colorspace_(colorspace) {
  check_dims(height, width, channels);
  if (data_.size() != pixel_count() * static_cast<std::size_t>(channels))
    throw ShapeError("image data length " + std::to_string(data_.size()) +
                     " does not match " + std::to_string(height) + "x" +
                     std::to_string(width) + "x" + std::to_string(channels));
}

std::vector<double> pad_read(const ImageBuffer& img, int row, int col,
                             BoundaryPolicy /*policy*/) {
  std::vector<double> out(static_cast<std::size_t>(img.channels()));
  for (int c = 0; c < img.channels(); ++c)
    out[static_cast<std::size_t>(c)] = sample_clamped(img, c, row, col);
  return out;
}

ImageBuffer load_image(const std::filesystem::path& path) {
  const std::string name = path.string();
  {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open image '" + name + "'");
  }

  PngImage png;
  if (!png_image_begin_read_from_file(&png.image, name.c_str()))
    throw FormatError("cannot decode '" + name + "': " + png.image.message);

  const png_uint_32 native = png.image.format;
  if (native & PNG_FORMAT_FLAG_LINEAR)
    throw FormatError("unsupported bit depth in '" + name +
                      "': only 8-bit PNG is accepted");
  if (native & PNG_FORMAT_FLAG_ALPHA)
    throw FormatError("unsupported alpha channel in '" + name + "'");

  const bool color = (native & PNG_FORMAT_FLAG_COLOR) != 0;
  const int channels = color ? 3 : 1;
  png.image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

  const int w = static_cast<int>(png.image.width);
  const int h = static_cast<int>(png.image.height);
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png.image));
  if (!png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr))
    throw FormatError("cannot decode '" + name + "': " + png.image.message);

  ImageBuffer img(h, w, channels, color ? ColorSpace::kRgb : ColorSpace::kY,
                  BitDepth::k8Bit);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        img.at(c, y, x) =
            buffer[(static_cast<std::size_t>(y) * w + x) * channels + c] / 255.0;
  return img;
}

void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  if (img.empty()) throw ShapeError("cannot save an empty image");
  const int channels = img.channels();
  const int w = img.width();
  const int h = img.height();
  std::vector<png_byte> buffer(img.pixel_count() * channels);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        buffer[(static_cast<std::size_t>(y) * w + x) * channels + c] =
            to_byte(img.at(c, y, x));

  PngImage png;
  png.image.width = static_cast<png_uint_32>(w);
  png.image.height = static_cast<png_uint_32>(h);
  png.image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const std::string name = path.string();
  if (!png_image_write_to_file(&png.image, name.c_str(), 0, buffer.data(), 0,
                               nullptr))
    throw IoError("cannot write image '" + name + "': " + png.image.message);
}

ImageBuffer quantize_8bit(const ImageBuffer& img) {
  ImageBuffer out = img;
  for (double& v : out.data()) v = to_byte(v) / 255.0;
  return out;
}

ImageBuffer rgb_to_luma(const ImageBuffer& rgb) {
  if (rgb.channels() != 3)
    throw ShapeError("rgb_to_luma expects 3 channels, got " +
                     std::to_string(rgb.channels()));
  ImageBuffer y(rgb.height(), rgb.width(), 1, ColorSpace::kY, rgb.depth());
  const auto r = rgb.plane(0);
  const auto g = rgb.plane(1);
  const auto b = rgb.plane(2);
  auto out = y.plane(0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (16.0 + 65.481 * r[i] + 128.553 * g[i] + 24.966 * b[i]) / 255.0;
  return y;
}

ImageBuffer luma_plane(const ImageBuffer& img) {
  if (img.channels() == 3) return rgb_to_luma(img);
  return img;
}

std::vector<double> gaussian_taps(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw ParameterError("gaussian sigma must be > 0, got " +
                         std::to_string(sigma));
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * (k * k) / (sigma * sigma));
    taps[static_cast<std::size_t>(k + radius)] = v;
    sum += v;
  }
  for (double& v : taps) v /= sum;
  return taps;
}

ImageBuffer gaussian_filter(const ImageBuffer& img, double sigma) {
  if (!(sigma > 0.0))
    throw ParameterError("gaussian sigma must be > 0, got " +
                         std::to_string(sigma));
  return gaussian_filter(img, sigma, sigma);
}

ImageBuffer gaussian_filter(const ImageBuffer& img, double sigma_y,
                            double sigma_x) {
  if (sigma_y < 0.0 || sigma_x < 0.0 || !std::isfinite(sigma_y) ||
      !std::isfinite(sigma_x))
    throw ParameterError("gaussian sigmas must be >= 0");
  ImageBuffer current = img;
  if (sigma_x > 0.0) {
    ImageBuffer tmp = current;
    filter_rows(current, tmp, gaussian_taps(sigma_x));
    current = std::move(tmp);
  }
  if (sigma_y > 0.0) {
    ImageBuffer tmp = current;
    filter_cols(current, tmp, gaussian_taps(sigma_y));
    current = std::move(tmp);
  }
  current.set_depth(BitDepth::kFloat);
  return current;
}

ImageBuffer crop(const ImageBuffer& img, int top, int left, int height,
                 int width) {
  if (top < 0 || left < 0 || height <= 0 || width <= 0 ||
      top + height > img.height() || left + width > img.width())
    throw ShapeError("crop rectangle outside image");
  ImageBuffer out(height, width, img.channels(), img.colorspace(), img.depth());
  for (int c = 0; c < img.channels(); ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) out.at(c, y, x) = img.at(c, top + y, left + x);
  return out;
}

}  // namespace lerf
