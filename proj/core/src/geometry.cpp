// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/geometry.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "lerf/error.hpp"
#include "lerf/parallel.hpp"

namespace lerf {

namespace {

constexpr double kMinHomogeneousW = 1e-9;
constexpr float kFloMagic = 202021.25f;

bool inside_source(double y, double x, int src_h, int src_w) noexcept {
  return y >= -0.5 && y <= src_h - 0.5 && x >= -0.5 && x <= src_w - 0.5;
}

template <typename T>
void write_le(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little,
                "big-endian hosts are not supported");
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_le(std::istream& is, T& value) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&value), sizeof(T)));
}

}  // namespace

double determinant(const Matrix3& m) noexcept {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) -
         m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Matrix3 inverse(const Matrix3& m) {
  const double det = determinant(m);
  if (!(std::abs(det) > 1e-12))
    throw ParameterError("homography is singular (|det| <= 1e-12)");
  const double inv = 1.0 / det;
  return {(m[4] * m[8] - m[5] * m[7]) * inv, (m[2] * m[7] - m[1] * m[8]) * inv,
          (m[1] * m[5] - m[2] * m[4]) * inv, (m[5] * m[6] - m[3] * m[8]) * inv,
          (m[0] * m[8] - m[2] * m[6]) * inv, (m[2] * m[3] - m[0] * m[5]) * inv,
          (m[3] * m[7] - m[4] * m[6]) * inv, (m[1] * m[6] - m[0] * m[7]) * inv,
          (m[0] * m[4] - m[1] * m[3]) * inv};
}

Matrix3 multiply(const Matrix3& a, const Matrix3& b) noexcept {
  Matrix3 out{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int k = 0; k < 3; ++k) out[r * 3 + c] += a[r * 3 + k] * b[k * 3 + c];
  return out;
}

double back_project_scale(double r, double t) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw ParameterError("scale factor must be > 0, got " + std::to_string(r));
  return (t + 0.5) / r - 0.5;
}

SourcePoint back_project_scale(double r_h, double r_w, double ty, double tx) {
  return {back_project_scale(r_h, ty), back_project_scale(r_w, tx), true};
}

SourcePoint back_project_homography(const Matrix3& m, double ty, double tx,
                                    int src_h, int src_w) {
  const double xc = tx + 0.5;
  const double yc = ty + 0.5;
  const double xs = m[0] * xc + m[1] * yc + m[2];
  const double ys = m[3] * xc + m[4] * yc + m[5];
  const double w = m[6] * xc + m[7] * yc + m[8];
  if (!(w > kMinHomogeneousW)) return {0.0, 0.0, false};
  SourcePoint p{ys / w - 0.5, xs / w - 0.5, false};
  p.valid = std::isfinite(p.x) && std::isfinite(p.y) &&
            inside_source(p.y, p.x, src_h, src_w);
  return p;
}

std::size_t ValidMask::count() const noexcept {
  std::size_t n = 0;
  for (auto b : bits) n += b != 0;
  return n;
}

ValidMask intersect(const ValidMask& a, const ValidMask& b) {
  if (a.height != b.height || a.width != b.width)
    throw ShapeError("mask dimensions differ");
  ValidMask out = a;
  for (std::size_t i = 0; i < out.bits.size(); ++i)
    out.bits[i] = (a.bits[i] && b.bits[i]) ? 1 : 0;
  return out;
}

std::pair<int, int> scaled_dims(int src_h, int src_w, double r_h, double r_w) {
  if (!(r_h > 0.0) || !(r_w > 0.0))
    throw ParameterError("scale factors must be > 0");
  // The epsilon keeps e.g. 255 * (2/3) * 1.5 from flooring to 254.
  const int h = static_cast<int>(std::floor(src_h * r_h + 1e-9));
  const int w = static_cast<int>(std::floor(src_w * r_w + 1e-9));
  return {std::max(1, h), std::max(1, w)};
}

SampleGrid build_sample_grid(const GeometricTransform& transform, int src_h,
                             int src_w, int target_h, int target_w,
                             BoundaryPolicy /*policy*/) {
  if (src_h <= 0 || src_w <= 0 || target_h <= 0 || target_w <= 0)
    throw ParameterError("grid dimensions must be positive");

  SampleGrid grid;
  grid.target_h = target_h;
  grid.target_w = target_w;
  const std::size_t n = static_cast<std::size_t>(target_h) * target_w;
  grid.src_y.assign(n, 0.0);
  grid.src_x.assign(n, 0.0);
  grid.base_y.assign(n, 0);
  grid.base_x.assign(n, 0);
  grid.frac_y.assign(n, 0.0);
  grid.frac_x.assign(n, 0.0);
  grid.valid = ValidMask(target_h, target_w, false);

  // Resolve the per-pixel mapping once, outside the parallel loop.
  std::function<SourcePoint(int, int)> map;
  if (const auto* s = std::get_if<ScaleTransform>(&transform)) {
    if (!(s->r_h > 0.0) || !(s->r_w > 0.0))
      throw ParameterError("scale factors must be > 0");
    const double r_h = s->r_h;
    const double r_w = s->r_w;
    map = [r_h, r_w](int ty, int tx) {
      return back_project_scale(r_h, r_w, ty, tx);
    };
  } else if (const auto* hmg = std::get_if<HomographyTransform>(&transform)) {
    if (!(std::abs(determinant(hmg->m)) > 1e-12))
      throw ParameterError("homography is singular (|det| <= 1e-12)");
    const Matrix3 m = hmg->direction == HomographyDirection::kSourceToTarget
                          ? inverse(hmg->m)
                          : hmg->m;
    map = [m, src_h, src_w](int ty, int tx) {
      return back_project_homography(m, ty, tx, src_h, src_w);
    };
  } else {
    const auto& flow = std::get<FlowField>(transform);
    const std::size_t expected = static_cast<std::size_t>(flow.height) * flow.width;
    if (flow.height != target_h || flow.width != target_w ||
        flow.dx.size() != expected || flow.dy.size() != expected)
      throw ShapeError("flow field is " + std::to_string(flow.height) + "x" +
                       std::to_string(flow.width) + " but target is " +
                       std::to_string(target_h) + "x" + std::to_string(target_w));
    const FlowField* f = &flow;
    map = [f, src_h, src_w](int ty, int tx) {
      const std::size_t i = static_cast<std::size_t>(ty) * f->width + tx;
      SourcePoint p{ty + static_cast<double>(f->dy[i]),
                    tx + static_cast<double>(f->dx[i]), false};
      p.valid = std::isfinite(p.x) && std::isfinite(p.y) &&
                inside_source(p.y, p.x, src_h, src_w);
      return p;
    };
  }

  parallel_rows(target_h, [&](int y0, int y1) {
    for (int ty = y0; ty < y1; ++ty) {
      for (int tx = 0; tx < target_w; ++tx) {
        const std::size_t i = grid.index(ty, tx);
        const SourcePoint p = map(ty, tx);
        if (!std::isfinite(p.y) || !std::isfinite(p.x)) continue;
        grid.src_y[i] = p.y;
        grid.src_x[i] = p.x;
        // Far-away invalid points would overflow the integer anchors.
        if (!p.valid) continue;
        const double fy = std::floor(p.y);
        const double fx = std::floor(p.x);
        grid.base_y[i] = static_cast<int>(fy);
        grid.base_x[i] = static_cast<int>(fx);
        grid.frac_y[i] = p.y - fy;
        grid.frac_x[i] = p.x - fx;
        grid.valid.bits[i] = p.valid ? 1 : 0;
      }
    }
  });
  return grid;
}

Matrix3 read_homography(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open homography file '" + path.string() + "'");
  Matrix3 m{};
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(is >> m[i]))
      throw FormatError("homography file '" + path.string() +
                        "' must hold 9 reals; failed at value " +
                        std::to_string(i));
  }
  std::string extra;
  if (is >> extra)
    throw FormatError("homography file '" + path.string() +
                      "' has trailing content '" + extra + "'");
  return m;
}

void write_homography(const Matrix3& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write homography file '" + path.string() + "'");
  os.precision(17);
  for (int r = 0; r < 3; ++r)
    os << m[r * 3] << ' ' << m[r * 3 + 1] << ' ' << m[r * 3 + 2] << '\n';
}

FlowField read_flo(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open flow file '" + path.string() + "'");
  float magic = 0.0f;
  std::int32_t w = 0;
  std::int32_t h = 0;
  if (!read_le(is, magic) || magic != kFloMagic)
    throw FormatError("flow file '" + path.string() + "': bad magic at offset 0");
  if (!read_le(is, w) || !read_le(is, h) || w <= 0 || h <= 0 ||
      static_cast<std::int64_t>(w) * h > (std::int64_t{1} << 28))
    throw FormatError("flow file '" + path.string() +
                      "': invalid dimensions at offset 4");
  FlowField flow;
  flow.width = w;
  flow.height = h;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<float> interleaved(2 * n);
  if (!is.read(reinterpret_cast<char*>(interleaved.data()),
               static_cast<std::streamsize>(interleaved.size() * sizeof(float))))
    throw FormatError("flow file '" + path.string() + "': truncated payload at offset 12");
  flow.dx.resize(n);
  flow.dy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    flow.dx[i] = interleaved[2 * i];
    flow.dy[i] = interleaved[2 * i + 1];
  }
  return flow;
}

void write_flo(const FlowField& flow, const std::filesystem::path& path) {
  const std::size_t n = static_cast<std::size_t>(flow.width) * flow.height;
  if (flow.dx.size() != n || flow.dy.size() != n)
    throw ShapeError("flow field vectors do not match its dimensions");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write flow file '" + path.string() + "'");
  write_le(os, kFloMagic);
  write_le(os, static_cast<std::int32_t>(flow.width));
  write_le(os, static_cast<std::int32_t>(flow.height));
  for (std::size_t i = 0; i < n; ++i) {
    write_le(os, flow.dx[i]);
    write_le(os, flow.dy[i]);
  }
}

}  // namespace lerf
