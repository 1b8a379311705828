// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/resampler.hpp"

#include <array>
#include <string>

#include "lerf/error.hpp"
#include "lerf/parallel.hpp"

namespace lerf {

namespace {

void check_target(const ResampleJob& job) {
  if (job.target_h <= 0 || job.target_w <= 0)
    throw ParameterError("target dimensions must be positive, got " +
                         std::to_string(job.target_h) + "x" + std::to_string(job.target_w));
  if (job.source.empty()) throw ShapeError("source image is empty");
}

ImageBuffer make_output(const ImageBuffer& src, int h, int w) {
  return ImageBuffer(h, w, src.channels(), src.colorspace(), BitDepth::kFloat);
}

}  // namespace

PreprocessAntiAlias PreprocessAntiAlias::for_scale(double r_h, double r_w) {
  if (!(r_h > 0.0) || !(r_w > 0.0)) throw ParameterError("scale factors must be > 0");
  auto sigma = [](double r) { return r < 1.0 ? 0.5 / r - 0.5 : 0.0; };
  return {sigma(r_h), sigma(r_w)};
}

ImageBuffer preprocess(const ImageBuffer& img, const PreprocessConfig& cfg,
                       const LutBank* bank) {
  if (std::holds_alternative<PreprocessIdentity>(cfg)) return img;
  if (const auto* aa = std::get_if<PreprocessAntiAlias>(&cfg)) {
    if (aa->sigma_y < 0.0 || aa->sigma_x < 0.0)
      throw ParameterError("anti-aliasing sigma must be >= 0");
    if (aa->sigma_y == 0.0 && aa->sigma_x == 0.0) return img;
    return gaussian_filter(img, aa->sigma_y, aa->sigma_x);
  }
  if (std::holds_alternative<PreprocessLutEnhancer>(cfg)) {
    if (bank == nullptr)
      throw ConfigurationError("LUT enhancer pre-processing needs a LUT bank");
    return apply_g_enhancer(img, *bank);
  }
  const auto& ext = std::get<PreprocessExternal>(cfg);
  ImageBuffer loaded = load_image(ext.path);
  if (!loaded.same_shape(img))
    throw ShapeError("external pre-processed image '" + ext.path.string() + "' is " +
                     std::to_string(loaded.height()) + "x" + std::to_string(loaded.width()) +
                     "x" + std::to_string(loaded.channels()) + ", expected " +
                     std::to_string(img.height()) + "x" + std::to_string(img.width()) + "x" +
                     std::to_string(img.channels()));
  return loaded;
}

ResampleResult resample_fixed(const ResampleJob& job) {
  check_target(job);
  if (job.kernel.adaptive())
    throw ParameterError("resample_fixed called with adaptive kernel " + job.kernel.name());

  const ImageBuffer src = preprocess(job.source, job.preproc, job.bank.get());
  const SampleGrid grid =
      build_sample_grid(job.transform, src.height(), src.width(), job.target_h, job.target_w);
  ImageBuffer out = make_output(src, job.target_h, job.target_w);
  const int taps = job.kernel.taps();
  const int first = FixedWeights::first_tap(taps);

  parallel_rows(job.target_h, [&](int y0, int y1) {
    for (int ty = y0; ty < y1; ++ty) {
      for (int tx = 0; tx < job.target_w; ++tx) {
        const std::size_t i = grid.index(ty, tx);
        if (!grid.valid.bits[i]) continue;
        const FixedWeights w = weights_fixed_2d(job.kernel, grid.frac_y[i], grid.frac_x[i]);
        const int by = grid.base_y[i];
        const int bx = grid.base_x[i];
        for (int c = 0; c < src.channels(); ++c) {
          // Aggregating differences to the anchor keeps flat regions exact.
          const double anchor = sample_clamped(src, c, by, bx);
          double acc = 0.0;
          for (int ky = 0; ky < taps; ++ky)
            for (int kx = 0; kx < taps; ++kx)
              acc += w(ky, kx) *
                     (sample_clamped(src, c, by + first + ky, bx + first + kx) - anchor);
          out.at(c, ty, tx) = anchor + acc;
        }
      }
    }
  });
  return {std::move(out), grid.valid};
}

ResampleResult resample_lerf(const ResampleJob& job) {
  check_target(job);
  if (!job.kernel.adaptive())
    throw ParameterError("resample_lerf called with fixed kernel " + job.kernel.name());
  if (!job.hyper_map && !job.bank)
    throw ConfigurationError("kernel " + job.kernel.name() +
                             " needs a LUT bank or a hyper-parameter map");
  if (job.bank && job.bank->family != job.kernel.kind)
    throw ConfigurationError("LUT bank family " + KernelFamily{job.bank->family}.name() +
                             " does not match kernel " + job.kernel.name());
  if (job.hyper_map && job.hyper_map->family != job.kernel.kind)
    throw ConfigurationError("hyper-parameter map family does not match kernel " +
                             job.kernel.name());

  const ImageBuffer src = preprocess(job.source, job.preproc, job.bank.get());

  // Hyper-parameters come from the source itself; only an external
  // pre-processed image replaces it as the prediction input.
  const bool external = std::holds_alternative<PreprocessExternal>(job.preproc);
  HyperParamMap map = job.hyper_map
                          ? *job.hyper_map
                          : predict_hyperparams(external ? src : job.source, *job.bank);
  if (map.height != src.height() || map.width != src.width())
    throw ShapeError("hyper-parameter map is " + std::to_string(map.height) + "x" +
                     std::to_string(map.width) + " but source is " +
                     std::to_string(src.height()) + "x" + std::to_string(src.width()));

  const SampleGrid grid =
      build_sample_grid(job.transform, src.height(), src.width(), job.target_h, job.target_w);
  ImageBuffer out = make_output(src, job.target_h, job.target_w);
  const bool gaussian = job.kernel.kind == KernelKind::kAnisoGaussian;
  const int h = src.height();
  const int w = src.width();

  parallel_rows(job.target_h, [&](int y0, int y1) {
    std::array<int, 4> sy{};
    std::array<int, 4> sx{};
    std::array<Offset2, 4> offsets{};
    std::array<GaussianParams, 4> gparams{};
    std::array<double, 4> alphas{};
    for (int ty = y0; ty < y1; ++ty) {
      for (int tx = 0; tx < job.target_w; ++tx) {
        const std::size_t i = grid.index(ty, tx);
        if (!grid.valid.bits[i]) continue;
        for (int k = 0; k < 4; ++k) {
          const int dy = k >> 1;
          const int dx = k & 1;
          sy[k] = clamp_coord(grid.base_y[i] + dy, h);
          sx[k] = clamp_coord(grid.base_x[i] + dx, w);
          offsets[k] = {grid.frac_y[i] - dy, grid.frac_x[i] - dx};
          if (gaussian) {
            gparams[k] = map.gaussian(sy[k], sx[k]);
          } else {
            alphas[k] = map.alpha(sy[k], sx[k]);
          }
        }
        const Weights4 wts = gaussian ? weights_aniso_gaussian(gparams, offsets)
                                      : weights_amplified_linear(alphas, offsets);
        for (int c = 0; c < src.channels(); ++c) {
          const double anchor = src.at(c, sy[0], sx[0]);
          double acc = 0.0;
          for (int k = 1; k < 4; ++k) acc += wts[k] * (src.at(c, sy[k], sx[k]) - anchor);
          out.at(c, ty, tx) = anchor + acc;
        }
      }
    }
  });
  return {std::move(out), grid.valid};
}

ResampleResult resample(const ResampleJob& job) {
  return job.kernel.adaptive() ? resample_lerf(job) : resample_fixed(job);
}

ResampleResult downsample_lerf(const ResampleJob& job) {
  const auto* scale = std::get_if<ScaleTransform>(&job.transform);
  if (scale == nullptr) throw ParameterError("downsampling needs a scale transform");
  if (!(scale->r_h < 1.0) || !(scale->r_w < 1.0))
    throw ParameterError("downsampling needs both scale factors < 1");
  ResampleJob down = job;
  const auto [h, w] =
      scaled_dims(job.source.height(), job.source.width(), scale->r_h, scale->r_w);
  down.target_h = h;
  down.target_w = w;
  if (std::holds_alternative<PreprocessIdentity>(job.preproc))
    down.preproc = PreprocessAntiAlias::for_scale(scale->r_h, scale->r_w);
  return resample(down);
}

ResampleJob make_scale_job(ImageBuffer source, double r_h, double r_w, KernelFamily kernel) {
  ResampleJob job;
  const auto [h, w] = scaled_dims(source.height(), source.width(), r_h, r_w);
  job.source = std::move(source);
  job.transform = ScaleTransform{r_h, r_w};
  job.kernel = kernel;
  job.target_h = h;
  job.target_w = w;
  return job;
}

}  // namespace lerf
