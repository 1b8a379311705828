// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Resampling jobs: fixed-kernel interpolation and learned (LUT-driven)
/// adaptive resampling for any GeometricTransform.
///
/// The adaptive path runs in three stages: pre-process the source, predict
/// one hyper-parameter set per source pixel, then aggregate the 2x2 support
/// of every target pixel with weights from each support pixel's own
/// kernel.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <variant>

#include "lerf/geometry.hpp"
#include "lerf/hyperparam_map.hpp"
#include "lerf/image.hpp"
#include "lerf/kernels.hpp"
#include "lerf/lut.hpp"

namespace lerf {

struct PreprocessIdentity {};

/// Gaussian low-pass before sampling; per-axis sigma in source pixels.
struct PreprocessAntiAlias {
  double sigma_y = 0.0;
  double sigma_x = 0.0;

  static PreprocessAntiAlias isotropic(double sigma) { return {sigma, sigma}; }
  /// sigma = 0.5 / r - 0.5 per axis; zero for r >= 1.
  static PreprocessAntiAlias for_scale(double r_h, double r_w);
};

/// The bank's enhancer (g) tables.
struct PreprocessLutEnhancer {};

/// A pre-processed image produced elsewhere, e.g. by a cascaded model. It
/// must have the source dimensions; hyper-parameters are predicted on it.
struct PreprocessExternal {
  std::filesystem::path path;
};

using PreprocessConfig = std::variant<PreprocessIdentity, PreprocessAntiAlias,
                                      PreprocessLutEnhancer, PreprocessExternal>;

struct ResampleJob {
  ImageBuffer source;
  GeometricTransform transform = ScaleTransform{};
  KernelFamily kernel = KernelFamily::linear();
  PreprocessConfig preproc = PreprocessIdentity{};
  std::shared_ptr<const LutBank> bank;
  /// Overrides LUT prediction when set (frozen or externally optimized maps).
  std::optional<HyperParamMap> hyper_map;
  int target_h = 0;
  int target_w = 0;
};

struct ResampleResult {
  ImageBuffer image;
  ValidMask mask;
};

ImageBuffer preprocess(const ImageBuffer& img, const PreprocessConfig& cfg,
                       const LutBank* bank);

/// Interpolates with a fixed family over its full support. Pixels outside
/// the geometry's valid mask are zero.
ResampleResult resample_fixed(const ResampleJob& job);

/// Learned resampling with an adaptive family.
ResampleResult resample_lerf(const ResampleJob& job);

/// Dispatches on job.kernel.
ResampleResult resample(const ResampleJob& job);

/// Downscaling (both factors < 1) with the anti-aliasing pre-filter. A job
/// carrying PreprocessIdentity gets the default sigma schedule; an explicit
/// PreprocessAntiAlias is honoured. Output is floor(src * r) per axis.
ResampleResult downsample_lerf(const ResampleJob& job);

/// Convenience: job for a scale transform with floor(src * r) output dims.
ResampleJob make_scale_job(ImageBuffer source, double r_h, double r_w,
                           KernelFamily kernel);

}  // namespace lerf
