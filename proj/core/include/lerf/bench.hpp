// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

/// \file
/// Benchmark runner: degrade/upsample task grids and homography round
/// trips over a directory of reference images.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lerf/geometry.hpp"
#include "lerf/image.hpp"
#include "lerf/kernels.hpp"
#include "lerf/lut.hpp"

namespace lerf {

/// Upsampling task "RHxRW", e.g. "2.0x2.4": the reference is degraded by
/// 1/RH, 1/RW and upsampled back.
struct ScaleTask {
  double r_h = 2.0;
  double r_w = 2.0;
  std::string label;

  static ScaleTask parse(const std::string& text);
};

/// Comma separated list of tasks.
std::vector<ScaleTask> parse_tasks(const std::string& text);

struct MethodConfig {
  KernelFamily kernel = KernelFamily::keys_cubic();
  std::shared_ptr<const LutBank> bank;
  /// Spatially constant hyper-parameters instead of LUT prediction.
  std::optional<GaussianParams> frozen_gaussian;
  std::optional<double> frozen_alpha;
  /// Run the bank's g tables before resampling.
  bool use_enhancer = false;
  /// MATLAB-style anti-aliased bicubic degradation (plain 4x4 otherwise).
  bool antialias_degrade = true;
  /// Round the degraded input and the output to 8 bits.
  bool quantize = true;
};

struct MetricRecord {
  std::string image;
  std::string task;
  double psnr_y = 0.0;
  double mpsnr = 0.0;
  double ssim = 0.0;
  double valid_fraction = 0.0;
};

struct TaskMean {
  std::string task;
  int count = 0;
  double psnr_y = 0.0;
  double mpsnr = 0.0;
  double ssim = 0.0;
  double valid_fraction = 0.0;
};

struct BenchReport {
  std::vector<MetricRecord> records;
  std::vector<TaskMean> means;
  std::string kernel;
  std::string bank_hash = "none";
  std::string boundary = "replicate";
  std::string luma = "bt601-limited";
  double seconds = 0.0;

  void write_csv(std::ostream& os) const;
  void write_csv(const std::filesystem::path& path) const;
  void print_table(std::ostream& os) const;
};

/// Per-task means in first-appearance order of the (sorted) records.
std::vector<TaskMean> aggregate(const std::vector<MetricRecord>& records);

/// PNG files of a directory in name order. Throws ConfigurationError when
/// there are none.
std::vector<std::filesystem::path> list_dataset(const std::filesystem::path& dir);

using NamedImage = std::pair<std::string, ImageBuffer>;

/// Modcrop, degrade, upsample and score every (image, task) pair.
BenchReport bench_run(const std::vector<NamedImage>& images,
                      const std::vector<ScaleTask>& tasks, const MethodConfig& method);
BenchReport bench_run(const std::filesystem::path& dataset,
                      const std::vector<ScaleTask>& tasks, const MethodConfig& method);

/// Upsamples `lr` by the task factors to exactly target_h x target_w.
ImageBuffer upsample(const ImageBuffer& lr, double r_h, double r_w, int target_h,
                     int target_w, const MethodConfig& method);

struct NamedMatrix {
  std::string id;
  Matrix3 m;
};

/// Warps `img` with the target-to-source matrix and back with its inverse;
/// scores the result against `img` over the pixels valid in both passes.
MetricRecord warp_round_trip(const std::string& image_id, const ImageBuffer& img,
                             const NamedMatrix& matrix, const MethodConfig& method);

/// For every dataset image, all matrix files named <stem>.txt or
/// <stem>_<id>.txt in `matrices`.
BenchReport warp_bench(const std::filesystem::path& dataset,
                       const std::filesystem::path& matrices, const MethodConfig& method);

}  // namespace lerf
