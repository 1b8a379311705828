// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: resize, warp, flow-warp, bench, warp-bench and
// make-bank. Exit codes: 0 ok, 2 misuse, 3 I/O, 4 format, 1 anything else.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <memory>
#include <string>

#include "lerf/bench.hpp"
#include "lerf/error.hpp"
#include "lerf/fixture_banks.hpp"
#include "lerf/geometry.hpp"
#include "lerf/hyperparam_map.hpp"
#include "lerf/image.hpp"
#include "lerf/lut.hpp"
#include "lerf/parallel.hpp"
#include "lerf/resampler.hpp"

namespace {

constexpr int kExitMisuse = 2;
constexpr int kExitIo = 3;
constexpr int kExitFormat = 4;

struct MethodArgs {
  std::string kernel = "bicubic";
  std::string lut;
  bool frozen = false;
  bool enhance = false;
};

void add_method_options(CLI::App* app, MethodArgs& m) {
  app->add_option("--kernel", m.kernel,
                  "nearest|bilinear|bicubic|lanczos2|lanczos3|lerf-l|lerf-g")
      ->capture_default_str();
  app->add_option("--lut", m.lut, "LUT bank file for lerf-l / lerf-g");
  app->add_flag("--frozen", m.frozen,
                "lerf kernels: isotropic hyper-parameters instead of a bank");
  app->add_flag("--enhance", m.enhance, "run the bank's enhancer tables first");
}

lerf::MethodConfig make_method(const MethodArgs& m) {
  lerf::MethodConfig cfg;
  cfg.kernel = lerf::KernelFamily::parse(m.kernel);
  if (!m.lut.empty()) cfg.bank = std::make_shared<lerf::LutBank>(lerf::load_lut_bank(m.lut));
  if (cfg.kernel.adaptive() && m.frozen) {
    if (cfg.kernel.kind == lerf::KernelKind::kAnisoGaussian)
      cfg.frozen_gaussian = lerf::GaussianParams{0.0, 1.0, 1.0};
    else
      cfg.frozen_alpha = 1.0;
  }
  if (cfg.kernel.adaptive() && !cfg.bank && !m.frozen)
    throw lerf::ConfigurationError("kernel " + m.kernel + " needs --lut or --frozen");
  cfg.use_enhancer = m.enhance;
  return cfg;
}

lerf::ResampleJob make_job(lerf::ImageBuffer src, lerf::GeometricTransform t, int th, int tw,
                           const lerf::MethodConfig& cfg) {
  lerf::ResampleJob job;
  job.transform = std::move(t);
  job.kernel = cfg.kernel;
  job.bank = cfg.bank;
  job.target_h = th;
  job.target_w = tw;
  if (cfg.use_enhancer) job.preproc = lerf::PreprocessLutEnhancer{};
  if (cfg.frozen_gaussian)
    job.hyper_map = lerf::HyperParamMap::frozen(src.height(), src.width(), *cfg.frozen_gaussian);
  else if (cfg.frozen_alpha)
    job.hyper_map = lerf::HyperParamMap::frozen(src.height(), src.width(), *cfg.frozen_alpha);
  job.source = std::move(src);
  return job;
}

void save_mask(const lerf::ValidMask& mask, const std::string& path) {
  lerf::ImageBuffer img(mask.height, mask.width, 1, lerf::ColorSpace::kGeneric,
                        lerf::BitDepth::k8Bit);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) img.at(0, y, x) = mask.at(y, x) ? 1.0 : 0.0;
  lerf::save_image(img, path);
}

void report(const lerf::BenchReport& rep, const std::string& csv) {
  rep.print_table(std::cout);
  if (!csv.empty()) rep.write_csv(csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learned and classic image resampling"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string in, out, mask_out, matrix, flow, dataset, matrices, tasks = "2.0x2.0", csv;
  double scale = 2.0;
  double scale_w = 0.0;
  bool aa = false;
  bool forward = false;
  std::vector<int> size;
  MethodArgs method;

  auto* resize = app.add_subcommand("resize", "scale an image");
  resize->add_option("--in", in)->required();
  resize->add_option("--out", out)->required();
  resize->add_option("--scale", scale, "factor (height, and width unless --scale-w)")->required();
  resize->add_option("--scale-w", scale_w, "width factor");
  resize->add_flag("--aa", aa, "Gaussian anti-aliasing pre-filter when downscaling");
  add_method_options(resize, method);

  auto* warp = app.add_subcommand("warp", "homographic warp");
  warp->add_option("--in", in)->required();
  warp->add_option("--out", out)->required();
  warp->add_option("--matrix", matrix, "3x3 target-to-source matrix file")->required();
  warp->add_flag("--forward", forward, "the matrix maps source to target");
  warp->add_option("--size", size, "output HEIGHT WIDTH (default: input size)")->expected(2);
  warp->add_option("--emit-mask", mask_out, "write the valid mask as PNG");
  add_method_options(warp, method);

  auto* fwarp = app.add_subcommand("flow-warp", "backward warp along a .flo field");
  fwarp->add_option("--in", in)->required();
  fwarp->add_option("--out", out)->required();
  fwarp->add_option("--flow", flow)->required();
  fwarp->add_option("--emit-mask", mask_out, "write the valid mask as PNG");
  add_method_options(fwarp, method);

  bool plain_degrade = false;
  auto* bench = app.add_subcommand("bench", "degrade / upsample benchmark");
  bench->add_option("--dataset", dataset)->required();
  bench->add_option("--tasks", tasks, "comma separated RHxRW list")->capture_default_str();
  bench->add_option("--csv", csv);
  bench->add_flag("--plain-degrade", plain_degrade, "4x4 bicubic degradation without anti-aliasing");
  add_method_options(bench, method);

  auto* wbench = app.add_subcommand("warp-bench", "homography round-trip benchmark");
  wbench->add_option("--dataset", dataset)->required();
  wbench->add_option("--matrices", matrices)->required();
  wbench->add_option("--csv", csv);
  add_method_options(wbench, method);

  std::string kind = "structure", family = "gaussian";
  bool enhancer = false;
  auto* mkbank = app.add_subcommand("make-bank", "write an analytic fixture bank");
  mkbank->add_option("--kind", kind)->check(CLI::IsMember({"isotropic", "structure"}))
      ->capture_default_str();
  mkbank->add_option("--family", family)->check(CLI::IsMember({"linear", "gaussian"}))
      ->capture_default_str();
  mkbank->add_flag("--enhancer", enhancer, "include enhancer tables (structure only)");
  mkbank->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitMisuse;
  }

  try {
    lerf::set_thread_count(threads);
    if (*resize) {
      if (!(scale > 0.0) || scale_w < 0.0)
        throw lerf::ParameterError("scale factors must be positive");
      const double sw = scale_w > 0.0 ? scale_w : scale;
      const auto cfg = make_method(method);
      lerf::ImageBuffer src = lerf::load_image(in);
      const auto [th, tw] = lerf::scaled_dims(src.height(), src.width(), scale, sw);
      auto job = make_job(std::move(src), lerf::ScaleTransform{scale, sw}, th, tw, cfg);
      lerf::ResampleResult res;
      if (aa && scale < 1.0 && sw < 1.0 && cfg.kernel.adaptive()) {
        res = lerf::downsample_lerf(job);
      } else {
        if (aa) job.preproc = lerf::PreprocessAntiAlias::for_scale(scale, sw);
        res = lerf::resample(job);
      }
      lerf::save_image(res.image, out);
    } else if (*warp) {
      const auto cfg = make_method(method);
      lerf::ImageBuffer src = lerf::load_image(in);
      const int th = size.empty() ? src.height() : size[0];
      const int tw = size.empty() ? src.width() : size[1];
      if (th <= 0 || tw <= 0) throw lerf::ParameterError("--size must be positive");
      const lerf::HomographyTransform t{
          lerf::read_homography(matrix),
          forward ? lerf::HomographyDirection::kSourceToTarget
                  : lerf::HomographyDirection::kTargetToSource};
      const auto res = lerf::resample(make_job(std::move(src), t, th, tw, cfg));
      lerf::save_image(res.image, out);
      if (!mask_out.empty()) save_mask(res.mask, mask_out);
    } else if (*fwarp) {
      const auto cfg = make_method(method);
      lerf::ImageBuffer src = lerf::load_image(in);
      lerf::FlowField f = lerf::read_flo(flow);
      const int th = f.height;
      const int tw = f.width;
      const auto res = lerf::resample(make_job(std::move(src), std::move(f), th, tw, cfg));
      lerf::save_image(res.image, out);
      if (!mask_out.empty()) save_mask(res.mask, mask_out);
    } else if (*bench) {
      auto cfg = make_method(method);
      cfg.antialias_degrade = !plain_degrade;
      report(lerf::bench_run(dataset, lerf::parse_tasks(tasks), cfg), csv);
    } else if (*wbench) {
      report(lerf::warp_bench(dataset, matrices, make_method(method)), csv);
    } else if (*mkbank) {
      const auto fam = family == "linear" ? lerf::KernelKind::kAmplifiedLinear
                                          : lerf::KernelKind::kAnisoGaussian;
      if (kind == "isotropic" && enhancer)
        throw lerf::ParameterError("--enhancer applies to --kind structure only");
      const auto bank = kind == "isotropic" ? lerf::make_isotropic_bank(fam)
                                            : lerf::make_structure_bank(fam, enhancer);
      lerf::save_lut_bank(bank, out);
    }
  } catch (const lerf::Error& e) {
    std::cerr << "lerf: " << lerf::to_string(e.kind()) << ": " << e.what() << '\n';
    switch (e.kind()) {
      case lerf::ErrorKind::kParameter:
      case lerf::ErrorKind::kShape:
      case lerf::ErrorKind::kConfiguration:
        return kExitMisuse;
      case lerf::ErrorKind::kIo:
        return kExitIo;
      case lerf::ErrorKind::kFormat:
        return kExitFormat;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "lerf: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
