// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "lerf/error.hpp"
#include "lerf/hyperparam_map.hpp"
#include "lerf/metrics.hpp"
#include "lerf/parallel.hpp"
#include "lerf/resampler.hpp"

namespace lerf {

namespace {

double parse_factor(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v) || v < 1.0)
    throw ParameterError("bad task '" + whole + "': factors must be numbers >= 1");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string format_factor(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  if (std::abs(std::stod(buf) - v) > 1e-12) std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

ResampleJob method_job(const ImageBuffer& src, GeometricTransform transform, int th, int tw,
                       const MethodConfig& method) {
  ResampleJob job;
  job.source = src;
  job.transform = std::move(transform);
  job.kernel = method.kernel;
  job.bank = method.bank;
  job.target_h = th;
  job.target_w = tw;
  if (method.use_enhancer) job.preproc = PreprocessLutEnhancer{};
  if (method.kernel.adaptive()) {
    if (method.frozen_gaussian)
      job.hyper_map = HyperParamMap::frozen(src.height(), src.width(), *method.frozen_gaussian);
    else if (method.frozen_alpha)
      job.hyper_map = HyperParamMap::frozen(src.height(), src.width(), *method.frozen_alpha);
  }
  return job;
}

MetricRecord score_scale(const std::string& image, const std::string& task, const ImageBuffer& hr,
                         const ImageBuffer& out, int shave) {
  MetricRecord r;
  r.image = image;
  r.task = task;
  r.psnr_y = psnr_y(out, hr, shave);
  const int h = hr.height() - 2 * shave;
  const int w = hr.width() - 2 * shave;
  const ImageBuffer hc = crop(hr, shave, shave, h, w);
  const ImageBuffer oc = crop(out, shave, shave, h, w);
  const ValidMask full(h, w, true);
  r.mpsnr = mpsnr(oc, hc, full);
  r.ssim = ssim(oc, hc);
  r.valid_fraction = 1.0;
  return r;
}

void finish(BenchReport& report, std::vector<MetricRecord> records, const MethodConfig& method,
            std::chrono::steady_clock::time_point start) {
  std::sort(records.begin(), records.end(), [](const MetricRecord& a, const MetricRecord& b) {
    return std::tie(a.image, a.task) < std::tie(b.image, b.task);
  });
  report.records = std::move(records);
  report.means = aggregate(report.records);
  report.kernel = method.kernel.name();
  if (method.bank) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << bank_fingerprint(*method.bank);
    report.bank_hash = os.str();
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<NamedImage> load_dataset(const std::filesystem::path& dir) {
  std::vector<NamedImage> images;
  for (const auto& p : list_dataset(dir)) images.emplace_back(p.stem().string(), load_image(p));
  return images;
}

}  // namespace

ScaleTask ScaleTask::parse(const std::string& text) {
  const std::string t = trim(text);
  const auto x = t.find_first_of("xX");
  ScaleTask task;
  if (x == std::string::npos) {
    task.r_h = task.r_w = parse_factor(t, text);
  } else {
    task.r_h = parse_factor(t.substr(0, x), text);
    task.r_w = parse_factor(t.substr(x + 1), text);
  }
  task.label = format_factor(task.r_h) + "x" + format_factor(task.r_w);
  return task;
}

std::vector<ScaleTask> parse_tasks(const std::string& text) {
  std::vector<ScaleTask> tasks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) tasks.push_back(ScaleTask::parse(item));
  if (tasks.empty()) throw ParameterError("no tasks given");
  return tasks;
}

std::vector<TaskMean> aggregate(const std::vector<MetricRecord>& records) {
  std::vector<TaskMean> means;
  for (const auto& r : records) {
    auto it = std::find_if(means.begin(), means.end(),
                           [&](const TaskMean& m) { return m.task == r.task; });
    if (it == means.end()) {
      means.push_back({r.task});
      it = std::prev(means.end());
    }
    ++it->count;
    it->psnr_y += r.psnr_y;
    it->mpsnr += r.mpsnr;
    it->ssim += r.ssim;
    it->valid_fraction += r.valid_fraction;
  }
  for (auto& m : means) {
    m.psnr_y /= m.count;
    m.mpsnr /= m.count;
    m.ssim /= m.count;
    m.valid_fraction /= m.count;
  }
  return means;
}

void BenchReport::write_csv(std::ostream& os) const {
  os << "image,task,psnr_y,mpsnr,ssim,valid_fraction\n";
  os << std::setprecision(10);
  for (const auto& r : records)
    os << r.image << ',' << r.task << ',' << r.psnr_y << ',' << r.mpsnr << ',' << r.ssim << ','
       << r.valid_fraction << '\n';
}

void BenchReport::write_csv(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_csv(os);
  if (!os) throw IoError("write failed: " + path.string());
}

void BenchReport::print_table(std::ostream& os) const {
  os << "kernel " << kernel << "  bank " << bank_hash << "  boundary " << boundary << "  luma "
     << luma << '\n';
  os << std::left << std::setw(14) << "task" << std::right << std::setw(6) << "n"
     << std::setw(10) << "psnr_y" << std::setw(10) << "mpsnr" << std::setw(9) << "ssim"
     << std::setw(8) << "valid" << '\n';
  os << std::fixed;
  for (const auto& m : means)
    os << std::left << std::setw(14) << m.task << std::right << std::setw(6) << m.count
       << std::setw(10) << std::setprecision(2) << m.psnr_y << std::setw(10) << m.mpsnr
       << std::setw(9) << std::setprecision(4) << m.ssim << std::setw(8)
       << std::setprecision(3) << m.valid_fraction << '\n';
  os << std::defaultfloat << std::setprecision(3) << records.size() << " records in " << seconds
     << " s\n";
}

std::vector<std::filesystem::path> list_dataset(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec))
    throw ConfigurationError("dataset is not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(e.path());
  }
  if (files.empty()) throw ConfigurationError("dataset has no PNG images: " + dir.string());
  std::sort(files.begin(), files.end());
  return files;
}

ImageBuffer upsample(const ImageBuffer& lr, double r_h, double r_w, int target_h, int target_w,
                     const MethodConfig& method) {
  return resample(method_job(lr, ScaleTransform{r_h, r_w}, target_h, target_w, method)).image;
}

BenchReport bench_run(const std::vector<NamedImage>& images, const std::vector<ScaleTask>& tasks,
                      const MethodConfig& method) {
  if (images.empty()) throw ConfigurationError("empty dataset");
  if (tasks.empty()) throw ConfigurationError("no tasks");
  const auto start = std::chrono::steady_clock::now();
  const int n = static_cast<int>(images.size() * tasks.size());
  std::vector<MetricRecord> records(static_cast<std::size_t>(n));
  parallel_rows(n, [&](int b, int e) {
    for (int i = b; i < e; ++i) {
      const auto& [name, full] = images[static_cast<std::size_t>(i) / tasks.size()];
      const ScaleTask& task = tasks[static_cast<std::size_t>(i) % tasks.size()];
      // Modcrop so the degraded size scales back to the reference size.
      const int lh = static_cast<int>(std::floor(full.height() / task.r_h + 1e-9));
      const int lw = static_cast<int>(std::floor(full.width() / task.r_w + 1e-9));
      const int hh = static_cast<int>(std::floor(lh * task.r_h + 1e-9));
      const int hw = static_cast<int>(std::floor(lw * task.r_w + 1e-9));
      const ImageBuffer hr = crop(full, 0, 0, hh, hw);
      ImageBuffer lr = degrade_bicubic(hr, 1.0 / task.r_h, 1.0 / task.r_w, method.antialias_degrade);
      if (method.quantize) lr = quantize_8bit(lr);
      ImageBuffer out = upsample(lr, task.r_h, task.r_w, hh, hw, method);
      if (method.quantize) out = quantize_8bit(out);
      const int shave = static_cast<int>(std::ceil(std::max(task.r_h, task.r_w) - 1e-9));
      records[static_cast<std::size_t>(i)] = score_scale(name, task.label, hr, out, shave);
    }
  });
  BenchReport report;
  finish(report, std::move(records), method, start);
  return report;
}

BenchReport bench_run(const std::filesystem::path& dataset, const std::vector<ScaleTask>& tasks,
                      const MethodConfig& method) {
  return bench_run(load_dataset(dataset), tasks, method);
}

MetricRecord warp_round_trip(const std::string& image_id, const ImageBuffer& img,
                             const NamedMatrix& matrix, const MethodConfig& method) {
  const int h = img.height();
  const int w = img.width();
  const Matrix3 back = inverse(matrix.m);
  ResampleResult fwd = resample(
      method_job(img, HomographyTransform{matrix.m, HomographyDirection::kTargetToSource}, h, w, method));
  if (method.quantize) fwd.image = quantize_8bit(fwd.image);
  const ResampleResult rt = resample(
      method_job(fwd.image, HomographyTransform{back, HomographyDirection::kTargetToSource}, h, w, method));
  ImageBuffer out = method.quantize ? quantize_8bit(rt.image) : rt.image;

  // A pixel counts when its second-pass support only touches pixels that
  // were valid after the first pass.
  const int reach = method.kernel.adaptive() ? 1 : method.kernel.taps() / 2;
  ValidMask mask = rt.mask;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask.at(y, x)) continue;
      const SourcePoint p = back_project_homography(back, y, x, h, w);
      const int by = static_cast<int>(std::floor(p.y));
      const int bx = static_cast<int>(std::floor(p.x));
      bool ok = p.valid;
      for (int dy = 1 - reach; ok && dy <= reach; ++dy)
        for (int dx = 1 - reach; ok && dx <= reach; ++dx) {
          const int yy = std::clamp(by + dy, 0, h - 1);
          const int xx = std::clamp(bx + dx, 0, w - 1);
          ok = fwd.mask.at(yy, xx);
        }
      mask.bits[static_cast<std::size_t>(y) * w + x] = ok ? 1 : 0;
    }

  MetricRecord r;
  r.image = image_id;
  r.task = matrix.id;
  r.valid_fraction = static_cast<double>(mask.count()) / (static_cast<double>(h) * w);
  if (mask.count() == 0) {
    r.psnr_y = r.mpsnr = r.ssim = std::nan("");
    return r;
  }
  r.mpsnr = mpsnr(out, img, mask);
  r.psnr_y = mpsnr(luma_plane(out), luma_plane(img), mask);
  try {
    r.ssim = ssim(out, img, &mask);
  } catch (const EvaluationError&) {
    r.ssim = std::nan("");
  }
  return r;
}

BenchReport warp_bench(const std::filesystem::path& dataset, const std::filesystem::path& matrices,
                       const MethodConfig& method) {
  const auto images = load_dataset(dataset);
  std::error_code ec;
  if (!std::filesystem::is_directory(matrices, ec))
    throw ConfigurationError("matrix directory not found: " + matrices.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(matrices))
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  struct Work {
    std::size_t image;
    NamedMatrix matrix;
  };
  std::vector<Work> work;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string& stem = images[i].first;
    for (const auto& f : files) {
      const std::string s = f.stem().string();
      if (s == stem || s.rfind(stem + "_", 0) == 0) work.push_back({i, {s, read_homography(f)}});
    }
  }
  if (work.empty()) throw ConfigurationError("no matrix files match the dataset images");

  const auto start = std::chrono::steady_clock::now();
  std::vector<MetricRecord> records(work.size());
  parallel_rows(static_cast<int>(work.size()), [&](int b, int e) {
    for (int i = b; i < e; ++i) {
      const Work& wk = work[static_cast<std::size_t>(i)];
      records[static_cast<std::size_t>(i)] =
          warp_round_trip(images[wk.image].first, images[wk.image].second, wk.matrix, method);
    }
  });
  BenchReport report;
  finish(report, std::move(records), method, start);
  return report;
}

}  // namespace lerf
