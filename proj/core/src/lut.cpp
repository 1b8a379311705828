// Copyright Contributors to the lerf project.
// SPDX-License-Identifier: Apache-2.0

#include "lerf/lut.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "lerf/error.hpp"
#include "lerf/parallel.hpp"

namespace lerf {

namespace {

constexpr std::array<char, 4> kMagic = {'L', 'E', 'R', 'F'};
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kHeaderSize = 10;
constexpr std::size_t kTableHeaderSize = 4;

static_assert(std::endian::native == std::endian::little,
              "LUT bank I/O assumes a little-endian host");

std::uint8_t family_code(KernelKind family) {
  switch (family) {
    case KernelKind::kAmplifiedLinear:
      return 1;
    case KernelKind::kAnisoGaussian:
      return 2;
    default:
      throw ConfigurationError("LUT banks only exist for adaptive families");
  }
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return bytes_[pos_++];
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    const std::uint16_t v =
        static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  void int16s(std::span<std::int16_t> out, const char* what) {
    need(out.size() * 2, what);
    for (auto& v : out) {
      v = static_cast<std::int16_t>(
          static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8)));
      pos_ += 2;
    }
  }
  bool at_end() const noexcept { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n)
      throw FormatError(std::string("LUT bank truncated while reading ") + what +
                        " at offset " + std::to_string(pos_) + " (file has " +
                        std::to_string(bytes_.size()) + " bytes)");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

LutIndex gather_index(const ImageBuffer& plane, int c, int y, int x,
                      const Pattern& pattern, int quarter_turns) {
  std::array<double, 4> px{};
  for (std::size_t i = 0; i < 4; ++i) {
    const PixelOffset o = rotate_offset(pattern.offsets[i], quarter_turns);
    px[i] = sample_clamped(plane, c, y + o.dy, x + o.dx);
  }
  return quantize_index(px);
}

// Average of the two predictions of one table at the given pixel, already
// expressed in the canonical orientation.
void table_prediction(const LutTable& table, KernelKind family,
                      const ImageBuffer& plane, int c, int y, int x,
                      std::span<double> out) {
  const Pattern pattern = Pattern::of(table.pattern());
  const bool quarter = table.role() == RotationRole::kDeg90_270;
  const int first_turn = quarter ? 1 : 0;
  std::array<double, 3> a{};
  std::array<double, 3> b{};
  const std::size_t n = static_cast<std::size_t>(table.c_out());
  simplex_interp(table, gather_index(plane, c, y, x, pattern, first_turn),
                 std::span(a.data(), n));
  simplex_interp(table, gather_index(plane, c, y, x, pattern, first_turn + 2),
                 std::span(b.data(), n));
  if (quarter && family == KernelKind::kAnisoGaussian) {
    const GaussianParams ra = rotate_quarter({a[0], a[1], a[2]});
    const GaussianParams rb = rotate_quarter({b[0], b[1], b[2]});
    a = {ra.rho, ra.inv_sigma_x, ra.inv_sigma_y};
    b = {rb.rho, rb.inv_sigma_x, rb.inv_sigma_y};
  }
  for (std::size_t ch = 0; ch < n; ++ch) out[ch] = (a[ch] + b[ch]) * 0.5;
}

}  // namespace

Pattern Pattern::of(PatternName name) {
  switch (name) {
    case PatternName::kS:
      return {name, {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}}};
    case PatternName::kC:
      return {name, {{{0, 0}, {0, 1}, {0, 2}, {0, 3}}}};
    case PatternName::kX:
      return {name, {{{0, 0}, {1, 1}, {2, 2}, {3, 3}}}};
  }
  throw FormatError("unknown pattern code " + std::to_string(static_cast<int>(name)));
}

std::string to_string(PatternName name) {
  switch (name) {
    case PatternName::kS:
      return "S";
    case PatternName::kC:
      return "C";
    case PatternName::kX:
      return "X";
  }
  return "?";
}

PixelOffset rotate_offset(PixelOffset o, int quarter_turns) noexcept {
  for (int k = 0; k < (quarter_turns & 3); ++k) o = {o.dx, -o.dy};
  return o;
}

LutTable::LutTable(PatternName pattern, RotationRole role, int c_out)
    : LutTable(pattern, role, c_out,
               std::vector<std::int16_t>(kLutCells * static_cast<std::size_t>(
                                                         std::max(c_out, 0)))) {}

LutTable::LutTable(PatternName pattern, RotationRole role, int c_out,
                   std::vector<std::int16_t> entries)
    : pattern_(pattern), role_(role), c_out_(c_out), entries_(std::move(entries)) {
  if (c_out != 1 && c_out != 3)
    throw ConfigurationError("LUT c_out must be 1 or 3, got " + std::to_string(c_out));
}

void LutTable::set(std::size_t cell, int ch, double value) {
  const double scaled = std::round(value * kLutFixedPointScale);
  if (!(scaled >= std::numeric_limits<std::int16_t>::min() &&
        scaled <= std::numeric_limits<std::int16_t>::max()))
    throw ParameterError("LUT value " + std::to_string(value) +
                         " does not fit the int16 fixed-point range");
  entries_[cell * static_cast<std::size_t>(c_out_) + ch] =
      static_cast<std::int16_t>(scaled);
}

LutIndex quantize_index(std::span<const double, 4> pixels) {
  LutIndex index;
  for (std::size_t i = 0; i < 4; ++i) {
    const double clamped = std::clamp(pixels[i], 0.0, 1.0);
    const int v = static_cast<int>(std::lround(clamped * 255.0));
    index.corner[i] = v >> kLutBits;
    index.fraction[i] = v & ((1 << kLutBits) - 1);
  }
  return index;
}

SimplexCorners simplex_corners(const LutIndex& index) noexcept {
  // Visit axes by descending fraction; ties keep the axis order so the
  // result is deterministic.
  std::array<int, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return index.fraction[a] > index.fraction[b];
  });

  SimplexCorners out;
  std::array<int, 4> pos = index.corner;
  out.cell[0] = LutTable::cell(pos[0], pos[1], pos[2], pos[3]);
  out.weight[0] = 16 - index.fraction[order[0]];
  for (int step = 0; step < 4; ++step) {
    pos[order[step]] += 1;
    out.cell[step + 1] = LutTable::cell(pos[0], pos[1], pos[2], pos[3]);
    const int next = step + 1 < 4 ? index.fraction[order[step + 1]] : 0;
    out.weight[step + 1] = index.fraction[order[step]] - next;
  }
  return out;
}

void simplex_interp(const LutTable& table, const LutIndex& index,
                    std::span<double> out) {
  const std::size_t c_out = static_cast<std::size_t>(table.c_out());
  if (table.entries().size() != kLutCells * c_out)
    throw FormatError("LUT table has " + std::to_string(table.entries().size()) +
                      " entries, expected " + std::to_string(kLutCells * c_out));
  const SimplexCorners corners = simplex_corners(index);
  const auto entries = table.entries();
  for (std::size_t ch = 0; ch < c_out; ++ch) {
    // Integer accumulation keeps the result independent of summation order.
    std::int64_t acc = 0;
    for (std::size_t k = 0; k < 5; ++k)
      acc += static_cast<std::int64_t>(corners.weight[k]) *
             entries[corners.cell[k] * c_out + ch];
    out[ch] = static_cast<double>(acc) / (16.0 * kLutFixedPointScale);
  }
}

void LutBank::validate() const {
  const int expected = KernelFamily{family}.hyperparam_count();
  if (expected == 0)
    throw ConfigurationError("LUT bank family must be adaptive");
  if (f_tables.empty()) throw ConfigurationError("LUT bank has no f tables");
  for (const LutTable& t : f_tables) {
    if (t.c_out() != expected)
      throw ConfigurationError("LUT bank for " + KernelFamily{family}.name() +
                               " requires c_out=" + std::to_string(expected) +
                               ", table " + to_string(t.pattern()) + " has c_out=" +
                               std::to_string(t.c_out()));
    if (t.entries().size() != kLutCells * static_cast<std::size_t>(t.c_out()))
      throw ConfigurationError("LUT table has the wrong number of entries");
  }
  for (const LutTable& t : g_tables) {
    if (t.c_out() != 1)
      throw ConfigurationError("enhancer tables must have c_out=1");
    if (t.entries().size() != kLutCells)
      throw ConfigurationError("LUT table has the wrong number of entries");
  }
  if (f_tables.size() > 255 || g_tables.size() > 255)
    throw ConfigurationError("too many LUT tables");
}

ImageBuffer lut_input_plane(const ImageBuffer& img) { return luma_plane(img); }

HyperParamMap predict_hyperparams(const ImageBuffer& img, const LutBank& bank) {
  bank.validate();
  const ImageBuffer plane = lut_input_plane(img);
  HyperParamMap map(plane.height(), plane.width(), bank.family);
  const int channels = map.channels;
  const double table_count = static_cast<double>(bank.f_tables.size());

  parallel_rows(plane.height(), [&](int y0, int y1) {
    std::array<double, 3> acc{};
    std::array<double, 3> pred{};
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < plane.width(); ++x) {
        acc.fill(0.0);
        for (const LutTable& table : bank.f_tables) {
          table_prediction(table, bank.family, plane, 0, y, x,
                           std::span(pred.data(), static_cast<std::size_t>(channels)));
          for (int ch = 0; ch < channels; ++ch) acc[ch] += pred[ch];
        }
        double* dst = map.values.data() + map.offset(y, x);
        if (bank.family == KernelKind::kAnisoGaussian) {
          const GaussianParams p = clamp_hyperparams(GaussianParams{
              acc[0] / table_count, acc[1] / table_count, acc[2] / table_count});
          dst[0] = p.rho;
          dst[1] = p.inv_sigma_x;
          dst[2] = p.inv_sigma_y;
        } else {
          dst[0] = clamp_hyperparams(acc[0] / table_count);
        }
      }
    }
  });
  return map;
}

ImageBuffer apply_g_enhancer(const ImageBuffer& img, const LutBank& bank) {
  if (!bank.has_enhancer())
    throw ConfigurationError("LUT bank has no enhancer (g) tables");
  bank.validate();
  ImageBuffer out = img;
  out.set_depth(BitDepth::kFloat);
  const double table_count = static_cast<double>(bank.g_tables.size());
  for (int c = 0; c < img.channels(); ++c) {
    parallel_rows(img.height(), [&](int y0, int y1) {
      std::array<double, 3> pred{};
      for (int y = y0; y < y1; ++y) {
        for (int x = 0; x < img.width(); ++x) {
          double residual = 0.0;
          for (const LutTable& table : bank.g_tables) {
            // Residuals are scalars, so quarter-turn tables need no remap.
            table_prediction(table, KernelKind::kAmplifiedLinear, img, c, y, x,
                             std::span(pred.data(), 1));
            residual += pred[0];
          }
          out.at(c, y, x) = std::clamp(img.at(c, y, x) + residual / table_count, 0.0, 1.0);
        }
      }
    });
  }
  return out;
}

std::vector<std::uint8_t> serialize_lut_bank(const LutBank& bank) {
  bank.validate();
  std::vector<std::uint8_t> bytes;
  std::size_t total = kHeaderSize;
  for (const auto* tables : {&bank.f_tables, &bank.g_tables})
    for (const LutTable& t : *tables) total += kTableHeaderSize + t.entries().size() * 2;
  bytes.reserve(total);

  bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
  bytes.push_back(static_cast<std::uint8_t>(kVersion & 0xff));
  bytes.push_back(static_cast<std::uint8_t>(kVersion >> 8));
  bytes.push_back(family_code(bank.family));
  bytes.push_back(static_cast<std::uint8_t>(kLutBits));
  bytes.push_back(static_cast<std::uint8_t>(bank.f_tables.size()));
  bytes.push_back(static_cast<std::uint8_t>(bank.g_tables.size()));
  for (const auto* tables : {&bank.f_tables, &bank.g_tables}) {
    for (const LutTable& t : *tables) {
      bytes.push_back(static_cast<std::uint8_t>(t.pattern()));
      bytes.push_back(static_cast<std::uint8_t>(t.role()));
      bytes.push_back(static_cast<std::uint8_t>(t.c_out()));
      bytes.push_back(0);
      for (std::int16_t v : t.entries()) {
        const auto u = static_cast<std::uint16_t>(v);
        bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
        bytes.push_back(static_cast<std::uint8_t>(u >> 8));
      }
    }
  }
  return bytes;
}

LutBank deserialize_lut_bank(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  for (char expected : kMagic) {
    const std::size_t at = in.offset();
    if (in.u8("magic") != static_cast<std::uint8_t>(expected))
      throw FormatError("LUT bank: bad magic at offset " + std::to_string(at));
  }
  {
    const std::size_t at = in.offset();
    const std::uint16_t version = in.u16("version");
    if (version != kVersion)
      throw FormatError("LUT bank: unsupported version " + std::to_string(version) +
                        " at offset " + std::to_string(at));
  }
  LutBank bank;
  {
    const std::size_t at = in.offset();
    const std::uint8_t code = in.u8("family");
    if (code == 1) {
      bank.family = KernelKind::kAmplifiedLinear;
    } else if (code == 2) {
      bank.family = KernelKind::kAnisoGaussian;
    } else {
      throw FormatError("LUT bank: unknown family code " + std::to_string(code) +
                        " at offset " + std::to_string(at));
    }
  }
  {
    const std::size_t at = in.offset();
    const std::uint8_t bits = in.u8("bits");
    if (bits != kLutBits)
      throw FormatError("LUT bank: unsupported index bits " + std::to_string(bits) +
                        " at offset " + std::to_string(at));
  }
  const int f_count = in.u8("f table count");
  const int g_count = in.u8("g table count");

  auto read_table = [&]() {
    const std::size_t at = in.offset();
    const std::uint8_t pattern = in.u8("table pattern");
    const std::uint8_t role = in.u8("table role");
    const std::uint8_t c_out = in.u8("table c_out");
    (void)in.u8("table reserved byte");
    if (pattern > 2)
      throw FormatError("LUT bank: bad pattern code " + std::to_string(pattern) +
                        " at offset " + std::to_string(at));
    if (role > 1)
      throw FormatError("LUT bank: bad rotation role " + std::to_string(role) +
                        " at offset " + std::to_string(at + 1));
    if (c_out != 1 && c_out != 3)
      throw FormatError("LUT bank: bad c_out " + std::to_string(c_out) +
                        " at offset " + std::to_string(at + 2));
    std::vector<std::int16_t> entries(kLutCells * c_out);
    in.int16s(entries, "table entries");
    return LutTable(static_cast<PatternName>(pattern), static_cast<RotationRole>(role),
                    c_out, std::move(entries));
  };
  for (int i = 0; i < f_count; ++i) bank.f_tables.push_back(read_table());
  for (int i = 0; i < g_count; ++i) bank.g_tables.push_back(read_table());
  if (!in.at_end())
    throw FormatError("LUT bank: trailing bytes at offset " + std::to_string(in.offset()));
  bank.validate();
  return bank;
}

void save_lut_bank(const LutBank& bank, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize_lut_bank(bank);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write LUT bank '" + path.string() + "'");
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing LUT bank '" + path.string() + "'");
}

LutBank load_lut_bank(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open LUT bank '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                        std::istreambuf_iterator<char>());
  try {
    return deserialize_lut_bank(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  } catch (const ConfigurationError& e) {
    throw ConfigurationError(path.string() + ": " + e.what());
  }
}

std::uint64_t bank_fingerprint(const LutBank& bank) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : serialize_lut_bank(bank)) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace lerf
