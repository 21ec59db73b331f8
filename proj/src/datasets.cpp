#include <ebmforge/datasets.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace ebmforge {

namespace {

std::uint32_t read_be_u32(std::istream& is, const char* what) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error(std::string(what) + ": truncated header");
  return std::uint32_t(b[0]) << 24 | std::uint32_t(b[1]) << 16 | std::uint32_t(b[2]) << 8 |
         std::uint32_t(b[3]);
}

// 8x8 stroke patterns for the ten glyphs; rows as bitmasks (MSB = left).
const unsigned char kGlyphs[10][8] = {
    {0x3C, 0x42, 0x46, 0x4A, 0x52, 0x62, 0x42, 0x3C},  // 0
    {0x08, 0x18, 0x28, 0x08, 0x08, 0x08, 0x08, 0x3E},  // 1
    {0x3C, 0x42, 0x02, 0x0C, 0x30, 0x40, 0x40, 0x7E},  // 2
    {0x3C, 0x42, 0x02, 0x1C, 0x02, 0x02, 0x42, 0x3C},  // 3
    {0x04, 0x0C, 0x14, 0x24, 0x44, 0x7E, 0x04, 0x04},  // 4
    {0x7E, 0x40, 0x40, 0x7C, 0x02, 0x02, 0x42, 0x3C},  // 5
    {0x1C, 0x20, 0x40, 0x7C, 0x42, 0x42, 0x42, 0x3C},  // 6
    {0x7E, 0x02, 0x04, 0x08, 0x10, 0x10, 0x10, 0x10},  // 7
    {0x3C, 0x42, 0x42, 0x3C, 0x42, 0x42, 0x42, 0x3C},  // 8
    {0x3C, 0x42, 0x42, 0x3E, 0x02, 0x04, 0x08, 0x30},  // 9
};

Eigen::VectorXd glyph_vector(int digit) {
  Eigen::VectorXd v(64);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) v[r * 8 + c] = (kGlyphs[digit][r] >> (7 - c)) & 1 ? 1.0 : 0.0;
  return v;
}

}  // namespace

Dataset mixture2d(long modes, double radius, double sigma, long size, std::mt19937_64& rng) {
  if (modes < 1 || size < 1) throw std::invalid_argument("mixture2d: modes and size must be >= 1");
  Dataset d;
  for (long k = 0; k < modes; ++k) {
    double a = 2.0 * M_PI * double(k) / double(modes);
    d.modes.push_back(Eigen::Vector2d(radius * std::cos(a), radius * std::sin(a)));
  }
  std::uniform_int_distribution<long> pick(0, modes - 1);
  std::normal_distribution<double> nd(0.0, sigma);
  for (long i = 0; i < size; ++i) {
    Eigen::VectorXd x = d.modes[pick(rng)];
    x[0] += nd(rng);
    x[1] += nd(rng);
    d.points.push_back(x);
  }
  return d;
}

Dataset rings2d(double radius, double sigma, long size, std::mt19937_64& rng) {
  if (size < 1) throw std::invalid_argument("rings2d: size must be >= 1");
  Dataset d;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::normal_distribution<double> nd(0.0, sigma);
  std::bernoulli_distribution outer(0.5);
  for (long i = 0; i < size; ++i) {
    double r = (outer(rng) ? radius : radius / 2.0) + nd(rng);
    double a = angle(rng);
    d.points.push_back(Eigen::Vector2d(r * std::cos(a), r * std::sin(a)));
  }
  return d;
}

Dataset synthetic_digits(double sigma, long size, std::mt19937_64& rng) {
  if (size < 1) throw std::invalid_argument("synthetic_digits: size must be >= 1");
  Dataset d;
  d.h = d.w = 8;
  for (int g = 0; g < 10; ++g) d.modes.push_back(glyph_vector(g));
  std::uniform_int_distribution<int> pick(0, 9);
  std::normal_distribution<double> nd(0.0, sigma);
  for (long i = 0; i < size; ++i) {
    Eigen::VectorXd x = d.modes[pick(rng)];
    for (long j = 0; j < 64; ++j) x[j] = std::clamp(x[j] + nd(rng), 0.0, 1.0);
    d.points.push_back(x);
  }
  return d;
}

Dataset load_idx(const std::string& path, bool downsample) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_idx: cannot open " + path);
  std::uint32_t magic = read_be_u32(is, "load_idx");
  if (magic != 0x00000803u)
    throw std::runtime_error("load_idx: bad magic 0x" + [&] {
      char b[12];
      snprintf(b, sizeof(b), "%08x", magic);
      return std::string(b);
    }() + " (expected an IDX image file, 0x00000803)");
  long count = read_be_u32(is, "load_idx");
  long rows = read_be_u32(is, "load_idx");
  long cols = read_be_u32(is, "load_idx");
  Dataset d;
  std::vector<unsigned char> buf(rows * cols);
  for (long i = 0; i < count; ++i) {
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!is) throw std::runtime_error("load_idx: truncated payload at image " + std::to_string(i));
    Eigen::VectorXd x(rows * cols);
    for (long j = 0; j < rows * cols; ++j) x[j] = double(buf[j]) / 255.0;
    if (downsample) {
      if (rows % 2 || cols % 2)
        throw std::runtime_error("load_idx: downsample needs even image sides");
      long hr = rows / 2, hc = cols / 2;
      Eigen::VectorXd y(hr * hc);
      for (long r = 0; r < hr; ++r)
        for (long c = 0; c < hc; ++c)
          y[r * hc + c] = 0.25 * (x[2 * r * cols + 2 * c] + x[2 * r * cols + 2 * c + 1] +
                                  x[(2 * r + 1) * cols + 2 * c] + x[(2 * r + 1) * cols + 2 * c + 1]);
      x = y;
    }
    d.points.push_back(std::move(x));
  }
  d.h = downsample ? rows / 2 : rows;
  d.w = downsample ? cols / 2 : cols;
  return d;
}

Dataset make_dataset(const ExperimentConfig& cfg, std::mt19937_64& rng) {
  if (cfg.dataset_variant == "mixture2d")
    return mixture2d(cfg.dataset_modes, cfg.dataset_radius, cfg.dataset_sigma, cfg.dataset_size,
                     rng);
  if (cfg.dataset_variant == "rings2d")
    return rings2d(cfg.dataset_radius, cfg.dataset_sigma, cfg.dataset_size, rng);
  if (cfg.dataset_variant == "synthetic_digits")
    return synthetic_digits(cfg.dataset_sigma, cfg.dataset_size, rng);
  if (cfg.dataset_variant == "idx_file") return load_idx(cfg.dataset_path, cfg.dataset_downsample);
  throw std::invalid_argument("make_dataset: unknown variant " + cfg.dataset_variant);
}

}  // namespace ebmforge
