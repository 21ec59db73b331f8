#pragma once

#include <ebmforge/config.hpp>

#include <Eigen/Core>

#include <random>
#include <string>
#include <vector>

namespace ebmforge {

struct Dataset {
  std::vector<Eigen::VectorXd> points;
  std::vector<Eigen::VectorXd> modes;  // known centers (synthetic data only)
  long h = 0, w = 0;                   // raster layout, 0 when not an image
  long dim() const { return points.empty() ? 0 : points[0].size(); }
};

// K Gaussian blobs evenly spaced on a circle.
Dataset mixture2d(long modes, double radius, double sigma, long size, std::mt19937_64& rng);

// Two concentric rings (radius and radius/2) with radial noise sigma.
Dataset rings2d(double radius, double sigma, long size, std::mt19937_64& rng);

// Procedural 8x8 glyphs in [0,1]: ten fixed stroke patterns plus pixel
// noise; the clean glyphs are reported as modes.
Dataset synthetic_digits(double sigma, long size, std::mt19937_64& rng);

// IDX image file (big-endian magic 0x00000803, u32 dims, u8 pixels),
// scaled to [0,1]; downsample halves each side by average pooling.
Dataset load_idx(const std::string& path, bool downsample);

Dataset make_dataset(const ExperimentConfig& cfg, std::mt19937_64& rng);

}  // namespace ebmforge
