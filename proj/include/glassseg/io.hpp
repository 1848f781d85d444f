#pragma once

#include <filesystem>

#include "glassseg/image.hpp"
#include "glassseg/mask.hpp"
#include "glassseg/metrics.hpp"

namespace glassseg {

namespace fs = std::filesystem;

// Raised for unreadable files or files whose content violates the format.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an 8-bit single-channel mask where 0 is background and 255 is
/// foreground. Any other value is rejected.
BinaryMask read_mask_png(const fs::path& path);
void write_mask_png(const fs::path& path, const BinaryMask& mask);

/// Reads a colour or grayscale image into [0,1] RGB.
RgbImage read_image(const fs::path& path);
void write_image(const fs::path& path, const RgbImage& image);

/// 8-bit single-channel image divided by 255.
ProbabilityMap read_probability_png(const fs::path& path);
void write_probability_png(const fs::path& path, const ProbabilityMap& prob);

// Raw weight-map file: uint32 LE height, uint32 LE width, then H*W float32 LE
// values in row-major order.
void write_weight_map_f32(const fs::path& path, const WeightMap& map);
Grid<float> read_weight_map_f32(const fs::path& path);

}  // namespace glassseg
