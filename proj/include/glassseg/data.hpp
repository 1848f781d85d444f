#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "glassseg/batch.hpp"
#include "glassseg/image.hpp"
#include "glassseg/maskops.hpp"

namespace glassseg {

enum class Split { train, val, test };

std::string to_string(Split split);
Split parse_split(const std::string& text);

struct RawSample {
  std::string name;
  RgbImage image;
  BinaryMask mask;
  std::optional<std::string> category;
};

struct DatasetLoad {
  std::vector<RawSample> items;
  std::vector<FileError> errors;
  std::vector<std::string> warnings;
};

/// Reads `root/<split>/images/*.{jpg,png}` with masks from
/// `root/<split>/masks/<stem>.png` in lexicographic order. Categories come
/// from `root/categories.tsv` (falling back to `root/<split>/categories.tsv`),
/// one `filename<TAB>category` per line. Broken items are listed and skipped.
DatasetLoad load_dataset(const std::filesystem::path& root, Split split);

/// Same as load_dataset for a single directory holding images/ and masks/.
DatasetLoad load_split_dir(const std::filesystem::path& dir);

struct AugmentSpec {
  int target_size = 512;
  double hflip_prob = 0.5;
  std::uint64_t seed = 0;

  /// Throws unless target_size is a positive multiple of 32 and hflip_prob
  /// lies in [0,1].
  void validate() const;
};

struct Augmented {
  RgbImage image;
  BinaryMask mask;
  bool flipped = false;
};

/// Bilinear resize of the image and nearest-neighbour resize of the mask to
/// target_size², then a horizontal flip of both with probability hflip_prob
/// drawn from `seed`.
Augmented augment(const RgbImage& image, const BinaryMask& mask,
                  const AugmentSpec& spec);

RgbImage hflip(const RgbImage& image);
BinaryMask hflip(const BinaryMask& mask);

struct Sample {
  std::string name;
  RgbImage image;
  RegionDecomposition regions;
  WeightMap w_in;
  WeightMap w_ex;
  std::optional<std::string> category;
};

/// Augments, then derives the regions and contour weights from the
/// augmented mask so the bands live in final pixel space.
Sample make_sample(const RawSample& raw, const AugmentSpec& spec,
                   const DecomposeOptions& regions);

}  // namespace glassseg
