#include "glassseg/data.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <opencv2/imgproc.hpp>

#include "glassseg/io.hpp"

namespace glassseg {

std::string to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "train";
}

Split parse_split(const std::string& text) {
  if (text == "train") return Split::train;
  if (text == "val") return Split::val;
  if (text == "test") return Split::test;
  throw std::invalid_argument("unknown split '" + text +
                              "' (expected train, val or test)");
}

namespace {

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::map<std::string, std::string> read_categories(const fs::path& tsv) {
  std::map<std::string, std::string> out;
  std::ifstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    if (line.empty() || tab == std::string::npos) continue;
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

DatasetLoad load_with_categories(
    const fs::path& dir, const std::map<std::string, std::string>& categories) {
  DatasetLoad load;
  const fs::path image_dir = dir / "images";
  const fs::path mask_dir = dir / "masks";
  if (!fs::is_directory(image_dir)) {
    load.warnings.push_back(image_dir.string() + " does not exist");
    return load;
  }
  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(image_dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      images.push_back(entry.path());
    }
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) {
    load.warnings.push_back(image_dir.string() + " holds no images");
  }

  for (const auto& image_path : images) {
    const fs::path mask_path = mask_dir / (image_path.stem().string() + ".png");
    try {
      if (!fs::exists(mask_path)) {
        throw FormatError("missing mask " + mask_path.string());
      }
      RgbImage image = read_image(image_path);
      BinaryMask mask = read_mask_png(mask_path);
      if (image.height() != mask.height() || image.width() != mask.width()) {
        throw ShapeMismatch("image is " + std::to_string(image.height()) +
                            "x" + std::to_string(image.width()) +
                            " but mask is " + std::to_string(mask.height()) +
                            "x" + std::to_string(mask.width()));
      }
      RawSample s{image_path.filename().string(), std::move(image),
                  std::move(mask), std::nullopt};
      if (auto it = categories.find(s.name); it != categories.end()) {
        s.category = it->second;
      }
      load.items.push_back(std::move(s));
    } catch (const std::exception& e) {
      load.errors.push_back({image_path, e.what()});
    }
  }
  return load;
}

}  // namespace

DatasetLoad load_split_dir(const fs::path& dir) {
  return load_with_categories(dir, read_categories(dir / "categories.tsv"));
}

DatasetLoad load_dataset(const fs::path& root, Split split) {
  const fs::path dir = root / to_string(split);
  auto categories = read_categories(root / "categories.tsv");
  if (categories.empty()) categories = read_categories(dir / "categories.tsv");
  return load_with_categories(dir, categories);
}

void AugmentSpec::validate() const {
  if (target_size <= 0 || target_size % 32 != 0) {
    throw std::invalid_argument("target size must be a positive multiple of "
                                "32, got " + std::to_string(target_size));
  }
  if (!(hflip_prob >= 0.0 && hflip_prob <= 1.0)) {
    throw std::invalid_argument("hflip probability must lie in [0,1]");
  }
}

RgbImage hflip(const RgbImage& image) {
  RgbImage out(image.height(), image.width());
  const int w = image.width();
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < image.height(); ++y) {
      for (int x = 0; x < w; ++x) out.at(c, y, x) = image.at(c, y, w - 1 - x);
    }
  }
  return out;
}

BinaryMask hflip(const BinaryMask& mask) {
  BinaryMask out(mask.height(), mask.width());
  const int w = mask.width();
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < w; ++x) out.set(y, x, mask(y, w - 1 - x));
  }
  return out;
}

namespace {

RgbImage resize_bilinear(const RgbImage& image, int size) {
  if (image.height() == size && image.width() == size) return image;
  RgbImage out(size, size);
  for (int c = 0; c < 3; ++c) {
    cv::Mat src(image.height(), image.width(), CV_32FC1,
                const_cast<float*>(image.values().data()) +
                    static_cast<std::size_t>(c) * image.height() * image.width());
    cv::Mat dst(size, size, CV_32FC1,
                out.values().data() + static_cast<std::size_t>(c) * size * size);
    cv::resize(src, dst, dst.size(), 0, 0, cv::INTER_LINEAR);
  }
  return out;
}

BinaryMask resize_nearest(const BinaryMask& mask, int size) {
  if (mask.height() == size && mask.width() == size) return mask;
  cv::Mat src(mask.height(), mask.width(), CV_8UC1,
              const_cast<std::uint8_t*>(mask.values().data()));
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(size, size), 0, 0, cv::INTER_NEAREST_EXACT);
  return BinaryMask::from_values(size, size,
                                 std::span<const std::uint8_t>(dst.data, dst.total()));
}

}  // namespace

Augmented augment(const RgbImage& image, const BinaryMask& mask,
                  const AugmentSpec& spec) {
  spec.validate();
  if (image.height() != mask.height() || image.width() != mask.width()) {
    throw ShapeMismatch("augment: image and mask differ in size");
  }
  std::mt19937_64 rng(spec.seed);
  const double u = double(rng() >> 11) * 0x1.0p-53;
  const bool flip = u < spec.hflip_prob;

  Augmented out{resize_bilinear(image, spec.target_size),
                resize_nearest(mask, spec.target_size), flip};
  if (flip) {
    out.image = hflip(out.image);
    out.mask = hflip(out.mask);
  }
  return out;
}

Sample make_sample(const RawSample& raw, const AugmentSpec& spec,
                   const DecomposeOptions& options) {
  Augmented aug = augment(raw.image, raw.mask, spec);
  RegionDecomposition regions = decompose(aug.mask, options.t_in, options.t_ex);
  ContourWeights weights = contour_weights(regions, options.gaussian);
  return Sample{raw.name,          std::move(aug.image),
                std::move(regions), std::move(weights.internal),
                std::move(weights.external), raw.category};
}

}  // namespace glassseg
