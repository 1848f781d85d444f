#include "glassseg/batch.hpp"

#include <algorithm>

#include "glassseg/io.hpp"

namespace glassseg {

BatchSummary batch_decompose(const fs::path& mask_dir, const fs::path& out_dir,
                             const DecomposeOptions& options) {
  if (!fs::is_directory(mask_dir)) {
    throw FormatError(mask_dir.string() + " is not a directory");
  }
  fs::create_directories(out_dir);

  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(mask_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());

  BatchSummary summary;
  for (const auto& input : inputs) {
    try {
      const BinaryMask mask = read_mask_png(input);
      const auto regions = decompose(mask, options.t_in, options.t_ex);
      const auto weights = contour_weights(regions, options.gaussian);
      const std::string stem = input.stem().string();
      auto out = [&](const char* suffix) { return out_dir / (stem + suffix); };
      write_mask_png(out(".real.png"), regions.real_boundary);
      write_mask_png(out(".in.png"), regions.internal);
      write_mask_png(out(".ex.png"), regions.external);
      write_mask_png(out(".b.png"), regions.boundary);
      write_mask_png(out(".body.png"), regions.body);
      write_weight_map_f32(out(".win.f32"), weights.internal);
      write_weight_map_f32(out(".wex.f32"), weights.external);
      ++summary.processed;
    } catch (const std::exception& e) {
      summary.errors.push_back({input, e.what()});
    }
  }
  return summary;
}

}  // namespace glassseg
