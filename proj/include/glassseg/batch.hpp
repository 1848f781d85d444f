#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "glassseg/maskops.hpp"

namespace glassseg {

struct FileError {
  std::filesystem::path file;
  std::string message;
};

struct BatchSummary {
  std::size_t processed = 0;
  std::vector<FileError> errors;
};

struct DecomposeOptions {
  int t_in = 5;
  int t_ex = 5;
  GaussianParams gaussian;
};

/// Decomposes every `*.png` mask in `mask_dir` and writes, for `name.png`,
/// `name.{real,in,ex,b,body}.png` plus `name.win.f32` and `name.wex.f32`
/// into `out_dir`. Bad files are recorded and skipped.
BatchSummary batch_decompose(const std::filesystem::path& mask_dir,
                             const std::filesystem::path& out_dir,
                             const DecomposeOptions& options);

}  // namespace glassseg
