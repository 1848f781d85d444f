#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "glassseg/batch.hpp"
#include "glassseg/nn/losses.hpp"
#include "glassseg/nn/network.hpp"
#include "glassseg/synth.hpp"

namespace glassseg {

void to_json(nlohmann::json& j, const SynthSpec& s);
void from_json(const nlohmann::json& j, SynthSpec& s);

}  // namespace glassseg

namespace glassseg::harness {

struct TrainConfig {
  double lr0 = 0.01;
  double momentum = 0.9;
  double poly_power = 0.9;
  int epochs = 16;
  int batch_size = 4;
  int target_size = 512;
  double hflip_prob = 0.5;
  int t_in = 5;
  int t_ex = 5;
  double gauss_sigma = 3.0;
  int gauss_kernel = 9;
  nn::LossVariant loss_variant = nn::LossVariant::contour;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  // Validate every N epochs (0: only after the last epoch).
  int eval_every = 1;
  // output_stride, widths and ablation mode live here.
  nn::NetworkConfig network;

  /// Throws std::invalid_argument on any out-of-range field.
  void validate() const;

  DecomposeOptions decompose_options() const {
    return {t_in, t_ex, GaussianParams{gauss_sigma, gauss_kernel}};
  }

  bool operator==(const TrainConfig&) const = default;
};

/// Named hyper-parameter sets:
///   "paper_main"     lr 0.01, poly 0.9, momentum 0.9, 16 epochs, 512²
///   "paper_ablation" half learning rate, batch 8, 40 epochs
///   "toy"            128² synthetic fixtures, batch 4
TrainConfig preset(const std::string& name);

void to_json(nlohmann::json& j, const TrainConfig& c);
/// Missing fields keep their defaults; a "preset" key selects the base.
void from_json(const nlohmann::json& j, TrainConfig& c);

/// lr0 · (1 − step/total_steps)^poly_power for 0 ≤ step ≤ total_steps.
double lr_schedule(std::int64_t step, std::int64_t total_steps,
                   const TrainConfig& cfg);

/// epochs × ceil(dataset_size / batch_size).
std::int64_t total_steps(const TrainConfig& cfg, std::size_t dataset_size);

// Where samples come from: a dataset directory or the synthetic generator.
struct DataSpec {
  std::optional<std::string> root;
  std::string train_split = "train";
  std::string val_split = "val";
  std::optional<SynthSpec> synthetic_train;
  std::optional<SynthSpec> synthetic_val;
};

void to_json(nlohmann::json& j, const DataSpec& d);
void from_json(const nlohmann::json& j, DataSpec& d);

// Top-level document accepted by `train --config` and `sweep --config`.
struct RunSpec {
  TrainConfig train;
  DataSpec data;
  std::optional<std::string> out_dir;
};

RunSpec load_run_spec(const std::string& path);
RunSpec parse_run_spec(const nlohmann::json& j);

}  // namespace glassseg::harness
