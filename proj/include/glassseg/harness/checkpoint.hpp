#pragma once

#include <filesystem>
#include <optional>

#include <json.hpp>
#include <torch/torch.h>

#include "glassseg/nn/network.hpp"

namespace glassseg::harness {

inline constexpr std::int64_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A checkpoint is one torch archive holding:
//   "model"      weights and buffers under hierarchical module names
//   "config"     JSON text {version, network: {...}, train: {...}, step}
//   "version"    integer format version
//   "optimizer"  optional SGD state for resuming
struct CheckpointMeta {
  nn::NetworkConfig network;
  nlohmann::json train = nlohmann::json::object();
  std::int64_t step = 0;
};

void save_checkpoint(const std::filesystem::path& path, nn::GlassNet& model,
                     const CheckpointMeta& meta,
                     torch::optim::Optimizer* optimizer = nullptr);

struct LoadedCheckpoint {
  nn::GlassNet model{nullptr};
  CheckpointMeta meta;
};

/// Rebuilds the network described by the checkpoint and loads its weights.
/// When `expected` is given, a differing network config is an error.
LoadedCheckpoint load_checkpoint(
    const std::filesystem::path& path,
    const std::optional<nn::NetworkConfig>& expected = std::nullopt);

/// Restores optimizer state; false when the checkpoint carries none.
bool load_optimizer_state(const std::filesystem::path& path,
                          torch::optim::Optimizer& optimizer);

}  // namespace glassseg::harness
