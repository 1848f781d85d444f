#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "glassseg/data.hpp"
#include "glassseg/harness/config.hpp"
#include "glassseg/metrics.hpp"
#include "glassseg/nn/losses.hpp"
#include "glassseg/nn/network.hpp"

namespace glassseg::harness {

class NonFiniteLoss : public std::runtime_error {
 public:
  NonFiniteLoss(const std::string& what, std::int64_t step,
                std::int64_t batch_index)
      : std::runtime_error(what), step(step), batch_index(batch_index) {}
  std::int64_t step;
  std::int64_t batch_index;
};

struct StepLog {
  std::int64_t step = 0;
  double lr = 0.0;
  nn::LossValues loss;
};

struct EpochEval {
  int epoch = 0;
  MetricsReport report;
};

struct RunRecord {
  nlohmann::json config;
  std::vector<StepLog> steps;  // strictly increasing step numbers
  std::vector<EpochEval> validation;
  std::optional<std::filesystem::path> best_checkpoint;
  std::optional<std::filesystem::path> last_checkpoint;
  std::int64_t total_steps = 0;
  nn::GlassNet model{nullptr};
};

struct TrainContext {
  std::span<const RawSample> train;
  std::span<const RawSample> val;  // may be empty
  std::optional<std::filesystem::path> out_dir;
  // Continue from a checkpoint written by a run with the same config.
  std::optional<std::filesystem::path> resume;
  // Stop after this many global steps without changing the schedule.
  std::optional<std::int64_t> max_steps;
  std::ostream* log = nullptr;
};

/// Indices of the samples forming batch `batch` of `epoch`. Batches are
/// always full: the last one wraps around to the start of the permutation.
std::vector<std::size_t> batch_indices(const TrainConfig& cfg,
                                       std::size_t dataset_size, int epoch,
                                       std::int64_t batch);

/// Augmented samples of one batch, deterministic in (seed, epoch, batch).
std::vector<Sample> make_batch(const TrainConfig& cfg,
                               std::span<const RawSample> data, int epoch,
                               std::int64_t batch);

/// SGD with poly decay over the joint loss. Writes `loss.csv`, `last.ckpt`
/// and (when a validation set is given) `best.ckpt` into out_dir.
RunRecord train(const TrainConfig& cfg, const TrainContext& ctx);

/// Evaluates at cfg-free standard resolution `target_size` (no flip).
MetricsReport evaluate_model(nn::GlassNet& model, std::span<const RawSample> data,
                             int target_size, double threshold);

/// Loads a checkpoint and evaluates it; target size comes from the
/// checkpoint's training config.
MetricsReport evaluate(const std::filesystem::path& checkpoint,
                       std::span<const RawSample> data, double threshold,
                       const std::optional<nn::NetworkConfig>& expected = {});

enum class SweepAxis { boundary_mode, loss_variant, thickness };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepRow {
  std::string setting;
  TrainConfig config;
  std::optional<MetricsReport> report;
  std::string error;  // non-empty when the run failed
};

/// Settings visited along an axis: in_only/ex_only/in_ex, bce/dice/contour,
/// or t_in = t_ex ∈ {3,...,7}.
std::vector<std::pair<std::string, TrainConfig>> sweep_settings(
    const TrainConfig& base, SweepAxis axis);

/// One training run per setting, each scored on ctx.val (or ctx.train when
/// no validation set is given). A failing run is recorded and skipped.
std::vector<SweepRow> ablation_sweep(const TrainConfig& base, SweepAxis axis,
                                     const TrainContext& ctx);

void write_sweep_csv(std::ostream& out, SweepAxis axis,
                     std::span<const SweepRow> rows);

}  // namespace glassseg::harness
