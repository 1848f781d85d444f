#pragma once

#include <string>
#include <vector>

#include <torch/torch.h>

#include "glassseg/nn/network.hpp"

namespace glassseg::nn {

inline constexpr double kDiceEpsilon = 1e-6;
inline constexpr double kLogClamp = 1e-12;

// All losses take logits shaped N×1×H×W (or 1×H×W) and targets of the same
// shape with values in {0,1}; the result is averaged over the batch.

/// 1 − 2Σpg / (Σp² + Σg² + eps) per sample, p = sigmoid(logits).
torch::Tensor dice_loss(const torch::Tensor& logits, const torch::Tensor& gt,
                        double eps = kDiceEpsilon);

/// −(1/HW) Σ M·[g·log p + (1−g)·log(1−p)], log clamped at 1e-12.
torch::Tensor contour_loss(const torch::Tensor& logits, const torch::Tensor& gt,
                           const torch::Tensor& weights);

/// contour_loss with unit weights.
torch::Tensor bce_loss(const torch::Tensor& logits, const torch::Tensor& gt);

// Loss used for the internal and external bands.
enum class LossVariant { contour, bce, dice };

std::string to_string(LossVariant v);
LossVariant parse_loss_variant(const std::string& text);

// Batched ground truth at input resolution, each N×1×H×W float.
struct RegionTargets {
  torch::Tensor boundary;
  torch::Tensor internal;
  torch::Tensor external;
  torch::Tensor body;
  torch::Tensor merged;
  torch::Tensor w_in;
  torch::Tensor w_ex;
};

struct LossValues {
  double l_b = 0, l_in = 0, l_ex = 0, l_body = 0, l_m = 0, total = 0;
};

struct LossBundle {
  torch::Tensor l_b, l_in, l_ex, l_body, l_m;
  torch::Tensor total;  // unweighted sum of the five terms

  LossValues values() const;
};

/// L_b = dice(boundary); L_in / L_ex per `variant` (contour by default);
/// L_body and L_m are binary cross-entropy.
LossBundle joint_loss(const IebamOutput& iebam, const FbamOutput& fbam,
                      const RegionTargets& targets,
                      LossVariant variant = LossVariant::contour);

}  // namespace glassseg::nn
