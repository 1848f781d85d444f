#pragma once

#include <span>

#include <torch/torch.h>

#include "glassseg/data.hpp"
#include "glassseg/metrics.hpp"
#include "glassseg/nn/losses.hpp"
#include "glassseg/nn/network.hpp"

namespace glassseg::harness {

torch::Tensor image_tensor(const RgbImage& image);          // 3×H×W
torch::Tensor mask_tensor(const BinaryMask& mask);          // 1×H×W
torch::Tensor weight_tensor(const WeightMap& weights);      // 1×H×W

struct Batch {
  torch::Tensor images;  // N×3×H×W
  nn::RegionTargets targets;
};

Batch collate(std::span<const Sample> samples);

/// Sigmoid of the merged logits for one image, in eval mode without grad.
ProbabilityMap predict(nn::GlassNet& model, const RgbImage& image);

}  // namespace glassseg::harness
