#pragma once

#include <optional>

#include <torch/torch.h>

#include "glassseg/nn/attention.hpp"
#include "glassseg/nn/layers.hpp"

namespace glassseg::nn {

struct IebamOptions {
  int64_t input_channels = 32;  // must equal `channels` (residual subtraction)
  int64_t low_channels = 32;
  int64_t high_channels = 32;
  int64_t channels = 32;
  int64_t reduction = 8;
};

// Feature maps share the working (f_low) resolution; logits are 1-channel.
class IebamOutput {
 public:
  IebamOutput(torch::Tensor f_b, torch::Tensor f_in, torch::Tensor f_ex,
              torch::Tensor f_body, torch::Tensor p_b, torch::Tensor p_in,
              torch::Tensor p_ex, torch::Tensor p_body);

  torch::Tensor f_b, f_in, f_ex, f_body;
  torch::Tensor f_m;  // f_body + f_in, computed here
  torch::Tensor p_b, p_in, p_ex, p_body;
};

// One boundary band (internal or external): two 3×3 projections of
// [F'_b; f_low] feed attention (queries from the first, keys and values from
// the second), then a 3×3 refinement.
class BoundaryBranchImpl : public torch::nn::Module {
 public:
  BoundaryBranchImpl(int64_t in_channels, int64_t channels, int64_t reduction);
  torch::Tensor forward(const torch::Tensor& boundary_and_low);

  ConvBnRelu query_source{nullptr};
  ConvBnRelu context_source{nullptr};
  SpatialAttention attention{nullptr};
  ConvBnRelu refine{nullptr};
};
TORCH_MODULE(BoundaryBranch);

/// Internal–external boundary attention module.
///
///   F'_b    = g([f_input; f_low])
///   F'_in   = g(attn(g([F'_b; f_low]); g([F'_b; f_low])))   own weights for F'_ex
///   F'_body = g([f_high; f_input − F'_in])
///   F'_m    = F'_body + F'_in
///
/// f_input and f_high are bilinearly resized to f_low's spatial size.
class IebamImpl : public torch::nn::Module {
 public:
  explicit IebamImpl(const IebamOptions& options);

  /// `output_size`, when given, is the size logits are upsampled to.
  IebamOutput forward(const torch::Tensor& f_input, const torch::Tensor& f_low,
                      const torch::Tensor& f_high,
                      std::optional<std::array<int64_t, 2>> output_size = {});

  const IebamOptions& options() const { return options_; }

  ConvBnRelu boundary{nullptr};
  BoundaryBranch internal{nullptr};
  BoundaryBranch external{nullptr};
  ConvBnRelu body{nullptr};
  torch::nn::Conv2d head_b{nullptr}, head_in{nullptr}, head_ex{nullptr},
      head_body{nullptr};

 private:
  IebamOptions options_;
};
TORCH_MODULE(Iebam);

}  // namespace glassseg::nn
