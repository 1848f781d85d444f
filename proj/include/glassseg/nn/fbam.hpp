#pragma once

#include <optional>
#include <string>

#include <torch/torch.h>

#include "glassseg/nn/attention.hpp"
#include "glassseg/nn/layers.hpp"

namespace glassseg::nn {

// Which boundary bands feed the fused enhancement feature.
enum class BoundaryMode { in_only, ex_only, in_ex };

std::string to_string(BoundaryMode mode);
BoundaryMode parse_boundary_mode(const std::string& text);

struct FbamOptions {
  int64_t channels = 32;
  int64_t reduction = 8;
  BoundaryMode mode = BoundaryMode::in_ex;
};

struct FbamOutput {
  torch::Tensor f_en;       // fused boundary feature
  torch::Tensor alpha;      // N × C × 1 × 1, weight of the internal band
  torch::Tensor refined_m;  // merged feature after query attention
  torch::Tensor p_m;        // logits

  /// 1 − alpha.
  torch::Tensor beta() const { return 1.0 - alpha; }
};

/// Fused boundary attention module.
///
///   mu    = g1(ReLU(BN(g1(GAP(g3(g3(f_in)))))))     no ReLU after the last 1×1
///   alpha = sigmoid(mu), beta = 1 − alpha           per channel
///   F_en  = g3(alpha·f_in + beta·f_ex)
///   m'    = gamma · softmax(Q(g3(g3(F_en))) · K(f_m)) · V(f_m) + f_m
///
/// in_only fixes alpha ≡ 1, ex_only fixes alpha ≡ 0.
class FbamImpl : public torch::nn::Module {
 public:
  explicit FbamImpl(const FbamOptions& options);

  FbamOutput forward(const torch::Tensor& f_in, const torch::Tensor& f_ex,
                     const torch::Tensor& f_m,
                     std::optional<std::array<int64_t, 2>> output_size = {});

  /// Gate logits mu for a given internal-band feature.
  torch::Tensor gate_logits(const torch::Tensor& f_in);

  BoundaryMode mode() const { return options_.mode; }
  void set_mode(BoundaryMode mode) { options_.mode = mode; }
  const FbamOptions& options() const { return options_; }

  ConvBnRelu gate_conv1{nullptr}, gate_conv2{nullptr};
  torch::nn::Conv2d gate_fc1{nullptr};
  torch::nn::BatchNorm2d gate_bn{nullptr};
  torch::nn::Conv2d gate_fc2{nullptr};
  ConvBnRelu fuse{nullptr};
  ConvBnRelu transfer1{nullptr}, transfer2{nullptr};
  SpatialAttention attention{nullptr};
  torch::nn::Conv2d head_m{nullptr};

 private:
  FbamOptions options_;
};
TORCH_MODULE(Fbam);

}  // namespace glassseg::nn
