#pragma once

#include <torch/torch.h>

namespace glassseg::nn {

struct ConvBnReluOptions {
  int64_t in_channels = 0;
  int64_t out_channels = 0;
  int64_t kernel_size = 3;
  int64_t stride = 1;
  int64_t dilation = 1;
  bool relu = true;
};

// conv (no bias) → BN → optional ReLU, "same" padding.
class ConvBnReluImpl : public torch::nn::Module {
 public:
  explicit ConvBnReluImpl(const ConvBnReluOptions& options);
  torch::Tensor forward(const torch::Tensor& x);

  torch::nn::Conv2d conv{nullptr};
  torch::nn::BatchNorm2d bn{nullptr};

 private:
  bool relu_;
};
TORCH_MODULE(ConvBnRelu);

inline ConvBnRelu conv_bn_relu(int64_t in, int64_t out, int64_t kernel = 3,
                               int64_t stride = 1, int64_t dilation = 1) {
  return ConvBnRelu(ConvBnReluOptions{in, out, kernel, stride, dilation, true});
}

/// 1×1 prediction head with bias.
torch::nn::Conv2d logit_head(int64_t in_channels);

/// Bilinear resize (align_corners = false); returns `x` untouched when the
/// size already matches.
torch::Tensor resize_to(const torch::Tensor& x, at::IntArrayRef hw);

}  // namespace glassseg::nn
