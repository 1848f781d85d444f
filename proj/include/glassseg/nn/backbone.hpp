#pragma once

#include <array>
#include <memory>
#include <string>

#include <torch/torch.h>

#include "glassseg/nn/layers.hpp"

namespace glassseg::nn {

// Multi-level features of one input batch. layer1 sits at stride 4; aspp
// and layer4 sit at the output stride.
struct FeaturePyramid {
  torch::Tensor layer1;
  torch::Tensor layer2;
  torch::Tensor layer3;
  torch::Tensor layer4;
  torch::Tensor aspp;
  int output_stride = 16;
};

/// Interface for feature extractors feeding the segmentation head. Any
/// backbone (including externally trained residual networks) plugs in by
/// producing a FeaturePyramid with the advertised channel widths.
class Backbone : public torch::nn::Module {
 public:
  virtual FeaturePyramid forward(const torch::Tensor& image) = 0;
  virtual std::array<int64_t, 4> layer_channels() const = 0;
  virtual int64_t aspp_channels() const = 0;
  virtual int output_stride() const = 0;
  virtual std::string id() const = 0;
};

class AsppImpl : public torch::nn::Module {
 public:
  AsppImpl(int64_t in_channels, int64_t out_channels,
           std::array<int64_t, 3> rates);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  ConvBnRelu pointwise_{nullptr};
  std::vector<ConvBnRelu> atrous_;
  ConvBnRelu image_pool_{nullptr};
  ConvBnRelu project_{nullptr};
};
TORCH_MODULE(Aspp);

struct ToyBackboneOptions {
  std::array<int64_t, 4> widths{16, 32, 64, 128};
  int64_t aspp_channels = 64;
  int output_stride = 16;
};

/// Four strided conv stages (strides 4/8/16/16 at OS 16, 4/8/8/8 at OS 8,
/// later stages dilated instead of strided) and a three-rate ASPP with
/// dilations 1/2/4 at OS 16 (doubled at OS 8).
class ToyBackbone : public Backbone {
 public:
  explicit ToyBackbone(const ToyBackboneOptions& options);

  FeaturePyramid forward(const torch::Tensor& image) override;
  std::array<int64_t, 4> layer_channels() const override {
    return options_.widths;
  }
  int64_t aspp_channels() const override { return options_.aspp_channels; }
  int output_stride() const override { return options_.output_stride; }
  std::string id() const override { return "toy"; }

 private:
  ToyBackboneOptions options_;
  torch::nn::Sequential stem_{nullptr};
  torch::nn::Sequential layer1_{nullptr};
  torch::nn::Sequential layer2_{nullptr};
  torch::nn::Sequential layer3_{nullptr};
  torch::nn::Sequential layer4_{nullptr};
  Aspp aspp_{nullptr};
};

/// Input spatial sizes must be divisible by this.
inline constexpr int64_t kInputDivisor = 32;

void check_input_size(const torch::Tensor& image);

}  // namespace glassseg::nn
