#include "glassseg/nn/backbone.hpp"

namespace glassseg::nn {

AsppImpl::AsppImpl(int64_t in_channels, int64_t out_channels,
                   std::array<int64_t, 3> rates) {
  pointwise_ = register_module("pointwise",
                               conv_bn_relu(in_channels, out_channels, 1));
  for (std::size_t i = 0; i < rates.size(); ++i) {
    atrous_.push_back(register_module(
        "atrous" + std::to_string(i),
        conv_bn_relu(in_channels, out_channels, 3, 1, rates[i])));
  }
  image_pool_ = register_module("image_pool",
                                conv_bn_relu(in_channels, out_channels, 1));
  project_ = register_module("project",
                             conv_bn_relu(out_channels * 5, out_channels, 1));
}

torch::Tensor AsppImpl::forward(const torch::Tensor& x) {
  std::vector<torch::Tensor> branches{pointwise_(x)};
  for (auto& a : atrous_) branches.push_back(a(x));
  auto pooled = image_pool_(torch::adaptive_avg_pool2d(x, {1, 1}));
  branches.push_back(pooled.expand({-1, -1, x.size(2), x.size(3)}));
  return project_(torch::cat(branches, 1));
}

namespace {

torch::nn::Sequential stage(int64_t in, int64_t out, int64_t stride,
                            int64_t dilation) {
  return torch::nn::Sequential(conv_bn_relu(in, out, 3, stride, dilation),
                               conv_bn_relu(out, out, 3, 1, dilation));
}

}  // namespace

ToyBackbone::ToyBackbone(const ToyBackboneOptions& o) : options_(o) {
  if (o.output_stride != 8 && o.output_stride != 16) {
    throw std::invalid_argument("output stride must be 8 or 16, got " +
                                std::to_string(o.output_stride));
  }
  for (auto w : o.widths) {
    if (w <= 0) throw std::invalid_argument("backbone widths must be > 0");
  }
  const auto [w1, w2, w3, w4] = o.widths;
  const bool os8 = o.output_stride == 8;
  stem_ = register_module("stem", torch::nn::Sequential(
                                      conv_bn_relu(3, w1, 3, 2)));
  layer1_ = register_module("layer1", stage(w1, w1, 2, 1));
  layer2_ = register_module("layer2", stage(w1, w2, 2, 1));
  layer3_ = register_module("layer3", stage(w2, w3, os8 ? 1 : 2, os8 ? 2 : 1));
  layer4_ = register_module("layer4", stage(w3, w4, 1, os8 ? 4 : 2));
  const std::array<int64_t, 3> rates =
      os8 ? std::array<int64_t, 3>{2, 4, 8} : std::array<int64_t, 3>{1, 2, 4};
  aspp_ = register_module("aspp", Aspp(w4, o.aspp_channels, rates));
}

void check_input_size(const torch::Tensor& image) {
  if (image.dim() != 4 || image.size(1) != 3) {
    throw std::invalid_argument("expected an N×3×H×W image batch");
  }
  if (image.size(2) % kInputDivisor != 0 || image.size(3) % kInputDivisor != 0) {
    throw std::invalid_argument(
        "input height and width must be divisible by " +
        std::to_string(kInputDivisor) + ", got " +
        std::to_string(image.size(2)) + "x" + std::to_string(image.size(3)));
  }
}

FeaturePyramid ToyBackbone::forward(const torch::Tensor& image) {
  check_input_size(image);
  FeaturePyramid p;
  p.output_stride = options_.output_stride;
  p.layer1 = layer1_->forward(stem_->forward(image));
  p.layer2 = layer2_->forward(p.layer1);
  p.layer3 = layer3_->forward(p.layer2);
  p.layer4 = layer4_->forward(p.layer3);
  p.aspp = aspp_(p.layer4);
  return p;
}

}  // namespace glassseg::nn
