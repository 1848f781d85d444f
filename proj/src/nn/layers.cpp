#include "glassseg/nn/layers.hpp"

namespace glassseg::nn {

namespace F = torch::nn::functional;

ConvBnReluImpl::ConvBnReluImpl(const ConvBnReluOptions& o) : relu_(o.relu) {
  if (o.in_channels <= 0 || o.out_channels <= 0) {
    throw std::invalid_argument("conv channels must be positive");
  }
  const int64_t pad = (o.kernel_size / 2) * o.dilation;
  conv = register_module(
      "conv", torch::nn::Conv2d(
                  torch::nn::Conv2dOptions(o.in_channels, o.out_channels,
                                           o.kernel_size)
                      .stride(o.stride)
                      .padding(pad)
                      .dilation(o.dilation)
                      .bias(false)));
  bn = register_module("bn", torch::nn::BatchNorm2d(o.out_channels));
}

torch::Tensor ConvBnReluImpl::forward(const torch::Tensor& x) {
  auto y = bn(conv(x));
  return relu_ ? torch::relu(y) : y;
}

torch::nn::Conv2d logit_head(int64_t in_channels) {
  return torch::nn::Conv2d(
      torch::nn::Conv2dOptions(in_channels, 1, 1).bias(true));
}

torch::Tensor resize_to(const torch::Tensor& x, at::IntArrayRef hw) {
  if (x.size(-2) == hw[0] && x.size(-1) == hw[1]) return x;
  return F::interpolate(x, F::InterpolateFuncOptions()
                               .size(std::vector<int64_t>{hw[0], hw[1]})
                               .mode(torch::kBilinear)
                               .align_corners(false));
}

}  // namespace glassseg::nn
