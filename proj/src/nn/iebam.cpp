#include "glassseg/nn/iebam.hpp"

namespace glassseg::nn {

IebamOutput::IebamOutput(torch::Tensor f_b_, torch::Tensor f_in_,
                         torch::Tensor f_ex_, torch::Tensor f_body_,
                         torch::Tensor p_b_, torch::Tensor p_in_,
                         torch::Tensor p_ex_, torch::Tensor p_body_)
    : f_b(std::move(f_b_)),
      f_in(std::move(f_in_)),
      f_ex(std::move(f_ex_)),
      f_body(std::move(f_body_)),
      f_m(f_body + f_in),
      p_b(std::move(p_b_)),
      p_in(std::move(p_in_)),
      p_ex(std::move(p_ex_)),
      p_body(std::move(p_body_)) {}

BoundaryBranchImpl::BoundaryBranchImpl(int64_t in_channels, int64_t channels,
                                       int64_t reduction) {
  query_source = register_module("query_source",
                                 conv_bn_relu(in_channels, channels));
  context_source = register_module("context_source",
                                   conv_bn_relu(in_channels, channels));
  attention = register_module(
      "attention", SpatialAttention(SpatialAttentionOptions{
                       channels, channels, reduction, 0.0, 4096}));
  refine = register_module("refine", conv_bn_relu(channels, channels));
}

torch::Tensor BoundaryBranchImpl::forward(const torch::Tensor& x) {
  return refine(attention(query_source(x), context_source(x)));
}

IebamImpl::IebamImpl(const IebamOptions& o) : options_(o) {
  if (o.input_channels <= 0 || o.low_channels <= 0 || o.high_channels <= 0 ||
      o.channels <= 0) {
    throw std::invalid_argument("IEBAM channel widths must be positive");
  }
  if (o.input_channels != o.channels) {
    throw std::invalid_argument(
        "IEBAM input_channels (" + std::to_string(o.input_channels) +
        ") must equal channels (" + std::to_string(o.channels) +
        ") so that f_input - F'_in is defined");
  }
  const int64_t c = o.channels;
  boundary = register_module("boundary",
                             conv_bn_relu(o.input_channels + o.low_channels, c));
  internal = register_module(
      "internal", BoundaryBranch(c + o.low_channels, c, o.reduction));
  external = register_module(
      "external", BoundaryBranch(c + o.low_channels, c, o.reduction));
  body = register_module("body", conv_bn_relu(o.high_channels + c, c));
  head_b = register_module("head_b", logit_head(c));
  head_in = register_module("head_in", logit_head(c));
  head_ex = register_module("head_ex", logit_head(c));
  head_body = register_module("head_body", logit_head(c));
}

IebamOutput IebamImpl::forward(
    const torch::Tensor& f_input, const torch::Tensor& f_low,
    const torch::Tensor& f_high,
    std::optional<std::array<int64_t, 2>> output_size) {
  auto expect = [](const torch::Tensor& t, int64_t channels, const char* name) {
    if (t.dim() != 4 || t.size(1) != channels) {
      throw std::invalid_argument(
          std::string("IEBAM ") + name + " must have " +
          std::to_string(channels) + " channels, got " +
          (t.dim() == 4 ? std::to_string(t.size(1)) : "a non-NCHW tensor"));
    }
  };
  expect(f_input, options_.input_channels, "f_input");
  expect(f_low, options_.low_channels, "f_low");
  expect(f_high, options_.high_channels, "f_high");
  if (f_low.size(2) < f_input.size(2) || f_low.size(3) < f_input.size(3)) {
    throw std::invalid_argument("IEBAM f_low must be at least as large as "
                                "f_input spatially");
  }

  const std::array<int64_t, 2> work{f_low.size(2), f_low.size(3)};
  const auto input = resize_to(f_input, work);
  const auto high = resize_to(f_high, work);

  auto f_b = boundary(torch::cat({input, f_low}, 1));
  const auto boundary_low = torch::cat({f_b, f_low}, 1);
  auto f_in = internal(boundary_low);
  auto f_ex = external(boundary_low);
  auto f_body = body(torch::cat({high, input - f_in}, 1));

  const std::array<int64_t, 2> out = output_size.value_or(work);
  auto p_b = resize_to(head_b(f_b), out);
  auto p_in = resize_to(head_in(f_in), out);
  auto p_ex = resize_to(head_ex(f_ex), out);
  auto p_body = resize_to(head_body(f_body), out);
  return IebamOutput(std::move(f_b), std::move(f_in), std::move(f_ex),
                     std::move(f_body), std::move(p_b), std::move(p_in),
                     std::move(p_ex), std::move(p_body));
}

}  // namespace glassseg::nn
