#include "glassseg/nn/fbam.hpp"

namespace glassseg::nn {

std::string to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::in_only: return "in_only";
    case BoundaryMode::ex_only: return "ex_only";
    case BoundaryMode::in_ex: return "in_ex";
  }
  return "in_ex";
}

BoundaryMode parse_boundary_mode(const std::string& text) {
  if (text == "in_only") return BoundaryMode::in_only;
  if (text == "ex_only") return BoundaryMode::ex_only;
  if (text == "in_ex") return BoundaryMode::in_ex;
  throw std::invalid_argument("unknown boundary mode '" + text +
                              "' (expected in_only, ex_only or in_ex)");
}

FbamImpl::FbamImpl(const FbamOptions& o) : options_(o) {
  if (o.channels <= 0) throw std::invalid_argument("FBAM channels must be > 0");
  const int64_t c = o.channels;
  gate_conv1 = register_module("gate_conv1", conv_bn_relu(c, c));
  gate_conv2 = register_module("gate_conv2", conv_bn_relu(c, c));
  gate_fc1 = register_module(
      "gate_fc1",
      torch::nn::Conv2d(torch::nn::Conv2dOptions(c, c, 1).bias(false)));
  gate_bn = register_module("gate_bn", torch::nn::BatchNorm2d(c));
  gate_fc2 = register_module(
      "gate_fc2", torch::nn::Conv2d(torch::nn::Conv2dOptions(c, c, 1).bias(true)));
  fuse = register_module("fuse", conv_bn_relu(c, c));
  transfer1 = register_module("transfer1", conv_bn_relu(c, c));
  transfer2 = register_module("transfer2", conv_bn_relu(c, c));
  attention = register_module(
      "attention",
      SpatialAttention(SpatialAttentionOptions{c, c, o.reduction, 0.0, 4096}));
  head_m = register_module("head_m", logit_head(c));
}

torch::Tensor FbamImpl::gate_logits(const torch::Tensor& f_in) {
  auto pooled = torch::adaptive_avg_pool2d(gate_conv2(gate_conv1(f_in)), {1, 1});
  return gate_fc2(torch::relu(gate_bn(gate_fc1(pooled))));
}

FbamOutput FbamImpl::forward(const torch::Tensor& f_in,
                             const torch::Tensor& f_ex,
                             const torch::Tensor& f_m,
                             std::optional<std::array<int64_t, 2>> output_size) {
  for (const auto* t : {&f_in, &f_ex, &f_m}) {
    if (t->dim() != 4 || t->size(1) != options_.channels) {
      throw std::invalid_argument("FBAM inputs must be N×" +
                                  std::to_string(options_.channels) + "×H×W");
    }
  }
  if (!f_in.sizes().equals(f_ex.sizes()) || !f_in.sizes().equals(f_m.sizes())) {
    throw std::invalid_argument("FBAM inputs must share one shape");
  }

  FbamOutput out;
  torch::Tensor fused;
  switch (options_.mode) {
    case BoundaryMode::in_only:
      out.alpha = torch::ones({f_in.size(0), f_in.size(1), 1, 1}, f_in.options());
      fused = f_in;
      break;
    case BoundaryMode::ex_only:
      out.alpha = torch::zeros({f_in.size(0), f_in.size(1), 1, 1}, f_in.options());
      fused = f_ex;
      break;
    case BoundaryMode::in_ex:
      out.alpha = torch::sigmoid(gate_logits(f_in));
      fused = out.alpha * f_in + out.beta() * f_ex;
      break;
  }
  out.f_en = fuse(fused);
  const auto query = transfer2(transfer1(out.f_en));
  out.refined_m = attention(query, f_m);
  const std::array<int64_t, 2> size =
      output_size.value_or(std::array<int64_t, 2>{f_m.size(2), f_m.size(3)});
  out.p_m = resize_to(head_m(out.refined_m), size);
  return out;
}

}  // namespace glassseg::nn
