#include "glassseg/nn/attention.hpp"

namespace glassseg::nn {

SpatialAttentionImpl::SpatialAttentionImpl(const SpatialAttentionOptions& o)
    : options_(o) {
  if (o.query_channels <= 0 || o.context_channels <= 0) {
    throw std::invalid_argument("attention channels must be positive");
  }
  if (o.reduction <= 0 || o.query_chunk <= 0) {
    throw std::invalid_argument("attention reduction and chunk must be > 0");
  }
  inner_ = std::max<int64_t>(1, o.context_channels / o.reduction);
  auto conv1x1 = [](int64_t in, int64_t out) {
    return torch::nn::Conv2d(torch::nn::Conv2dOptions(in, out, 1).bias(true));
  };
  query = register_module("query", conv1x1(o.query_channels, inner_));
  key = register_module("key", conv1x1(o.context_channels, inner_));
  value = register_module("value",
                          conv1x1(o.context_channels, o.context_channels));
  gamma = register_parameter("gamma", torch::full({1}, o.gamma_init));
}

void SpatialAttentionImpl::check_inputs(const torch::Tensor& q,
                                        const torch::Tensor& ctx) const {
  if (q.dim() != 4 || ctx.dim() != 4) {
    throw std::invalid_argument("attention expects NCHW tensors");
  }
  if (q.size(1) != options_.query_channels ||
      ctx.size(1) != options_.context_channels) {
    throw std::invalid_argument(
        "attention channel mismatch: expected query " +
        std::to_string(options_.query_channels) + " / context " +
        std::to_string(options_.context_channels) + ", got " +
        std::to_string(q.size(1)) + " / " + std::to_string(ctx.size(1)));
  }
  if (q.size(0) != ctx.size(0) || q.size(2) != ctx.size(2) ||
      q.size(3) != ctx.size(3)) {
    throw std::invalid_argument("attention query and context shapes differ");
  }
}

torch::Tensor SpatialAttentionImpl::attention_map(const torch::Tensor& q_src,
                                                  const torch::Tensor& ctx) {
  check_inputs(q_src, ctx);
  const auto n = ctx.size(0);
  const auto q = query(q_src).reshape({n, inner_, -1});  // N × d × P
  const auto k = key(ctx).reshape({n, inner_, -1});      // N × d × P
  return torch::softmax(torch::bmm(q.transpose(1, 2), k), -1);
}

torch::Tensor SpatialAttentionImpl::forward(const torch::Tensor& q_src,
                                            const torch::Tensor& ctx) {
  check_inputs(q_src, ctx);
  const auto n = ctx.size(0);
  const auto c = ctx.size(1);
  const auto positions = ctx.size(2) * ctx.size(3);
  const auto q = query(q_src).reshape({n, inner_, positions}).transpose(1, 2);
  const auto k = key(ctx).reshape({n, inner_, positions});
  const auto v = value(ctx).reshape({n, c, positions}).transpose(1, 2);

  std::vector<torch::Tensor> blocks;
  for (int64_t start = 0; start < positions; start += options_.query_chunk) {
    const auto len = std::min(options_.query_chunk, positions - start);
    const auto energy = torch::bmm(q.narrow(1, start, len), k);  // N × len × P
    blocks.push_back(torch::bmm(torch::softmax(energy, -1), v));
  }
  const auto attended =
      (blocks.size() == 1 ? blocks.front() : torch::cat(blocks, 1))
          .transpose(1, 2)
          .reshape(ctx.sizes());
  return gamma * attended + ctx;
}

}  // namespace glassseg::nn
