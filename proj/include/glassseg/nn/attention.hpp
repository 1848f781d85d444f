#pragma once

#include <torch/torch.h>

namespace glassseg::nn {

struct SpatialAttentionOptions {
  int64_t query_channels = 0;
  int64_t context_channels = 0;
  // Q/K width is max(1, context_channels / reduction).
  int64_t reduction = 8;
  double gamma_init = 0.0;
  // Query positions processed per block, bounding the live energy matrix.
  int64_t query_chunk = 4096;
};

/// Single-head spatial dot-product attention with a learnable residual gate:
///
///   out = gamma · softmax_k(Q(query) · K(context)) · V(context) + context
///
/// Softmax runs over key positions, so each query row sums to one. Query and
/// context must share spatial size.
class SpatialAttentionImpl : public torch::nn::Module {
 public:
  explicit SpatialAttentionImpl(const SpatialAttentionOptions& options);

  torch::Tensor forward(const torch::Tensor& query_source,
                        const torch::Tensor& context);

  /// Softmax attention weights, N × (H·W) queries × (H·W) keys.
  torch::Tensor attention_map(const torch::Tensor& query_source,
                              const torch::Tensor& context);

  int64_t inner_channels() const { return inner_; }

  torch::nn::Conv2d query{nullptr};
  torch::nn::Conv2d key{nullptr};
  torch::nn::Conv2d value{nullptr};
  torch::Tensor gamma;

 private:
  void check_inputs(const torch::Tensor& q, const torch::Tensor& ctx) const;

  SpatialAttentionOptions options_;
  int64_t inner_;
};
TORCH_MODULE(SpatialAttention);

}  // namespace glassseg::nn
