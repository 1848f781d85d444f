#pragma once

#include <array>
#include <memory>
#include <string>

#include <json.hpp>
#include <torch/torch.h>

#include "glassseg/nn/backbone.hpp"
#include "glassseg/nn/fbam.hpp"
#include "glassseg/nn/iebam.hpp"

namespace glassseg::nn {

struct NetworkConfig {
  std::string backbone = "toy";
  int output_stride = 16;
  std::array<int64_t, 4> backbone_widths{16, 32, 64, 128};
  int64_t aspp_channels = 64;
  int64_t channels = 32;  // IEBAM / FBAM working width
  int64_t reduction = 8;
  BoundaryMode ablation = BoundaryMode::in_ex;

  bool operator==(const NetworkConfig&) const = default;
};

void to_json(nlohmann::json& j, const NetworkConfig& c);
void from_json(const nlohmann::json& j, NetworkConfig& c);

/// The same network with the FBAM fusion restricted to the given bands.
NetworkConfig ablation_config(NetworkConfig base, BoundaryMode mode);

struct NetworkOutput {
  IebamOutput iebam;
  FbamOutput fbam;
};

/// Backbone → pyramid fusion → IEBAM → FBAM, all logits at input size.
///
/// The pyramid is fused into the three IEBAM inputs: f_low joins layer1 with
/// layer2 resized to layer1's stride, f_input projects layer4 and f_high
/// projects the ASPP output. The IEBAM/FBAM run at layer1's stride (4).
class GlassNetImpl : public torch::nn::Module {
 public:
  explicit GlassNetImpl(const NetworkConfig& config);
  /// Uses an externally built backbone; its widths override the config's.
  GlassNetImpl(const NetworkConfig& config, std::shared_ptr<Backbone> backbone);

  NetworkOutput forward(const torch::Tensor& image);

  const NetworkConfig& config() const { return config_; }
  void set_ablation(BoundaryMode mode);

  std::shared_ptr<Backbone> backbone;
  ConvBnRelu low_projection{nullptr};
  ConvBnRelu input_projection{nullptr};
  ConvBnRelu high_projection{nullptr};
  Iebam iebam{nullptr};
  Fbam fbam{nullptr};

 private:
  void build();

  NetworkConfig config_;
};
TORCH_MODULE(GlassNet);

std::shared_ptr<Backbone> make_backbone(const NetworkConfig& config);

}  // namespace glassseg::nn
