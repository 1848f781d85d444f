#include "glassseg/nn/network.hpp"

namespace glassseg::nn {

void to_json(nlohmann::json& j, const NetworkConfig& c) {
  j = {{"backbone", c.backbone},
       {"output_stride", c.output_stride},
       {"backbone_widths", c.backbone_widths},
       {"aspp_channels", c.aspp_channels},
       {"channels", c.channels},
       {"reduction", c.reduction},
       {"ablation", to_string(c.ablation)}};
}

void from_json(const nlohmann::json& j, NetworkConfig& c) {
  NetworkConfig d;
  c.backbone = j.value("backbone", d.backbone);
  c.output_stride = j.value("output_stride", d.output_stride);
  c.backbone_widths = j.value("backbone_widths", d.backbone_widths);
  c.aspp_channels = j.value("aspp_channels", d.aspp_channels);
  c.channels = j.value("channels", d.channels);
  c.reduction = j.value("reduction", d.reduction);
  c.ablation = parse_boundary_mode(j.value("ablation", to_string(d.ablation)));
}

NetworkConfig ablation_config(NetworkConfig base, BoundaryMode mode) {
  base.ablation = mode;
  return base;
}

std::shared_ptr<Backbone> make_backbone(const NetworkConfig& config) {
  if (config.backbone == "toy") {
    return std::make_shared<ToyBackbone>(ToyBackboneOptions{
        config.backbone_widths, config.aspp_channels, config.output_stride});
  }
  throw std::invalid_argument("unknown backbone '" + config.backbone +
                              "' (available: toy)");
}

GlassNetImpl::GlassNetImpl(const NetworkConfig& config)
    : backbone(make_backbone(config)), config_(config) {
  build();
}

GlassNetImpl::GlassNetImpl(const NetworkConfig& config,
                           std::shared_ptr<Backbone> external)
    : backbone(std::move(external)), config_(config) {
  if (!backbone) throw std::invalid_argument("backbone must not be null");
  config_.backbone = backbone->id();
  config_.backbone_widths = backbone->layer_channels();
  config_.aspp_channels = backbone->aspp_channels();
  config_.output_stride = backbone->output_stride();
  build();
}

void GlassNetImpl::build() {
  register_module("backbone", backbone);
  const auto widths = backbone->layer_channels();
  const int64_t c = config_.channels;
  low_projection = register_module("low_projection",
                                   conv_bn_relu(widths[0] + widths[1], c, 1));
  input_projection = register_module("input_projection",
                                     conv_bn_relu(widths[3], c, 1));
  high_projection = register_module(
      "high_projection", conv_bn_relu(backbone->aspp_channels(), c, 1));
  iebam = register_module("iebam",
                          Iebam(IebamOptions{c, c, c, c, config_.reduction}));
  fbam = register_module(
      "fbam", Fbam(FbamOptions{c, config_.reduction, config_.ablation}));
}

void GlassNetImpl::set_ablation(BoundaryMode mode) {
  config_.ablation = mode;
  fbam->set_mode(mode);
}

NetworkOutput GlassNetImpl::forward(const torch::Tensor& image) {
  check_input_size(image);
  const FeaturePyramid p = backbone->forward(image);
  const std::array<int64_t, 2> work{p.layer1.size(2), p.layer1.size(3)};
  const auto f_low = low_projection(
      torch::cat({p.layer1, resize_to(p.layer2, work)}, 1));
  const auto f_input = input_projection(p.layer4);
  const auto f_high = high_projection(p.aspp);

  const std::array<int64_t, 2> out_size{image.size(2), image.size(3)};
  IebamOutput ie = iebam(f_input, f_low, f_high, out_size);
  FbamOutput fb = fbam(ie.f_in, ie.f_ex, ie.f_m, out_size);
  return NetworkOutput{std::move(ie), std::move(fb)};
}

}  // namespace glassseg::nn
