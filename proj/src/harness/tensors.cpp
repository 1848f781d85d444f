#include "glassseg/harness/tensors.hpp"

#include <algorithm>

namespace glassseg::harness {

torch::Tensor image_tensor(const RgbImage& image) {
  auto v = image.values();
  return torch::from_blob(const_cast<float*>(v.data()),
                          {3, image.height(), image.width()}, torch::kFloat32)
      .clone();
}

torch::Tensor mask_tensor(const BinaryMask& mask) {
  auto v = mask.values();
  return torch::from_blob(const_cast<std::uint8_t*>(v.data()),
                          {1, mask.height(), mask.width()}, torch::kUInt8)
      .to(torch::kFloat32);
}

torch::Tensor weight_tensor(const WeightMap& weights) {
  auto v = weights.values();
  return torch::from_blob(const_cast<float*>(v.data()),
                          {1, weights.height(), weights.width()},
                          torch::kFloat32)
      .clone();
}

Batch collate(std::span<const Sample> samples) {
  if (samples.empty()) throw std::invalid_argument("cannot collate 0 samples");
  std::vector<torch::Tensor> images, boundary, internal, external, body, merged,
      w_in, w_ex;
  for (const auto& s : samples) {
    images.push_back(image_tensor(s.image));
    boundary.push_back(mask_tensor(s.regions.boundary));
    internal.push_back(mask_tensor(s.regions.internal));
    external.push_back(mask_tensor(s.regions.external));
    body.push_back(mask_tensor(s.regions.body));
    merged.push_back(mask_tensor(s.regions.merged));
    w_in.push_back(weight_tensor(s.w_in));
    w_ex.push_back(weight_tensor(s.w_ex));
  }
  return Batch{torch::stack(images),
               nn::RegionTargets{torch::stack(boundary), torch::stack(internal),
                                 torch::stack(external), torch::stack(body),
                                 torch::stack(merged), torch::stack(w_in),
                                 torch::stack(w_ex)}};
}

ProbabilityMap predict(nn::GlassNet& model, const RgbImage& image) {
  torch::NoGradGuard no_grad;
  const bool was_training = model->is_training();
  model->eval();
  const auto out = model->forward(image_tensor(image).unsqueeze(0));
  if (was_training) model->train();
  const auto prob = torch::sigmoid(out.fbam.p_m)
                        .reshape({image.height(), image.width()})
                        .contiguous();
  std::vector<float> values(prob.data_ptr<float>(),
                            prob.data_ptr<float>() + prob.numel());
  for (auto& v : values) v = std::clamp(v, 0.0f, 1.0f);
  return ProbabilityMap(Grid<float>(image.height(), image.width(),
                                    std::move(values)));
}

}  // namespace glassseg::harness
