#pragma once
// Central finite-difference checks in double precision.

#include <algorithm>
#include <functional>
#include <vector>

#include <torch/torch.h>

#include "glassseg/nn/fbam.hpp"
#include "glassseg/nn/iebam.hpp"
#include "glassseg/nn/losses.hpp"

namespace gradcheck {

// ||analytic − numeric|| / max(||analytic||, ||numeric||, 1e-12), where the
// numeric gradient perturbs every element of every input.
inline double relative_error(const std::function<torch::Tensor()>& f,
                             const std::vector<torch::Tensor>& inputs,
                             double eps = 1e-6) {
  for (const auto& x : inputs) {
    if (x.grad().defined()) x.mutable_grad().zero_();
  }
  f().backward();
  double diff = 0, na = 0, nn = 0;
  for (const auto& x : inputs) {
    const auto analytic = x.grad().clone().flatten();
    auto flat = x.detach().view({-1});
    for (int64_t i = 0; i < flat.numel(); ++i) {
      const double orig = flat[i].item<double>();
      double plus, minus;
      {
        torch::NoGradGuard g;
        flat[i] = orig + eps;
        plus = f().item<double>();
        flat[i] = orig - eps;
        minus = f().item<double>();
        flat[i] = orig;
      }
      const double num = (plus - minus) / (2 * eps);
      const double a = analytic[i].item<double>();
      diff += (a - num) * (a - num);
      na += a * a;
      nn += num * num;
    }
  }
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), 1e-12});
}

inline torch::TensorOptions dbl() { return torch::TensorOptions().dtype(torch::kDouble); }

inline double contour_loss_error(int64_t seed) {
  torch::manual_seed(seed);
  auto logits = torch::randn({2, 1, 6, 6}, dbl()).requires_grad_();
  const auto gt = (torch::rand({2, 1, 6, 6}, dbl()) > 0.5).to(torch::kDouble);
  const auto w = 1.0 + 2.0 * torch::rand({2, 1, 6, 6}, dbl());
  return relative_error([&] { return glassseg::nn::contour_loss(logits, gt, w); },
                        {logits});
}

inline double dice_loss_error(int64_t seed) {
  torch::manual_seed(seed);
  auto logits = torch::randn({2, 1, 6, 6}, dbl()).requires_grad_();
  const auto gt = (torch::rand({2, 1, 6, 6}, dbl()) > 0.5).to(torch::kDouble);
  return relative_error([&] { return glassseg::nn::dice_loss(logits, gt); }, {logits});
}

inline double bce_loss_error(int64_t seed) {
  torch::manual_seed(seed);
  auto logits = torch::randn({2, 1, 6, 6}, dbl()).requires_grad_();
  const auto gt = (torch::rand({2, 1, 6, 6}, dbl()) > 0.5).to(torch::kDouble);
  return relative_error([&] { return glassseg::nn::bce_loss(logits, gt); }, {logits});
}

// IEBAM followed by FBAM with 2 channels on 6×6 maps. BatchNorm runs in
// eval mode so the function is deterministic and smooth almost everywhere;
// gamma is nonzero so the attention paths carry gradient.
struct EndToEnd {
  double inputs = 0;
  double parameters = 0;
};

inline EndToEnd iebam_fbam_error(int64_t seed) {
  using namespace glassseg::nn;
  torch::manual_seed(seed);
  Iebam iebam(IebamOptions{2, 2, 2, 2, 8});
  Fbam fbam(FbamOptions{2, 8, BoundaryMode::in_ex});
  iebam->to(torch::kDouble);
  fbam->to(torch::kDouble);
  iebam->eval();
  fbam->eval();
  {
    torch::NoGradGuard g;
    iebam->internal->attention->gamma.fill_(0.7);
    iebam->external->attention->gamma.fill_(-0.4);
    fbam->attention->gamma.fill_(0.9);
  }
  auto f_input = torch::randn({1, 2, 6, 6}, dbl()).requires_grad_();
  auto f_low = torch::randn({1, 2, 6, 6}, dbl()).requires_grad_();
  auto f_high = torch::randn({1, 2, 6, 6}, dbl()).requires_grad_();
  const auto probe = torch::randn({1, 1, 6, 6}, dbl());
  auto loss = [&] {
    const auto a = iebam->forward(f_input, f_low, f_high);
    const auto b = fbam->forward(a.f_in, a.f_ex, a.f_m);
    return (b.p_m * probe).sum() + (a.p_b * probe).sum() + (a.p_in * probe).sum() +
           (a.p_ex * probe).sum() + (a.p_body * probe).sum();
  };
  EndToEnd out;
  out.inputs = relative_error(loss, {f_input, f_low, f_high});
  std::vector<torch::Tensor> params{
      iebam->internal->attention->query->weight, iebam->internal->attention->key->weight,
      iebam->internal->attention->value->weight, iebam->internal->attention->gamma,
      fbam->gate_fc1->weight, fbam->gate_fc2->weight, fbam->attention->query->weight,
      fbam->attention->gamma, fbam->head_m->weight};
  out.parameters = relative_error(loss, params);
  return out;
}

}  // namespace gradcheck
