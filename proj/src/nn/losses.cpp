#include "glassseg/nn/losses.hpp"

#include <cmath>

namespace glassseg::nn {

namespace {

void require_same(const torch::Tensor& a, const torch::Tensor& b,
                  const char* what) {
  if (!a.sizes().equals(b.sizes())) {
    throw std::invalid_argument(std::string(what) + ": shape " +
                                c10::str(a.sizes()) + " vs " +
                                c10::str(b.sizes()));
  }
}

// Views any 1×H×W / N×1×H×W tensor as N × (H·W).
torch::Tensor flat(const torch::Tensor& t) {
  return t.dim() == 3 ? t.reshape({1, -1}) : t.reshape({t.size(0), -1});
}

}  // namespace

torch::Tensor dice_loss(const torch::Tensor& logits, const torch::Tensor& gt,
                        double eps) {
  require_same(logits, gt, "dice_loss");
  const auto p = torch::sigmoid(flat(logits));
  const auto g = flat(gt).to(p.dtype());
  const auto inter = (p * g).sum(1);
  const auto denom = (p * p).sum(1) + (g * g).sum(1) + eps;
  return (1.0 - 2.0 * inter / denom).mean();
}

torch::Tensor contour_loss(const torch::Tensor& logits, const torch::Tensor& gt,
                           const torch::Tensor& weights) {
  require_same(logits, gt, "contour_loss");
  require_same(logits, weights, "contour_loss weights");
  const double floor = std::log(kLogClamp);
  const auto x = flat(logits);
  const auto g = flat(gt).to(x.dtype());
  const auto m = flat(weights).to(x.dtype());
  const auto log_p = torch::clamp_min(torch::log_sigmoid(x), floor);
  const auto log_not_p = torch::clamp_min(torch::log_sigmoid(-x), floor);
  const auto per_pixel = -m * (g * log_p + (1.0 - g) * log_not_p);
  return per_pixel.mean(1).mean();
}

torch::Tensor bce_loss(const torch::Tensor& logits, const torch::Tensor& gt) {
  return contour_loss(logits, gt, torch::ones_like(logits));
}

std::string to_string(LossVariant v) {
  switch (v) {
    case LossVariant::contour: return "contour";
    case LossVariant::bce: return "bce";
    case LossVariant::dice: return "dice";
  }
  return "contour";
}

LossVariant parse_loss_variant(const std::string& text) {
  if (text == "contour") return LossVariant::contour;
  if (text == "bce") return LossVariant::bce;
  if (text == "dice") return LossVariant::dice;
  throw std::invalid_argument("unknown loss variant '" + text +
                              "' (expected contour, bce or dice)");
}

LossValues LossBundle::values() const {
  return {l_b.item<double>(),    l_in.item<double>(), l_ex.item<double>(),
          l_body.item<double>(), l_m.item<double>(),  total.item<double>()};
}

LossBundle joint_loss(const IebamOutput& iebam, const FbamOutput& fbam,
                      const RegionTargets& t, LossVariant variant) {
  for (const auto* logits :
       {&iebam.p_b, &iebam.p_in, &iebam.p_ex, &iebam.p_body, &fbam.p_m}) {
    if (logits->size(-2) != t.merged.size(-2) ||
        logits->size(-1) != t.merged.size(-1)) {
      throw std::invalid_argument(
          "joint_loss: prediction resolution " + c10::str(logits->sizes()) +
          " does not match targets " + c10::str(t.merged.sizes()));
    }
  }
  auto band = [&](const torch::Tensor& logits, const torch::Tensor& gt,
                  const torch::Tensor& w) {
    switch (variant) {
      case LossVariant::contour: return contour_loss(logits, gt, w);
      case LossVariant::bce: return bce_loss(logits, gt);
      case LossVariant::dice: return dice_loss(logits, gt);
    }
    return contour_loss(logits, gt, w);
  };
  LossBundle b;
  b.l_b = dice_loss(iebam.p_b, t.boundary);
  b.l_in = band(iebam.p_in, t.internal, t.w_in);
  b.l_ex = band(iebam.p_ex, t.external, t.w_ex);
  b.l_body = bce_loss(iebam.p_body, t.body);
  b.l_m = bce_loss(fbam.p_m, t.merged);
  b.total = b.l_b + b.l_in + b.l_ex + b.l_body + b.l_m;
  return b;
}

}  // namespace glassseg::nn
