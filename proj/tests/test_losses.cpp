#include <doctest.h>

#include <cmath>

#include <torch/torch.h>

#include "glassseg/nn/losses.hpp"
#include "gradcheck.hpp"

using namespace glassseg::nn;

namespace {

torch::Tensor logit(double p) { return torch::full({1, 1, 1, 1}, std::log(p / (1 - p))); }

struct Heads {
  IebamOutput iebam;
  FbamOutput fbam;
};

Heads random_heads(int64_t n, int64_t h, int64_t w) {
  auto r = [&] { return torch::randn({n, 1, h, w}); };
  const auto f = torch::zeros({n, 2, h, w});
  Heads out{IebamOutput(f, f, f, f, r(), r(), r(), r()), FbamOutput{}};
  out.fbam.p_m = r();
  return out;
}

RegionTargets random_targets(int64_t n, int64_t h, int64_t w) {
  auto b = [&] { return (torch::rand({n, 1, h, w}) > 0.5).to(torch::kFloat); };
  auto wt = [&] { return 1.0 + torch::rand({n, 1, h, w}); };
  return RegionTargets{b(), b(), b(), b(), b(), wt(), wt()};
}

}  // namespace

TEST_CASE("dice loss values") {
  const auto ones = torch::ones({1, 1, 2, 2});
  CHECK(dice_loss(torch::zeros({1, 1, 2, 2}), ones).item<double>() ==
        doctest::Approx(1.0 - 2.0 * 2.0 / (1.0 + 4.0 + 1e-6)).epsilon(1e-6));
  CHECK(dice_loss(torch::full({1, 1, 2, 2}, 40.0), ones).item<double>() ==
        doctest::Approx(0.0).epsilon(1e-6));
  CHECK(dice_loss(torch::full({1, 1, 2, 2}, -40.0), ones).item<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dice loss is invariant to a shared pixel permutation") {
  torch::manual_seed(1);
  const auto logits = torch::randn({1, 1, 5, 5});
  const auto gt = (torch::rand({1, 1, 5, 5}) > 0.5).to(torch::kFloat);
  const auto perm = torch::randperm(25);
  const auto pl = logits.flatten().index_select(0, perm).view({1, 1, 5, 5});
  const auto pg = gt.flatten().index_select(0, perm).view({1, 1, 5, 5});
  CHECK(dice_loss(logits, gt).item<double>() ==
        doctest::Approx(dice_loss(pl, pg).item<double>()).epsilon(1e-6));
}

TEST_CASE("contour loss values") {
  const auto one = torch::ones({1, 1, 1, 1});
  CHECK(contour_loss(logit(0.5), one, 2.0 * one).item<double>() ==
        doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-6));
  torch::manual_seed(2);
  const auto l = torch::randn({2, 1, 4, 4});
  const auto g = (torch::rand({2, 1, 4, 4}) > 0.5).to(torch::kFloat);
  CHECK(contour_loss(l, g, torch::ones_like(l)).item<double>() ==
        doctest::Approx(bce_loss(l, g).item<double>()).epsilon(1e-7));
  const auto bce_ref =
      torch::binary_cross_entropy_with_logits(l, g).item<double>();
  CHECK(bce_loss(l, g).item<double>() == doctest::Approx(bce_ref).epsilon(1e-5));
  const auto w = 1.0 + torch::rand({2, 1, 4, 4});
  CHECK(contour_loss(l, g, 3.0 * w).item<double>() ==
        doctest::Approx(3.0 * contour_loss(l, g, w).item<double>()).epsilon(1e-6));
}

TEST_CASE("confident correct predictions cost almost nothing") {
  const auto g = torch::tensor({1.0f, 0.0f, 1.0f, 0.0f}).view({1, 1, 2, 2});
  const auto l = (2 * g - 1) * 60.0;
  CHECK(contour_loss(l, g, torch::ones_like(g)).item<double>() < 1e-12);
  CHECK(dice_loss(l, g).item<double>() < 1e-6);
}

TEST_CASE("losses are finite and non-negative for extreme logits") {
  const auto g = torch::tensor({1.0f, 0.0f, 1.0f, 0.0f}).view({1, 1, 2, 2});
  for (double s : {-1e4, -100.0, 0.0, 100.0, 1e4}) {
    const auto l = torch::full({1, 1, 2, 2}, s);
    for (const auto& v : {dice_loss(l, g), bce_loss(l, g),
                          contour_loss(l, g, 2 * torch::ones_like(g))}) {
      CHECK(std::isfinite(v.item<double>()));
      CHECK(v.item<double>() >= 0.0);
    }
  }
  // Clamped at log(1e-12) per pixel.
  const auto wrong = torch::full({1, 1, 2, 2}, 1e4) * (1 - 2 * g);
  CHECK(bce_loss(wrong, g).item<double>() == doctest::Approx(-std::log(1e-12)).epsilon(1e-5));
}

TEST_CASE("joint loss is the sum of independently computed terms") {
  torch::manual_seed(3);
  const auto h = random_heads(2, 8, 8);
  const auto t = random_targets(2, 8, 8);
  const auto b = joint_loss(h.iebam, h.fbam, t);
  const double expect = dice_loss(h.iebam.p_b, t.boundary).item<double>() +
                        contour_loss(h.iebam.p_in, t.internal, t.w_in).item<double>() +
                        contour_loss(h.iebam.p_ex, t.external, t.w_ex).item<double>() +
                        bce_loss(h.iebam.p_body, t.body).item<double>() +
                        bce_loss(h.fbam.p_m, t.merged).item<double>();
  CHECK(b.total.item<double>() == doctest::Approx(expect).epsilon(1e-7));
  const auto v = b.values();
  CHECK(v.total == doctest::Approx(v.l_b + v.l_in + v.l_ex + v.l_body + v.l_m).epsilon(1e-7));
}

TEST_CASE("loss variant only changes the band terms") {
  torch::manual_seed(4);
  const auto h = random_heads(1, 6, 6);
  const auto t = random_targets(1, 6, 6);
  const auto c = joint_loss(h.iebam, h.fbam, t, LossVariant::contour).values();
  for (auto variant : {LossVariant::bce, LossVariant::dice}) {
    const auto o = joint_loss(h.iebam, h.fbam, t, variant).values();
    CHECK(o.l_b == c.l_b);
    CHECK(o.l_body == c.l_body);
    CHECK(o.l_m == c.l_m);
    CHECK(o.l_in != c.l_in);
    CHECK(o.l_ex != c.l_ex);
  }
  CHECK(parse_loss_variant("dice") == LossVariant::dice);
  CHECK_THROWS(parse_loss_variant("focal"));
}

TEST_CASE("joint loss rejects mismatched resolution") {
  const auto h = random_heads(1, 6, 6);
  const auto t = random_targets(1, 8, 8);
  CHECK_THROWS_AS(joint_loss(h.iebam, h.fbam, t), std::invalid_argument);
}

TEST_CASE("loss gradients match finite differences") {
  for (int64_t seed : {0, 1, 2}) {
    CHECK(gradcheck::contour_loss_error(seed) < 1e-4);
    CHECK(gradcheck::dice_loss_error(seed) < 1e-4);
    CHECK(gradcheck::bce_loss_error(seed) < 1e-4);
  }
}
