#include "glassseg/harness/config.hpp"

#include <cmath>
#include <fstream>

namespace glassseg {

void to_json(nlohmann::json& j, const SynthSpec& s) {
  j = {{"kind", to_string(s.kind)},
       {"count", s.count},
       {"size", s.size},
       {"seed", s.seed},
       {"minority_fraction", s.minority_fraction}};
}

void from_json(const nlohmann::json& j, SynthSpec& s) {
  SynthSpec d;
  s.kind = parse_fixture_kind(j.value("kind", to_string(d.kind)));
  s.count = j.value("count", d.count);
  s.size = j.value("size", d.size);
  s.seed = j.value("seed", d.seed);
  s.minority_fraction = j.value("minority_fraction", d.minority_fraction);
}

}  // namespace glassseg

namespace glassseg::harness {

void TrainConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(lr0 > 0.0)) fail("lr0 must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) fail("momentum must lie in [0,1)");
  if (!(poly_power >= 0.0)) fail("poly_power must be >= 0");
  if (epochs < 1) fail("epochs must be >= 1, got " + std::to_string(epochs));
  // Batch norm in training mode needs more than one value per channel.
  if (batch_size < 2) fail("batch_size must be >= 2");
  if (target_size <= 0 || target_size % 32 != 0) {
    fail("target_size must be a positive multiple of 32");
  }
  if (!(hflip_prob >= 0.0 && hflip_prob <= 1.0)) fail("hflip_prob must lie in [0,1]");
  if (t_in < 1 || t_ex < 1) fail("t_in and t_ex must be >= 1");
  if (!(gauss_sigma > 0.0)) fail("gauss_sigma must be > 0");
  if (gauss_kernel < 1 || gauss_kernel % 2 == 0) fail("gauss_kernel must be odd");
  if (!(threshold > 0.0 && threshold < 1.0)) fail("threshold must lie in (0,1)");
  if (eval_every < 0) fail("eval_every must be >= 0");
  if (network.output_stride != 8 && network.output_stride != 16) {
    fail("output_stride must be 8 or 16");
  }
}

TrainConfig preset(const std::string& name) {
  TrainConfig c;
  if (name == "paper_main") return c;
  if (name == "paper_ablation") {
    c.lr0 = 0.005;
    c.batch_size = 8;
    c.epochs = 40;
    return c;
  }
  if (name == "toy") {
    c.target_size = 128;
    c.batch_size = 4;
    c.epochs = 100;
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "' (paper_main, paper_ablation, toy)");
}

void to_json(nlohmann::json& j, const TrainConfig& c) {
  j = {{"lr0", c.lr0},
       {"momentum", c.momentum},
       {"poly_power", c.poly_power},
       {"epochs", c.epochs},
       {"batch_size", c.batch_size},
       {"output_stride", c.network.output_stride},
       {"target_size", c.target_size},
       {"hflip_prob", c.hflip_prob},
       {"ablation", nn::to_string(c.network.ablation)},
       {"t_in", c.t_in},
       {"t_ex", c.t_ex},
       {"gauss_sigma", c.gauss_sigma},
       {"gauss_kernel", c.gauss_kernel},
       {"loss_variant", nn::to_string(c.loss_variant)},
       {"seed", c.seed},
       {"threshold", c.threshold},
       {"eval_every", c.eval_every},
       {"network", c.network}};
}

void from_json(const nlohmann::json& j, TrainConfig& c) {
  TrainConfig d = j.contains("preset") ? preset(j.at("preset").get<std::string>())
                                       : TrainConfig{};
  if (j.contains("network")) d.network = j.at("network").get<nn::NetworkConfig>();
  c.lr0 = j.value("lr0", d.lr0);
  c.momentum = j.value("momentum", d.momentum);
  c.poly_power = j.value("poly_power", d.poly_power);
  c.epochs = j.value("epochs", d.epochs);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.target_size = j.value("target_size", d.target_size);
  c.hflip_prob = j.value("hflip_prob", d.hflip_prob);
  c.t_in = j.value("t_in", d.t_in);
  c.t_ex = j.value("t_ex", d.t_ex);
  c.gauss_sigma = j.value("gauss_sigma", d.gauss_sigma);
  c.gauss_kernel = j.value("gauss_kernel", d.gauss_kernel);
  c.loss_variant = nn::parse_loss_variant(
      j.value("loss_variant", nn::to_string(d.loss_variant)));
  c.seed = j.value("seed", d.seed);
  c.threshold = j.value("threshold", d.threshold);
  c.eval_every = j.value("eval_every", d.eval_every);
  c.network = d.network;
  // Top-level shortcuts win over the nested network block.
  c.network.output_stride = j.value("output_stride", d.network.output_stride);
  c.network.ablation = nn::parse_boundary_mode(
      j.value("ablation", nn::to_string(d.network.ablation)));
}

double lr_schedule(std::int64_t step, std::int64_t total,
                   const TrainConfig& cfg) {
  if (total <= 0) throw std::invalid_argument("total_steps must be > 0");
  if (step < 0 || step > total) {
    throw std::invalid_argument("step " + std::to_string(step) +
                                " outside [0, " + std::to_string(total) + "]");
  }
  return cfg.lr0 * std::pow(1.0 - double(step) / double(total), cfg.poly_power);
}

std::int64_t total_steps(const TrainConfig& cfg, std::size_t n) {
  const auto per_epoch =
      (static_cast<std::int64_t>(n) + cfg.batch_size - 1) / cfg.batch_size;
  return per_epoch * cfg.epochs;
}

void to_json(nlohmann::json& j, const DataSpec& d) {
  j = nlohmann::json::object();
  if (d.root) {
    j["root"] = *d.root;
    j["train_split"] = d.train_split;
    j["val_split"] = d.val_split;
  }
  if (d.synthetic_train) j["synthetic_train"] = *d.synthetic_train;
  if (d.synthetic_val) j["synthetic_val"] = *d.synthetic_val;
}

void from_json(const nlohmann::json& j, DataSpec& d) {
  if (j.contains("root")) d.root = j.at("root").get<std::string>();
  d.train_split = j.value("train_split", std::string("train"));
  d.val_split = j.value("val_split", std::string("val"));
  if (j.contains("synthetic_train")) {
    d.synthetic_train = j.at("synthetic_train").get<SynthSpec>();
  }
  if (j.contains("synthetic_val")) {
    d.synthetic_val = j.at("synthetic_val").get<SynthSpec>();
  }
  if (!d.root && !d.synthetic_train) {
    throw std::invalid_argument(
        "data block needs either \"root\" or \"synthetic_train\"");
  }
}

RunSpec parse_run_spec(const nlohmann::json& j) {
  RunSpec spec;
  spec.train = j.at("train").get<TrainConfig>();
  spec.data = j.at("data").get<DataSpec>();
  if (j.contains("out_dir")) spec.out_dir = j.at("out_dir").get<std::string>();
  spec.train.validate();
  return spec;
}

RunSpec load_run_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  return parse_run_spec(nlohmann::json::parse(in));
}

}  // namespace glassseg::harness
