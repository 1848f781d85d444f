#include "glassseg/harness/checkpoint.hpp"

namespace glassseg::harness {

void save_checkpoint(const std::filesystem::path& path, nn::GlassNet& model,
                     const CheckpointMeta& meta,
                     torch::optim::Optimizer* optimizer) {
  const nlohmann::json config = {{"version", kCheckpointVersion},
                                 {"network", meta.network},
                                 {"train", meta.train},
                                 {"step", meta.step}};
  torch::serialize::OutputArchive archive;
  archive.write("version", c10::IValue(kCheckpointVersion));
  archive.write("config", c10::IValue(config.dump()));
  torch::serialize::OutputArchive weights;
  model->save(weights);
  archive.write("model", weights);
  if (optimizer) {
    torch::serialize::OutputArchive state;
    optimizer->save(state);
    archive.write("optimizer", state);
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  archive.save_to(path.string());
}

namespace {

torch::serialize::InputArchive open(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw CheckpointError("checkpoint " + path.string() + " does not exist");
  }
  torch::serialize::InputArchive archive;
  try {
    archive.load_from(path.string());
  } catch (const c10::Error& e) {
    throw CheckpointError("cannot read checkpoint " + path.string() + ": " +
                          e.what_without_backtrace());
  }
  return archive;
}

}  // namespace

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 const std::optional<nn::NetworkConfig>& expected) {
  auto archive = open(path);
  c10::IValue version;
  if (!archive.try_read("version", version) || !version.isInt()) {
    throw CheckpointError(path.string() + ": missing version field");
  }
  if (version.toInt() != kCheckpointVersion) {
    throw CheckpointError(path.string() + ": unsupported checkpoint version " +
                          std::to_string(version.toInt()));
  }
  c10::IValue config_text;
  if (!archive.try_read("config", config_text) || !config_text.isString()) {
    throw CheckpointError(path.string() + ": missing config block");
  }
  const auto config = nlohmann::json::parse(config_text.toStringRef());

  LoadedCheckpoint out;
  out.meta.network = config.at("network").get<nn::NetworkConfig>();
  out.meta.train = config.value("train", nlohmann::json::object());
  out.meta.step = config.value("step", std::int64_t{0});
  if (expected && !(*expected == out.meta.network)) {
    throw CheckpointError(
        path.string() + ": network config mismatch, checkpoint has " +
        nlohmann::json(out.meta.network).dump() + " but expected " +
        nlohmann::json(*expected).dump());
  }
  out.model = nn::GlassNet(out.meta.network);
  torch::serialize::InputArchive weights;
  if (!archive.try_read("model", weights)) {
    throw CheckpointError(path.string() + ": missing model weights");
  }
  try {
    out.model->load(weights);
  } catch (const c10::Error& e) {
    throw CheckpointError(path.string() + ": weights do not fit the network: " +
                          e.what_without_backtrace());
  }
  return out;
}

bool load_optimizer_state(const std::filesystem::path& path,
                          torch::optim::Optimizer& optimizer) {
  auto archive = open(path);
  torch::serialize::InputArchive state;
  if (!archive.try_read("optimizer", state)) return false;
  optimizer.load(state);
  return true;
}

}  // namespace glassseg::harness
