#include "glassseg/harness/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "glassseg/harness/checkpoint.hpp"
#include "glassseg/harness/tensors.hpp"
#include "glassseg/report_io.hpp"
#include "glassseg/synth.hpp"

namespace glassseg::harness {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return item_seed(a, static_cast<std::size_t>(b));
}

std::int64_t steps_per_epoch(const TrainConfig& cfg, std::size_t n) {
  return (static_cast<std::int64_t>(n) + cfg.batch_size - 1) / cfg.batch_size;
}

double selection_score(const MetricsReport& r) {
  return r.m_iou ? *r.m_iou : r.iou;
}

void log_line(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n' << std::flush;
}

void write_loss_csv(const std::filesystem::path& path,
                    std::span<const StepLog> steps) {
  std::ofstream out(path);
  out << "step,lr,l_b,l_in,l_ex,l_body,l_m,total\n";
  out.precision(9);
  for (const auto& s : steps) {
    out << s.step << ',' << s.lr << ',' << s.loss.l_b << ',' << s.loss.l_in
        << ',' << s.loss.l_ex << ',' << s.loss.l_body << ',' << s.loss.l_m
        << ',' << s.loss.total << '\n';
  }
}

bool finite(const nn::LossValues& v) {
  for (double x : {v.l_b, v.l_in, v.l_ex, v.l_body, v.l_m, v.total}) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

std::vector<std::size_t> batch_indices(const TrainConfig& cfg,
                                       std::size_t dataset_size, int epoch,
                                       std::int64_t batch) {
  if (dataset_size == 0) throw std::invalid_argument("empty training set");
  std::vector<std::size_t> perm(dataset_size);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(mix(cfg.seed, static_cast<std::uint64_t>(epoch)));
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[rng() % i]);
  }
  std::vector<std::size_t> out;
  const auto start = static_cast<std::size_t>(batch) * cfg.batch_size;
  for (int k = 0; k < cfg.batch_size; ++k) {
    out.push_back(perm[(start + k) % dataset_size]);
  }
  return out;
}

std::vector<Sample> make_batch(const TrainConfig& cfg,
                               std::span<const RawSample> data, int epoch,
                               std::int64_t batch) {
  const auto idx = batch_indices(cfg, data.size(), epoch, batch);
  std::vector<Sample> out;
  out.reserve(idx.size());
  const auto epoch_seed = mix(cfg.seed ^ 0x5eedULL, static_cast<std::uint64_t>(epoch));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    AugmentSpec spec{cfg.target_size, cfg.hflip_prob,
                     mix(epoch_seed, batch * cfg.batch_size + k)};
    out.push_back(make_sample(data[idx[k]], spec, cfg.decompose_options()));
  }
  return out;
}

RunRecord train(const TrainConfig& cfg, const TrainContext& ctx) {
  cfg.validate();
  if (ctx.train.empty()) throw std::invalid_argument("empty training set");

  RunRecord rec;
  rec.config = cfg;
  const auto per_epoch = steps_per_epoch(cfg, ctx.train.size());
  rec.total_steps = total_steps(cfg, ctx.train.size());

  torch::manual_seed(cfg.seed);
  rec.model = nn::GlassNet(cfg.network);
  rec.model->train();
  torch::optim::SGD optimizer(
      rec.model->parameters(),
      torch::optim::SGDOptions(cfg.lr0).momentum(cfg.momentum));

  std::int64_t step = 0;
  if (ctx.resume) {
    auto loaded = load_checkpoint(*ctx.resume, cfg.network);
    torch::NoGradGuard no_grad;
    auto src = loaded.model->named_parameters();
    for (auto& p : rec.model->named_parameters()) p.value().copy_(src[p.key()]);
    auto src_buf = loaded.model->named_buffers();
    for (auto& b : rec.model->named_buffers()) b.value().copy_(src_buf[b.key()]);
    load_optimizer_state(*ctx.resume, optimizer);
    step = loaded.meta.step;
    log_line(ctx.log, "resumed at step " + std::to_string(step));
  }

  if (ctx.out_dir) std::filesystem::create_directories(*ctx.out_dir);
  const auto meta = [&](std::int64_t s) {
    return CheckpointMeta{cfg.network, nlohmann::json(cfg), s};
  };
  double best = -std::numeric_limits<double>::infinity();
  const std::int64_t stop =
      ctx.max_steps ? std::min(*ctx.max_steps, rec.total_steps) : rec.total_steps;

  while (step < stop) {
    const int epoch = static_cast<int>(step / per_epoch);
    const std::int64_t batch = step % per_epoch;
    const auto samples = make_batch(cfg, ctx.train, epoch, batch);
    const auto b = collate(samples);

    const double lr = lr_schedule(step, rec.total_steps, cfg);
    for (auto& group : optimizer.param_groups()) {
      static_cast<torch::optim::SGDOptions&>(group.options()).lr(lr);
    }
    optimizer.zero_grad();
    const auto out = rec.model->forward(b.images);
    const auto loss = nn::joint_loss(out.iebam, out.fbam, b.targets, cfg.loss_variant);
    const auto values = loss.values();
    if (!finite(values)) {
      std::string names;
      for (const auto& s : samples) names += (names.empty() ? "" : ",") + s.name;
      const std::string what = "non-finite loss at step " + std::to_string(step) +
                               " (epoch " + std::to_string(epoch) + ", batch " +
                               std::to_string(batch) + ", samples " + names + ")";
      if (ctx.out_dir) {
        nlohmann::json diag = {{"step", step},      {"epoch", epoch},
                               {"batch", batch},    {"samples", names},
                               {"lr", lr},          {"l_b", values.l_b},
                               {"l_in", values.l_in}, {"l_ex", values.l_ex},
                               {"l_body", values.l_body}, {"l_m", values.l_m}};
        std::ofstream(*ctx.out_dir / "nonfinite.json") << diag.dump(2);
        write_loss_csv(*ctx.out_dir / "loss.csv", rec.steps);
      }
      throw NonFiniteLoss(what, step, batch);
    }
    loss.total.backward();
    optimizer.step();
    rec.steps.push_back({step, lr, values});
    ++step;

    const bool epoch_end = step % per_epoch == 0;
    const int done_epochs = static_cast<int>(step / per_epoch);
    const bool last = step == rec.total_steps;
    if (ctx.log && (step % 10 == 0 || last)) {
      log_line(ctx.log, "step " + std::to_string(step) + "/" +
                            std::to_string(rec.total_steps) + " lr " +
                            std::to_string(lr) + " loss " +
                            std::to_string(values.total));
    }
    const bool want_eval =
        !ctx.val.empty() && epoch_end &&
        (last || (cfg.eval_every > 0 && done_epochs % cfg.eval_every == 0));
    if (want_eval) {
      auto report = evaluate_model(rec.model, ctx.val, cfg.target_size, cfg.threshold);
      rec.model->train();
      log_line(ctx.log, "epoch " + std::to_string(done_epochs) + " val iou " +
                            std::to_string(report.iou));
      const double score = selection_score(report);
      if (ctx.out_dir && score > best) {
        best = score;
        rec.best_checkpoint = *ctx.out_dir / "best.ckpt";
        save_checkpoint(*rec.best_checkpoint, rec.model, meta(step));
      }
      rec.validation.push_back({done_epochs, std::move(report)});
    }
  }

  if (ctx.out_dir) {
    rec.last_checkpoint = *ctx.out_dir / "last.ckpt";
    save_checkpoint(*rec.last_checkpoint, rec.model, meta(step), &optimizer);
    write_loss_csv(*ctx.out_dir / "loss.csv", rec.steps);
  }
  rec.model->eval();
  return rec;
}

MetricsReport evaluate_model(nn::GlassNet& model, std::span<const RawSample> data,
                             int target_size, double threshold) {
  if (data.empty()) throw std::invalid_argument("empty evaluation set");
  std::vector<EvalItem> items;
  items.reserve(data.size());
  for (const auto& raw : data) {
    const auto a = augment(raw.image, raw.mask, AugmentSpec{target_size, 0.0, 0});
    items.push_back({raw.name, predict(model, a.image), a.mask, raw.category});
  }
  return evaluate_set(items, threshold);
}

MetricsReport evaluate(const std::filesystem::path& checkpoint,
                       std::span<const RawSample> data, double threshold,
                       const std::optional<nn::NetworkConfig>& expected) {
  auto loaded = load_checkpoint(checkpoint, expected);
  TrainConfig cfg;
  if (!loaded.meta.train.empty()) cfg = loaded.meta.train.get<TrainConfig>();
  return evaluate_model(loaded.model, data, cfg.target_size, threshold);
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::boundary_mode: return "boundary_mode";
    case SweepAxis::loss_variant: return "loss_variant";
    case SweepAxis::thickness: return "thickness";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& text) {
  for (auto a : {SweepAxis::boundary_mode, SweepAxis::loss_variant,
                 SweepAxis::thickness}) {
    if (to_string(a) == text) return a;
  }
  throw std::invalid_argument("unknown sweep axis '" + text +
                              "' (expected boundary_mode, loss_variant or thickness)");
}

std::vector<std::pair<std::string, TrainConfig>> sweep_settings(
    const TrainConfig& base, SweepAxis axis) {
  std::vector<std::pair<std::string, TrainConfig>> out;
  switch (axis) {
    case SweepAxis::boundary_mode:
      for (auto m : {nn::BoundaryMode::in_only, nn::BoundaryMode::ex_only,
                     nn::BoundaryMode::in_ex}) {
        auto c = base;
        c.network = nn::ablation_config(c.network, m);
        out.emplace_back(nn::to_string(m), c);
      }
      break;
    case SweepAxis::loss_variant:
      for (auto v : {nn::LossVariant::bce, nn::LossVariant::dice,
                     nn::LossVariant::contour}) {
        auto c = base;
        c.loss_variant = v;
        out.emplace_back(nn::to_string(v), c);
      }
      break;
    case SweepAxis::thickness:
      for (int t = 3; t <= 7; ++t) {
        auto c = base;
        c.t_in = c.t_ex = t;
        out.emplace_back(std::to_string(t), c);
      }
      break;
  }
  return out;
}

std::vector<SweepRow> ablation_sweep(const TrainConfig& base, SweepAxis axis,
                                     const TrainContext& ctx) {
  std::vector<SweepRow> rows;
  const auto scored = ctx.val.empty() ? ctx.train : ctx.val;
  for (auto& [setting, cfg] : sweep_settings(base, axis)) {
    SweepRow row{setting, cfg, std::nullopt, {}};
    try {
      TrainContext run = ctx;
      run.val = {};
      run.resume.reset();
      if (ctx.out_dir) run.out_dir = *ctx.out_dir / (to_string(axis) + "_" + setting);
      auto rec = train(cfg, run);
      row.report = evaluate_model(rec.model, scored, cfg.target_size, cfg.threshold);
    } catch (const std::exception& e) {
      row.error = e.what();
      log_line(ctx.log, "sweep " + setting + " failed: " + row.error);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, SweepAxis axis,
                     std::span<const SweepRow> rows) {
  out << "axis,setting,iou,acc,f_beta,mae,ber,m_iou,m_ber,status\n";
  out.precision(6);
  for (const auto& r : rows) {
    out << to_string(axis) << ',' << r.setting << ',';
    if (!r.report) {
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      out << ",,,,,,,error: " << msg << '\n';
      continue;
    }
    const auto& m = *r.report;
    out << m.iou << ',' << m.acc << ',' << m.f_beta << ',' << m.mae << ',';
    if (std::isfinite(m.ber)) out << m.ber;
    out << ',';
    if (m.m_iou) out << *m.m_iou;
    out << ',';
    if (m.m_ber) out << *m.m_ber;
    out << ",ok\n";
  }
}

}  // namespace glassseg::harness
