// glassseg command-line front end.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "glassseg/batch.hpp"
#include "glassseg/data.hpp"
#include "glassseg/harness/config.hpp"
#include "glassseg/harness/trainer.hpp"
#include "glassseg/io.hpp"
#include "glassseg/metrics.hpp"
#include "glassseg/report_io.hpp"
#include "glassseg/synth.hpp"

namespace fs = std::filesystem;
using namespace glassseg;

namespace {

void print_errors(const std::vector<FileError>& errors) {
  for (const auto& e : errors) {
    std::cerr << "error: " << e.file.string() << ": " << e.message << '\n';
  }
}

std::vector<RawSample> load_items(const fs::path& dir, const std::string& split) {
  DatasetLoad load = fs::is_directory(dir / "images")
                         ? load_split_dir(dir)
                         : load_dataset(dir, parse_split(split));
  print_errors(load.errors);
  for (const auto& w : load.warnings) std::cerr << "warning: " << w << '\n';
  return std::move(load.items);
}

std::vector<RawSample> resolve(const harness::DataSpec& spec,
                               const std::optional<SynthSpec>& synthetic,
                               const std::string& split) {
  if (synthetic) return synth_dataset(*synthetic);
  if (!spec.root) return {};
  return load_items(*spec.root, split);
}

std::map<std::string, std::string> read_tsv(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

int run_decompose(const fs::path& masks, const fs::path& out, int t_in, int t_ex,
                  double sigma, int kernel) {
  DecomposeOptions opt{t_in, t_ex, GaussianParams{sigma, kernel}};
  const auto summary = batch_decompose(masks, out, opt);
  print_errors(summary.errors);
  std::cout << "processed " << summary.processed << ", errors "
            << summary.errors.size() << '\n';
  return summary.errors.empty() ? 0 : 1;
}

int run_metrics(const fs::path& pred_dir, const fs::path& gt_dir, bool prob,
                double threshold, const fs::path& report,
                const std::optional<fs::path>& categories,
                const std::optional<fs::path>& per_image) {
  const auto cats = categories ? read_tsv(*categories) : read_tsv(gt_dir / "categories.tsv");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(gt_dir)) {
    if (e.path().extension() == ".png") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<EvalItem> items;
  std::vector<FileError> errors;
  for (const auto& gt_path : files) {
    const auto name = gt_path.filename().string();
    try {
      auto gt = read_mask_png(gt_path);
      const auto pred_path = pred_dir / name;
      auto p = prob ? read_probability_png(pred_path)
                    : ProbabilityMap::from_mask(read_mask_png(pred_path));
      std::optional<std::string> cat;
      if (auto it = cats.find(name); it != cats.end()) cat = it->second;
      items.push_back({name, std::move(p), std::move(gt), cat});
    } catch (const std::exception& e) {
      errors.push_back({gt_path, e.what()});
    }
  }
  print_errors(errors);
  if (items.empty()) {
    std::cerr << "no evaluable prediction/ground-truth pairs\n";
    return 1;
  }
  const auto r = evaluate_set(items, threshold);
  write_report_json(report, r);
  if (per_image) {
    std::ofstream csv(*per_image);
    write_per_image_csv(csv, r);
  }
  std::cout << report_to_json(r)["overall"].dump() << '\n';
  return errors.empty() ? 0 : 1;
}

int run_train(const fs::path& config) {
  const auto spec = harness::load_run_spec(config.string());
  const auto train = resolve(spec.data, spec.data.synthetic_train, spec.data.train_split);
  const auto val = resolve(spec.data, spec.data.synthetic_val, spec.data.val_split);
  if (train.empty()) {
    std::cerr << "training set is empty\n";
    return 1;
  }
  harness::TrainContext ctx;
  ctx.train = train;
  ctx.val = val;
  ctx.out_dir = fs::path(spec.out_dir.value_or("run"));
  ctx.log = &std::cout;
  const auto rec = harness::train(spec.train, ctx);
  if (!rec.validation.empty()) {
    write_report_json(*ctx.out_dir / "val_report.json", rec.validation.back().report);
  }
  std::cout << "wrote " << rec.last_checkpoint->string() << '\n';
  return 0;
}

int run_eval(const fs::path& ckpt, const fs::path& data, const std::string& split,
             double threshold, const fs::path& report,
             const std::optional<fs::path>& per_image) {
  const auto items = load_items(data, split);
  if (items.empty()) {
    std::cerr << "no samples under " << data.string() << '\n';
    return 1;
  }
  const auto r = harness::evaluate(ckpt, items, threshold);
  write_report_json(report, r);
  std::ofstream csv(per_image.value_or(fs::path(report).replace_extension(".csv")));
  write_per_image_csv(csv, r);
  std::cout << report_to_json(r)["overall"].dump() << '\n';
  return 0;
}

int run_sweep(const std::string& axis, const fs::path& config, const fs::path& out) {
  const auto spec = harness::load_run_spec(config.string());
  const auto train = resolve(spec.data, spec.data.synthetic_train, spec.data.train_split);
  const auto val = resolve(spec.data, spec.data.synthetic_val, spec.data.val_split);
  if (train.empty()) {
    std::cerr << "training set is empty\n";
    return 1;
  }
  harness::TrainContext ctx;
  ctx.train = train;
  ctx.val = val;
  if (spec.out_dir) ctx.out_dir = fs::path(*spec.out_dir);
  ctx.log = &std::cout;
  const auto a = harness::parse_sweep_axis(axis);
  const auto rows = harness::ablation_sweep(spec.train, a, ctx);
  std::ofstream csv(out);
  harness::write_sweep_csv(csv, a, rows);
  harness::write_sweep_csv(std::cout, a, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glass surface segmentation toolkit"};
  app.require_subcommand(1);

  auto* dec = app.add_subcommand("decompose-gt", "derive region masks and weight maps");
  fs::path masks, out;
  int t_in = 5, t_ex = 5, kernel = 9;
  double sigma = 3.0;
  dec->add_option("--masks", masks)->required();
  dec->add_option("--out", out)->required();
  dec->add_option("--t-in", t_in);
  dec->add_option("--t-ex", t_ex);
  dec->add_option("--sigma", sigma);
  dec->add_option("--kernel", kernel);

  auto* met = app.add_subcommand("metrics", "score predictions against ground truth");
  fs::path pred, gt, report;
  bool prob = false;
  double threshold = 0.5;
  std::optional<fs::path> categories, per_image;
  met->add_option("--pred", pred)->required();
  met->add_option("--gt", gt)->required();
  met->add_flag("--prob", prob, "predictions are 8-bit probability maps");
  met->add_option("--threshold", threshold);
  met->add_option("--report", report)->required();
  met->add_option("--categories", categories, "filename<TAB>category file");
  met->add_option("--per-image", per_image, "per-image CSV output");

  auto* syn = app.add_subcommand("synth", "write a synthetic glass dataset");
  std::string kind = "mixed_scene";
  SynthSpec sspec;
  syn->add_option("--kind", kind);
  syn->add_option("--n", sspec.count);
  syn->add_option("--size", sspec.size);
  syn->add_option("--seed", sspec.seed);
  syn->add_option("--minority", sspec.minority_fraction);
  syn->add_option("--out", out)->required();

  auto* tr = app.add_subcommand("train", "train from a JSON run config");
  fs::path config;
  tr->add_option("--config", config)->required();

  auto* ev = app.add_subcommand("eval", "evaluate a checkpoint");
  fs::path ckpt, data;
  std::string split = "test";
  ev->add_option("--ckpt", ckpt)->required();
  ev->add_option("--data", data)->required();
  ev->add_option("--split", split);
  ev->add_option("--threshold", threshold);
  ev->add_option("--report", report)->required();
  ev->add_option("--per-image", per_image);

  auto* sw = app.add_subcommand("sweep", "one training run per setting of an axis");
  std::string axis;
  sw->add_option("--axis", axis)->required();
  sw->add_option("--config", config)->required();
  sw->add_option("--out", out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*dec) return run_decompose(masks, out, t_in, t_ex, sigma, kernel);
    if (*met) return run_metrics(pred, gt, prob, threshold, report, categories, per_image);
    if (*syn) {
      sspec.kind = parse_fixture_kind(kind);
      write_synth_dataset(out, sspec);
      std::cout << "wrote " << sspec.count << " samples to " << out.string() << '\n';
      return 0;
    }
    if (*tr) return run_train(config);
    if (*ev) return run_eval(ckpt, data, split, threshold, report, per_image);
    if (*sw) return run_sweep(axis, config, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
