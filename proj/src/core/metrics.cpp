#include "glassseg/metrics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace glassseg {

ProbabilityMap::ProbabilityMap(Grid<float> values) : values_(std::move(values)) {
  for (float v : values_.values()) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw std::invalid_argument("probability " + std::to_string(v) +
                                  " is outside [0,1]");
    }
  }
}

ProbabilityMap ProbabilityMap::from_mask(const BinaryMask& mask) {
  Grid<float> g(mask.height(), mask.width(), 0.0f);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) g(y, x) = mask(y, x) ? 1.0f : 0.0f;
  }
  return ProbabilityMap(std::move(g));
}

BinaryMask ProbabilityMap::threshold(double threshold) const {
  BinaryMask out(height(), width());
  for (int y = 0; y < height(); ++y) {
    for (int x = 0; x < width(); ++x) out.set(y, x, values_(y, x) >= threshold);
  }
  return out;
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_shape(pred.grid(), gt.grid(), "confusion");
  ConfusionCounts c;
  auto p = pred.values();
  auto g = gt.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      g[i] ? ++c.tp : ++c.fp;
    } else {
      g[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

double iou(const ConfusionCounts& c) {
  const auto uni = c.tp + c.fp + c.fn;
  return uni == 0 ? 1.0 : double(c.tp) / double(uni);
}

double accuracy(const ConfusionCounts& c) {
  return c.total() == 0 ? 0.0 : double(c.tp + c.tn) / double(c.total());
}

FBeta f_beta(const ConfusionCounts& c, double beta_sq) {
  if (c.tp == 0) return {0.0, true};
  const double precision = double(c.tp) / double(c.tp + c.fp);
  const double recall = double(c.tp) / double(c.tp + c.fn);
  return {(1.0 + beta_sq) * precision * recall / (beta_sq * precision + recall),
          false};
}

double mae(const ProbabilityMap& pred, const BinaryMask& gt) {
  require_same_shape(pred.grid(), gt.grid(), "mae");
  double sum = 0.0;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      sum += std::abs(double(pred(y, x)) - (gt(y, x) ? 1.0 : 0.0));
    }
  }
  return sum / double(gt.size());
}

std::optional<double> ber(const ConfusionCounts& c) {
  if (c.n_p() == 0 || c.n_n() == 0) return std::nullopt;
  return (1.0 - 0.5 * (double(c.tp) / double(c.n_p()) +
                       double(c.tn) / double(c.n_n()))) *
         100.0;
}

ImageMetrics evaluate_image(const EvalItem& item, double threshold,
                            double beta_sq) {
  const BinaryMask pred = item.prob.threshold(threshold);
  ImageMetrics m;
  m.name = item.name;
  m.category = item.category;
  m.counts = confusion(pred, item.gt);
  m.iou = iou(m.counts);
  m.acc = accuracy(m.counts);
  const FBeta f = f_beta(m.counts, beta_sq);
  m.f_beta = f.value;
  m.f_beta_degenerate = f.degenerate;
  m.mae = mae(item.prob, item.gt);
  m.ber = ber(m.counts);
  return m;
}

namespace {

MetricsReport pool(std::span<const ImageMetrics> images) {
  MetricsReport r;
  ConfusionCounts ber_counts;
  bool any_ber = false;
  double f_sum = 0.0;
  double mae_sum = 0.0;
  for (const auto& m : images) {
    r.counts += m.counts;
    f_sum += m.f_beta;
    mae_sum += m.mae;
    if (m.ber) {
      ber_counts += m.counts;
      any_ber = true;
    } else {
      r.degenerate_images.push_back({m.name, "ber"});
    }
    if (m.f_beta_degenerate) r.degenerate_images.push_back({m.name, "f_beta"});
  }
  r.image_count = images.size();
  r.iou = iou(r.counts);
  r.acc = accuracy(r.counts);
  r.f_beta = f_sum / double(images.size());
  r.mae = mae_sum / double(images.size());
  r.ber = any_ber ? *ber(ber_counts) : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace

MetricsReport aggregate(std::span<const ImageMetrics> images) {
  if (images.empty()) {
    throw std::invalid_argument("cannot evaluate an empty prediction set");
  }
  MetricsReport report = pool(images);
  report.per_image.assign(images.begin(), images.end());

  std::map<std::string, std::vector<ImageMetrics>> by_category;
  for (const auto& m : images) {
    if (m.category) by_category[*m.category].push_back(m);
  }
  if (!by_category.empty()) {
    double iou_sum = 0.0;
    double ber_sum = 0.0;
    int ber_n = 0;
    for (const auto& [name, members] : by_category) {
      MetricsReport sub = pool(members);
      iou_sum += sub.iou;
      if (!std::isnan(sub.ber)) {
        ber_sum += sub.ber;
        ++ber_n;
      }
      report.per_category.emplace(name, std::move(sub));
    }
    report.m_iou = iou_sum / double(by_category.size());
    if (ber_n > 0) report.m_ber = ber_sum / ber_n;
  }
  return report;
}

MetricsReport evaluate_set(std::span<const EvalItem> items, double threshold,
                           double beta_sq) {
  if (items.empty()) {
    throw std::invalid_argument("cannot evaluate an empty prediction set");
  }
  std::vector<ImageMetrics> images;
  images.reserve(items.size());
  for (const auto& item : items) {
    images.push_back(evaluate_image(item, threshold, beta_sq));
  }
  return aggregate(images);
}

}  // namespace glassseg
