#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glassseg/grid.hpp"
#include "glassseg/mask.hpp"

namespace glassseg {

/// Per-pixel probabilities in [0,1].
class ProbabilityMap {
 public:
  explicit ProbabilityMap(Grid<float> values);
  static ProbabilityMap from_mask(const BinaryMask& mask);

  int height() const { return values_.height(); }
  int width() const { return values_.width(); }
  float operator()(int y, int x) const { return values_(y, x); }
  const Grid<float>& grid() const { return values_; }

  /// Pixels with probability >= threshold.
  BinaryMask threshold(double threshold) const;

 private:
  Grid<float> values_;
};

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  std::int64_t n_p() const { return tp + fn; }
  std::int64_t n_n() const { return tn + fp; }
  std::int64_t total() const { return tp + tn + fp + fn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

/// tp / (tp + fp + fn); 1 when both masks are empty.
double iou(const ConfusionCounts& c);
double accuracy(const ConfusionCounts& c);

struct FBeta {
  double value = 0.0;
  bool degenerate = false;
};

inline constexpr double kDefaultBetaSq = 0.3;

/// Plain F-beta on a thresholded mask. When precision or recall is undefined,
/// or tp = 0, the value is 0 and the result is flagged degenerate.
FBeta f_beta(const ConfusionCounts& c, double beta_sq = kDefaultBetaSq);

/// Mean absolute error between a probability map and the ground truth.
double mae(const ProbabilityMap& pred, const BinaryMask& gt);

/// Balance error rate in percent; nullopt when either class is absent.
std::optional<double> ber(const ConfusionCounts& c);

struct EvalItem {
  std::string name;
  ProbabilityMap prob;
  BinaryMask gt;
  std::optional<std::string> category;
};

struct ImageMetrics {
  std::string name;
  std::optional<std::string> category;
  ConfusionCounts counts;
  double iou = 0.0;
  double acc = 0.0;
  double f_beta = 0.0;
  double mae = 0.0;
  std::optional<double> ber;
  bool f_beta_degenerate = false;
};

struct DegenerateImage {
  std::string name;
  std::string reason;  // "f_beta" or "ber"
};

struct MetricsReport {
  double iou = 0.0;
  double acc = 0.0;
  double f_beta = 0.0;
  double mae = 0.0;
  /// NaN when no image in the set contains both classes.
  double ber = 0.0;
  ConfusionCounts counts;
  std::size_t image_count = 0;

  std::map<std::string, MetricsReport> per_category;
  std::optional<double> m_iou;
  std::optional<double> m_ber;

  std::vector<ImageMetrics> per_image;
  std::vector<DegenerateImage> degenerate_images;
};

ImageMetrics evaluate_image(const EvalItem& item, double threshold,
                            double beta_sq = kDefaultBetaSq);

/// IoU, Acc and BER pool confusion counts over every pixel of the set (BER
/// only over images holding both classes); F-beta and MAE are per-image
/// means. Categories, when present, yield per-category reports and their
/// means.
MetricsReport evaluate_set(std::span<const EvalItem> items,
                           double threshold = 0.5,
                           double beta_sq = kDefaultBetaSq);

/// Aggregates already-computed per-image metrics (used by evaluate_set).
MetricsReport aggregate(std::span<const ImageMetrics> images);

}  // namespace glassseg
