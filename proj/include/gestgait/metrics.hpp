#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gestgait/gestures.hpp"
#include "gestgait/landmarks.hpp"

namespace gestgait {

/// One labelled prediction. An empty ground truth is background; an empty
/// prediction means the detector reported nothing.
struct EvalRecord {
  std::optional<GestureLabel> ground_truth;
  std::optional<GestureLabel> predicted;
  double confidence = 0.0;
  std::optional<BoundingBox> gt_box;
  std::optional<BoundingBox> pred_box;
  // Records sharing an image id are matched jointly; otherwise each record
  // stands alone.
  std::optional<std::string> image;
};

struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

/// A detection matches a ground truth of the same class when box IoU reaches this.
inline constexpr double kMatchIou = 0.5;

/// Geometric intersection over union of two boxes; 0 for empty union.
[[nodiscard]] double box_iou(const BoundingBox& a, const BoundingBox& b) noexcept;

/// Per-record matching outcome: whether the prediction found a ground truth,
/// and whether the ground truth was found by some prediction.
struct MatchResult {
  std::vector<bool> prediction_matched;
  std::vector<bool> truth_matched;
};

/// Greedy one-to-one matching in descending confidence, within each image.
/// Box IoU is required only when both boxes are present.
[[nodiscard]] MatchResult match_records(std::span<const EvalRecord> records);

[[nodiscard]] ClassCounts counts(std::span<const EvalRecord> records, GestureLabel cls);
[[nodiscard]] ClassCounts counts(std::span<const EvalRecord> records, const MatchResult& m,
                                 GestureLabel cls);

// Percentages. A zero denominator yields 0.
[[nodiscard]] double precision(const ClassCounts& c) noexcept;
[[nodiscard]] double recall(const ClassCounts& c) noexcept;
/// Count-based overlap TP / (TP + FP + FN); not the box IoU.
[[nodiscard]] double iou_metric(const ClassCounts& c) noexcept;
[[nodiscard]] double f1(const ClassCounts& c) noexcept;

/// Area under the all-point interpolated precision/recall curve, in percent.
/// Predictions with equal confidence enter the curve together. Empty when
/// the class has no ground-truth positives.
[[nodiscard]] std::optional<double> average_precision(std::span<const EvalRecord> records,
                                                      GestureLabel cls);
[[nodiscard]] std::optional<double> average_precision(std::span<const EvalRecord> records,
                                                      const MatchResult& m, GestureLabel cls);

class MetricsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean of the defined per-class APs; throws MetricsError if none is defined.
[[nodiscard]] double map_at_05(std::span<const EvalRecord> records,
                               std::span<const GestureLabel> classes);
[[nodiscard]] double mean_ap(std::span<const std::optional<double>> aps);

struct ClassMetrics {
  GestureLabel label = GestureLabel::Unrecognized;
  ClassCounts counts;
  double precision = 0.0;
  double recall = 0.0;
  double iou = 0.0;
  double f1 = 0.0;
  std::optional<double> ap;
};

struct MetricsReport {
  std::vector<ClassMetrics> classes;
  std::optional<double> map;  // empty when no class has ground truth
  std::size_t k = 0;          // classes contributing to the mean

  [[nodiscard]] std::string to_json() const;
  /// Aligned table: Gesture, Pre, Re, IoU, F1, AP, then the mAP line.
  [[nodiscard]] std::string to_table() const;
};

[[nodiscard]] MetricsReport evaluate(std::span<const EvalRecord> records,
                                     std::span<const GestureLabel> classes = kDefinedGestures);

class RecordParseError : public std::runtime_error {
 public:
  RecordParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Parses a JSON Lines stream of records: gt, pred (label or null), conf,
/// optional gt_box / pred_box as [u_min, v_min, u_max, v_max], optional image.
[[nodiscard]] std::vector<EvalRecord> read_records(std::istream& in);
[[nodiscard]] std::string record_to_json(const EvalRecord& r);

}  // namespace gestgait
