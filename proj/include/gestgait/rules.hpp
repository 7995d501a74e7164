#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gestgait/geometry.hpp"
#include "gestgait/gestures.hpp"
#include "gestgait/landmarks.hpp"
#include "gestgait/measure.hpp"

namespace gestgait {

/// Pixel thresholds in the rule table are stated for this frame width and
/// scaled linearly with the actual width.
inline constexpr double kReferenceFrameWidth = 1280.0;

enum class Comparator { Less, Greater, AtLeast };

[[nodiscard]] std::string_view to_string(Comparator c) noexcept;
[[nodiscard]] bool compare(double value, Comparator c, double threshold) noexcept;

struct HullCondition {
  enum class Kind { AllInner, OutsideExactly };
  Kind kind = Kind::AllInner;
  // Bit f set: fingertip of finger f must be Outside. Every other fingertip
  // must not be Outside.
  std::uint8_t outside_mask = 0;

  [[nodiscard]] bool holds(const HandMeasurements& m) const noexcept;
};

struct AngleCondition {
  Finger finger;
  Comparator cmp;
  double threshold_deg;
};

struct DistanceConstraint {
  enum class Kind { Pixel, Ratio };
  Kind kind = Kind::Pixel;
  KeypointPair pair{};         // the measured pair, or the ratio numerator
  KeypointPair denominator{};  // ratio only
  Comparator cmp = Comparator::Greater;
  double value = 0.0;  // pixels at the reference width, or a dimensionless ratio
};

struct GestureRule {
  GestureLabel label = GestureLabel::Unrecognized;
  HullCondition hull;
  std::vector<AngleCondition> angles;
  std::vector<DistanceConstraint> distances;
};

struct PredicateResult {
  std::string description;
  bool holds = false;
  std::optional<double> measured;
};

struct RuleEvaluation {
  GestureLabel label = GestureLabel::Unrecognized;
  std::vector<PredicateResult> predicates;
  bool matched = false;
};

/// Per-rule predicate breakdown for one frame.
struct RuleReport {
  bool degenerate = false;
  std::string degenerate_reason;
  HandMeasurements measurements;
  std::vector<RuleEvaluation> rules;
  GestureLabel result = GestureLabel::Unrecognized;

  [[nodiscard]] const RuleEvaluation* find(GestureLabel label) const noexcept;
  [[nodiscard]] std::string to_text() const;
};

class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declarative gesture rule table. A frame is classified as the label of the
/// single matching rule; zero or several matches give Unrecognized.
class RuleTable {
 public:
  /// Throws RuleError unless every defined gesture appears exactly once and
  /// distance constraints only reference fingertips.
  explicit RuleTable(std::vector<GestureRule> rules);

  [[nodiscard]] static const RuleTable& standard();

  [[nodiscard]] static RuleTable from_json(std::string_view text);
  [[nodiscard]] std::string to_json() const;

  [[nodiscard]] std::span<const GestureRule> rules() const noexcept { return rules_; }

  [[nodiscard]] bool matches(const GestureRule& rule, const HandMeasurements& m,
                             double frame_width) const noexcept;
  [[nodiscard]] std::size_t match_count(const HandMeasurements& m,
                                        double frame_width) const noexcept;

  [[nodiscard]] GestureLabel classify(const HandMeasurements& m, double frame_width) const noexcept;
  [[nodiscard]] GestureLabel classify(const HandFrame& frame) const noexcept;

  /// Classifies many frames through the batched measurement kernel.
  [[nodiscard]] std::vector<GestureLabel> classify_batch(std::span<const HandFrame> frames) const;

  [[nodiscard]] RuleReport explain(const HandFrame& frame) const;

 private:
  std::vector<GestureRule> rules_;
};

[[nodiscard]] inline GestureLabel classify(const HandFrame& frame) noexcept {
  return RuleTable::standard().classify(frame);
}

}  // namespace gestgait
