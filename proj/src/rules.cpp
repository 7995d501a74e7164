#include "gestgait/rules.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "json.hpp"

namespace gestgait {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Comparator c) noexcept {
  switch (c) {
    case Comparator::Less: return "<";
    case Comparator::Greater: return ">";
    case Comparator::AtLeast: return ">=";
  }
  return "?";
}

bool compare(double value, Comparator c, double threshold) noexcept {
  switch (c) {
    case Comparator::Less: return value < threshold;
    case Comparator::Greater: return value > threshold;
    case Comparator::AtLeast: return value >= threshold;
  }
  return false;
}

namespace {

std::optional<Comparator> comparator_from_string(std::string_view s) {
  for (Comparator c : {Comparator::Less, Comparator::Greater, Comparator::AtLeast}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

constexpr std::uint8_t tip_bit(Finger f) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(f)); }

std::uint8_t tips(std::initializer_list<Finger> fingers) {
  std::uint8_t mask = 0;
  for (Finger f : fingers) mask |= tip_bit(f);
  return mask;
}

HullCondition outside_exactly(std::initializer_list<Finger> fingers) {
  return {HullCondition::Kind::OutsideExactly, tips(fingers)};
}

constexpr Comparator lt = Comparator::Less;
constexpr Comparator gt = Comparator::Greater;

// Thresholds per finger in Finger order: thumb, fore, middle, ring, pinky.
std::vector<AngleCondition> angles(std::array<std::pair<Comparator, double>, kFingerCount> t) {
  std::vector<AngleCondition> out;
  for (std::size_t f = 0; f < kFingerCount; ++f) {
    out.push_back({kFingers[f], t[f].first, t[f].second});
  }
  return out;
}

std::vector<GestureRule> standard_rules() {
  using F = Finger;
  using G = GestureLabel;
  std::vector<GestureRule> r;
  r.push_back({G::G0, {HullCondition::Kind::AllInner, 0},
               angles({{{lt, 53}, {lt, 65}, {lt, 65}, {lt, 65}, {lt, 49}}}), {}});
  r.push_back({G::G1, outside_exactly({F::Forefinger}),
               angles({{{lt, 53}, {gt, 160}, {lt, 65}, {lt, 65}, {lt, 49}}}), {}});
  r.push_back({G::G2, outside_exactly({F::Forefinger, F::Middle}),
               angles({{{lt, 53}, {gt, 160}, {gt, 65}, {lt, 65}, {lt, 49}}}), {}});
  r.push_back({G::G3, outside_exactly({F::Forefinger, F::Middle, F::Ring}),
               angles({{{lt, 53}, {gt, 160}, {gt, 65}, {gt, 65}, {lt, 49}}}), {}});
  r.push_back({G::G4, outside_exactly({F::Forefinger, F::Middle, F::Ring, F::Pinky}),
               angles({{{lt, 53}, {gt, 160}, {gt, 65}, {gt, 65}, {gt, 49}}}), {}});
  r.push_back({G::G5, outside_exactly({F::Thumb, F::Forefinger, F::Middle, F::Ring, F::Pinky}),
               angles({{{gt, 53}, {gt, 170}, {gt, 65}, {gt, 65}, {gt, 49}}}), {}});
  r.push_back({G::G6, outside_exactly({F::Thumb, F::Pinky}),
               angles({{{gt, 53}, {lt, 65}, {lt, 65}, {lt, 65}, {gt, 49}}}),
               {{DistanceConstraint::Kind::Pixel, {4, 20}, {}, gt, 100}}});
  r.push_back({G::G7, outside_exactly({F::Thumb, F::Forefinger, F::Middle}),
               angles({{{gt, 53}, {gt, 160}, {gt, 65}, {lt, 65}, {lt, 49}}}),
               {{DistanceConstraint::Kind::Ratio, {4, 12}, {8, 12}, lt, 2}}});
  r.push_back({G::G8, outside_exactly({F::Thumb, F::Forefinger}),
               angles({{{gt, 53}, {gt, 160}, {lt, 65}, {lt, 65}, {lt, 49}}}),
               {{DistanceConstraint::Kind::Pixel, {4, 8}, {}, gt, 100}}});
  {
    GestureRule g9{G::G9, outside_exactly({F::Forefinger}),
                   angles({{{lt, 53}, {lt, 120}, {lt, 65}, {lt, 65}, {lt, 49}}}), {}};
    // Forefinger band [65, 120): a fully curled index belongs to no rule.
    g9.angles.insert(g9.angles.begin() + 2, {F::Forefinger, Comparator::AtLeast, 65});
    r.push_back(std::move(g9));
  }
  r.push_back({G::Love, outside_exactly({F::Thumb, F::Forefinger, F::Pinky}),
               angles({{{gt, 53}, {gt, 160}, {lt, 65}, {lt, 65}, {gt, 49}}}), {}});
  r.push_back({G::Rock, outside_exactly({F::Forefinger, F::Pinky}),
               angles({{{lt, 53}, {gt, 160}, {lt, 65}, {lt, 65}, {gt, 49}}}), {}});
  return r;
}

std::string tip_set_string(std::uint8_t mask) {
  std::string s = "{";
  bool first = true;
  for (std::size_t f = 0; f < kFingerCount; ++f) {
    if (mask & (1u << f)) {
      if (!first) s += ",";
      s += std::to_string(kFingertips[f]);
      first = false;
    }
  }
  return s + "}";
}

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string pair_string(KeypointPair p) {
  return "P(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}

double distance_of(const HandMeasurements& m, KeypointPair p) {
  return m.distance(*finger_of_tip(p.first), *finger_of_tip(p.second));
}

bool distance_holds(const DistanceConstraint& d, const HandMeasurements& m, double scale,
                    std::optional<double>* measured) {
  if (d.kind == DistanceConstraint::Kind::Pixel) {
    const double dist = distance_of(m, d.pair);
    if (measured) *measured = dist;
    return compare(dist, d.cmp, d.value * scale);
  }
  const double den = distance_of(m, d.denominator);
  if (den == 0.0) {
    if (measured) *measured = std::nullopt;
    return false;
  }
  const double ratio = distance_of(m, d.pair) / den;
  if (measured) *measured = ratio;
  return compare(ratio, d.cmp, d.value);
}

void validate(const std::vector<GestureRule>& rules) {
  std::array<int, kDefinedGestureCount> seen{};
  for (const GestureRule& rule : rules) {
    if (!is_defined(rule.label)) throw RuleError("rule table contains an Unrecognized rule");
    if (++seen[static_cast<std::size_t>(rule.label)] > 1) {
      throw RuleError("duplicate rule for " + std::string(to_string(rule.label)));
    }
    for (const DistanceConstraint& d : rule.distances) {
      const bool ok = finger_of_tip(d.pair.first) && finger_of_tip(d.pair.second) &&
                      (d.kind == DistanceConstraint::Kind::Pixel ||
                       (finger_of_tip(d.denominator.first) && finger_of_tip(d.denominator.second)));
      if (!ok) {
        throw RuleError("distance constraint of " + std::string(to_string(rule.label)) +
                        " references a non-fingertip keypoint");
      }
    }
  }
  for (std::size_t i = 0; i < kDefinedGestureCount; ++i) {
    if (seen[i] != 1) {
      throw RuleError("missing rule for " + std::string(to_string(kDefinedGestures[i])));
    }
  }
}

}  // namespace

bool HullCondition::holds(const HandMeasurements& m) const noexcept {
  for (std::size_t f = 0; f < kFingerCount; ++f) {
    const Membership tip = m.membership[f];
    if (kind == Kind::AllInner) {
      if (tip != Membership::Inner) return false;
    } else {
      const bool must_be_outside = outside_mask & (1u << f);
      if (must_be_outside != (tip == Membership::Outside)) return false;
    }
  }
  return true;
}

const RuleEvaluation* RuleReport::find(GestureLabel label) const noexcept {
  for (const RuleEvaluation& r : rules) {
    if (r.label == label) return &r;
  }
  return nullptr;
}

std::string RuleReport::to_text() const {
  std::ostringstream os;
  os << "result: " << to_string(result) << "\n";
  if (degenerate) os << "degenerate: " << degenerate_reason << "\n";
  for (const RuleEvaluation& r : rules) {
    os << to_string(r.label) << (r.matched ? "  MATCH" : "") << "\n";
    for (const PredicateResult& p : r.predicates) {
      os << "  [" << (p.holds ? "x" : " ") << "] " << p.description;
      if (p.measured) os << "  (" << format_number(*p.measured) << ")";
      os << "\n";
    }
  }
  return os.str();
}

RuleTable::RuleTable(std::vector<GestureRule> rules) : rules_(std::move(rules)) {
  validate(rules_);
}

const RuleTable& RuleTable::standard() {
  static const RuleTable table(standard_rules());
  return table;
}

bool RuleTable::matches(const GestureRule& rule, const HandMeasurements& m,
                        double frame_width) const noexcept {
  if (!rule.hull.holds(m)) return false;
  for (const AngleCondition& a : rule.angles) {
    const auto angle = m.angle(a.finger);
    if (!angle || !compare(*angle, a.cmp, a.threshold_deg)) return false;
  }
  const double scale = frame_width / kReferenceFrameWidth;
  for (const DistanceConstraint& d : rule.distances) {
    if (!distance_holds(d, m, scale, nullptr)) return false;
  }
  return true;
}

std::size_t RuleTable::match_count(const HandMeasurements& m, double frame_width) const noexcept {
  std::size_t n = 0;
  for (const GestureRule& rule : rules_) {
    if (matches(rule, m, frame_width)) ++n;
  }
  return n;
}

GestureLabel RuleTable::classify(const HandMeasurements& m, double frame_width) const noexcept {
  if (!m.angles_valid() || m.hull_degenerate) return GestureLabel::Unrecognized;
  GestureLabel found = GestureLabel::Unrecognized;
  std::size_t n = 0;
  for (const GestureRule& rule : rules_) {
    if (matches(rule, m, frame_width)) {
      found = rule.label;
      if (++n > 1) return GestureLabel::Unrecognized;
    }
  }
  return found;
}

GestureLabel RuleTable::classify(const HandFrame& frame) const noexcept {
  return classify(measure(frame), frame.frame_width);
}

std::vector<GestureLabel> RuleTable::classify_batch(std::span<const HandFrame> frames) const {
  std::vector<HandMeasurements> m(frames.size());
  measure_batch(frames, m);
  std::vector<GestureLabel> out(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out[i] = classify(m[i], frames[i].frame_width);
  }
  return out;
}

RuleReport RuleTable::explain(const HandFrame& frame) const {
  RuleReport report;
  const HandMeasurements m = measure(frame);
  report.measurements = m;
  if (!m.angles_valid()) {
    report.degenerate = true;
    std::string fingers;
    for (Finger f : kFingers) {
      if (!m.angle(f)) fingers += (fingers.empty() ? "" : ",") + std::string(to_string(f));
    }
    report.degenerate_reason = "undefined joint angle: " + fingers;
  } else if (m.hull_degenerate) {
    report.degenerate = true;
    report.degenerate_reason = "fingertip inside inner polygon but outside outer polygon";
  }

  const double scale = frame.frame_width / kReferenceFrameWidth;
  for (const GestureRule& rule : rules_) {
    RuleEvaluation ev;
    ev.label = rule.label;
    {
      PredicateResult p;
      p.description = rule.hull.kind == HullCondition::Kind::AllInner
                          ? "hull: all fingertips inner"
                          : "hull: outside exactly " + tip_set_string(rule.hull.outside_mask);
      p.holds = rule.hull.holds(m);
      ev.predicates.push_back(std::move(p));
    }
    for (const AngleCondition& a : rule.angles) {
      PredicateResult p;
      p.description = std::string(to_string(a.finger)) + " angle " + std::string(to_string(a.cmp)) +
                      " " + format_number(a.threshold_deg);
      p.measured = m.angle(a.finger);
      p.holds = p.measured && compare(*p.measured, a.cmp, a.threshold_deg);
      ev.predicates.push_back(std::move(p));
    }
    for (const DistanceConstraint& d : rule.distances) {
      PredicateResult p;
      if (d.kind == DistanceConstraint::Kind::Pixel) {
        p.description = pair_string(d.pair) + " " + std::string(to_string(d.cmp)) + " " +
                        format_number(d.value * scale) + " px";
      } else {
        p.description = pair_string(d.pair) + "/" + pair_string(d.denominator) + " " +
                        std::string(to_string(d.cmp)) + " " + format_number(d.value);
      }
      p.holds = distance_holds(d, m, scale, &p.measured);
      ev.predicates.push_back(std::move(p));
    }
    ev.matched = std::all_of(ev.predicates.begin(), ev.predicates.end(),
                             [](const PredicateResult& p) { return p.holds; });
    report.rules.push_back(std::move(ev));
  }
  report.result = classify(m, frame.frame_width);
  return report;
}

// JSON form: [{"label", "hull", "angles", "distances"}, ...]

std::string RuleTable::to_json() const {
  ojson doc = ojson::array();
  for (const GestureRule& rule : rules_) {
    ojson r;
    r["label"] = to_string(rule.label);
    ojson hull;
    if (rule.hull.kind == HullCondition::Kind::AllInner) {
      hull["mode"] = "all_inner";
    } else {
      hull["mode"] = "outside_exactly";
      ojson tips_json = ojson::array();
      for (std::size_t f = 0; f < kFingerCount; ++f) {
        if (rule.hull.outside_mask & (1u << f)) tips_json.push_back(kFingertips[f]);
      }
      hull["outside"] = tips_json;
    }
    r["hull"] = hull;
    ojson angles_json = ojson::array();
    for (const AngleCondition& a : rule.angles) {
      angles_json.push_back(
          {{"finger", to_string(a.finger)}, {"cmp", to_string(a.cmp)}, {"deg", a.threshold_deg}});
    }
    r["angles"] = angles_json;
    ojson dist_json = ojson::array();
    for (const DistanceConstraint& d : rule.distances) {
      ojson dj;
      if (d.kind == DistanceConstraint::Kind::Pixel) {
        dj["kind"] = "pixel";
        dj["pair"] = {d.pair.first, d.pair.second};
      } else {
        dj["kind"] = "ratio";
        dj["pair"] = {d.pair.first, d.pair.second};
        dj["denominator"] = {d.denominator.first, d.denominator.second};
      }
      dj["cmp"] = to_string(d.cmp);
      dj["value"] = d.value;
      dist_json.push_back(dj);
    }
    r["distances"] = dist_json;
    doc.push_back(r);
  }
  return doc.dump(2);
}

RuleTable RuleTable::from_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw RuleError(std::string("rule table is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw RuleError("rule table must be a JSON array");

  auto comparator = [](const ojson& j) {
    const auto c = comparator_from_string(j.get<std::string>());
    if (!c) throw RuleError("unknown comparator " + j.get<std::string>());
    return *c;
  };
  auto pair = [](const ojson& j) {
    if (!j.is_array() || j.size() != 2) throw RuleError("keypoint pair must have two entries");
    return KeypointPair{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
  };

  std::vector<GestureRule> rules;
  try {
    for (const ojson& r : doc) {
      GestureRule rule;
      const auto label = gesture_from_string(r.at("label").get<std::string>());
      if (!label) throw RuleError("unknown label " + r.at("label").get<std::string>());
      rule.label = *label;

      const ojson& hull = r.at("hull");
      const std::string mode = hull.at("mode").get<std::string>();
      if (mode == "all_inner") {
        rule.hull = {HullCondition::Kind::AllInner, 0};
      } else if (mode == "outside_exactly") {
        rule.hull.kind = HullCondition::Kind::OutsideExactly;
        for (const ojson& t : hull.at("outside")) {
          const auto f = finger_of_tip(t.get<std::size_t>());
          if (!f) throw RuleError("hull references non-fingertip keypoint");
          rule.hull.outside_mask |= tip_bit(*f);
        }
      } else {
        throw RuleError("unknown hull mode " + mode);
      }

      for (const ojson& a : r.at("angles")) {
        const auto f = finger_from_string(a.at("finger").get<std::string>());
        if (!f) throw RuleError("unknown finger " + a.at("finger").get<std::string>());
        rule.angles.push_back({*f, comparator(a.at("cmp")), a.at("deg").get<double>()});
      }

      for (const ojson& d : r.at("distances")) {
        DistanceConstraint dc;
        const std::string kind = d.at("kind").get<std::string>();
        if (kind == "pixel") {
          dc.kind = DistanceConstraint::Kind::Pixel;
        } else if (kind == "ratio") {
          dc.kind = DistanceConstraint::Kind::Ratio;
          dc.denominator = pair(d.at("denominator"));
        } else {
          throw RuleError("unknown distance kind " + kind);
        }
        dc.pair = pair(d.at("pair"));
        dc.cmp = comparator(d.at("cmp"));
        dc.value = d.at("value").get<double>();
        rule.distances.push_back(dc);
      }
      rules.push_back(std::move(rule));
    }
  } catch (const nlohmann::json::exception& e) {
    throw RuleError(std::string("malformed rule table: ") + e.what());
  }
  return RuleTable(std::move(rules));
}

}  // namespace gestgait
