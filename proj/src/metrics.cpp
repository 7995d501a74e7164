#include "gestgait/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace gestgait {

using ojson = nlohmann::ordered_json;

double box_iou(const BoundingBox& a, const BoundingBox& b) noexcept {
  const double iw = std::min(a.u_max, b.u_max) - std::max(a.u_min, b.u_min);
  const double ih = std::min(a.v_max, b.v_max) - std::max(a.v_min, b.v_min);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double area_a = (a.u_max - a.u_min) * (a.v_max - a.v_min);
  const double area_b = (b.u_max - b.u_min) * (b.v_max - b.v_min);
  const double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

MatchResult match_records(std::span<const EvalRecord> records) {
  MatchResult m;
  m.prediction_matched.assign(records.size(), false);
  m.truth_matched.assign(records.size(), false);

  // Group by image; anonymous records form singleton groups.
  std::map<std::string, std::vector<std::size_t>> images;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].image) {
      images[*records[i].image].push_back(i);
    } else {
      groups.push_back({i});
    }
  }
  for (auto& [id, members] : images) groups.push_back(std::move(members));

  for (const auto& group : groups) {
    std::vector<std::size_t> preds;
    for (std::size_t i : group) {
      if (records[i].predicted) preds.push_back(i);
    }
    std::stable_sort(preds.begin(), preds.end(), [&](std::size_t a, std::size_t b) {
      return records[a].confidence > records[b].confidence;
    });
    for (std::size_t p : preds) {
      const EvalRecord& pr = records[p];
      std::optional<std::size_t> best;
      double best_iou = -1.0;
      for (std::size_t g : group) {
        const EvalRecord& gr = records[g];
        if (m.truth_matched[g] || gr.ground_truth != pr.predicted) continue;
        double score;
        if (gr.gt_box && pr.pred_box) {
          score = box_iou(*gr.gt_box, *pr.pred_box);
          if (score < kMatchIou) continue;
        } else {
          // Label-only match; the prediction's own record wins ties.
          score = g == p ? 2.0 : 1.5;
        }
        if (score > best_iou) {
          best_iou = score;
          best = g;
        }
      }
      if (best) {
        m.prediction_matched[p] = true;
        m.truth_matched[*best] = true;
      }
    }
  }
  return m;
}

ClassCounts counts(std::span<const EvalRecord> records, const MatchResult& m, GestureLabel cls) {
  ClassCounts c;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const EvalRecord& r = records[i];
    const bool pred_is = r.predicted == cls;
    const bool gt_is = r.ground_truth == cls;
    if (pred_is) (m.prediction_matched[i] ? c.tp : c.fp)++;
    if (gt_is && !m.truth_matched[i]) c.fn++;
    if (!pred_is && !gt_is) c.tn++;
  }
  return c;
}

ClassCounts counts(std::span<const EvalRecord> records, GestureLabel cls) {
  return counts(records, match_records(records), cls);
}

namespace {
double percent(std::size_t num, std::size_t den) noexcept {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

double precision(const ClassCounts& c) noexcept { return percent(c.tp, c.tp + c.fp); }
double recall(const ClassCounts& c) noexcept { return percent(c.tp, c.tp + c.fn); }
double iou_metric(const ClassCounts& c) noexcept { return percent(c.tp, c.tp + c.fp + c.fn); }

double f1(const ClassCounts& c) noexcept {
  const double p = precision(c);
  const double r = recall(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

std::optional<double> average_precision(std::span<const EvalRecord> records, const MatchResult& m,
                                        GestureLabel cls) {
  std::size_t positives = 0;
  std::vector<std::size_t> preds;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].ground_truth == cls) ++positives;
    if (records[i].predicted == cls) preds.push_back(i);
  }
  if (positives == 0) return std::nullopt;

  std::stable_sort(preds.begin(), preds.end(), [&](std::size_t a, std::size_t b) {
    return records[a].confidence > records[b].confidence;
  });

  // One curve point per distinct confidence.
  std::vector<double> rec;
  std::vector<double> prec;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < preds.size();) {
    const double conf = records[preds[k]].confidence;
    for (; k < preds.size() && records[preds[k]].confidence == conf; ++k) {
      (m.prediction_matched[preds[k]] ? tp : fp)++;
    }
    rec.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    prec.push_back(static_cast<double>(tp) / static_cast<double>(tp + fp));
  }

  for (std::size_t i = prec.size(); i-- > 1;) {
    prec[i - 1] = std::max(prec[i - 1], prec[i]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    ap += (rec[i] - prev_recall) * prec[i];
    prev_recall = rec[i];
  }
  return 100.0 * ap;
}

std::optional<double> average_precision(std::span<const EvalRecord> records, GestureLabel cls) {
  return average_precision(records, match_records(records), cls);
}

double mean_ap(std::span<const std::optional<double>> aps) {
  double sum = 0.0;
  std::size_t k = 0;
  for (const auto& ap : aps) {
    if (ap) {
      sum += *ap;
      ++k;
    }
  }
  if (k == 0) throw MetricsError("mAP undefined: no class has ground-truth positives");
  return sum / static_cast<double>(k);
}

double map_at_05(std::span<const EvalRecord> records, std::span<const GestureLabel> classes) {
  const MatchResult m = match_records(records);
  std::vector<std::optional<double>> aps;
  for (GestureLabel c : classes) aps.push_back(average_precision(records, m, c));
  return mean_ap(aps);
}

MetricsReport evaluate(std::span<const EvalRecord> records, std::span<const GestureLabel> classes) {
  const MatchResult m = match_records(records);
  MetricsReport report;
  std::vector<std::optional<double>> aps;
  for (GestureLabel c : classes) {
    ClassMetrics cm;
    cm.label = c;
    cm.counts = counts(records, m, c);
    cm.precision = precision(cm.counts);
    cm.recall = recall(cm.counts);
    cm.iou = iou_metric(cm.counts);
    cm.f1 = f1(cm.counts);
    cm.ap = average_precision(records, m, c);
    aps.push_back(cm.ap);
    if (cm.ap) ++report.k;
    report.classes.push_back(cm);
  }
  if (report.k > 0) report.map = mean_ap(aps);
  return report;
}

std::string MetricsReport::to_json() const {
  ojson doc;
  ojson list = ojson::array();
  for (const ClassMetrics& c : classes) {
    ojson j;
    j["label"] = to_string(c.label);
    j["tp"] = c.counts.tp;
    j["fp"] = c.counts.fp;
    j["fn"] = c.counts.fn;
    j["tn"] = c.counts.tn;
    j["precision"] = c.precision;
    j["recall"] = c.recall;
    j["iou"] = c.iou;
    j["f1"] = c.f1;
    j["ap"] = c.ap ? ojson(*c.ap) : ojson(nullptr);
    list.push_back(j);
  }
  doc["classes"] = list;
  doc["map_at_0_5"] = map ? ojson(*map) : ojson(nullptr);
  doc["k"] = k;
  return doc.dump(2);
}

std::string MetricsReport::to_table() const {
  std::string out;
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %8s %8s %8s %8s %8s\n", "Gesture", "Pre(%)", "Re(%)",
                "IoU(%)", "F1(%)", "AP(%)");
  out += line;
  for (const ClassMetrics& c : classes) {
    char ap[16];
    if (c.ap) {
      std::snprintf(ap, sizeof ap, "%8.2f", *c.ap);
    } else {
      std::snprintf(ap, sizeof ap, "%8s", "-");
    }
    std::snprintf(line, sizeof line, "%-14s %8.2f %8.2f %8.2f %8.2f %s\n",
                  std::string(to_string(c.label)).c_str(), c.precision, c.recall, c.iou, c.f1, ap);
    out += line;
  }
  if (map) {
    std::snprintf(line, sizeof line, "mAP@0.5 %.2f%% over %zu classes\n", *map, k);
  } else {
    std::snprintf(line, sizeof line, "mAP@0.5 undefined (no ground truth)\n");
  }
  out += line;
  return out;
}

namespace {

std::optional<GestureLabel> label_field(const ojson& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  const std::string s = j[key].get<std::string>();
  if (s == "background") return std::nullopt;
  const auto g = gesture_from_string(s);
  if (!g || !is_defined(*g)) throw std::invalid_argument("unknown label '" + s + "'");
  return g;
}

std::optional<BoundingBox> box_field(const ojson& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  const ojson& b = j[key];
  if (!b.is_array() || b.size() != 4) throw std::invalid_argument(std::string(key) + " needs 4 numbers");
  BoundingBox box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
  if (box.u_min > box.u_max || box.v_min > box.v_max) {
    throw std::invalid_argument(std::string(key) + " has min > max");
  }
  return box;
}

ojson box_json(const BoundingBox& b) { return ojson::array({b.u_min, b.v_min, b.u_max, b.v_max}); }

}  // namespace

std::vector<EvalRecord> read_records(std::istream& in) {
  std::vector<EvalRecord> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const ojson j = ojson::parse(text);
      EvalRecord r;
      r.ground_truth = label_field(j, "gt");
      r.predicted = label_field(j, "pred");
      if (r.predicted) {
        if (!j.contains("conf")) throw std::invalid_argument("prediction without conf");
        r.confidence = j.at("conf").get<double>();
        if (!(r.confidence >= 0.0 && r.confidence <= 1.0)) {
          throw std::invalid_argument("conf outside [0, 1]");
        }
      }
      r.gt_box = box_field(j, "gt_box");
      r.pred_box = box_field(j, "pred_box");
      if (j.contains("image") && !j["image"].is_null()) r.image = j["image"].get<std::string>();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw RecordParseError(line, e.what());
    }
  }
  return out;
}

std::string record_to_json(const EvalRecord& r) {
  ojson j;
  j["gt"] = r.ground_truth ? ojson(to_string(*r.ground_truth)) : ojson(nullptr);
  j["pred"] = r.predicted ? ojson(to_string(*r.predicted)) : ojson(nullptr);
  if (r.predicted) j["conf"] = r.confidence;
  if (r.gt_box) j["gt_box"] = box_json(*r.gt_box);
  if (r.pred_box) j["pred_box"] = box_json(*r.pred_box);
  if (r.image) j["image"] = *r.image;
  return j.dump();
}

}  // namespace gestgait
