#include "ctbr/metrics.hpp"

#include <algorithm>
#include <tuple>

#include "ctbr/errors.hpp"
#include "ctbr/json_util.hpp"

namespace ctbr {

namespace {

double ratio_or(std::size_t num, std::size_t den, bool empty_is_perfect) {
  if (den == 0) return empty_is_perfect ? 1.0 : 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void ClassificationMetrics::recompute() {
  total = 0;
  std::size_t correct = 0;
  for (std::size_t t = 0; t < kNumLabels; ++t)
    for (std::size_t p = 0; p < kNumLabels; ++p) {
      total += confusion[t][p];
      if (t == p) correct += confusion[t][p];
    }
  macro_precision = macro_recall = macro_f1 = 0.0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    std::size_t predicted = 0;
    std::size_t support = 0;
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      predicted += confusion[k][c];
      support += confusion[c][k];
    }
    const std::size_t tp = confusion[c][c];
    ClassMetrics& m = per_class[c];
    m.support = support;
    m.precision = ratio_or(tp, predicted, support == 0);
    m.recall = ratio_or(tp, support, predicted == 0);
    m.f1 = m.precision + m.recall > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    macro_precision += m.precision / kNumLabels;
    macro_recall += m.recall / kNumLabels;
    macro_f1 += m.f1 / kNumLabels;
  }
  accuracy = ratio_or(correct, total, true);
}

void ClassificationMetrics::merge(const ClassificationMetrics& other) {
  for (std::size_t t = 0; t < kNumLabels; ++t)
    for (std::size_t p = 0; p < kNumLabels; ++p)
      confusion[t][p] += other.confusion[t][p];
  recompute();
}

ClassificationMetrics evaluate_classification(const LabelMap& predicted,
                                              const LabelMap& truth) {
  ClassificationMetrics m;
  auto pit = predicted.begin();
  auto tit = truth.begin();
  if (predicted.size() != truth.size())
    throw IdMismatchError("predicted and truth label sets differ in size (" +
                          std::to_string(predicted.size()) + " vs " +
                          std::to_string(truth.size()) + ")");
  for (; pit != predicted.end(); ++pit, ++tit) {
    if (pit->first != tit->first)
      throw IdMismatchError("block id '" + pit->first +
                            "' has no counterpart in truth");
    ++m.confusion[label_index(tit->second)][label_index(pit->second)];
  }
  m.recompute();
  return m;
}

void DetectionMetrics::recompute() {
  precision_undefined = predicted == 0;
  precision = ratio_or(matched, predicted, true);
  recall = ratio_or(matched, truth, true);
  mean_iou = matched == 0 ? 0.0 : iou_sum / static_cast<double>(matched);
}

void DetectionMetrics::merge(const DetectionMetrics& other) {
  predicted += other.predicted;
  truth += other.truth;
  matched += other.matched;
  iou_sum += other.iou_sum;
  recompute();
}

DetectionMetrics evaluate_detection(const std::vector<DetectedObject>& objects,
                                    const std::vector<TruthObject>& truth,
                                    double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0))
    throw InputError("IoU threshold must be in (0, 1]");
  struct Pair {
    double iou;
    std::size_t pred;
    std::size_t gold;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < objects.size(); ++i)
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (objects[i].kind != truth[j].kind ||
          objects[i].page_index != truth[j].page_index)
        continue;
      const double iou = bbox_iou(objects[i].region, truth[j].region);
      if (iou >= iou_threshold) pairs.push_back({iou, i, j});
    }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(b.iou, a.pred, a.gold) < std::tie(a.iou, b.pred, b.gold);
  });
  std::vector<bool> pred_used(objects.size(), false);
  std::vector<bool> gold_used(truth.size(), false);
  DetectionMetrics m;
  m.predicted = objects.size();
  m.truth = truth.size();
  for (const auto& p : pairs) {
    if (pred_used[p.pred] || gold_used[p.gold]) continue;
    pred_used[p.pred] = gold_used[p.gold] = true;
    ++m.matched;
    m.iou_sum += p.iou;
  }
  m.recompute();
  return m;
}

std::string eval_report_to_json(const EvalReport& report) {
  nlohmann::json root;
  const auto& d = report.detection;
  root["detection"] = {{"precision", d.precision},
                       {"recall", d.recall},
                       {"mean_iou", d.mean_iou},
                       {"predicted", d.predicted},
                       {"truth", d.truth},
                       {"matched", d.matched},
                       {"precision_undefined", d.precision_undefined},
                       {"iou_threshold", report.iou_threshold}};
  root["documents"] = report.documents;
  if (report.has_classification) {
    const auto& c = report.classification;
    nlohmann::json per_class = nlohmann::json::object();
    for (std::size_t k = 0; k < kNumLabels; ++k)
      per_class[std::string(label_name(kAllLabels[k]))] = {
          {"precision", c.per_class[k].precision},
          {"recall", c.per_class[k].recall},
          {"f1", c.per_class[k].f1},
          {"support", c.per_class[k].support}};
    root["classification"] = {{"per_class", per_class},
                              {"macro_precision", c.macro_precision},
                              {"macro_recall", c.macro_recall},
                              {"macro_f1", c.macro_f1},
                              {"accuracy", c.accuracy},
                              {"confusion", c.confusion},
                              {"total", c.total}};
  }
  return json_util::dump(root);
}

}  // namespace ctbr
