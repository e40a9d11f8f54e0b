#pragma once

#include <array>
#include <string>
#include <vector>

#include "ctbr/document.hpp"
#include "ctbr/segmenter.hpp"
#include "ctbr/synth.hpp"

namespace ctbr {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct ClassificationMetrics {
  std::array<ClassMetrics, kNumLabels> per_class{};
  // confusion[truth][predicted]
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t total = 0;

  // Accumulates another confusion matrix and recomputes the scores.
  void merge(const ClassificationMetrics& other);
  void recompute();
};

// Throws IdMismatchError when the two maps cover different block ids.
// A class with no predictions scores precision 1 if it also has no
// support, else 0; recall likewise.
ClassificationMetrics evaluate_classification(const LabelMap& predicted,
                                              const LabelMap& truth);

struct DetectionMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double mean_iou = 0.0;  // over matched pairs, 0 when none
  std::size_t predicted = 0;
  std::size_t truth = 0;
  std::size_t matched = 0;
  // Set when there were no detections and precision is reported as 1.
  bool precision_undefined = false;
  double iou_sum = 0.0;

  void merge(const DetectionMetrics& other);
  void recompute();
};

// Greedy one-to-one matching by descending IoU among pairs of the same kind
// on the same page with IoU >= threshold. Throws InputError unless
// threshold is in (0, 1].
DetectionMetrics evaluate_detection(const std::vector<DetectedObject>& objects,
                                    const std::vector<TruthObject>& truth,
                                    double iou_threshold);

struct EvalReport {
  ClassificationMetrics classification;
  DetectionMetrics detection;
  double iou_threshold = 0.8;
  std::size_t documents = 0;
  bool has_classification = false;
};

std::string eval_report_to_json(const EvalReport& report);

}  // namespace ctbr
