#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctbr/document.hpp"
#include "ctbr/encoder.hpp"

namespace ctbr {

// Per-feature affine transform x -> (x - mean) / stddev. Features whose
// stddev is zero are only centered.
struct Standardization {
  std::array<double, kNumFeatures> mean{};
  std::array<double, kNumFeatures> stddev{};

  static Standardization identity();
  FeatureVector apply(const FeatureVector& fv) const;

  friend bool operator==(const Standardization&, const Standardization&) = default;
};

std::pair<std::vector<FeatureVector>, Standardization> standardize(
    const std::vector<FeatureVector>& rows);

struct TrainingSet {
  std::vector<std::pair<FeatureVector, BlockLabel>> rows;
  Standardization standardization;
};

// Computes the standardization over the rows' features.
TrainingSet make_training_set(
    std::vector<std::pair<FeatureVector, BlockLabel>> rows);

struct Hyperparams {
  double C = 1.0;
  int epochs = 2000;
  std::uint64_t seed = 42;
  // Multiplies the hinge loss of rows carrying each label.
  std::array<double, kNumLabels> class_weights{1.0, 1.0, 1.0};

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

// Three one-vs-rest linear classifiers in label order
// (body_text, supplementary, accessory), over standardized features.
struct SvmModel {
  std::array<std::array<double, kNumFeatures>, kNumLabels> weights{};
  std::array<double, kNumLabels> biases{};
  Standardization standardization;
  Hyperparams hyperparams;

  friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

struct TrainReport {
  // Regularized hinge objective after each epoch, per classifier.
  std::array<std::vector<double>, kNumLabels> objective;
  double training_accuracy = 0.0;
  std::array<std::size_t, kNumLabels> class_counts{};
};

// Deterministic Pegasos-style subgradient descent on
//   lambda/2 |w|^2 + 1/n sum_i c_i max(0, 1 - y_i (w.x_i + b)),
// lambda = 1 / (C n), visiting rows in their given order every epoch. The
// bias is learned as the weight of a constant feature. Throws
// InsufficientClassesError with fewer than two distinct labels.
SvmModel train(const TrainingSet& data, const Hyperparams& hp,
               TrainReport* report = nullptr);

struct Prediction {
  BlockLabel label;
  std::array<double, kNumLabels> scores;
};

// Argmax of the decision values; ties resolve to the earlier label.
Prediction predict(const SvmModel& model, const FeatureVector& fv);

inline constexpr int kModelVersion = 1;

std::string save_model(const SvmModel& model);
// Throws VersionError, CorruptModelError.
SvmModel load_model(std::string_view bytes);

}  // namespace ctbr
