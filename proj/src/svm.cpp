#include "ctbr/svm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ctbr/errors.hpp"
#include "ctbr/json_util.hpp"

namespace ctbr {

Standardization Standardization::identity() {
  Standardization s;
  s.mean.fill(0.0);
  s.stddev.fill(1.0);
  return s;
}

FeatureVector Standardization::apply(const FeatureVector& fv) const {
  FeatureVector out;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    const double centered = fv[i] - mean[i];
    out[i] = stddev[i] > 0.0 ? centered / stddev[i] : centered;
  }
  return out;
}

namespace {

Standardization fit_standardization(const std::vector<FeatureVector>& rows) {
  Standardization s;
  if (rows.empty()) return Standardization::identity();
  const double n = static_cast<double>(rows.size());
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[i];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : rows) ss += (r[i] - mean) * (r[i] - mean);
    s.mean[i] = mean;
    s.stddev[i] = std::sqrt(ss / n);  // population stddev
  }
  return s;
}

// splitmix64, used for the initial weights only.
std::uint64_t next_random(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t& state, double lo, double hi) {
  const double u =
      static_cast<double>(next_random(state) >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

constexpr std::size_t kAugmented = kNumFeatures + 1;
using Weights = std::array<double, kAugmented>;

double dot(const Weights& w, const std::array<double, kAugmented>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < kAugmented; ++i) s += w[i] * x[i];
  return s;
}

}  // namespace

std::pair<std::vector<FeatureVector>, Standardization> standardize(
    const std::vector<FeatureVector>& rows) {
  Standardization params = fit_standardization(rows);
  std::vector<FeatureVector> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(params.apply(r));
  return {std::move(out), params};
}

TrainingSet make_training_set(
    std::vector<std::pair<FeatureVector, BlockLabel>> rows) {
  std::vector<FeatureVector> features;
  features.reserve(rows.size());
  for (const auto& r : rows) features.push_back(r.first);
  TrainingSet set;
  set.standardization = fit_standardization(features);
  set.rows = std::move(rows);
  return set;
}

SvmModel train(const TrainingSet& data, const Hyperparams& hp,
               TrainReport* report) {
  std::set<BlockLabel> present;
  for (const auto& r : data.rows) present.insert(r.second);
  if (present.size() < 2)
    throw InsufficientClassesError(
        "training needs at least two distinct labels, got " +
        std::to_string(present.size()));
  if (!(hp.C > 0.0)) throw InputError("C must be positive");
  if (hp.epochs < 1) throw InputError("epochs must be >= 1");

  const std::size_t n = data.rows.size();
  std::vector<std::array<double, kAugmented>> xs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FeatureVector z = data.standardization.apply(data.rows[i].first);
    for (std::size_t k = 0; k < kNumFeatures; ++k) xs[i][k] = z[k];
    xs[i][kNumFeatures] = 1.0;
  }

  const double lambda = 1.0 / (hp.C * static_cast<double>(n));
  const double max_weight =
      *std::max_element(hp.class_weights.begin(), hp.class_weights.end());
  const double radius = std::sqrt(max_weight / lambda);
  // Step offset of one epoch keeps the first steps at eta ~ C.
  const double t0 = static_cast<double>(n);

  SvmModel model;
  model.standardization = data.standardization;
  model.hyperparams = hp;
  std::uint64_t rng = hp.seed;

  for (std::size_t c = 0; c < kNumLabels; ++c) {
    Weights w{};
    for (auto& v : w) v = uniform(rng, -1e-3, 1e-3);
    std::vector<double> ys(n);
    std::vector<double> cw(n);
    for (std::size_t i = 0; i < n; ++i) {
      ys[i] = label_index(data.rows[i].second) == c ? 1.0 : -1.0;
      cw[i] = hp.class_weights[label_index(data.rows[i].second)];
    }

    double t = 0.0;
    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
      for (std::size_t i = 0; i < n; ++i) {
        t += 1.0;
        const double eta = 1.0 / (lambda * (t + t0));
        const double margin = ys[i] * dot(w, xs[i]);
        const double shrink = 1.0 - eta * lambda;
        for (auto& v : w) v *= shrink;
        if (margin < 1.0) {
          const double step = eta * cw[i] * ys[i];
          for (std::size_t k = 0; k < kAugmented; ++k) w[k] += step * xs[i][k];
        }
        double norm2 = 0.0;
        for (double v : w) norm2 += v * v;
        if (norm2 > radius * radius) {
          const double scale = radius / std::sqrt(norm2);
          for (auto& v : w) v *= scale;
        }
      }
      if (report != nullptr) {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          loss += cw[i] * std::max(0.0, 1.0 - ys[i] * dot(w, xs[i]));
        double norm2 = 0.0;
        for (double v : w) norm2 += v * v;
        report->objective[c].push_back(0.5 * lambda * norm2 +
                                       loss / static_cast<double>(n));
      }
    }
    for (std::size_t k = 0; k < kNumFeatures; ++k) model.weights[c][k] = w[k];
    model.biases[c] = w[kNumFeatures];
  }

  if (report != nullptr) {
    std::size_t correct = 0;
    report->class_counts.fill(0);
    for (const auto& [fv, label] : data.rows) {
      ++report->class_counts[label_index(label)];
      if (predict(model, fv).label == label) ++correct;
    }
    report->training_accuracy =
        n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
  }
  return model;
}

Prediction predict(const SvmModel& model, const FeatureVector& fv) {
  const FeatureVector z = model.standardization.apply(fv);
  Prediction p{BlockLabel::kBodyText, {}};
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    double s = model.biases[c];
    for (std::size_t k = 0; k < kNumFeatures; ++k)
      s += model.weights[c][k] * z[k];
    p.scores[c] = s;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c)
    if (p.scores[c] > p.scores[best]) best = c;
  p.label = kAllLabels[best];
  return p;
}

std::string save_model(const SvmModel& m) {
  nlohmann::json classes = nlohmann::json::array();
  for (BlockLabel label : kAllLabels) classes.push_back(label_name(label));
  const nlohmann::json root = {
      {"version", kModelVersion},
      {"classes", classes},
      {"weights", m.weights},
      {"biases", m.biases},
      {"standardization",
       {{"mean", m.standardization.mean},
        {"stddev", m.standardization.stddev}}},
      {"hyperparams",
       {{"C", m.hyperparams.C},
        {"epochs", m.hyperparams.epochs},
        {"seed", m.hyperparams.seed},
        {"class_weights", m.hyperparams.class_weights}}},
  };
  return json_util::dump(root);
}

namespace {

template <std::size_t N>
std::array<double, N> read_array(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != N)
    throw CorruptModelError(std::string("model field '") + what +
                            "' has wrong shape");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number())
      throw CorruptModelError(std::string("model field '") + what +
                              "' is not numeric");
    out[i] = j[i].get<double>();
    if (!std::isfinite(out[i]))
      throw CorruptModelError(std::string("model field '") + what +
                              "' is not finite");
  }
  return out;
}

}  // namespace

SvmModel load_model(std::string_view bytes) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw CorruptModelError(std::string("model file is not valid JSON: ") +
                            e.what());
  }
  if (!root.is_object() || !root.contains("version"))
    throw CorruptModelError("model file lacks a version tag");
  if (!root["version"].is_number_integer())
    throw CorruptModelError("model version is not an integer");
  const auto version = root["version"].get<long long>();
  if (version != kModelVersion) throw VersionError(version);

  try {
    SvmModel m;
    const auto& classes = root.at("classes");
    if (!classes.is_array() || classes.size() != kNumLabels)
      throw CorruptModelError("model must list three classes");
    for (std::size_t c = 0; c < kNumLabels; ++c)
      if (classes[c] != label_name(kAllLabels[c]))
        throw CorruptModelError("unexpected class order in model");
    const auto& weights = root.at("weights");
    if (!weights.is_array() || weights.size() != kNumLabels)
      throw CorruptModelError("model must hold three weight vectors");
    for (std::size_t c = 0; c < kNumLabels; ++c)
      m.weights[c] = read_array<kNumFeatures>(weights[c], "weights");
    m.biases = read_array<kNumLabels>(root.at("biases"), "biases");
    const auto& st = root.at("standardization");
    m.standardization.mean = read_array<kNumFeatures>(st.at("mean"), "mean");
    m.standardization.stddev =
        read_array<kNumFeatures>(st.at("stddev"), "stddev");
    const auto& hp = root.at("hyperparams");
    m.hyperparams.C = hp.at("C").get<double>();
    m.hyperparams.epochs = hp.at("epochs").get<int>();
    m.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    m.hyperparams.class_weights =
        read_array<kNumLabels>(hp.at("class_weights"), "class_weights");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw CorruptModelError(std::string("model file is incomplete: ") +
                            e.what());
  }
}

}  // namespace ctbr
