#include "ctbr/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <thread>

#include "ctbr/errors.hpp"
#include "ctbr/json_util.hpp"

namespace ctbr {

namespace fs = std::filesystem;

RulePack resolve_rulepack(const std::optional<std::string>& path) {
  if (path && !path->empty()) return RulePack::from_json(read_file(*path));
  if (const char* env = std::getenv(kRulepackEnv); env != nullptr && *env != '\0')
    return RulePack::from_json(read_file(env));
  return RulePack::acl_as_printed();
}

std::vector<std::pair<FeatureVector, BlockLabel>> training_rows(
    const BlockDocument& doc, const LabelMap& labels, const RulePack& pack) {
  const EncodedDocument encoded = encode_document(doc);
  const TitleMap titles = detect_single_modal_blocks(doc, pack, encoded.stats);
  std::vector<std::pair<FeatureVector, BlockLabel>> rows;
  for (const TextBlock* block : doc.blocks_in_order()) {
    if (titles.count(block->id) != 0) continue;
    const auto fv = encoded.features.find(block->id);
    const auto label = labels.find(block->id);
    if (fv == encoded.features.end() || label == labels.end()) continue;
    rows.emplace_back(fv->second, label->second);
  }
  return rows;
}

ClassifiedDocument classify_document(const BlockDocument& doc,
                                     const SvmModel& model,
                                     const RulePack& pack) {
  ClassifiedDocument out;
  out.encoded = encode_document(doc);
  out.titles = detect_single_modal_blocks(doc, pack, out.encoded.stats);
  for (const auto& [id, fv] : out.encoded.features)
    out.labels[id] = out.titles.count(id) != 0 ? BlockLabel::kSupplementary
                                               : predict(model, fv).label;
  for (const auto& [id, kind] : out.titles) out.labels[id] = BlockLabel::kSupplementary;
  return out;
}

DetectionResult detect_document(const BlockDocument& doc, const SvmModel& model,
                                const RulePack& pack) {
  const ClassifiedDocument c = classify_document(doc, model, pack);
  return detect_objects(doc, c.titles, c.labels);
}

CorpusTrainResult train_on_documents(const std::vector<LabeledDocument>& docs,
                                     const RulePack& pack, const Hyperparams& hp) {
  if (docs.empty()) throw InputError("no documents to train on");
  std::vector<std::pair<FeatureVector, BlockLabel>> rows;
  for (const auto& d : docs) {
    auto r = training_rows(d.document, d.labels, pack);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  CorpusTrainResult result;
  result.documents = docs.size();
  result.model = train(make_training_set(std::move(rows)), hp, &result.report);
  return result;
}

std::vector<std::string> list_json_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw InputError("'" + dir + "' is not a directory");
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<LabeledDocument> load_labeled_corpus(const std::string& corpus_dir,
                                                 const std::string& labels_dir,
                                                 int jobs) {
  const auto files = list_json_files(corpus_dir);
  if (files.empty()) throw InputError("no documents in '" + corpus_dir + "'");
  std::vector<LabeledDocument> docs(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    BlockDocument doc = load_document(read_file(files[i]));
    const fs::path label_path =
        fs::path(labels_dir) / fs::path(files[i]).filename();
    const LabelFile labels = load_labels(read_file(label_path.string()));
    docs[i] = merge_labels(std::move(doc), labels);
  });
  return docs;
}

std::string train_report_to_json(const CorpusTrainResult& result) {
  nlohmann::json counts = nlohmann::json::object();
  for (std::size_t c = 0; c < kNumLabels; ++c)
    counts[std::string(label_name(kAllLabels[c]))] = result.report.class_counts[c];
  nlohmann::json final_objective = nlohmann::json::array();
  for (const auto& series : result.report.objective)
    final_objective.push_back(series.empty() ? 0.0 : series.back());
  return json_util::dump({{"documents", result.documents},
                          {"training_accuracy", result.report.training_accuracy},
                          {"class_counts", counts},
                          {"final_objective", final_objective}});
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace ctbr
