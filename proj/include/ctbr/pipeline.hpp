#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctbr/document.hpp"
#include "ctbr/encoder.hpp"
#include "ctbr/ingest.hpp"
#include "ctbr/rules.hpp"
#include "ctbr/segmenter.hpp"
#include "ctbr/svm.hpp"

namespace ctbr {

inline constexpr const char* kRulepackEnv = "CTBR_RULEPACK";

// Explicit path, else $CTBR_RULEPACK, else the built-in as-printed pack.
RulePack resolve_rulepack(const std::optional<std::string>& path);

struct ClassifiedDocument {
  EncodedDocument encoded;
  TitleMap titles;
  LabelMap labels;  // titles forced Supplementary, SVM for the rest
};

// Rows for the classifier: every labeled, encodable block that the rules
// do not already recognize as a title.
std::vector<std::pair<FeatureVector, BlockLabel>> training_rows(
    const BlockDocument& doc, const LabelMap& labels, const RulePack& pack);

ClassifiedDocument classify_document(const BlockDocument& doc,
                                     const SvmModel& model,
                                     const RulePack& pack);

DetectionResult detect_document(const BlockDocument& doc, const SvmModel& model,
                                const RulePack& pack);

struct CorpusTrainResult {
  SvmModel model;
  TrainReport report;
  std::size_t documents = 0;
};

CorpusTrainResult train_on_documents(const std::vector<LabeledDocument>& docs,
                                     const RulePack& pack, const Hyperparams& hp);

// Sorted *.json paths directly inside `dir`. Throws InputError if `dir` is
// not a directory.
std::vector<std::string> list_json_files(const std::string& dir);

// Pairs each corpus document with the equally named file in `labels_dir`.
// Throws InputError("no documents ...") for an empty corpus and
// DocMismatchError when a label file names another document.
std::vector<LabeledDocument> load_labeled_corpus(const std::string& corpus_dir,
                                                 const std::string& labels_dir,
                                                 int jobs = 1);

std::string train_report_to_json(const CorpusTrainResult& result);

// Runs fn(0..n-1) on up to `jobs` threads. The first exception (lowest
// index) is rethrown after all workers finish.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace ctbr
