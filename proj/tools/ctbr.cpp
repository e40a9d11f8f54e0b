// ctbr: text block classification and figure/table region detection.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctbr/encoder.hpp"
#include "ctbr/errors.hpp"
#include "ctbr/ingest.hpp"
#include "ctbr/json_util.hpp"
#include "ctbr/metrics.hpp"
#include "ctbr/pipeline.hpp"
#include "ctbr/render.hpp"
#include "ctbr/rules.hpp"
#include "ctbr/segmenter.hpp"
#include "ctbr/svm.hpp"
#include "ctbr/synth.hpp"

namespace fs = std::filesystem;
using namespace ctbr;

namespace {

struct Globals {
  bool json = false;
  int jobs = 1;
};

// Prefixes input errors with the file they came from.
template <typename F>
auto with_file(const std::string& path, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SchemaError& e) {
    throw SchemaError(e.path(), path + ": " +
                                    std::string(e.what()).substr(
                                        e.path().empty() ? 0 : e.path().size() + 2));
  } catch (const ModelError&) {
    throw;
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.find(path) != std::string::npos) throw;
    throw InputError(path + ": " + what);
  }
}

BlockDocument load_doc_file(const std::string& path) {
  return with_file(path, [&] { return load_document(read_file(path)); });
}

SvmModel load_model_file(const std::string& path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const InputError&) {
    throw ModelError("cannot open model file '" + path + "'");
  }
  try {
    return load_model(bytes);
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

void ensure_parent(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void write_out(const std::string& path, std::string_view bytes) {
  ensure_parent(path);
  write_file(path, bytes);
}

void emit(const Globals& g, const nlohmann::json& summary, const std::string& text) {
  if (g.json)
    std::cout << summary.dump() << "\n";
  else if (!text.empty())
    std::cout << text << "\n";
}

std::map<std::string, FeatureVector> load_features_file(const std::string& path) {
  return with_file(path, [&] { return features_from_json(read_file(path)); });
}

LabelFile load_labels_file(const std::string& path) {
  return with_file(path, [&] { return load_labels(read_file(path)); });
}

// --- subcommands -----------------------------------------------------------

void warn_mixed_sizes(const std::string& path, const DocumentStats& stats) {
  if (stats.mixed_page_sizes)
    std::cerr << "warning: " << path << ": pages differ in size; position codes use document-wide boundaries\n";
}

int cmd_validate(const Globals& g, const std::string& path) {
  const BlockDocument doc = load_doc_file(path);
  emit(g,
       {{"ok", true}, {"doc_id", doc.doc_id}, {"pages", doc.pages.size()},
        {"blocks", doc.block_count()}},
       path + ": ok (" + std::to_string(doc.pages.size()) + " pages, " +
           std::to_string(doc.block_count()) + " blocks)");
  return 0;
}

int cmd_extract_stats(const Globals& g, const std::string& doc_path,
                      const std::optional<std::string>& rulepack,
                      const std::string& out) {
  const BlockDocument doc = load_doc_file(doc_path);
  const RulePack pack = resolve_rulepack(rulepack);
  const DocumentStats stats = compute_stats(doc);
  warn_mixed_sizes(doc_path, stats);
  const TitleMap titles = detect_single_modal_blocks(doc, pack, stats);
  nlohmann::json root;
  root["doc_id"] = doc.doc_id;
  root["stats"] = nlohmann::json::parse(stats_to_json(stats));
  nlohmann::json t = nlohmann::json::object();
  for (const auto& [id, kind] : titles) t[id] = std::string(kind_name(kind));
  root["single_modal_blocks"] = t;
  nlohmann::json domains = nlohmann::json::array();
  try {
    const auto order = doc.blocks_in_order();
    for (const auto& d : segment_base_domains(doc, titles))
      domains.push_back({{"kind", std::string(domain_name(d.kind))},
                         {"first_block", order[d.begin]->id},
                         {"last_block", order[d.end - 1]->id},
                         {"blocks", d.size()}});
    root["base_domains"] = domains;
  } catch (const NoBodyError&) {
    root["base_domains"] = nullptr;
  }
  const std::string bytes = json_util::dump(root);
  if (!out.empty()) write_out(out, bytes);
  if (g.json || out.empty())
    std::cout << bytes;
  return 0;
}

int cmd_encode(const Globals& g, const std::string& doc_path, const std::string& out,
               std::string stats_out) {
  const BlockDocument doc = load_doc_file(doc_path);
  const EncodedDocument enc = encode_document(doc);
  warn_mixed_sizes(doc_path, enc.stats);
  if (stats_out.empty()) {
    fs::path p(out);
    stats_out = (p.parent_path() / (p.stem().string() + ".stats.json")).string();
  }
  write_out(out, features_to_json(enc.features));
  write_out(stats_out, stats_to_json(enc.stats));
  emit(g,
       {{"doc_id", doc.doc_id}, {"encoded", enc.features.size()},
        {"skipped", enc.skipped}, {"features", out}, {"stats", stats_out}},
       "encoded " + std::to_string(enc.features.size()) + " blocks -> " + out);
  return 0;
}

struct TrainArgs {
  std::string features;
  std::string labels;
  std::string corpus;
  std::string labels_dir;
  std::string out;
  std::string report;
  std::optional<std::string> rulepack;
  Hyperparams hp;
};

int cmd_train(const Globals& g, const TrainArgs& a) {
  CorpusTrainResult result;
  if (!a.corpus.empty()) {
    if (a.labels_dir.empty()) throw InputError("--corpus needs --labels-dir");
    const auto docs = load_labeled_corpus(a.corpus, a.labels_dir, g.jobs);
    result = train_on_documents(docs, resolve_rulepack(a.rulepack), a.hp);
  } else {
    if (a.features.empty() || a.labels.empty())
      throw InputError("train needs --features and --labels, or --corpus and --labels-dir");
    const auto features = load_features_file(a.features);
    const LabelFile labels = load_labels_file(a.labels);
    std::vector<std::pair<FeatureVector, BlockLabel>> rows;
    for (const auto& [id, label] : labels.entries) {
      const auto it = features.find(id);
      if (it == features.end()) throw UnknownBlockError(id);
      rows.emplace_back(it->second, label);
    }
    result.documents = 1;
    result.model = train(make_training_set(std::move(rows)), a.hp, &result.report);
  }
  write_out(a.out, save_model(result.model));
  const std::string report = train_report_to_json(result);
  if (!a.report.empty()) write_out(a.report, report);
  char acc[32];
  std::snprintf(acc, sizeof(acc), "%.4f", result.report.training_accuracy);
  emit(g, nlohmann::json::parse(report),
       "model -> " + a.out + " (training accuracy " + acc + ")");
  return 0;
}

int cmd_classify(const Globals& g, const std::string& model_path,
                 const std::string& features_path, const std::string& doc_path,
                 const std::string& doc_id, const std::optional<std::string>& rulepack,
                 const std::string& out) {
  const SvmModel model = load_model_file(model_path);
  LabelMap labels;
  std::string id = doc_id;
  if (!doc_path.empty()) {
    const BlockDocument doc = load_doc_file(doc_path);
    labels = classify_document(doc, model, resolve_rulepack(rulepack)).labels;
    if (id.empty()) id = doc.doc_id;
  } else if (!features_path.empty()) {
    for (const auto& [bid, fv] : load_features_file(features_path))
      labels[bid] = predict(model, fv).label;
  } else {
    throw InputError("classify needs --features or --doc");
  }
  write_out(out, save_labels(make_label_file(id, labels)));
  std::array<std::size_t, kNumLabels> counts{};
  for (const auto& [bid, l] : labels) ++counts[label_index(l)];
  nlohmann::json c = nlohmann::json::object();
  for (std::size_t k = 0; k < kNumLabels; ++k)
    c[std::string(label_name(kAllLabels[k]))] = counts[k];
  emit(g, {{"doc_id", id}, {"blocks", labels.size()}, {"counts", c}},
       "classified " + std::to_string(labels.size()) + " blocks -> " + out);
  return 0;
}

int cmd_detect(const Globals& g, const std::string& input, const std::string& model_path,
               const std::optional<std::string>& rulepack, const std::string& out,
               const std::string& render_dir) {
  const SvmModel model = load_model_file(model_path);
  const RulePack pack = resolve_rulepack(rulepack);
  const bool corpus = fs::is_directory(input);
  const std::vector<std::string> files =
      corpus ? list_json_files(input) : std::vector<std::string>{input};
  if (corpus && files.empty()) throw InputError("no documents in '" + input + "'");

  struct Outcome {
    std::string doc_id;
    std::size_t objects = 0;
    std::size_t unresolved = 0;
  };
  std::vector<Outcome> outcomes(files.size());
  parallel_for(files.size(), g.jobs, [&](std::size_t i) {
    const BlockDocument doc = load_doc_file(files[i]);
    const ClassifiedDocument c = classify_document(doc, model, pack);
    const DetectionResult r = detect_objects(doc, c.titles, c.labels);
    const std::string target =
        corpus ? (fs::path(out) / fs::path(files[i]).filename()).string() : out;
    write_out(target, detections_to_json(r));
    if (!render_dir.empty()) {
      fs::create_directories(render_dir);
      for (const auto& page : doc.pages) {
        const std::string name = fs::path(files[i]).stem().string() + "-p" +
                                 std::to_string(page.index) + ".svg";
        write_file((fs::path(render_dir) / name).string(),
                   render_overlay(doc, c.labels, r.objects, page.index, r.boundaries));
      }
    }
    outcomes[i] = {r.doc_id, r.objects.size(), r.unresolved.size()};
  });

  nlohmann::json docs = nlohmann::json::array();
  std::size_t total = 0;
  for (const auto& o : outcomes) {
    docs.push_back({{"doc_id", o.doc_id}, {"objects", o.objects}, {"unresolved", o.unresolved}});
    total += o.objects;
  }
  emit(g, {{"documents", docs}, {"objects", total}},
       "detected " + std::to_string(total) + " objects in " +
           std::to_string(files.size()) + " document(s)");
  return 0;
}

int cmd_gen(const Globals& g, const std::string& spec_path, const std::string& out_dir) {
  const SyntheticSpec spec =
      with_file(spec_path, [&] { return SyntheticSpec::from_json(read_file(spec_path)); });
  for (const char* sub : {"docs", "labels", "truth"})
    fs::create_directories(fs::path(out_dir) / sub);
  std::vector<std::string> ids(static_cast<std::size_t>(spec.documents));
  parallel_for(ids.size(), g.jobs, [&](std::size_t i) {
    const SyntheticDocument s = generate_synthetic(spec, static_cast<int>(i));
    const std::string name = s.document.doc_id + ".json";
    write_file((fs::path(out_dir) / "docs" / name).string(), save_document(s.document));
    write_file((fs::path(out_dir) / "labels" / name).string(),
               save_labels(make_label_file(s.document.doc_id, s.truth.labels)));
    write_file((fs::path(out_dir) / "truth" / name).string(), truth_to_json(s.truth));
    ids[i] = s.document.doc_id;
  });
  emit(g, {{"documents", ids}, {"out_dir", out_dir}},
       "generated " + std::to_string(ids.size()) + " documents in " + out_dir);
  return 0;
}

int cmd_eval(const Globals& g, const std::string& pred, const std::string& truth,
             const std::string& pred_labels, double iou, const std::string& report_path) {
  std::vector<std::pair<std::string, std::string>> pairs;  // pred, truth
  if (fs::is_directory(truth)) {
    for (const auto& t : list_json_files(truth))
      pairs.emplace_back((fs::path(pred) / fs::path(t).filename()).string(), t);
    if (pairs.empty()) throw InputError("no documents in '" + truth + "'");
  } else {
    pairs.emplace_back(pred, truth);
  }
  const bool dir_labels = !pred_labels.empty() && fs::is_directory(pred_labels);

  EvalReport report;
  report.iou_threshold = iou;
  for (const auto& [p, t] : pairs) {
    const GroundTruth gt = with_file(t, [&] { return truth_from_json(read_file(t)); });
    const DetectionFile det = with_file(p, [&] { return detections_from_json(read_file(p)); });
    if (det.doc_id != gt.doc_id) throw DocMismatchError(gt.doc_id, det.doc_id);
    report.detection.merge(evaluate_detection(det.objects, gt.objects, iou));
    if (!pred_labels.empty()) {
      const std::string lp =
          dir_labels ? (fs::path(pred_labels) / fs::path(t).filename()).string() : pred_labels;
      const LabelFile lf = load_labels_file(lp);
      if (lf.doc_id != gt.doc_id) throw DocMismatchError(gt.doc_id, lf.doc_id);
      LabelMap predicted(lf.entries.begin(), lf.entries.end());
      report.classification.merge(evaluate_classification(predicted, gt.labels));
      report.has_classification = true;
    }
    ++report.documents;
  }
  // merge() only recomputes after a merge; make sure empty sums are scored.
  report.detection.recompute();
  const std::string bytes = eval_report_to_json(report);
  if (!report_path.empty()) write_out(report_path, bytes);
  char line[160];
  std::snprintf(line, sizeof(line), "precision %.4f recall %.4f mean IoU %.4f (IoU >= %.2f)",
                report.detection.precision, report.detection.recall,
                report.detection.mean_iou, iou);
  emit(g, nlohmann::json::parse(bytes), line);
  return 0;
}

int cmd_render(const Globals& g, const std::string& doc_path, const std::string& labels_path,
               const std::string& objects_path, int page, const std::optional<std::string>& rulepack,
               const std::string& out) {
  const BlockDocument doc = load_doc_file(doc_path);
  LabelMap labels;
  if (!labels_path.empty()) {
    const LabelFile lf = load_labels_file(labels_path);
    labels = merge_labels(doc, lf).labels;
  }
  std::vector<DetectedObject> objects;
  if (!objects_path.empty())
    objects = with_file(objects_path,
                        [&] { return detections_from_json(read_file(objects_path)); })
                  .objects;
  const RulePack pack = resolve_rulepack(rulepack);
  const auto boundaries =
      set_boundaries(doc, detect_single_modal_blocks(doc, pack, compute_stats(doc)));
  write_out(out, render_overlay(doc, labels, objects, page, boundaries));
  emit(g, {{"out", out}, {"page", page}}, "page " + std::to_string(page) + " -> " + out);
  return 0;
}

int report_error(const Globals& g, const std::exception& e, int code) {
  std::cerr << "error: " << e.what() << "\n";
  if (g.json)
    std::cout << nlohmann::json{{"error", e.what()}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Text block classification and figure/table region detection"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--json", g.json, "Print a machine-readable summary on stdout");
  app.add_option("--jobs", g.jobs, "Documents processed in parallel")
      ->check(CLI::PositiveNumber);

  std::optional<std::string> rulepack;
  auto add_rulepack = [&](CLI::App* sub) {
    sub->add_option("--rulepack", rulepack,
                    "Rule pack JSON (default: $CTBR_RULEPACK, else built-in)");
  };

  std::string doc, out, model, features, labels, stats_out, render_dir, spec, pred,
      truth, pred_labels, report, objects, doc_id;
  double iou = 0.8;
  int page = 0;
  TrainArgs ta;

  auto* validate = app.add_subcommand("validate", "Validate a blocks-JSON document");
  validate->add_option("doc", doc, "Document path")->required();

  auto* stats = app.add_subcommand("extract-stats", "Body font, boundaries, titles, domains");
  stats->add_option("--doc,doc", doc, "Document path")->required();
  stats->add_option("--out", out, "Output path (default stdout)");
  add_rulepack(stats);

  auto* encode = app.add_subcommand("encode", "Encode blocks into feature vectors");
  encode->add_option("--doc,doc", doc, "Document path")->required();
  encode->add_option("--out", out, "Features JSON")->required();
  encode->add_option("--stats", stats_out, "Stats sidecar (default <out>.stats.json)");

  auto* train_cmd = app.add_subcommand("train", "Train the block classifier");
  train_cmd->add_option("--features", ta.features, "Features JSON");
  train_cmd->add_option("--labels", ta.labels, "Label file");
  train_cmd->add_option("--corpus", ta.corpus, "Directory of documents");
  train_cmd->add_option("--labels-dir", ta.labels_dir, "Directory of label files");
  train_cmd->add_option("--out", ta.out, "Model file")->required();
  train_cmd->add_option("--report", ta.report, "Training report JSON");
  train_cmd->add_option("--C", ta.hp.C, "Regularization constant")->check(CLI::PositiveNumber);
  train_cmd->add_option("--epochs", ta.hp.epochs, "Training epochs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", ta.hp.seed, "Seed for the initial weights");
  train_cmd->add_option("--class-weights", ta.hp.class_weights,
                        "Hinge weights for body_text supplementary accessory");
  add_rulepack(train_cmd);

  auto* classify = app.add_subcommand("classify", "Label blocks with a trained model");
  classify->add_option("--model", model, "Model file")->required();
  classify->add_option("--features", features, "Features JSON");
  classify->add_option("--doc", doc, "Document (adds rule-recognized titles)");
  classify->add_option("--doc-id", doc_id, "doc_id for the label file");
  classify->add_option("--out", out, "Label file")->required();
  add_rulepack(classify);

  auto* detect = app.add_subcommand("detect", "Detect figure and table regions");
  detect->add_option("--doc,doc", doc, "Document or directory of documents")->required();
  detect->add_option("--model", model, "Model file")->required();
  detect->add_option("--out", out, "Detections JSON (directory for a corpus)")->required();
  detect->add_option("--render", render_dir, "Directory for per-page SVG overlays");
  add_rulepack(detect);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus");
  gen->add_option("--spec", spec, "Synthetic spec JSON")->required();
  gen->add_option("--out-dir", out, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Score detections (and labels) against truth");
  eval->add_option("--pred", pred, "Detections file or directory")->required();
  eval->add_option("--truth", truth, "Truth file or directory")->required();
  eval->add_option("--pred-labels", pred_labels, "Predicted label file or directory");
  eval->add_option("--iou", iou, "IoU threshold")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--report", report, "Report JSON");

  auto* render = app.add_subcommand("render", "Render one page as an SVG overlay");
  render->add_option("--doc", doc, "Document")->required();
  render->add_option("--labels", labels, "Label file");
  render->add_option("--objects", objects, "Detections JSON");
  render->add_option("--page", page, "Page index")->required();
  render->add_option("--out", out, "SVG path")->required();
  add_rulepack(render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::kInput);
  }

  try {
    if (*validate) return cmd_validate(g, doc);
    if (*stats) return cmd_extract_stats(g, doc, rulepack, out);
    if (*encode) return cmd_encode(g, doc, out, stats_out);
    if (*train_cmd) {
      ta.rulepack = rulepack;
      return cmd_train(g, ta);
    }
    if (*classify) return cmd_classify(g, model, features, doc, doc_id, rulepack, out);
    if (*detect) return cmd_detect(g, doc, model, rulepack, out, render_dir);
    if (*gen) return cmd_gen(g, spec, out);
    if (*eval) return cmd_eval(g, pred, truth, pred_labels, iou, report);
    if (*render) return cmd_render(g, doc, labels, objects, page, rulepack, out);
  } catch (const Error& e) {
    return report_error(g, e, static_cast<int>(e.exit_code()));
  } catch (const std::exception& e) {
    return report_error(g, e, static_cast<int>(ExitCode::kInternal));
  }
  return static_cast<int>(ExitCode::kInternal);
}
