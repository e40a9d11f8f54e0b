#include "ctbr/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "ctbr/errors.hpp"
#include "ctbr/ingest.hpp"
#include "ctbr/json_util.hpp"

namespace ctbr {

void SyntheticSpec::validate() const {
  if (documents < 0) throw InputError("documents must be >= 0");
  if (pages < 1) throw InputError("pages must be >= 1");
  if (columns != 1 && columns != 2) throw InputError("columns must be 1 or 2");
  for (const IntRange* r : {&figures_per_page, &tables_per_page})
    if (r->min < 0 || r->max < r->min)
      throw InputError("per-page ranges must satisfy 0 <= min <= max");
  if (!(footnote_prob >= 0.0 && footnote_prob <= 1.0))
    throw InputError("footnote_prob must be within [0, 1]");
}

namespace {

IntRange read_range(const nlohmann::json& root, const char* key) {
  const auto& v = json_util::get(root, key, "");
  const std::string path = std::string("/") + key;
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer())
    throw SchemaError(path, "expected [min, max] integers");
  return {v[0].get<int>(), v[1].get<int>()};
}

}  // namespace

SyntheticSpec SyntheticSpec::from_json(std::string_view bytes) {
  const auto root = json_util::parse(bytes);
  json_util::require_object(root, "");
  SyntheticSpec spec;
  spec.seed = static_cast<std::uint64_t>(json_util::get_integer(root, "seed", ""));
  if (root.contains("documents"))
    spec.documents = static_cast<int>(json_util::get_integer(root, "documents", ""));
  spec.pages = static_cast<int>(json_util::get_integer(root, "pages", ""));
  spec.columns = static_cast<int>(json_util::get_integer(root, "columns", ""));
  spec.figures_per_page = read_range(root, "figures_per_page");
  spec.tables_per_page = read_range(root, "tables_per_page");
  if (root.contains("noise")) {
    const auto& noise = root["noise"];
    json_util::require_object(noise, "/noise");
    spec.footnote_prob = json_util::get_number(noise, "footnote_prob", "/noise");
    spec.page_number = json_util::get_bool(noise, "page_number", "/noise");
  }
  spec.validate();
  return spec;
}

std::string SyntheticSpec::to_json() const {
  return json_util::dump(
      {{"seed", seed},
       {"documents", documents},
       {"pages", pages},
       {"columns", columns},
       {"figures_per_page", {figures_per_page.min, figures_per_page.max}},
       {"tables_per_page", {tables_per_page.min, tables_per_page.max}},
       {"noise", {{"footnote_prob", footnote_prob}, {"page_number", page_number}}}});
}

namespace {

// mt19937_64's output sequence is fixed by the standard; the distribution
// helpers below are ours so corpora are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  int uniform_int(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  bool chance(double p) { return uniform(0.0, 1.0) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(
        uniform_int(0, static_cast<int>(items.size()) - 1))];
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i)
      std::swap(items[i - 1],
                items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1))]);
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, int index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Page geometry (A4, points).
constexpr double kPageWidth = 595.0;
constexpr double kPageHeight = 842.0;
constexpr double kMid = kPageWidth / 2.0;
constexpr double kTextTop = 72.0;
constexpr double kTextBottom = 770.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 525.0;
constexpr double kColumnWidth = 220.0;
constexpr double kGutter = 15.0;

// Sizes as TeX-produced PDFs report them.
constexpr double kBodySize = 9.9626;
constexpr double kSmallSize = 8.9664;
constexpr double kSectionSize = 11.9552;
constexpr double kSubsectionSize = 10.9589;
constexpr double kTitleSize = 14.3462;
constexpr double kLeading = 12.0;

const std::string kBodyFont = "NimbusRomNo9L-Regu";
const std::string kBoldFont = "NimbusRomNo9L-Medi";
const std::vector<std::string> kFigureFonts = {"Helvetica", "ArialMT",
                                               "DejaVuSans"};
const std::vector<double> kFigureSizes = {6.9738, 7.9701};

const std::vector<std::string> kWords = {
    "model",    "layout",     "document", "block",     "region",  "feature",
    "analysis", "we",         "propose",  "results",   "show",    "that",
    "the",      "method",     "improves", "accuracy",  "on",      "both",
    "datasets", "using",      "a",        "simple",    "encoder", "with",
    "text",     "position",   "font",     "size",      "density", "and",
    "classifier", "which",    "is",       "trained",   "in",      "our",
    "setting",  "each",       "page",     "contains",  "several", "objects",
    "figures",  "tables",     "captions", "are",       "detected", "from",
    "compact",  "representation", "of",   "scientific", "articles", "while",
    "previous", "work",       "relies",   "heavily",   "visual",  "cues",
    "this",     "approach",   "remains",  "robust",    "across",  "styles",
    "for",      "evaluation", "report",   "precision", "recall",  "scores"};
const std::vector<std::string> kSectionNames = {
    "Introduction", "Related Work",  "Method",         "Experiments",
    "Results",      "Discussion",    "Analysis",       "Datasets",
    "Evaluation",   "Model Design",  "Training Setup", "Ablation Study",
    "Error Analysis", "Limitations", "Conclusion"};
const std::vector<std::string> kNodeNames = {
    "Encoder",  "Decoder",   "Input",     "Output",   "Attention",
    "Embedding", "Classifier", "Pooling", "Softmax",  "Features",
    "Layout",   "Blocks",    "Regions",   "Labels"};
const std::vector<std::string> kTableNames = {
    "BERT", "RoBERTa", "Ours", "CRF", "LSTM", "GPT-2", "Baseline", "XLNet",
    "ELMo", "SciBERT", "LayoutLM", "Rules"};
const std::vector<std::string> kTableHeads = {"Acc", "F1", "Prec", "Rec",
                                              "Time", "Params", "EM", "AUC"};

double q(double x) { return canonical_number(x); }

double text_width(std::size_t chars, double size) {
  return static_cast<double>(chars) * 0.5 * size;
}

std::string capitalize(std::string w) {
  if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string words_line(Rng& rng, std::size_t chars) {
  std::string line;
  while (line.size() + 3 < chars) {
    if (!line.empty()) line += ' ';
    line += rng.pick(kWords);
  }
  return line;
}

// Multi-line prose; lines separated by '\n', first word capitalized.
std::string prose(Rng& rng, int lines, std::size_t chars_per_line) {
  std::string text;
  for (int i = 0; i < lines; ++i) {
    std::size_t target = chars_per_line;
    if (i == lines - 1)
      target = static_cast<std::size_t>(
          static_cast<double>(chars_per_line) * rng.uniform(0.4, 0.9));
    std::string line = words_line(rng, std::max<std::size_t>(target, 8));
    if (i == 0) line = capitalize(line);
    if (i > 0) text += '\n';
    text += line;
  }
  return text + ".";
}

struct Draft {
  BBox bbox;
  std::vector<Span> spans;
  BlockLabel label;
  int group = 0;  // reading-order group
  int object = -1;  // cluster member of truth object index
  bool is_caption = false;
};

struct Column {
  double left;
  double right;
  double width() const { return right - left; }
};

enum class Slot { kFullTop, kLeftTop, kRightTop, kLeftBottom, kRightBottom,
                  kSingleTop, kSingleBottom };

bool is_top(Slot s) {
  return s == Slot::kFullTop || s == Slot::kLeftTop || s == Slot::kRightTop ||
         s == Slot::kSingleTop;
}

struct PlacedObject {
  ObjectKind kind;
  Slot slot;
  bool title_first = false;
};

class DocumentBuilder {
 public:
  DocumentBuilder(const SyntheticSpec& spec, int index)
      : spec_(spec), rng_(mix_seed(spec.seed, index)) {
    doc_.doc_id = "synth-" + std::to_string(spec.seed) + "-" + std::to_string(index);
    doc_.layout_columns = spec.columns;
    truth_.doc_id = doc_.doc_id;
  }

  SyntheticDocument build() {
    for (int p = 0; p < spec_.pages; ++p) build_page(p);
    return {std::move(doc_), std::move(truth_)};
  }

 private:
  std::vector<Column> columns() const {
    if (spec_.columns == 1) return {{kMarginLeft, kMarginRight}};
    return {{kMarginLeft, kMarginLeft + kColumnWidth},
            {kMarginLeft + kColumnWidth + kGutter, kMarginRight}};
  }

  void add(std::vector<Draft>& out, BBox box, std::vector<Span> spans,
           BlockLabel label, int group, int object = -1) {
    box = {q(box.left), q(box.top), q(box.right), q(box.bottom)};
    for (auto& s : spans) s.font_size = q(s.font_size);
    out.push_back({box, std::move(spans), label, group, object, false});
  }

  // Figure or table cluster inside [x0, x0+w] starting at y0; returns its
  // bottom edge.
  double add_cluster(std::vector<Draft>& out, ObjectKind kind, double x0,
                     double y0, double w, int group, int object) {
    if (kind == ObjectKind::kTable) return add_table(out, x0, y0, w, group, object);
    if (rng_.chance(0.5)) return add_plot(out, x0, y0, w, group, object);
    return add_diagram(out, x0, y0, w, group, object);
  }

  double add_plot(std::vector<Draft>& out, double x0, double y0, double w,
                  int group, int object) {
    const std::string font = rng_.pick(kFigureFonts);
    const double fs = rng_.pick(kFigureSizes);
    const double h = rng_.uniform(70.0, 130.0);
    const int panels = w > 300.0 ? rng_.uniform_int(1, 2) : 1;
    const double pw = w / panels;
    for (int k = 0; k < panels; ++k) {
      const double px = x0 + k * pw;
      add(out, {px, y0 + 10.0, px + 14.0, y0 + h - 24.0},
          {{"100\n75\n50\n25\n0", font, fs}}, BlockLabel::kSupplementary, group, object);
      add(out, {px + 18.0, y0 + h - 21.0, px + pw - 4.0, y0 + h - 12.0},
          {{"0 10 20 30 40 50", font, fs}}, BlockLabel::kSupplementary, group, object);
      const std::string axis = rng_.chance(0.5) ? "Epochs" : "Training steps";
      const double aw = text_width(axis.size(), fs);
      const double cx = px + pw / 2.0;
      add(out, {cx - aw / 2.0, y0 + h - 10.0, cx + aw / 2.0, y0 + h},
          {{axis, font, fs}}, BlockLabel::kSupplementary, group, object);
      if (rng_.chance(0.7))
        add(out, {px + pw - 64.0, y0, px + pw - 4.0, y0 + 22.0},
            {{"Ours\nBaseline", font, fs}}, BlockLabel::kSupplementary, group, object);
      else
        add(out, {px + 20.0, y0, px + 70.0, y0 + 9.0}, {{"(a) Loss", font, fs}},
            BlockLabel::kSupplementary, group, object);
    }
    return y0 + h;
  }

  double add_diagram(std::vector<Draft>& out, double x0, double y0, double w,
                     int group, int object) {
    // Some diagrams are typeset in the body font at body size.
    const bool body_like = rng_.chance(0.3);
    const std::string font = body_like ? kBodyFont : rng_.pick(kFigureFonts);
    const double fs = body_like ? kBodySize : rng_.pick(kFigureSizes);
    const int rows = rng_.uniform_int(2, 3);
    const int cols = w > 300.0 ? rng_.uniform_int(3, 4) : rng_.uniform_int(2, 3);
    const double row_h = rng_.uniform(30.0, 45.0);
    const double cell_w = w / cols;
    const double node_h = fs * 1.3 + 4.0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        // Corner nodes always present so the cluster spans the whole figure.
        const bool corner = (r == 0 && c == 0) || (r == rows - 1 && c == cols - 1);
        if (!corner && rng_.chance(0.25)) continue;
        const std::string name = rng_.pick(kNodeNames);
        const double nw = std::min(cell_w - 4.0, text_width(name.size(), fs) + 8.0);
        double nx = x0 + c * cell_w + (cell_w - nw) / 2.0;
        if (c == 0) nx = x0;
        if (c == cols - 1) nx = x0 + w - nw;
        const double ny = y0 + r * row_h;
        add(out, {nx, ny, nx + nw, ny + node_h}, {{name, font, fs}},
            BlockLabel::kSupplementary, group, object);
      }
    }
    return y0 + (rows - 1) * row_h + node_h;
  }

  double add_table(std::vector<Draft>& out, double x0, double y0, double w,
                   int group, int object) {
    const int cols = w > 300.0 ? rng_.uniform_int(4, 6) : rng_.uniform_int(3, 4);
    const int rows = rng_.uniform_int(3, 7);
    const double row_h = 11.5;
    std::string head = "Model";
    for (int c = 1; c < cols; ++c) head += "    " + kTableHeads[static_cast<std::size_t>(c - 1)];
    add(out, {x0, y0, x0 + w, y0 + 10.0}, {{head, kBoldFont, kSmallSize}},
        BlockLabel::kSupplementary, group, object);
    double y = y0 + row_h + 2.0;
    for (int r = 0; r < rows; ++r) {
      std::string row = rng_.pick(kTableNames);
      for (int c = 1; c < cols; ++c) {
        char cell[16];
        std::snprintf(cell, sizeof(cell), "%.1f", rng_.uniform(10.0, 99.0));
        row += "    ";
        row += cell;
      }
      add(out, {x0, y, x0 + w, y + 10.0}, {{row, kBodyFont, kSmallSize}},
          BlockLabel::kSupplementary, group, object);
      y += row_h;
    }
    return y - row_h + 10.0;
  }

  // Caption centered on the object's horizontal extent, never wider than it.
  Draft make_caption(ObjectKind kind, double cx, double max_w, double y,
                     int group, int object) {
    const int number = kind == ObjectKind::kFigure ? ++figure_no_ : ++table_no_;
    const std::string head =
        (kind == ObjectKind::kFigure ? "Figure " : "Table ") +
        std::to_string(number) + ": ";
    const std::size_t per_line =
        static_cast<std::size_t>(max_w / (0.5 * kBodySize));
    const int lines = rng_.uniform_int(1, 2);
    std::string text = head;
    double width = 0.0;
    if (lines == 1) {
      const std::size_t len = static_cast<std::size_t>(
          static_cast<double>(per_line) * rng_.uniform(0.4, 0.95));
      text += words_line(rng_, len > head.size() + 8 ? len - head.size() : 8) + ".";
      width = std::min(max_w, text_width(text.size(), kBodySize));
    } else {
      text += words_line(rng_, per_line - head.size()) + "\n" +
              words_line(rng_, per_line / 2) + ".";
      width = max_w;
    }
    const double h = lines * kLeading - 2.0;
    Draft d{{q(cx - width / 2.0), q(y), q(cx + width / 2.0), q(y + h)},
            {{text, kBodyFont, q(kBodySize)}},
            BlockLabel::kSupplementary,
            group,
            -1,
            true};
    (void)object;
    return d;
  }

  // Places a float with its caption starting at y; returns the bottom edge.
  double place_float(std::vector<Draft>& out, const PlacedObject& obj,
                     double x0, double w, double y, int group, int page) {
    const int index = static_cast<int>(truth_.objects.size());
    truth_.objects.push_back({obj.kind, page, {}, "", {}});
    std::vector<Draft> cluster;
    Draft caption;
    double bottom = 0.0;
    if (obj.title_first) {
      // Caption width is unknown until the cluster exists; reserve 2 lines.
      const double cluster_top = y + 2 * kLeading + 4.0;
      bottom = add_cluster(cluster, obj.kind, x0, cluster_top, w, group, index);
      BBox region = cluster.front().bbox;
      for (const auto& d : cluster) region = bbox_union(region, d.bbox);
      caption = make_caption(obj.kind, region.center_x(), region.width(), y, group, index);
      // Pull the cluster up under a one-line caption.
      const double shift = cluster_top - (caption.bbox.bottom + 6.0);
      for (auto& d : cluster) {
        d.bbox.top = q(d.bbox.top - shift);
        d.bbox.bottom = q(d.bbox.bottom - shift);
      }
      bottom -= shift;
    } else {
      const double cluster_bottom = add_cluster(cluster, obj.kind, x0, y, w, group, index);
      BBox region = cluster.front().bbox;
      for (const auto& d : cluster) region = bbox_union(region, d.bbox);
      caption = make_caption(obj.kind, region.center_x(), region.width(),
                             cluster_bottom + 8.0, group, index);
      bottom = caption.bbox.bottom;
    }
    BBox region = cluster.front().bbox;
    for (const auto& d : cluster) region = bbox_union(region, d.bbox);
    truth_.objects[static_cast<std::size_t>(index)].region = region;
    caption.object = index;
    out.push_back(caption);
    for (auto& d : cluster) out.push_back(std::move(d));
    return bottom;
  }

  // Height a float will occupy, measured by building it in a scratch
  // builder state. Cheaper to over-reserve than to measure: use bounds.
  static double float_height_bound(ObjectKind kind) {
    return kind == ObjectKind::kTable ? 11.5 * 8 + 14.0 + 2 * kLeading + 14.0
                                      : 130.0 + 2 * kLeading + 14.0;
  }

  void add_section(std::vector<Draft>& out, double left, double& y, int group,
                   bool main) {
    std::string text;
    double fs = kSectionSize;
    if (main || section_ == 0) {
      ++section_;
      subsection_ = 0;
      text = std::to_string(section_) + ". " + rng_.pick(kSectionNames);
    } else {
      ++subsection_;
      fs = kSubsectionSize;
      text = std::to_string(section_) + "." + std::to_string(subsection_) + " " +
             rng_.pick(kSectionNames);
    }
    const double h = fs * 1.2;
    add(out, {left, y, left + text_width(text.size(), fs * 1.05), y + h},
        {{text, kBoldFont, fs}}, BlockLabel::kSupplementary, group);
    y += h + 5.0;
  }

  void add_paragraph(std::vector<Draft>& out, const Column& col, double& y,
                     int lines, int group) {
    const auto per_line = static_cast<std::size_t>(col.width() / (0.5 * kBodySize));
    std::string text = prose(rng_, lines, per_line);
    // Occasional enumerated paragraph in the body font; the regex matches
    // it but the font filter must reject it.
    if (rng_.chance(0.05)) text = std::to_string(rng_.uniform_int(1, 4)) + ". " + text;
    const double h = lines * kLeading - 2.0;
    add(out, {col.left, y, col.right, y + h}, {{text, kBodyFont, kBodySize}},
        BlockLabel::kBodyText, group);
    y += h + 6.0;
  }

  // Paragraphs and section titles between top and limit.
  void fill_text(std::vector<Draft>& out, const Column& col, double y,
                 double limit, int group) {
    bool last_was_paragraph = true;
    while (true) {
      const double avail = limit - y;
      if (last_was_paragraph && avail > 14.0 + 5.0 + 3 * kLeading &&
          rng_.chance(0.22)) {
        add_section(out, col.left, y, group, rng_.chance(0.5));
        last_was_paragraph = false;
        continue;
      }
      const int max_lines = static_cast<int>(std::floor((limit - y + 2.0) / kLeading));
      const int min_lines = last_was_paragraph ? 2 : 1;
      if (max_lines < std::max(min_lines, 2)) break;
      const int lines = std::min(rng_.uniform_int(3, 9), max_lines);
      add_paragraph(out, col, y, lines, group);
      last_was_paragraph = true;
    }
  }

  void build_page(int page) {
    std::vector<Draft> drafts;
    const auto cols = columns();
    const bool two = spec_.columns == 2;
    int group = 0;

    double column_top = kTextTop;
    if (page == 0) {
      const std::string title = capitalize(words_line(rng_, 60));
      add(drafts, {kMid - 200.0, kTextTop, kMid + 200.0, kTextTop + 2 * 17.0},
          {{title.substr(0, 30) + "\n" + title.substr(std::min<std::size_t>(30, title.size())),
            kBoldFont, kTitleSize}},
          BlockLabel::kAccessory, group);
      add(drafts, {kMid - 140.0, kTextTop + 42.0, kMid + 140.0, kTextTop + 70.0},
          {{"Alice Smith  Bob Lee  Carol Kim\nUniversity of Examples", kBodyFont,
            11.9552}},
          BlockLabel::kAccessory, group);
      column_top = kTextTop + 90.0;
    }
    ++group;

    // Objects for this page.
    std::vector<ObjectKind> kinds;
    const int n_fig = rng_.uniform_int(spec_.figures_per_page.min, spec_.figures_per_page.max);
    const int n_tab = rng_.uniform_int(spec_.tables_per_page.min, spec_.tables_per_page.max);
    for (int i = 0; i < n_fig; ++i) kinds.push_back(ObjectKind::kFigure);
    for (int i = 0; i < n_tab; ++i) kinds.push_back(ObjectKind::kTable);

    std::vector<Slot> slots;
    bool full_page = false;
    if (two) {
      full_page = page > 0 && !kinds.empty() && rng_.chance(0.35);
      if (full_page)
        slots = {Slot::kFullTop, Slot::kLeftBottom, Slot::kRightBottom};
      else if (page == 0)
        slots = {Slot::kRightTop, Slot::kLeftBottom, Slot::kRightBottom};
      else
        slots = {Slot::kLeftTop, Slot::kRightTop, Slot::kLeftBottom, Slot::kRightBottom};
    } else {
      slots = page == 0 ? std::vector<Slot>{Slot::kSingleBottom}
                        : std::vector<Slot>{Slot::kSingleTop, Slot::kSingleBottom};
    }
    // Page capacity: drop tables first, then figures.
    while (kinds.size() > slots.size()) {
      auto it = std::find(kinds.begin(), kinds.end(), ObjectKind::kTable);
      if (it == kinds.end()) it = kinds.begin();
      kinds.erase(it);
    }
    rng_.shuffle(kinds);
    if (full_page) {
      // The full-width slot is always used on such pages.
      std::vector<Slot> rest(slots.begin() + 1, slots.end());
      rng_.shuffle(rest);
      slots.resize(1);
      slots.insert(slots.end(), rest.begin(), rest.end());
    } else {
      rng_.shuffle(slots);
    }

    std::vector<PlacedObject> placed;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
      PlacedObject obj{kinds[i], slots[i], false};
      if (full_page) {
        obj.title_first = obj.slot != Slot::kFullTop;
      } else {
        obj.title_first = rng_.chance(is_top(obj.slot) ? 0.3 : 0.4);
      }
      placed.push_back(obj);
    }
    // A title-first top float and a caption-last bottom float in one column
    // would share a compartment; force the bottom one title-first.
    auto column_of = [](Slot s) {
      switch (s) {
        case Slot::kLeftTop: case Slot::kLeftBottom: return 0;
        case Slot::kRightTop: case Slot::kRightBottom: return 1;
        default: return 2;
      }
    };
    for (auto& top : placed) {
      if (!is_top(top.slot) || !top.title_first) continue;
      for (auto& bottom : placed)
        if (!is_top(bottom.slot) && column_of(bottom.slot) == column_of(top.slot))
          bottom.title_first = true;
    }
    auto find_slot = [&](Slot s) -> const PlacedObject* {
      for (const auto& p : placed)
        if (p.slot == s) return &p;
      return nullptr;
    };

    if (const PlacedObject* full = find_slot(Slot::kFullTop)) {
      const double w = (kMarginRight - kMarginLeft) * rng_.uniform(0.8, 1.0);
      const double bottom = place_float(drafts, *full, kMid - w / 2.0, w, kTextTop, group, page);
      column_top = bottom + 14.0;
    }
    ++group;

    // Footnote column, if any.
    int footnote_col = -1;
    if (rng_.chance(spec_.footnote_prob))
      footnote_col = rng_.uniform_int(0, static_cast<int>(cols.size()) - 1);

    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Column& col = cols[c];
      double y = column_top;
      double limit = kTextBottom;
      Slot top_slot = two ? (c == 0 ? Slot::kLeftTop : Slot::kRightTop) : Slot::kSingleTop;
      Slot bottom_slot = two ? (c == 0 ? Slot::kLeftBottom : Slot::kRightBottom)
                             : Slot::kSingleBottom;

      if (static_cast<int>(c) == footnote_col) {
        const int lines = rng_.uniform_int(1, 2);
        const double h = lines * 10.8 - 1.0;
        const auto per_line = static_cast<std::size_t>(col.width() / (0.5 * kSmallSize));
        const std::string text = std::to_string(++footnote_no_) + " " + prose(rng_, lines, per_line - 2);
        add(drafts, {col.left, kTextBottom - h, col.right, kTextBottom},
            {{text, kBodyFont, kSmallSize}}, BlockLabel::kAccessory, group + 2);
        limit = kTextBottom - h - 8.0;
      }

      if (page == 0 && c == 0) {
        // Abstract, then the first numbered section.
        add_paragraph(drafts, col, y, rng_.uniform_int(6, 10), group);
        add_section(drafts, col.left, y, group, true);
      }

      const double obj_w_frac = rng_.uniform(0.85, 1.0);
      if (const PlacedObject* top = find_slot(top_slot)) {
        const double w = col.width() * obj_w_frac;
        y = place_float(drafts, *top, col.left + (col.width() - w) / 2.0, w, y, group, page) + 14.0;
      }
      if (const PlacedObject* bottom = find_slot(bottom_slot)) {
        // Build at a scratch position, then move into place above the limit.
        std::vector<Draft> tmp;
        const double w = col.width() * rng_.uniform(0.85, 1.0);
        const double scratch = 0.0;
        const double end = place_float(tmp, *bottom, col.left + (col.width() - w) / 2.0, w, scratch, group + 1, page);
        const double shift = limit - end;
        for (auto& d : tmp) {
          d.bbox.top = q(d.bbox.top + shift);
          d.bbox.bottom = q(d.bbox.bottom + shift);
        }
        const int obj_index = tmp.front().object;
        auto& region = truth_.objects[static_cast<std::size_t>(obj_index)].region;
        region.top = q(region.top + shift);
        region.bottom = q(region.bottom + shift);
        double float_top = limit;
        for (const auto& d : tmp) float_top = std::min(float_top, d.bbox.top);
        for (auto& d : tmp) drafts.push_back(std::move(d));
        limit = float_top - 14.0;
      }
      fill_text(drafts, col, y, limit, group);
      group += 3;
    }

    if (spec_.page_number) {
      const std::string num = std::to_string(page + 1);
      const double w = text_width(num.size(), kBodySize);
      add(drafts, {kMid - w / 2.0, 790.0, kMid + w / 2.0, 800.0},
          {{num, kBodyFont, kBodySize}}, BlockLabel::kAccessory, 1000);
    }

    std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
      return std::make_tuple(a.group, a.bbox.top, a.bbox.left) <
             std::make_tuple(b.group, b.bbox.top, b.bbox.left);
    });

    Page out;
    out.index = page;
    out.media_box = {0.0, 0.0, kPageWidth, kPageHeight};
    int order = 0;
    for (auto& d : drafts) {
      TextBlock block;
      block.id = "p" + std::to_string(page) + "-b" + std::to_string(order);
      block.page_index = page;
      block.bbox = d.bbox;
      block.spans = std::move(d.spans);
      block.reading_order = order++;
      truth_.labels[block.id] = d.label;
      if (d.object >= 0) {
        auto& obj = truth_.objects[static_cast<std::size_t>(d.object)];
        if (d.is_caption)
          obj.title_block_id = block.id;
        else
          obj.member_block_ids.push_back(block.id);
      }
      out.blocks.push_back(std::move(block));
    }
    doc_.pages.push_back(std::move(out));
  }

  const SyntheticSpec& spec_;
  Rng rng_;
  BlockDocument doc_;
  GroundTruth truth_;
  int figure_no_ = 0;
  int table_no_ = 0;
  int section_ = 0;
  int subsection_ = 0;
  int footnote_no_ = 0;
};

}  // namespace

SyntheticDocument generate_synthetic(const SyntheticSpec& spec, int index) {
  spec.validate();
  return DocumentBuilder(spec, index).build();
}

std::vector<SyntheticDocument> generate_corpus(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<SyntheticDocument> out;
  out.reserve(static_cast<std::size_t>(spec.documents));
  for (int i = 0; i < spec.documents; ++i) out.push_back(generate_synthetic(spec, i));
  return out;
}

std::string truth_to_json(const GroundTruth& truth) {
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& [id, label] : truth.labels)
    labels.push_back({{"block_id", id}, {"label", label_name(label)}});
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : truth.objects)
    objects.push_back({{"kind", object_kind_name(o.kind)},
                       {"page", o.page_index},
                       {"region", {q(o.region.left), q(o.region.top),
                                   q(o.region.right), q(o.region.bottom)}},
                       {"title_block_id", o.title_block_id},
                       {"member_block_ids", o.member_block_ids}});
  return json_util::dump({{"doc_id", truth.doc_id},
                          {"labels", std::move(labels)},
                          {"objects", std::move(objects)}});
}

GroundTruth truth_from_json(std::string_view bytes) {
  const auto root = json_util::parse(bytes);
  json_util::require_object(root, "");
  GroundTruth truth;
  truth.doc_id = json_util::get_string(root, "doc_id", "");
  const auto& labels = json_util::get(root, "labels", "");
  if (!labels.is_array()) throw SchemaError("/labels", "expected array");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string path = "/labels/" + std::to_string(i);
    const std::string name = json_util::get_string(labels[i], "label", path);
    const auto label = parse_label(name);
    if (!label) throw SchemaError(path + "/label", "unknown label '" + name + "'");
    truth.labels[json_util::get_string(labels[i], "block_id", path)] = *label;
  }
  const auto& objects = json_util::get(root, "objects", "");
  if (!objects.is_array()) throw SchemaError("/objects", "expected array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = "/objects/" + std::to_string(i);
    const auto& o = objects[i];
    TruthObject t;
    const std::string kind = json_util::get_string(o, "kind", path);
    const auto k = parse_object_kind(kind);
    if (!k) throw SchemaError(path + "/kind", "unknown kind '" + kind + "'");
    t.kind = *k;
    t.page_index = static_cast<int>(json_util::get_integer(o, "page", path));
    const auto& r = json_util::get(o, "region", path);
    if (!r.is_array() || r.size() != 4)
      throw SchemaError(path + "/region", "expected [l,t,r,b]");
    t.region = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                r[3].get<double>()};
    t.title_block_id = json_util::get_string(o, "title_block_id", path);
    if (o.contains("member_block_ids"))
      t.member_block_ids = o["member_block_ids"].get<std::vector<std::string>>();
    truth.objects.push_back(std::move(t));
  }
  return truth;
}

}  // namespace ctbr
