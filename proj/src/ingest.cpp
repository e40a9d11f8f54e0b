#include "ctbr/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ctbr/errors.hpp"
#include "ctbr/json_util.hpp"
#include "json.hpp"

namespace ctbr {

using nlohmann::json;

double canonical_number(double x) {
  const double q = std::round(x / kCanonicalStep) / (1.0 / kCanonicalStep);
  return q == 0.0 ? 0.0 : q;  // folds -0.0
}

namespace {

BBox read_bbox(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4)
    throw SchemaError(path, "expected [left, top, right, bottom]");
  double v[4];
  for (std::size_t i = 0; i < 4; ++i)
    v[i] = canonical_number(
        json_util::as_number(j[i], path + "/" + std::to_string(i)));
  BBox box{v[0], v[1], v[2], v[3]};
  if (!box.valid())
    throw GeometryError(path + ": invalid bbox (left > right or top > bottom)");
  return box;
}

json write_bbox(const BBox& b) {
  return json::array({canonical_number(b.left), canonical_number(b.top),
                      canonical_number(b.right), canonical_number(b.bottom)});
}

Span read_span(const json& j, const std::string& path) {
  json_util::require_object(j, path);
  Span span;
  span.text = json_util::get_string(j, "text", path);
  span.font_name = json_util::get_string(j, "font_name", path);
  span.font_size =
      canonical_number(json_util::get_number(j, "font_size", path));
  if (span.text.empty()) throw SchemaError(path + "/text", "must be non-empty");
  if (!(span.font_size > 0.0))
    throw SchemaError(path + "/font_size", "must be > 0");
  return span;
}

TextBlock read_block(const json& j, const std::string& path, int page_index,
                     const BBox& media) {
  json_util::require_object(j, path);
  TextBlock block;
  block.id = json_util::get_string(j, "id", path);
  if (block.id.empty()) throw SchemaError(path + "/id", "must be non-empty");
  block.page_index = page_index;
  block.reading_order =
      static_cast<int>(json_util::get_integer(j, "reading_order", path));
  block.bbox = read_bbox(json_util::get(j, "bbox", path), path + "/bbox");
  if (!(block.bbox.area() > 0.0))
    throw GeometryError(path + "/bbox: zero-area block");
  if (!intersects(block.bbox, media))
    throw GeometryError(path + "/bbox: block lies outside the media box");
  const json& spans = json_util::get(j, "spans", path);
  if (!spans.is_array()) throw SchemaError(path + "/spans", "expected array");
  if (spans.empty()) throw SchemaError(path + "/spans", "must be non-empty");
  for (std::size_t i = 0; i < spans.size(); ++i)
    block.spans.push_back(
        read_span(spans[i], path + "/spans/" + std::to_string(i)));
  return block;
}

}  // namespace

BlockDocument load_document(std::string_view bytes) {
  const json root = json_util::parse(bytes);
  json_util::require_object(root, "");
  BlockDocument doc;
  doc.doc_id = json_util::get_string(root, "doc_id", "");
  const auto columns = json_util::get_integer(root, "layout_columns", "");
  if (columns != 1 && columns != 2)
    throw SchemaError("/layout_columns", "must be 1 or 2");
  doc.layout_columns = static_cast<int>(columns);

  const json& pages = json_util::get(root, "pages", "");
  if (!pages.is_array()) throw SchemaError("/pages", "expected array");
  std::set<std::string> ids;
  for (std::size_t p = 0; p < pages.size(); ++p) {
    const std::string path = "/pages/" + std::to_string(p);
    const json& pj = pages[p];
    json_util::require_object(pj, path);
    Page page;
    page.index = static_cast<int>(json_util::get_integer(pj, "index", path));
    if (page.index != static_cast<int>(p))
      throw SchemaError(path + "/index",
                        "page indices must be contiguous from 0");
    page.media_box =
        read_bbox(json_util::get(pj, "media_box", path), path + "/media_box");
    if (!(page.media_box.area() > 0.0))
      throw GeometryError(path + "/media_box: zero-area media box");
    const json& blocks = json_util::get(pj, "blocks", path);
    if (!blocks.is_array())
      throw SchemaError(path + "/blocks", "expected array");
    std::set<int> orders;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::string bpath = path + "/blocks/" + std::to_string(b);
      TextBlock block = read_block(blocks[b], bpath, page.index, page.media_box);
      if (!ids.insert(block.id).second)
        throw DuplicateIdError(bpath + "/id: duplicate block id '" + block.id +
                               "'");
      if (!orders.insert(block.reading_order).second)
        throw SchemaError(bpath + "/reading_order",
                          "duplicate reading_order " +
                              std::to_string(block.reading_order));
      page.blocks.push_back(std::move(block));
    }
    std::sort(page.blocks.begin(), page.blocks.end(),
              [](const TextBlock& a, const TextBlock& b) {
                return a.reading_order < b.reading_order;
              });
    doc.pages.push_back(std::move(page));
  }
  return doc;
}

std::string save_document(const BlockDocument& doc) {
  json pages = json::array();
  for (const auto& page : doc.pages) {
    json blocks = json::array();
    for (const auto& block : page.blocks) {
      json spans = json::array();
      for (const auto& span : block.spans)
        spans.push_back({{"text", span.text},
                         {"font_name", span.font_name},
                         {"font_size", canonical_number(span.font_size)}});
      blocks.push_back({{"id", block.id},
                        {"reading_order", block.reading_order},
                        {"bbox", write_bbox(block.bbox)},
                        {"spans", std::move(spans)}});
    }
    pages.push_back({{"index", page.index},
                     {"media_box", write_bbox(page.media_box)},
                     {"blocks", std::move(blocks)}});
  }
  const json root = {{"doc_id", doc.doc_id},
                     {"layout_columns", doc.layout_columns},
                     {"pages", std::move(pages)}};
  return json_util::dump(root);
}

LabelFile load_labels(std::string_view bytes) {
  const json root = json_util::parse(bytes);
  json_util::require_object(root, "");
  LabelFile file;
  file.doc_id = json_util::get_string(root, "doc_id", "");
  const json& labels = json_util::get(root, "labels", "");
  if (!labels.is_array()) throw SchemaError("/labels", "expected array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string path = "/labels/" + std::to_string(i);
    json_util::require_object(labels[i], path);
    std::string id = json_util::get_string(labels[i], "block_id", path);
    const std::string name = json_util::get_string(labels[i], "label", path);
    const auto label = parse_label(name);
    if (!label) throw SchemaError(path + "/label", "unknown label '" + name + "'");
    if (!seen.insert(id).second)
      throw DuplicateIdError(path + "/block_id: duplicate label for '" + id +
                             "'");
    file.entries.emplace_back(std::move(id), *label);
  }
  return file;
}

std::string save_labels(const LabelFile& labels) {
  json entries = json::array();
  for (const auto& [id, label] : labels.entries)
    entries.push_back({{"block_id", id}, {"label", label_name(label)}});
  return json_util::dump(
      json{{"doc_id", labels.doc_id}, {"labels", std::move(entries)}});
}

LabelFile make_label_file(const std::string& doc_id, const LabelMap& labels) {
  LabelFile file{doc_id, {}};
  for (const auto& [id, label] : labels) file.entries.emplace_back(id, label);
  return file;
}

LabeledDocument merge_labels(BlockDocument doc, const LabelFile& labels) {
  if (labels.doc_id != doc.doc_id)
    throw DocMismatchError(doc.doc_id, labels.doc_id);
  LabeledDocument out;
  for (const auto& [id, label] : labels.entries) {
    if (doc.find_block(id) == nullptr) throw UnknownBlockError(id);
    out.labels[id] = label;
  }
  out.document = std::move(doc);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing '" + path + "'");
}

}  // namespace ctbr
