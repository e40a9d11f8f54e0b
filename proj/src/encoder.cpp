#include "ctbr/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctbr/errors.hpp"
#include "ctbr/json_util.hpp"

namespace ctbr {

namespace {

// Key with the largest count; ties go to the smallest key.
template <typename Key>
Key argmax_count(const std::map<Key, std::size_t>& counts) {
  Key best{};
  std::size_t best_count = 0;
  bool have = false;
  for (const auto& [key, count] : counts) {
    if (!have || count > best_count) {
      best = key;
      best_count = count;
      have = true;
    }
  }
  return best;
}

std::string block_font_name(const TextBlock& block) {
  std::map<std::string, std::size_t> counts;
  for (const auto& span : block.spans)
    counts[span.font_name] += count_non_whitespace(span.text);
  return argmax_count(counts);
}

double block_font_size(const TextBlock& block) {
  std::map<double, std::size_t> counts;
  for (const auto& span : block.spans)
    counts[span.font_size] += count_non_whitespace(span.text);
  return argmax_count(counts);
}

double nonzero(double boundary) {
  return boundary == 0.0 ? kZeroBoundaryShift : boundary;
}

}  // namespace

DocumentStats compute_stats(const BlockDocument& doc) {
  const auto blocks = doc.blocks_in_order();
  if (blocks.empty()) throw EmptyDocumentError("document has no blocks");

  DocumentStats stats;
  std::map<std::string, std::size_t> font_chars;
  for (const TextBlock* block : blocks)
    for (const auto& span : block->spans)
      font_chars[span.font_name] += count_non_whitespace(span.text);
  stats.body_font_name = argmax_count(font_chars);

  std::map<double, std::size_t> size_chars;
  for (const TextBlock* block : blocks)
    for (const auto& span : block->spans)
      if (span.font_name == stats.body_font_name)
        size_chars[span.font_size] += count_non_whitespace(span.text);
  stats.body_font_size = argmax_count(size_chars);

  stats.boundary_top = std::numeric_limits<double>::infinity();
  stats.boundary_bottom = -std::numeric_limits<double>::infinity();
  for (const TextBlock* block : blocks) {
    stats.max_width = std::max(stats.max_width, block->bbox.width());
    stats.max_height = std::max(stats.max_height, block->bbox.height());
    stats.boundary_top = std::min(stats.boundary_top, block->bbox.top);
    stats.boundary_bottom = std::max(stats.boundary_bottom, block->bbox.bottom);
  }

  stats.boundary_left = std::numeric_limits<double>::infinity();
  stats.boundary_right = -std::numeric_limits<double>::infinity();
  for (const TextBlock* block : blocks) {
    if (block->bbox.width() < kBoundaryWidthFraction * stats.max_width)
      continue;
    stats.boundary_left = std::min(stats.boundary_left, block->bbox.left);
    stats.boundary_right = std::max(stats.boundary_right, block->bbox.right);
  }

  for (const auto& page : doc.pages) {
    if (page.media_box.width() != doc.pages.front().media_box.width() ||
        page.media_box.height() != doc.pages.front().media_box.height())
      stats.mixed_page_sizes = true;
  }
  return stats;
}

FeatureVector encode_block(const TextBlock& block, const DocumentStats& stats) {
  std::size_t length_text = 0;
  for (const auto& span : block.spans)
    length_text += count_non_whitespace(span.text);
  if (length_text == 0)
    throw DegenerateBlockError("block '" + block.id +
                               "' has no non-whitespace text");

  const BBox& b = block.bbox;
  FeatureVector fv;
  fv[FeatureVector::kLeft] = b.left / nonzero(stats.boundary_left);
  fv[FeatureVector::kRight] = b.right / nonzero(stats.boundary_right);
  fv[FeatureVector::kTop] = b.top / nonzero(stats.boundary_top);
  fv[FeatureVector::kBottom] = b.bottom / nonzero(stats.boundary_bottom);
  fv[FeatureVector::kWidth] = b.width() / stats.max_width;
  fv[FeatureVector::kHeight] = b.height() / stats.max_height;
  fv[FeatureVector::kFontType] =
      block_font_name(block) == stats.body_font_name ? 1.0 : 0.0;
  const double code_fs = block_font_size(block) / stats.body_font_size;
  fv[FeatureVector::kFontSize] = code_fs;
  fv[FeatureVector::kDensity] =
      b.area() / (static_cast<double>(length_text) * code_fs) /
      kDensityNormalizer;
  return fv;
}

EncodedDocument encode_document(const BlockDocument& doc) {
  EncodedDocument out;
  out.stats = compute_stats(doc);
  for (const TextBlock* block : doc.blocks_in_order()) {
    try {
      out.features.emplace(block->id, encode_block(*block, out.stats));
    } catch (const DegenerateBlockError&) {
      out.skipped.push_back(block->id);
    }
  }
  return out;
}

std::string features_to_json(const std::map<std::string, FeatureVector>& f) {
  nlohmann::json root = nlohmann::json::object();
  for (const auto& [id, fv] : f) root[id] = fv.values;
  return json_util::dump(root);
}

std::map<std::string, FeatureVector> features_from_json(std::string_view bytes) {
  const auto root = json_util::parse(bytes);
  json_util::require_object(root, "");
  std::map<std::string, FeatureVector> out;
  for (const auto& [id, arr] : root.items()) {
    const std::string path = "/" + id;
    if (!arr.is_array() || arr.size() != kNumFeatures)
      throw SchemaError(path, "expected array of 9 numbers");
    FeatureVector fv;
    for (std::size_t i = 0; i < kNumFeatures; ++i)
      fv[i] = json_util::as_number(arr[i], path + "/" + std::to_string(i));
    out.emplace(id, fv);
  }
  return out;
}

std::string stats_to_json(const DocumentStats& s) {
  return json_util::dump({{"body_font_name", s.body_font_name},
                          {"body_font_size", s.body_font_size},
                          {"boundary_left", s.boundary_left},
                          {"boundary_right", s.boundary_right},
                          {"boundary_top", s.boundary_top},
                          {"boundary_bottom", s.boundary_bottom},
                          {"max_width", s.max_width},
                          {"max_height", s.max_height},
                          {"mixed_page_sizes", s.mixed_page_sizes}});
}

}  // namespace ctbr
