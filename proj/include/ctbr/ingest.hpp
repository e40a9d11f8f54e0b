#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctbr/document.hpp"

namespace ctbr {

// Sidecar annotation file, keyed by block id.
struct LabelFile {
  std::string doc_id;
  std::vector<std::pair<std::string, BlockLabel>> entries;

  friend bool operator==(const LabelFile&, const LabelFile&) = default;
};

struct LabeledDocument {
  BlockDocument document;
  LabelMap labels;  // possibly partial
};

// Quantization step applied to every float in the canonical JSON forms.
inline constexpr double kCanonicalStep = 1e-4;
double canonical_number(double x);

// Parses and validates blocks-JSON. Throws SchemaError (with a JSON pointer
// to the offending value), GeometryError or DuplicateIdError. Blocks are
// sorted by reading order and every float is quantized to kCanonicalStep.
BlockDocument load_document(std::string_view bytes);
// Canonical form: sorted keys, quantized floats, UTF-8 kept as-is.
std::string save_document(const BlockDocument& doc);

LabelFile load_labels(std::string_view bytes);
std::string save_labels(const LabelFile& labels);
LabelFile make_label_file(const std::string& doc_id, const LabelMap& labels);

LabeledDocument merge_labels(BlockDocument doc, const LabelFile& labels);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace ctbr
