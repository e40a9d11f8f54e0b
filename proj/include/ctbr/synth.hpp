#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ctbr/document.hpp"
#include "ctbr/segmenter.hpp"

namespace ctbr {

struct IntRange {
  int min = 0;
  int max = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct SyntheticSpec {
  std::uint64_t seed = 42;
  int documents = 1;
  int pages = 3;
  int columns = 2;
  IntRange figures_per_page{1, 3};
  IntRange tables_per_page{0, 2};
  double footnote_prob = 0.3;
  bool page_number = true;

  // Throws InputError on negative or inverted ranges.
  void validate() const;
  static SyntheticSpec from_json(std::string_view bytes);
  std::string to_json() const;
};

struct TruthObject {
  ObjectKind kind;
  int page_index = 0;
  BBox region;
  std::string title_block_id;
  std::vector<std::string> member_block_ids;
};

struct GroundTruth {
  std::string doc_id;
  LabelMap labels;
  std::vector<TruthObject> objects;
};

struct SyntheticDocument {
  BlockDocument document;
  GroundTruth truth;
};

// Document number `index` of the corpus described by `spec`. Pure function
// of (spec, index).
SyntheticDocument generate_synthetic(const SyntheticSpec& spec, int index = 0);
std::vector<SyntheticDocument> generate_corpus(const SyntheticSpec& spec);

std::string truth_to_json(const GroundTruth& truth);
GroundTruth truth_from_json(std::string_view bytes);

}  // namespace ctbr
