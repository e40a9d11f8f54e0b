#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctbr/geometry.hpp"

namespace ctbr {

struct Span {
  std::string text;
  std::string font_name;
  double font_size = 0.0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct TextBlock {
  std::string id;
  int page_index = 0;
  BBox bbox;
  std::vector<Span> spans;
  int reading_order = 0;

  friend bool operator==(const TextBlock&, const TextBlock&) = default;
};

struct Page {
  int index = 0;
  BBox media_box;
  std::vector<TextBlock> blocks;

  friend bool operator==(const Page&, const Page&) = default;
};

struct BlockDocument {
  std::string doc_id;
  std::vector<Page> pages;
  int layout_columns = 1;

  std::size_t block_count() const;
  // Blocks in document order: page by page, then by reading order.
  std::vector<const TextBlock*> blocks_in_order() const;
  const TextBlock* find_block(std::string_view id) const;
  const Page* find_page(int index) const;

  friend bool operator==(const BlockDocument&, const BlockDocument&) = default;
};

enum class BlockLabel { kBodyText, kSupplementary, kAccessory };

inline constexpr BlockLabel kAllLabels[] = {
    BlockLabel::kBodyText, BlockLabel::kSupplementary, BlockLabel::kAccessory};
inline constexpr std::size_t kNumLabels = 3;

inline std::size_t label_index(BlockLabel label) {
  return static_cast<std::size_t>(label);
}

// Wire names used in label files: "body_text", "supplementary", "accessory".
std::string_view label_name(BlockLabel label);
std::optional<BlockLabel> parse_label(std::string_view name);

using LabelMap = std::map<std::string, BlockLabel>;

// Span texts joined with a single space.
std::string block_text(const TextBlock& block);
// Text up to the first line break, surrounding whitespace removed.
std::string first_line(const TextBlock& block);
std::string trim(std::string_view s);
std::size_t count_non_whitespace(std::string_view s);

struct FontKey {
  std::string name;
  double size = 0.0;
  friend bool operator==(const FontKey&, const FontKey&) = default;
};

// Font (name, size) pair carrying the most non-whitespace characters in the
// block. Ties go to the smaller name, then the smaller size.
FontKey dominant_font(const TextBlock& block);

}  // namespace ctbr
