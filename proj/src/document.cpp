#include "ctbr/document.hpp"

#include <cctype>
#include <tuple>

namespace ctbr {

std::size_t BlockDocument::block_count() const {
  std::size_t n = 0;
  for (const auto& page : pages) n += page.blocks.size();
  return n;
}

std::vector<const TextBlock*> BlockDocument::blocks_in_order() const {
  std::vector<const TextBlock*> out;
  out.reserve(block_count());
  for (const auto& page : pages)
    for (const auto& block : page.blocks) out.push_back(&block);
  return out;
}

const TextBlock* BlockDocument::find_block(std::string_view id) const {
  for (const auto& page : pages)
    for (const auto& block : page.blocks)
      if (block.id == id) return &block;
  return nullptr;
}

const Page* BlockDocument::find_page(int index) const {
  for (const auto& page : pages)
    if (page.index == index) return &page;
  return nullptr;
}

std::string_view label_name(BlockLabel label) {
  switch (label) {
    case BlockLabel::kBodyText:
      return "body_text";
    case BlockLabel::kSupplementary:
      return "supplementary";
    case BlockLabel::kAccessory:
      return "accessory";
  }
  return "body_text";
}

std::optional<BlockLabel> parse_label(std::string_view name) {
  for (BlockLabel label : kAllLabels)
    if (label_name(label) == name) return label;
  return std::nullopt;
}

std::string block_text(const TextBlock& block) {
  std::string out;
  for (std::size_t i = 0; i < block.spans.size(); ++i) {
    if (i > 0) out += ' ';
    out += block.spans[i].text;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string first_line(const TextBlock& block) {
  const std::string text = block_text(block);
  // Leading blank lines do not count as the first line.
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::string_view line =
        std::string_view(text).substr(start, nl == std::string::npos
                                                 ? std::string::npos
                                                 : nl - start);
    std::string trimmed = trim(line);
    if (!trimmed.empty() || nl == std::string::npos) return trimmed;
    start = nl + 1;
  }
  return {};
}

std::size_t count_non_whitespace(std::string_view s) {
  std::size_t n = 0;
  // Counts code points: UTF-8 continuation bytes are skipped.
  for (unsigned char c : s)
    if (!std::isspace(c) && (c & 0xC0) != 0x80) ++n;
  return n;
}

FontKey dominant_font(const TextBlock& block) {
  std::map<std::pair<std::string, double>, std::size_t> counts;
  for (const auto& span : block.spans)
    counts[{span.font_name, span.font_size}] += count_non_whitespace(span.text);
  FontKey best;
  std::size_t best_count = 0;
  bool have = false;
  // std::map iterates in (name, size) order, so a strict > keeps the
  // smallest key among ties.
  for (const auto& [key, count] : counts) {
    if (!have || count > best_count) {
      best = {key.first, key.second};
      best_count = count;
      have = true;
    }
  }
  return best;
}

}  // namespace ctbr
