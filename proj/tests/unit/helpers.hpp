#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ctbr/document.hpp"
#include "ctbr/geometry.hpp"

namespace testing {

inline ctbr::TextBlock make_block(const std::string& id, ctbr::BBox bbox,
                                  const std::string& text,
                                  const std::string& font = "Body",
                                  double size = 10.0, int order = 0,
                                  int page = 0) {
  ctbr::TextBlock b;
  b.id = id;
  b.page_index = page;
  b.bbox = bbox;
  b.spans = {{text, font, size}};
  b.reading_order = order;
  return b;
}

inline ctbr::BlockDocument one_page(std::vector<ctbr::TextBlock> blocks,
                                    int columns = 2,
                                    ctbr::BBox media = {0, 0, 600, 800}) {
  ctbr::BlockDocument doc;
  doc.doc_id = "doc";
  doc.layout_columns = columns;
  ctbr::Page page;
  page.index = 0;
  page.media_box = media;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    blocks[i].reading_order = static_cast<int>(i);
    blocks[i].page_index = 0;
  }
  page.blocks = std::move(blocks);
  doc.pages.push_back(std::move(page));
  return doc;
}

// Deterministic generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double real(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool coin(double p = 0.5) { return real(0, 1) < p; }
  ctbr::BBox box(double max_x = 600, double max_y = 800) {
    const double l = real(0, max_x - 2);
    const double t = real(0, max_y - 2);
    return {l, t, real(l + 1, max_x), real(t + 1, max_y)};
  }
  std::string word(int min_len = 1, int max_len = 8) {
    static const char* alphabet = "abcdefghijklmnopqrstuvwxyz";
    std::string s;
    const int n = integer(min_len, max_len);
    for (int i = 0; i < n; ++i) s += alphabet[integer(0, 25)];
    return s;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace testing
