#include <cmath>

#include "ctbr/encoder.hpp"
#include "ctbr/errors.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ctbr;
using testing::make_block;

TEST_CASE("body font is the majority font") {
  // 90 chars in NimbusRomNo9L at 10pt, 10 in Bold.
  const BlockDocument doc = testing::one_page(
      {make_block("a", {10, 10, 200, 100}, std::string(90, 'x'), "NimbusRomNo9L", 10),
       make_block("b", {10, 110, 200, 120}, std::string(10, 'y'), "Bold", 12)});
  const DocumentStats s = compute_stats(doc);
  CHECK(s.body_font_name == "NimbusRomNo9L");
  CHECK(s.body_font_size == 10.0);
}

TEST_CASE("single block stats are its own edges") {
  const BlockDocument doc = testing::one_page({make_block("a", {12, 34, 56, 78}, "text")});
  const DocumentStats s = compute_stats(doc);
  CHECK(s.boundary_left == 12);
  CHECK(s.boundary_top == 34);
  CHECK(s.boundary_right == 56);
  CHECK(s.boundary_bottom == 78);
  CHECK(s.max_width == 44);
  CHECK(s.max_height == 44);
}

TEST_CASE("equal font counts break ties by the smaller name") {
  const BlockDocument doc = testing::one_page(
      {make_block("a", {10, 10, 200, 100}, "abcde", "Zeta", 10),
       make_block("b", {10, 110, 200, 120}, "fghij", "Alpha", 12)});
  CHECK(compute_stats(doc).body_font_name == "Alpha");
  const BlockDocument sizes = testing::one_page(
      {make_block("a", {10, 10, 200, 100}, "abcde", "F", 11),
       make_block("b", {10, 110, 200, 120}, "fghij", "F", 9)});
  CHECK(compute_stats(sizes).body_font_size == 9.0);
}

TEST_CASE("left/right boundaries come from wide blocks only") {
  const BlockDocument doc = testing::one_page(
      {make_block("wide", {50, 10, 250, 100}, "body"),
       make_block("wide2", {310, 10, 500, 100}, "body"),
       make_block("narrow", {5, 200, 40, 210}, "3"),
       make_block("narrow2", {560, 200, 590, 210}, "4")});
  const DocumentStats s = compute_stats(doc);
  CHECK(s.boundary_left == 50);
  CHECK(s.boundary_right == 500);
}

TEST_CASE("empty document is EmptyDocumentError") {
  BlockDocument doc;
  CHECK_THROWS_AS(compute_stats(doc), EmptyDocumentError);
  doc = testing::one_page({});
  CHECK_THROWS_AS(compute_stats(doc), EmptyDocumentError);
}

TEST_CASE("encode_block identities") {
  const BlockDocument doc = testing::one_page(
      {make_block("a", {50, 20, 250, 60}, std::string(100, 'x'), "Body", 10),
       make_block("b", {60, 100, 200, 110}, "tiny", "Other", 8)});
  const DocumentStats s = compute_stats(doc);
  const FeatureVector fa = encode_block(doc.pages[0].blocks[0], s);
  CHECK(fa.code_left() == 1.0);
  CHECK(fa.code_top() == 1.0);
  CHECK(fa.code_width() == 1.0);
  CHECK(fa.code_height() == 1.0);
  CHECK(fa.code_font_type() == 1.0);
  CHECK(fa.code_font_size() == 1.0);
  // 200 x 40 pt, 100 chars, code_fs 1 -> 8000 / 100 / 100.
  CHECK(fa.code_density() == doctest::Approx(0.8).epsilon(1e-15));

  const FeatureVector fb = encode_block(doc.pages[0].blocks[1], s);
  CHECK(fb.code_font_type() == 0.0);
  CHECK(fb.code_font_size() == doctest::Approx(0.8));
  CHECK(fb.code_bottom() == doctest::Approx(110.0 / 110.0));
  CHECK(fb.code_density() == doctest::Approx(1400.0 / (4 * 0.8) / 100.0));
}

TEST_CASE("font type compares the block's dominant name only") {
  TextBlock mixed = make_block("m", {10, 10, 100, 30}, "");
  mixed.spans = {{"mostly body font words", "Body", 12}, {"x", "Other", 10}};
  const BlockDocument doc = testing::one_page(
      {make_block("a", {10, 40, 300, 200}, std::string(200, 'a'), "Body", 10), mixed});
  const DocumentStats s = compute_stats(doc);
  const FeatureVector f = encode_block(doc.pages[0].blocks[1], s);
  CHECK(f.code_font_type() == 1.0);
  CHECK(f.code_font_size() == doctest::Approx(1.2));
}

TEST_CASE("zero boundary coordinates are shifted") {
  const BlockDocument doc = testing::one_page({make_block("a", {0, 0, 100, 50}, "text")});
  const DocumentStats s = compute_stats(doc);
  CHECK(s.boundary_left == 0.0);
  const FeatureVector f = encode_block(doc.pages[0].blocks[0], s);
  CHECK(f.code_left() == 0.0);
  CHECK(f.code_top() == 0.0);
  CHECK(std::isfinite(f.code_left()));
}

TEST_CASE("whitespace-only blocks are skipped") {
  std::vector<TextBlock> blocks;
  for (int i = 0; i < 5; ++i)
    blocks.push_back(make_block("b" + std::to_string(i), {10, 10.0 + 20 * i, 100, 25.0 + 20 * i},
                                i == 2 ? " \t\n " : "words here"));
  const BlockDocument doc = testing::one_page(blocks);
  const EncodedDocument enc = encode_document(doc);
  CHECK(enc.features.size() == 4);
  REQUIRE(enc.skipped.size() == 1);
  CHECK(enc.skipped[0] == "b2");
  CHECK_THROWS_AS(encode_block(doc.pages[0].blocks[2], enc.stats), DegenerateBlockError);
  CHECK(encode_document(doc).features == enc.features);
}

TEST_CASE("non-whitespace count is in code points") {
  CHECK(count_non_whitespace("a b\tc\n") == 3);
  CHECK(count_non_whitespace("\xC3\xA9t\xC3\xA9") == 3);
}

TEST_CASE("features JSON round-trips at full precision") {
  testing::Gen g(4);
  std::map<std::string, FeatureVector> f;
  for (int i = 0; i < 50; ++i) {
    FeatureVector v;
    for (auto& x : v.values) x = g.real(-5, 5);
    f["b" + std::to_string(i)] = v;
  }
  CHECK(features_from_json(features_to_json(f)) == f);
  CHECK_THROWS_AS(features_from_json(R"({"a": [1, 2]})"), SchemaError);
}

TEST_CASE("mixed page sizes are flagged") {
  BlockDocument doc = testing::one_page({make_block("a", {10, 10, 100, 50}, "text")});
  CHECK_FALSE(compute_stats(doc).mixed_page_sizes);
  Page p2;
  p2.index = 1;
  p2.media_box = {0, 0, 612, 792};
  p2.blocks = {make_block("b", {10, 10, 100, 50}, "text", "Body", 10, 0, 1)};
  doc.pages.push_back(p2);
  CHECK(compute_stats(doc).mixed_page_sizes);
}
