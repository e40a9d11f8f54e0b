#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ctbr/document.hpp"

namespace ctbr {

// Document-wide references the per-block codes are normalized against.
struct DocumentStats {
  std::string body_font_name;
  double body_font_size = 0.0;
  double boundary_left = 0.0;
  double boundary_right = 0.0;
  double boundary_top = 0.0;
  double boundary_bottom = 0.0;
  double max_width = 0.0;
  double max_height = 0.0;
  // Pages in the document do not all share one media box size.
  bool mixed_page_sizes = false;

  friend bool operator==(const DocumentStats&, const DocumentStats&) = default;
};

inline constexpr std::size_t kNumFeatures = 9;

// Blocks at least this fraction of the widest block define the left/right
// boundary lines (justified body paragraphs in practice).
inline constexpr double kBoundaryWidthFraction = 0.5;
// Keeps the density code near unit magnitude.
inline constexpr double kDensityNormalizer = 100.0;
// Substituted for a boundary coordinate that is exactly zero.
inline constexpr double kZeroBoundaryShift = 1.0;

struct FeatureVector {
  enum Index : std::size_t {
    kLeft,
    kRight,
    kTop,
    kBottom,
    kWidth,
    kHeight,
    kFontType,
    kFontSize,
    kDensity,
  };

  std::array<double, kNumFeatures> values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  double code_left() const { return values[kLeft]; }
  double code_right() const { return values[kRight]; }
  double code_top() const { return values[kTop]; }
  double code_bottom() const { return values[kBottom]; }
  double code_width() const { return values[kWidth]; }
  double code_height() const { return values[kHeight]; }
  double code_font_type() const { return values[kFontType]; }
  double code_font_size() const { return values[kFontSize]; }
  double code_density() const { return values[kDensity]; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Throws EmptyDocumentError when the document has no blocks.
DocumentStats compute_stats(const BlockDocument& doc);

// Throws DegenerateBlockError for whitespace-only blocks.
FeatureVector encode_block(const TextBlock& block, const DocumentStats& stats);

struct EncodedDocument {
  DocumentStats stats;
  std::map<std::string, FeatureVector> features;
  std::vector<std::string> skipped;  // degenerate block ids
};

EncodedDocument encode_document(const BlockDocument& doc);

// {block_id: [9 numbers]}, full precision.
std::string features_to_json(const std::map<std::string, FeatureVector>& f);
std::map<std::string, FeatureVector> features_from_json(std::string_view bytes);
std::string stats_to_json(const DocumentStats& stats);

}  // namespace ctbr
