#pragma once

#include <string>
#include <vector>

#include "ctbr/document.hpp"
#include "ctbr/segmenter.hpp"

namespace ctbr {

// Standalone SVG of one page sized to its media box: block rectangles
// colored by label, boundary lines, and detected regions as thick outlines
// tagged with a kind glyph ("F" or "T"). Throws PageNotFoundError.
std::string render_overlay(const BlockDocument& doc, const LabelMap& labels,
                           const std::vector<DetectedObject>& objects,
                           int page_index,
                           const std::vector<Boundary>& boundaries = {});

}  // namespace ctbr
