#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctbr/document.hpp"
#include "ctbr/geometry.hpp"
#include "ctbr/rules.hpp"

namespace ctbr {

enum class BoundaryKind { kFigureTitle, kTableTitle, kSectionTitle };
enum class Lane { kFull, kLeft, kRight };
enum class ObjectKind { kFigure, kTable };

std::string_view boundary_kind_name(BoundaryKind kind);
std::string_view lane_name(Lane lane);
std::string_view object_kind_name(ObjectKind kind);
std::optional<ObjectKind> parse_object_kind(std::string_view name);

// A wall derived from one single-modal title block.
struct Boundary {
  std::string id;
  std::string source_block_id;
  BoundaryKind kind;
  int page_index = 0;
  double y_top = 0.0;
  double y_bottom = 0.0;
  BBox title_bbox;
  bool crosses_axis = true;
  int sequence = 0;

  bool is_object_title() const { return kind != BoundaryKind::kSectionTitle; }
};

// Rough compartment: the region between two walls within one lane.
struct Compartment {
  std::string id;
  int page_index = 0;
  BBox bbox;
  std::vector<std::string> member_block_ids;
  int sequence = 0;
  Lane column = Lane::kFull;
  // Walls directly above and below; empty at page edges and lane starts.
  std::string upper_boundary_id;
  std::string lower_boundary_id;
};

struct DetectedObject {
  ObjectKind kind;
  std::string title_block_id;
  BBox region;
  int page_index = 0;
  std::string compartment_id;
  double confidence = 0.0;
};

// One boundary per title, ordered by (page, reading order). In one-column
// documents every boundary counts as crossing the axis.
std::vector<Boundary> set_boundaries(const BlockDocument& doc,
                                     const TitleMap& titles);

// Compartments containing no blocks are dropped. Every non-title block
// lands in exactly one compartment (bbox center containment).
std::vector<Compartment> rough_compartments(
    const BlockDocument& doc, const std::vector<Boundary>& boundaries);

// Supplementary member area over compartment area, clamped to [0, 1].
// Unlabeled members count as non-supplementary.
double supplementary_fraction(const Compartment& comp, const BlockDocument& doc,
                              const LabelMap& labels);

struct Assignment {
  std::map<std::string, std::string> claimed;  // boundary id -> compartment id
  std::vector<std::string> unresolved;         // boundary ids
};

// Figure/table boundaries claim an adjacent compartment in sequence order:
// nothing above -> below, nothing below -> above, otherwise the side with
// the larger supplementary fraction (ties go above). A claimed compartment
// cannot be claimed again; the other side is tried instead.
Assignment assign_regions(const BlockDocument& doc,
                          const std::vector<Boundary>& boundaries,
                          const std::vector<Compartment>& compartments,
                          const LabelMap& labels);

// Tight min/max box over the Supplementary members. Throws
// NoSupplementaryError when there are none.
BBox refine_region(const Compartment& comp, const BlockDocument& doc,
                   const LabelMap& labels);

// Widens the region about its center to the title's width when the title is
// wider, clipped to the media box.
DetectedObject finalize_object(const Boundary& boundary, const BBox& refined,
                               const BBox& title_bbox, const BBox& media_box,
                               const std::string& compartment_id,
                               double confidence);

struct DetectionResult {
  std::string doc_id;
  std::vector<DetectedObject> objects;  // sorted by (page, region top)
  std::vector<std::string> unresolved;
  std::vector<Boundary> boundaries;
  std::vector<Compartment> compartments;
  std::map<std::string, std::string> claimed;
};

// `labels` should already carry Supplementary for every title block.
DetectionResult detect_objects(const BlockDocument& doc, const TitleMap& titles,
                               const LabelMap& labels);

std::string detections_to_json(const DetectionResult& result);

struct DetectionFile {
  std::string doc_id;
  std::vector<DetectedObject> objects;
  std::vector<std::string> unresolved;
};
DetectionFile detections_from_json(std::string_view bytes);

}  // namespace ctbr
