#include "ctbr/segmenter.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <tuple>

#include "ctbr/errors.hpp"
#include "ctbr/json_util.hpp"

namespace ctbr {

std::string_view boundary_kind_name(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::kFigureTitle:
      return "figure_title";
    case BoundaryKind::kTableTitle:
      return "table_title";
    case BoundaryKind::kSectionTitle:
      return "section_title";
  }
  return "section_title";
}

std::string_view lane_name(Lane lane) {
  switch (lane) {
    case Lane::kFull:
      return "full";
    case Lane::kLeft:
      return "left";
    case Lane::kRight:
      return "right";
  }
  return "full";
}

std::string_view object_kind_name(ObjectKind kind) {
  return kind == ObjectKind::kFigure ? "figure" : "table";
}

std::optional<ObjectKind> parse_object_kind(std::string_view name) {
  if (name == "figure") return ObjectKind::kFigure;
  if (name == "table") return ObjectKind::kTable;
  return std::nullopt;
}

std::vector<Boundary> set_boundaries(const BlockDocument& doc,
                                     const TitleMap& titles) {
  std::vector<Boundary> out;
  int sequence = 0;
  for (const auto& page : doc.pages) {
    for (const auto& block : page.blocks) {
      const auto it = titles.find(block.id);
      if (it == titles.end()) continue;
      Boundary b;
      b.id = "bnd-" + block.id;
      b.source_block_id = block.id;
      switch (it->second) {
        case SingleModalKind::kFigureTitle:
          b.kind = BoundaryKind::kFigureTitle;
          break;
        case SingleModalKind::kTableTitle:
          b.kind = BoundaryKind::kTableTitle;
          break;
        default:
          b.kind = BoundaryKind::kSectionTitle;
      }
      b.page_index = page.index;
      b.y_top = block.bbox.top;
      b.y_bottom = block.bbox.bottom;
      b.title_bbox = block.bbox;
      b.crosses_axis = doc.layout_columns == 1 ||
                       crosses_central_axis(block.bbox, page.media_box);
      b.sequence = sequence++;
      out.push_back(std::move(b));
    }
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A rectangle of the page tiling before membership is known. Vertical
// extent is half-open [y0, y1); walls sit at title center lines.
struct Segment {
  Lane lane;
  double y0;
  double y1;
  std::string upper;
  std::string lower;
  std::vector<const TextBlock*> members;
};

double wall_y(const Boundary& b) { return 0.5 * (b.y_top + b.y_bottom); }

bool in_lane(Lane lane, double cx, double mid) {
  switch (lane) {
    case Lane::kFull:
      return true;
    case Lane::kLeft:
      return cx < mid;
    case Lane::kRight:
      return cx >= mid;
  }
  return true;
}

int lane_rank(Lane lane) { return static_cast<int>(lane); }

std::vector<Segment> tile_page(const Page& page,
                               std::vector<const Boundary*> bounds) {
  const double mid = page.media_box.center_x();
  std::sort(bounds.begin(), bounds.end(),
            [](const Boundary* a, const Boundary* b) {
              return std::make_tuple(wall_y(*a), a->sequence) <
                     std::make_tuple(wall_y(*b), b->sequence);
            });
  std::vector<const Boundary*> walls;
  for (const Boundary* b : bounds)
    if (b->crosses_axis) walls.push_back(b);

  std::vector<Segment> segs;
  for (std::size_t w = 0; w <= walls.size(); ++w) {
    const Boundary* upper = w == 0 ? nullptr : walls[w - 1];
    const Boundary* lower = w == walls.size() ? nullptr : walls[w];
    const double y_a = upper ? wall_y(*upper) : -kInf;
    const double y_b = lower ? wall_y(*lower) : kInf;
    const std::string upper_id = upper ? upper->id : std::string();
    const std::string lower_id = lower ? lower->id : std::string();

    std::vector<const Boundary*> left;
    std::vector<const Boundary*> right;
    for (const Boundary* b : bounds) {
      if (b->crosses_axis) continue;
      const double y = wall_y(*b);
      if (y < y_a || y >= y_b) continue;
      (b->title_bbox.center_x() < mid ? left : right).push_back(b);
    }
    if (left.empty() && right.empty()) {
      segs.push_back({Lane::kFull, y_a, y_b, upper_id, lower_id, {}});
      continue;
    }

    const Boundary* first = nullptr;
    const Boundary* last = nullptr;
    for (const auto* lane : {&left, &right}) {
      if (lane->empty()) continue;
      if (!first || wall_y(*lane->front()) < wall_y(*first))
        first = lane->front();
      if (!last || wall_y(*lane->back()) > wall_y(*last)) last = lane->back();
    }
    // A full-width wall gets a full-width strip reaching to the nearest
    // column-confined wall, so full-width regions are never split by lanes.
    double zone_top = y_a;
    double zone_bot = y_b;
    if (upper) {
      zone_top = wall_y(*first);
      segs.push_back({Lane::kFull, y_a, zone_top, upper_id, first->id, {}});
    }
    if (lower) {
      zone_bot = wall_y(*last);
      segs.push_back({Lane::kFull, zone_bot, y_b, last->id, lower_id, {}});
    }
    for (auto [lane, list] : {std::pair{Lane::kLeft, &left},
                              std::pair{Lane::kRight, &right}}) {
      double y = zone_top;
      std::string up = upper ? std::string() : upper_id;
      for (const Boundary* b : *list) {
        segs.push_back({lane, y, wall_y(*b), up, b->id, {}});
        y = wall_y(*b);
        up = b->id;
      }
      segs.push_back({lane, y, zone_bot, up, lower ? std::string() : lower_id, {}});
    }
  }
  return segs;
}

}  // namespace

std::vector<Compartment> rough_compartments(
    const BlockDocument& doc, const std::vector<Boundary>& boundaries) {
  std::set<std::string> title_blocks;
  for (const auto& b : boundaries) title_blocks.insert(b.source_block_id);

  std::vector<Compartment> out;
  int sequence = 0;
  for (const auto& page : doc.pages) {
    std::vector<const Boundary*> bounds;
    for (const auto& b : boundaries)
      if (b.page_index == page.index) bounds.push_back(&b);
    std::vector<Segment> segs = tile_page(page, std::move(bounds));

    const double mid = page.media_box.center_x();
    for (const auto& block : page.blocks) {
      if (title_blocks.count(block.id) != 0) continue;
      const double cx = block.bbox.center_x();
      const double cy = block.bbox.center_y();
      Segment* home = nullptr;
      for (auto& seg : segs) {
        if (cy >= seg.y0 && cy < seg.y1 && in_lane(seg.lane, cx, mid)) {
          home = &seg;
          break;
        }
      }
      if (home == nullptr)
        throw UnassignedBlockError("block '" + block.id +
                                   "' falls in no compartment");
      home->members.push_back(&block);
    }

    std::vector<Compartment> page_comps;
    for (const auto& seg : segs) {
      if (seg.members.empty()) continue;
      Compartment c;
      c.page_index = page.index;
      c.column = seg.lane;
      c.upper_boundary_id = seg.upper;
      c.lower_boundary_id = seg.lower;
      const BBox& media = page.media_box;
      c.bbox.left = seg.lane == Lane::kRight ? mid : media.left;
      c.bbox.right = seg.lane == Lane::kLeft ? mid : media.right;
      c.bbox.top = std::max(seg.y0, media.top);
      c.bbox.bottom = std::min(seg.y1, media.bottom);
      if (c.bbox.bottom < c.bbox.top) c.bbox.bottom = c.bbox.top;
      for (const TextBlock* m : seg.members) {
        c.member_block_ids.push_back(m->id);
        c.bbox = bbox_union(c.bbox, m->bbox);
      }
      page_comps.push_back(std::move(c));
    }
    std::sort(page_comps.begin(), page_comps.end(),
              [](const Compartment& a, const Compartment& b) {
                return std::make_tuple(a.bbox.top, lane_rank(a.column)) <
                       std::make_tuple(b.bbox.top, lane_rank(b.column));
              });
    for (auto& c : page_comps) {
      c.sequence = sequence;
      c.id = "cmp-" + std::to_string(page.index) + "-" + std::to_string(sequence);
      ++sequence;
      out.push_back(std::move(c));
    }
  }
  return out;
}

double supplementary_fraction(const Compartment& comp, const BlockDocument& doc,
                              const LabelMap& labels) {
  const double area = comp.bbox.area();
  if (!(area > 0.0)) return 0.0;
  double supp = 0.0;
  for (const auto& id : comp.member_block_ids) {
    const auto it = labels.find(id);
    if (it == labels.end() || it->second != BlockLabel::kSupplementary)
      continue;
    if (const TextBlock* b = doc.find_block(id)) supp += b->bbox.area();
  }
  return std::clamp(supp / area, 0.0, 1.0);
}

Assignment assign_regions(const BlockDocument& doc,
                          const std::vector<Boundary>& boundaries,
                          const std::vector<Compartment>& compartments,
                          const LabelMap& labels) {
  std::vector<const Boundary*> order;
  for (const auto& b : boundaries)
    if (b.is_object_title()) order.push_back(&b);
  std::sort(order.begin(), order.end(),
            [](const Boundary* a, const Boundary* b) {
              return a->sequence < b->sequence;
            });

  auto find = [&](auto pred) -> const Compartment* {
    for (const auto& c : compartments)
      if (pred(c)) return &c;
    return nullptr;
  };

  Assignment out;
  std::set<std::string> taken;
  for (const Boundary* b : order) {
    const Compartment* above = find([&](const Compartment& c) {
      return c.page_index == b->page_index && c.lower_boundary_id == b->id;
    });
    const Compartment* below = find([&](const Compartment& c) {
      return c.page_index == b->page_index && c.upper_boundary_id == b->id;
    });
    const Compartment* first = nullptr;
    const Compartment* second = nullptr;
    if (!above && !below) {
      out.unresolved.push_back(b->id);
      continue;
    } else if (!above) {
      first = below;
    } else if (!below) {
      first = above;
    } else {
      const double fa = supplementary_fraction(*above, doc, labels);
      const double fb = supplementary_fraction(*below, doc, labels);
      first = fa >= fb ? above : below;
      second = fa >= fb ? below : above;
    }
    const Compartment* chosen = nullptr;
    if (!taken.count(first->id)) {
      chosen = first;
    } else if (second && !taken.count(second->id)) {
      chosen = second;
    } else if (!second) {
      // Forced side already taken; rule 4 leaves no alternative.
      chosen = nullptr;
    }
    if (!chosen) {
      out.unresolved.push_back(b->id);
      continue;
    }
    taken.insert(chosen->id);
    out.claimed.emplace(b->id, chosen->id);
  }
  return out;
}

BBox refine_region(const Compartment& comp, const BlockDocument& doc,
                   const LabelMap& labels) {
  std::optional<BBox> region;
  for (const auto& id : comp.member_block_ids) {
    const auto it = labels.find(id);
    if (it == labels.end() || it->second != BlockLabel::kSupplementary)
      continue;
    const TextBlock* b = doc.find_block(id);
    if (!b) continue;
    region = region ? bbox_union(*region, b->bbox) : b->bbox;
  }
  if (!region)
    throw NoSupplementaryError("compartment '" + comp.id +
                               "' has no supplementary blocks");
  return *region;
}

DetectedObject finalize_object(const Boundary& boundary, const BBox& refined,
                               const BBox& title_bbox, const BBox& media_box,
                               const std::string& compartment_id,
                               double confidence) {
  DetectedObject obj;
  obj.kind = boundary.kind == BoundaryKind::kTableTitle ? ObjectKind::kTable
                                                        : ObjectKind::kFigure;
  obj.title_block_id = boundary.source_block_id;
  obj.page_index = boundary.page_index;
  obj.compartment_id = compartment_id;
  obj.confidence = std::clamp(confidence, 0.0, 1.0);
  obj.region = refined;
  if (title_bbox.width() > refined.width()) {
    const double cx = refined.center_x();
    const double half = 0.5 * title_bbox.width();
    obj.region.left = std::max(media_box.left, cx - half);
    obj.region.right = std::min(media_box.right, cx + half);
  }
  return obj;
}

DetectionResult detect_objects(const BlockDocument& doc, const TitleMap& titles,
                               const LabelMap& labels) {
  DetectionResult result;
  result.doc_id = doc.doc_id;
  result.boundaries = set_boundaries(doc, titles);
  result.compartments = rough_compartments(doc, result.boundaries);
  Assignment assignment =
      assign_regions(doc, result.boundaries, result.compartments, labels);
  result.unresolved = assignment.unresolved;

  for (const auto& b : result.boundaries) {
    const auto it = assignment.claimed.find(b.id);
    if (it == assignment.claimed.end()) continue;
    const Compartment* comp = nullptr;
    for (const auto& c : result.compartments)
      if (c.id == it->second) comp = &c;
    const Page* page = doc.find_page(b.page_index);
    try {
      const BBox refined = refine_region(*comp, doc, labels);
      result.objects.push_back(finalize_object(
          b, refined, b.title_bbox, page->media_box, comp->id,
          supplementary_fraction(*comp, doc, labels)));
      result.claimed.emplace(b.id, comp->id);
    } catch (const NoSupplementaryError&) {
      result.unresolved.push_back(b.id);
    }
  }
  std::sort(result.objects.begin(), result.objects.end(),
            [](const DetectedObject& a, const DetectedObject& b) {
              return std::tie(a.page_index, a.region.top, a.region.left,
                              a.title_block_id) <
                     std::tie(b.page_index, b.region.top, b.region.left,
                              b.title_block_id);
            });
  std::sort(result.unresolved.begin(), result.unresolved.end());
  return result;
}

std::string detections_to_json(const DetectionResult& result) {
  nlohmann::json objects = nlohmann::json::array();
  for (const auto& o : result.objects) {
    objects.push_back({{"kind", object_kind_name(o.kind)},
                       {"page", o.page_index},
                       {"region",
                        {o.region.left, o.region.top, o.region.right,
                         o.region.bottom}},
                       {"title_block_id", o.title_block_id},
                       {"compartment_id", o.compartment_id},
                       {"confidence", o.confidence}});
  }
  return json_util::dump({{"doc_id", result.doc_id},
                          {"objects", std::move(objects)},
                          {"unresolved", result.unresolved}});
}

DetectionFile detections_from_json(std::string_view bytes) {
  const auto root = json_util::parse(bytes);
  json_util::require_object(root, "");
  DetectionFile out;
  out.doc_id = json_util::get_string(root, "doc_id", "");
  const auto& objects = json_util::get(root, "objects", "");
  if (!objects.is_array()) throw SchemaError("/objects", "expected array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = "/objects/" + std::to_string(i);
    const auto& o = objects[i];
    json_util::require_object(o, path);
    DetectedObject obj;
    const std::string kind = json_util::get_string(o, "kind", path);
    const auto k = parse_object_kind(kind);
    if (!k) throw SchemaError(path + "/kind", "unknown kind '" + kind + "'");
    obj.kind = *k;
    obj.page_index = static_cast<int>(json_util::get_integer(o, "page", path));
    const auto& r = json_util::get(o, "region", path);
    if (!r.is_array() || r.size() != 4)
      throw SchemaError(path + "/region", "expected [l,t,r,b]");
    obj.region = {json_util::as_number(r[0], path + "/region/0"),
                  json_util::as_number(r[1], path + "/region/1"),
                  json_util::as_number(r[2], path + "/region/2"),
                  json_util::as_number(r[3], path + "/region/3")};
    obj.title_block_id = json_util::get_string(o, "title_block_id", path);
    if (o.contains("compartment_id") && o["compartment_id"].is_string())
      obj.compartment_id = o["compartment_id"].get<std::string>();
    obj.confidence = json_util::get_number(o, "confidence", path);
    out.objects.push_back(std::move(obj));
  }
  if (root.contains("unresolved") && root["unresolved"].is_array())
    for (const auto& u : root["unresolved"])
      if (u.is_string()) out.unresolved.push_back(u.get<std::string>());
  return out;
}

}  // namespace ctbr
