#include "ctbr/render.hpp"

#include <cstdio>

#include "ctbr/errors.hpp"

namespace ctbr {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string rect_attrs(const BBox& b, const BBox& media) {
  return "x=\"" + num(b.left - media.left) + "\" y=\"" + num(b.top - media.top) +
         "\" width=\"" + num(b.width()) + "\" height=\"" + num(b.height()) + "\"";
}

const char* label_color(const BlockLabel* label) {
  if (label == nullptr) return "#9e9e9e";
  switch (*label) {
    case BlockLabel::kBodyText: return "#1f77b4";
    case BlockLabel::kSupplementary: return "#2ca02c";
    case BlockLabel::kAccessory: return "#ff7f0e";
  }
  return "#9e9e9e";
}

}  // namespace

std::string render_overlay(const BlockDocument& doc, const LabelMap& labels,
                           const std::vector<DetectedObject>& objects,
                           int page_index,
                           const std::vector<Boundary>& boundaries) {
  const Page* page = doc.find_page(page_index);
  if (page == nullptr)
    throw PageNotFoundError("page " + std::to_string(page_index) + " not found");
  const BBox& media = page->media_box;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(media.width()) +
         "\" height=\"" + num(media.height()) + "\" viewBox=\"0 0 " +
         num(media.width()) + " " + num(media.height()) + "\">\n";
  svg += "<rect class=\"frame\" x=\"0\" y=\"0\" width=\"" + num(media.width()) +
         "\" height=\"" + num(media.height()) +
         "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";

  for (const auto& block : page->blocks) {
    const auto it = labels.find(block.id);
    const BlockLabel* label = it == labels.end() ? nullptr : &it->second;
    const char* color = label_color(label);
    const std::string cls =
        label == nullptr ? "unlabeled" : std::string(label_name(*label));
    svg += "<rect class=\"block " + cls + "\" data-id=\"" + escape(block.id) +
           "\" " + rect_attrs(block.bbox, media) + " fill=\"" + color +
           "\" fill-opacity=\"0.3\" stroke=\"" + color +
           "\" stroke-width=\"0.5\"/>\n";
  }

  for (const auto& b : boundaries) {
    if (b.page_index != page_index) continue;
    const double y = (b.y_top + b.y_bottom) / 2.0 - media.top;
    const double x1 = b.crosses_axis ? 0.0 : b.title_bbox.left - media.left;
    const double x2 = b.crosses_axis ? media.width() : b.title_bbox.right - media.left;
    svg += "<line class=\"boundary " + std::string(boundary_kind_name(b.kind)) +
           "\" x1=\"" + num(x1) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x2) +
           "\" y2=\"" + num(y) + "\" stroke=\"#d62728\" stroke-width=\"0.8\" "
           "stroke-dasharray=\"4 2\"/>\n";
  }

  for (const auto& o : objects) {
    if (o.page_index != page_index) continue;
    const std::string kind(object_kind_name(o.kind));
    svg += "<rect class=\"object " + kind + "\" " + rect_attrs(o.region, media) +
           " fill=\"none\" stroke=\"#9467bd\" stroke-width=\"3\"/>\n";
    svg += "<text class=\"glyph\" x=\"" + num(o.region.left - media.left + 2.0) +
           "\" y=\"" + num(o.region.top - media.top + 12.0) +
           "\" font-size=\"12\" fill=\"#9467bd\">" +
           (o.kind == ObjectKind::kFigure ? "F" : "T") + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ctbr
