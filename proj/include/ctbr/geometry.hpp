#pragma once

#include <algorithm>
#include <cmath>

namespace ctbr {

// Axis-aligned rectangle in page points. Top-left origin, y grows downward.
struct BBox {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (left + right); }
  double center_y() const { return 0.5 * (top + bottom); }

  bool valid() const {
    return std::isfinite(left) && std::isfinite(top) && std::isfinite(right) &&
           std::isfinite(bottom) && left <= right && top <= bottom;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline BBox bbox_union(const BBox& a, const BBox& b) {
  return {std::min(a.left, b.left), std::min(a.top, b.top),
          std::max(a.right, b.right), std::max(a.bottom, b.bottom)};
}

inline double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.right, b.right) - std::max(a.left, b.left);
  const double h = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

// Closed-rectangle intersection; touching edges count.
inline bool intersects(const BBox& a, const BBox& b) {
  return a.left <= b.right && b.left <= a.right && a.top <= b.bottom &&
         b.top <= a.bottom;
}

inline bool contains(const BBox& outer, const BBox& inner) {
  return outer.left <= inner.left && outer.top <= inner.top &&
         inner.right <= outer.right && inner.bottom <= outer.bottom;
}

inline double bbox_iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

// True iff the media box's vertical midline lies strictly inside the block.
inline bool crosses_central_axis(const BBox& block, const BBox& media) {
  const double mid = media.center_x();
  return block.left < mid && mid < block.right;
}

}  // namespace ctbr
