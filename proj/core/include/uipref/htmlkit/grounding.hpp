#pragma once

#include <string>
#include <string_view>

#include "uipref/htmlkit/dom.hpp"
#include "uipref/htmlkit/geometry.hpp"

namespace uipref::htmlkit {

/// A sketch annotation: a dragged box or a clicked point.
struct Region {
    enum class Kind { kBox, kPoint };

    Kind kind = Kind::kBox;
    Rect box;       // kBox only
    double x = 0;   // kPoint only
    double y = 0;

    static Region make_box(double x, double y, double w, double h);
    static Region make_point(double x, double y);

    /// Throws ValidationError when a box has non-positive extent.
    void validate() const;

    /// Converts screenshot pixels to CSS pixels (divides by the device scale factor).
    Region to_css(double scale_factor) const;

    friend bool operator==(const Region&, const Region&) = default;
};

/// Grounds a region to one element.
///
/// Boxes pick the maximal-IoU element (ties: smaller area, then earlier
/// document order). Points, and boxes that overlap nothing, pick the
/// smallest-area element containing the probe point (the box center for
/// boxes; ties: deeper element, then earlier document order). When nothing
/// contains the probe point, the root element is returned.
ElementBox match_annotation(const Region& region, const GeometryMap& geometry);

/// The shallowest element of the geometry (earliest in document order on ties).
const ElementBox& root_element(const GeometryMap& geometry);

/// Outer markup of the element addressed by `element.element_path`.
/// Throws a stale-geometry error when the path does not resolve.
std::string snippet(const ElementBox& element, std::string_view html);
std::string snippet(const ElementBox& element, const Document& doc);

}  // namespace uipref::htmlkit
