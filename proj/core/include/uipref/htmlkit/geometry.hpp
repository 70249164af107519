#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace uipref::htmlkit {

/// Axis-aligned rectangle in CSS pixels, origin top-left.
struct Rect {
    double x = 0;
    double y = 0;
    double w = 0;
    double h = 0;

    double area() const noexcept { return w * h; }
    /// Half-open containment, so zero-extent boxes contain nothing.
    bool contains(double px, double py) const noexcept {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
    friend bool operator==(const Rect&, const Rect&) = default;
};

struct ElementBox {
    std::string element_path;
    Rect bbox;

    friend bool operator==(const ElementBox&, const ElementBox&) = default;
};

struct Viewport {
    int width = 390;
    int height = 844;

    friend bool operator==(const Viewport&, const Viewport&) = default;
};

inline constexpr Viewport kDefaultViewport{390, 844};

struct GeometryMap {
    Viewport viewport;
    std::vector<ElementBox> boxes;

    friend bool operator==(const GeometryMap&, const GeometryMap&) = default;
};

/// Intersection area over union area; 0 when the union is empty.
double iou(const Rect& a, const Rect& b);

/// Line-delimited geometry file: a `{"viewport":{"width":W,"height":H}}`
/// header followed by one `{"path","x","y","w","h"}` record per element.
std::string write_geometry(const GeometryMap& geometry);
GeometryMap parse_geometry(std::string_view text);

void validate(const GeometryMap& geometry);

}  // namespace uipref::htmlkit
