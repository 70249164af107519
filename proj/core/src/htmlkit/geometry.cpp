#include "uipref/htmlkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uipref/common/error.hpp"
#include "uipref/common/jsonl.hpp"

namespace uipref::htmlkit {

double iou(const Rect& a, const Rect& b) {
    const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return std::clamp(inter / uni, 0.0, 1.0);
}

std::string write_geometry(const GeometryMap& geometry) {
    std::ostringstream out;
    out << to_line(Json{{"viewport", {{"width", geometry.viewport.width}, {"height", geometry.viewport.height}}}})
        << '\n';
    for (const auto& b : geometry.boxes) {
        out << to_line(Json{{"path", b.element_path}, {"x", b.bbox.x}, {"y", b.bbox.y}, {"w", b.bbox.w},
                            {"h", b.bbox.h}})
            << '\n';
    }
    return out.str();
}

GeometryMap parse_geometry(std::string_view text) {
    auto records = parse_jsonl(std::string(text));
    if (records.empty() || !records.front().contains("viewport")) {
        throw Error(ErrorKind::kValidation, "geometry file lacks a viewport header");
    }
    GeometryMap g;
    const auto& vp = records.front().at("viewport");
    g.viewport = {vp.at("width").get<int>(), vp.at("height").get<int>()};
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        g.boxes.push_back({r.at("path").get<std::string>(),
                           {r.at("x").get<double>(), r.at("y").get<double>(), r.at("w").get<double>(),
                            r.at("h").get<double>()}});
    }
    validate(g);
    return g;
}

void validate(const GeometryMap& geometry) {
    if (geometry.viewport.width <= 0 || geometry.viewport.height <= 0) {
        throw ValidationError("viewport", "dimensions must be positive");
    }
    for (const auto& b : geometry.boxes) {
        if (!(b.bbox.w >= 0) || !(b.bbox.h >= 0) || !std::isfinite(b.bbox.x) || !std::isfinite(b.bbox.y)) {
            throw ValidationError("boxes", "invalid box for " + b.element_path);
        }
    }
}

}  // namespace uipref::htmlkit
