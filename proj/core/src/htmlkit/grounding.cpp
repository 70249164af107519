#include "uipref/htmlkit/grounding.hpp"

#include <algorithm>
#include <cmath>

#include "uipref/common/error.hpp"

namespace uipref::htmlkit {

namespace {

std::size_t path_depth(std::string_view path) {
    return static_cast<std::size_t>(std::count(path.begin(), path.end(), '/'));
}

}  // namespace

Region Region::make_box(double x, double y, double w, double h) {
    Region r;
    r.kind = Kind::kBox;
    r.box = {x, y, w, h};
    return r;
}

Region Region::make_point(double x, double y) {
    Region r;
    r.kind = Kind::kPoint;
    r.x = x;
    r.y = y;
    return r;
}

void Region::validate() const {
    if (kind == Kind::kBox) {
        if (!(box.w > 0) || !(box.h > 0) || !std::isfinite(box.x) || !std::isfinite(box.y)) {
            throw ValidationError("region", "box regions need positive width and height");
        }
    } else if (!std::isfinite(x) || !std::isfinite(y)) {
        throw ValidationError("region", "point coordinates must be finite");
    }
}

Region Region::to_css(double scale_factor) const {
    if (!(scale_factor > 0)) throw ValidationError("scale_factor", "must be positive");
    Region r = *this;
    r.box = {box.x / scale_factor, box.y / scale_factor, box.w / scale_factor, box.h / scale_factor};
    r.x = x / scale_factor;
    r.y = y / scale_factor;
    return r;
}

const ElementBox& root_element(const GeometryMap& geometry) {
    if (geometry.boxes.empty()) throw Error(ErrorKind::kInvalidInput, "geometry has no elements");
    const ElementBox* best = &geometry.boxes.front();
    for (const auto& b : geometry.boxes) {
        const auto db = path_depth(b.element_path);
        const auto dbest = path_depth(best->element_path);
        if (db < dbest || (db == dbest && compare_paths(b.element_path, best->element_path) < 0)) best = &b;
    }
    return *best;
}

ElementBox match_annotation(const Region& region, const GeometryMap& geometry) {
    if (geometry.boxes.empty()) throw Error(ErrorKind::kInvalidInput, "geometry has no elements");
    region.validate();

    double px = region.x;
    double py = region.y;
    if (region.kind == Region::Kind::kBox) {
        const ElementBox* best = nullptr;
        double best_iou = 0.0;
        for (const auto& b : geometry.boxes) {
            const double v = iou(region.box, b.bbox);
            if (v <= 0.0) continue;
            if (!best || v > best_iou ||
                (v == best_iou && (b.bbox.area() < best->bbox.area() ||
                                   (b.bbox.area() == best->bbox.area() &&
                                    compare_paths(b.element_path, best->element_path) < 0)))) {
                best = &b;
                best_iou = v;
            }
        }
        if (best) return *best;
        px = region.box.x + region.box.w / 2.0;
        py = region.box.y + region.box.h / 2.0;
    }

    const ElementBox* best = nullptr;
    for (const auto& b : geometry.boxes) {
        if (!b.bbox.contains(px, py)) continue;
        if (!best) {
            best = &b;
            continue;
        }
        const double a = b.bbox.area();
        const double ba = best->bbox.area();
        if (a < ba) {
            best = &b;
        } else if (a == ba) {
            const auto d = path_depth(b.element_path);
            const auto bd = path_depth(best->element_path);
            if (d > bd || (d == bd && compare_paths(b.element_path, best->element_path) < 0)) best = &b;
        }
    }
    return best ? *best : root_element(geometry);
}

std::string snippet(const ElementBox& element, const Document& doc) {
    const auto el = doc.resolve(element.element_path);
    if (!el) {
        throw Error(ErrorKind::kStaleGeometry,
                    "element path '" + element.element_path + "' does not resolve in the document");
    }
    return std::string(doc.outer_html(*el));
}

std::string snippet(const ElementBox& element, std::string_view html) {
    return snippet(element, Document::parse(std::string(html)));
}

}  // namespace uipref::htmlkit
