#include "wsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wsim {

std::string to_string(WoundKind kind) {
    switch (kind) {
        case WoundKind::Rectangle: return "rectangle";
        case WoundKind::Rhombus: return "rhombus";
        case WoundKind::Ellipse: return "ellipse";
        case WoundKind::Convex: return "convex";
    }
    return "unknown";
}

WoundKind wound_kind_from_string(const std::string& name) {
    if (name == "rectangle") return WoundKind::Rectangle;
    if (name == "rhombus") return WoundKind::Rhombus;
    if (name == "ellipse") return WoundKind::Ellipse;
    if (name == "convex") return WoundKind::Convex;
    throw std::invalid_argument("unknown wound kind: " + name);
}

std::vector<Vec2> BoundaryCurve::closed_polygon() const {
    std::vector<Vec2> poly = points;
    poly.push_back(Vec2(0.0, 0.0));
    return poly;
}

double round1(double x) {
    // 10*x is exact in 80-bit extended precision (53-bit mantissa times 10
    // fits in 64 bits), so the half-away decision is made without error.
    const long double scaled = static_cast<long double>(x) * 10.0L;
    return static_cast<double>(std::roundl(scaled)) / 10.0;
}

Vec2 shape_point(WoundKind kind, double x_cut, double y_cut, double s) {
    switch (kind) {
        case WoundKind::Rectangle:
            if (s <= 0.5) return Vec2(x_cut, 2.0 * s * y_cut);
            return Vec2((2.0 - 2.0 * s) * x_cut, y_cut);
        case WoundKind::Rhombus:
            return Vec2((1.0 - s) * x_cut, s * y_cut);
        case WoundKind::Ellipse: {
            const double a = 0.5 * std::numbers::pi * s;
            return Vec2(x_cut * std::cos(a), y_cut * std::sin(a));
        }
        case WoundKind::Convex:
            break;
    }
    throw std::invalid_argument("shape_point: convex shapes have no closed form");
}

BoundaryCurve parametrize_shape(WoundKind kind, double x_cut, double y_cut,
                                int n_samples) {
    if (!(x_cut > 0.0) || !(y_cut > 0.0))
        throw std::invalid_argument("parametrize_shape: cuts must be positive");
    if (n_samples < 3)
        throw std::invalid_argument("parametrize_shape: need at least 3 samples");

    BoundaryCurve curve;
    curve.s.resize(n_samples);
    curve.points.resize(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        const double s = static_cast<double>(j) / (n_samples - 1);
        curve.s[j] = s;
        curve.points[j] = shape_point(kind, x_cut, y_cut, s);
    }
    // Endpoints are exact by construction: pin them to the axes.
    curve.points.front().y() = 0.0;
    curve.points.back().x() = 0.0;
    return curve;
}

static void check_weights(const std::array<double, 3>& w) {
    double sum = 0.0;
    for (double a : w) {
        if (!(a >= 0.0)) throw std::invalid_argument("convex weights must be non-negative");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("convex weights must sum to one");
}

BoundaryCurve convex_combine(const std::array<BoundaryCurve, 3>& curves,
                             const std::array<double, 3>& weights) {
    check_weights(weights);
    const std::size_t n = curves[0].size();
    for (const auto& c : curves) {
        if (c.size() != n || c.s.size() != n)
            throw std::invalid_argument("convex_combine: sample count mismatch");
        for (std::size_t j = 0; j < n; ++j)
            if (c.s[j] != curves[0].s[j])
                throw std::invalid_argument("convex_combine: parameter grid mismatch");
    }

    // A unit weight vector must return that input curve bitwise.
    for (int p = 0; p < 3; ++p)
        if (weights[p] == 1.0 && weights[(p + 1) % 3] == 0.0 && weights[(p + 2) % 3] == 0.0)
            return curves[p];

    BoundaryCurve out;
    out.s = curves[0].s;
    out.points.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        Vec2 r = Vec2::Zero();
        for (int p = 0; p < 3; ++p) r += weights[p] * curves[p].points[j];
        out.points[j] = r;
    }
    return out;
}

BoundaryCurve boundary_curve(const WoundGeometry& g, int n_samples) {
    if (g.kind != WoundKind::Convex)
        return parametrize_shape(g.kind, g.x_cut, g.y_cut, n_samples);
    std::array<BoundaryCurve, 3> basics = {
        parametrize_shape(WoundKind::Rectangle, g.x_cut, g.y_cut, n_samples),
        parametrize_shape(WoundKind::Rhombus, g.x_cut, g.y_cut, n_samples),
        parametrize_shape(WoundKind::Ellipse, g.x_cut, g.y_cut, n_samples)};
    return convex_combine(basics, g.weights);
}

Vec2 domain_extent(double x_cut, double y_cut) {
    if (!(x_cut > 0.0) || !(y_cut > 0.0))
        throw std::invalid_argument("domain_extent: cuts must be positive");
    return Vec2(round1(2.5 * x_cut), round1(2.5 * y_cut));
}

std::array<double, 4> shape_quadruple(const WoundGeometry& g) {
    Vec2 mid;
    switch (g.kind) {
        case WoundKind::Rectangle:
        case WoundKind::Rhombus:
        case WoundKind::Ellipse:
            mid = shape_point(g.kind, g.x_cut, g.y_cut, 0.5);
            break;
        case WoundKind::Convex: {
            check_weights(g.weights);
            mid = Vec2::Zero();
            const std::array<WoundKind, 3> kinds = {
                WoundKind::Rectangle, WoundKind::Rhombus, WoundKind::Ellipse};
            for (int p = 0; p < 3; ++p)
                mid += g.weights[p] * shape_point(kinds[p], g.x_cut, g.y_cut, 0.5);
            break;
        }
    }
    return {g.y_cut, mid.x(), mid.y(), g.x_cut};
}

double polygon_area(const std::vector<Vec2>& v) {
    if (v.size() < 3)
        throw std::invalid_argument("polygon_area: need at least 3 vertices");
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % v.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * std::abs(twice);
}

double rsaw(const std::vector<Vec2>& initial_polygon,
            const std::vector<Vec2>& displaced_polygon) {
    const double a0 = polygon_area(initial_polygon);
    if (a0 == 0.0) throw std::domain_error("rsaw: initial wound area is zero");
    return polygon_area(displaced_polygon) / a0;
}

static double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

RimDistance wound_distance(const Vec2& point, const BoundaryCurve& rim) {
    if (rim.size() < 2)
        throw std::invalid_argument("wound_distance: rim needs at least 2 points");

    RimDistance out;
    out.distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < rim.size(); ++i)
        out.distance = std::min(out.distance,
                                point_segment_distance(point, rim.points[i], rim.points[i + 1]));

    // Ray casting on the axis-closed polygon; points on the closure axes
    // count as inside so the quarter-wound region is closed.
    const std::vector<Vec2> poly = rim.closed_polygon();
    bool inside = false;
    const double px = point.x(), py = point.y();
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const double xi = poly[i].x(), yi = poly[i].y();
        const double xj = poly[j].x(), yj = poly[j].y();
        const bool crosses = (yi > py) != (yj > py);
        if (crosses && px < (xj - xi) * (py - yi) / (yj - yi) + xi) inside = !inside;
    }
    if (out.distance == 0.0) inside = true;
    out.inside = inside;
    return out;
}

void write_curve_csv(const BoundaryCurve& curve, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << "s,x,y\n";
    char line[128];
    for (std::size_t j = 0; j < curve.size(); ++j) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", curve.s[j],
                      curve.points[j].x(), curve.points[j].y());
        f << line;
    }
}

}  // namespace wsim
