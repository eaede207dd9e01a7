// Wound-shape parametrizations on the quarter domain: the three basic
// boundary families, convex combinations of them, the shape quadruple,
// polygon areas / RSAW, and point-to-rim distances.
//
// All lengths are in cm. Curves are parametrized over s in [0,1], starting
// on the x-axis and ending on the y-axis, and live in the first quadrant.

#pragma once

#include <Eigen/Core>
#include <array>
#include <string>
#include <vector>

namespace wsim {

using Vec2 = Eigen::Vector2d;

enum class WoundKind { Rectangle, Rhombus, Ellipse, Convex };

std::string to_string(WoundKind kind);
WoundKind wound_kind_from_string(const std::string& name);

/// Quarter-wound boundary sampled at shared parameter values s_j in [0,1].
/// The curve plus the two axis segments closes the quarter-wound region.
struct BoundaryCurve {
    std::vector<double> s;       // parameter values, ascending, s0=0, s_last=1
    std::vector<Vec2> points;    // same length as s
    bool closed_with_axes = true;

    std::size_t size() const { return points.size(); }

    /// Vertices of the axis-closed polygon (rim points + (0,0) corner).
    std::vector<Vec2> closed_polygon() const;
};

struct WoundGeometry {
    WoundKind kind = WoundKind::Rectangle;
    double x_cut = 2.0;           // cm, rim intersection with the x-axis
    double y_cut = 1.0;           // cm, rim intersection with the y-axis
    std::array<double, 3> weights{1.0, 0.0, 0.0};  // Convex only
};

/// Round to one decimal, half away from zero. Exact decimal rounding of the
/// argument (10*x is computed without error in extended precision).
double round1(double x);

/// Evaluate one basic shape family at parameter s in [0,1].
Vec2 shape_point(WoundKind kind, double x_cut, double y_cut, double s);

/// Sample a basic shape boundary at n_samples uniform parameter values.
/// Throws std::invalid_argument for non-positive cuts or n_samples < 3.
BoundaryCurve parametrize_shape(WoundKind kind, double x_cut, double y_cut,
                                int n_samples);

/// Pointwise convex combination of three curves sharing a parameter grid.
/// Throws std::invalid_argument on grid mismatch or invalid weights.
BoundaryCurve convex_combine(const std::array<BoundaryCurve, 3>& curves,
                             const std::array<double, 3>& weights);

/// Boundary curve for a geometry of any kind (Convex combines the three
/// basic shapes with the geometry's cuts and weights).
BoundaryCurve boundary_curve(const WoundGeometry& geometry, int n_samples = 256);

/// Domain half-extent (x_l, y_l) = round1(2.5 * cut) per axis.
Vec2 domain_extent(double x_cut, double y_cut);
inline Vec2 domain_extent(const WoundGeometry& g) {
    return domain_extent(g.x_cut, g.y_cut);
}

/// Shape descriptor (y_cut, x_m, y_m, x_cut) where (x_m, y_m) is the
/// boundary point at parameter midpoint s = 0.5.
std::array<double, 4> shape_quadruple(const WoundGeometry& geometry);

/// Shoelace area of a simple closed polygon; absolute value.
/// Throws std::invalid_argument for fewer than 3 vertices.
double polygon_area(const std::vector<Vec2>& vertices);

/// Relative surface area of the wound: area(displaced) / area(initial).
/// Throws std::domain_error when the initial area is zero.
double rsaw(const std::vector<Vec2>& initial_polygon,
            const std::vector<Vec2>& displaced_polygon);

struct RimDistance {
    bool inside = false;
    double distance = 0.0;  // cm, to the rim polyline (axis closure excluded)
};

/// Distance from a point to the wound rim and inside/outside classification
/// (ray casting on the axis-closed polygon).
RimDistance wound_distance(const Vec2& point, const BoundaryCurve& rim);

/// Write a curve as CSV with header `s,x,y`.
void write_curve_csv(const BoundaryCurve& curve, const std::string& path);

}  // namespace wsim
