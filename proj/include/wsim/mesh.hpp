// Triangulation of the quarter domain [0,x_l] x [0,y_l] with the wound rim
// resolved as element edges: constrained Delaunay generation, Laplacian
// smoothing, quality measurement, and point location / P1 interpolation.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wsim/geometry.hpp"

namespace wsim {

enum NodeTag : std::uint8_t {
    TagLeft = 1,    // x = 0, vertical symmetry boundary
    TagBottom = 2,  // y = 0, horizontal symmetry boundary
    TagRight = 4,   // x = x_l, outer boundary
    TagTop = 8,     // y = y_l, outer boundary
};

struct Mesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;  // counter-clockwise
    std::vector<std::uint8_t> tags;             // NodeTag bitmask per node
    std::vector<int> rim;  // ordered rim node indices, x-axis end first
    double extent_x = 0.0;
    double extent_y = 0.0;
    double quality_at_build = 1.0;  // min/max |J| right after generation

    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }

    bool is_outer(int i) const { return tags[i] & (TagRight | TagTop); }

    /// Current rim polyline coordinates, ordered.
    std::vector<Vec2> rim_polyline() const;
};

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c);
double triangle_area(const Mesh& mesh, int t);
double triangle_min_angle(const Vec2& a, const Vec2& b, const Vec2& c);

/// min over elements of |J| divided by max over elements; |J| is twice the
/// element area.
double mesh_quality(const Mesh& mesh);

/// Resample a polyline at (approximately) equal arclength spacing h,
/// keeping the end points.
std::vector<Vec2> resample_polyline(const std::vector<Vec2>& polyline, double h);

/// Sample the analytic wound boundary at equal-arclength parameter values,
/// so every sample lies on the analytic rim.
std::vector<Vec2> sample_rim_on_curve(const WoundGeometry& geometry, double h,
                                      int dense_samples = 2048);

/// Triangulate [0,x_l] x [0,y_l] with the given rim polyline constrained to
/// element edges. The polyline must run from the x-axis to the y-axis and be
/// simple. Throws std::runtime_error on meshing failure.
Mesh generate_mesh_from_rim(const std::vector<Vec2>& rim_polyline, double x_l,
                            double y_l, double h);

/// Mesh for a wound geometry; rim sampled on the analytic boundary.
/// Requires 0 < h < min(x_cut, y_cut).
Mesh generate_mesh(const WoundGeometry& geometry, double h);

/// Point location with a uniform bin grid. Nodes and connectivity are
/// referenced, not copied; they may describe a deformed or undeformed
/// configuration of the same mesh.
class MeshLocator {
  public:
    MeshLocator(const std::vector<Vec2>& nodes,
                const std::vector<std::array<int, 3>>& triangles);

    struct Location {
        int tri = -1;
        std::array<double, 3> bary{0, 0, 0};
        bool inside = false;  // false means nearest-element fallback was used
    };

    /// Containing triangle and barycentric coordinates; falls back to the
    /// nearest element (clamped coordinates) for points outside the hull.
    Location locate(const Vec2& p) const;

    /// P1 interpolation of a nodal field at p.
    double interpolate(const Vec2& p, const std::vector<double>& nodal) const;

  private:
    const std::vector<Vec2>& nodes_;
    const std::vector<std::array<int, 3>>& tris_;
    double x0_, y0_, inv_dx_, inv_dy_;
    int nx_, ny_;
    std::vector<std::vector<int>> bins_;
};

}  // namespace wsim
