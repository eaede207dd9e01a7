#include "wsim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace wsim {

std::vector<Vec2> Mesh::rim_polyline() const {
    std::vector<Vec2> out;
    out.reserve(rim.size());
    for (int i : rim) out.push_back(nodes[i]);
    return out;
}

double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double triangle_area(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    return triangle_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]);
}

double triangle_min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
    auto angle = [](double opp, double s1, double s2) {
        const double cosv = std::clamp((s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2), -1.0, 1.0);
        return std::acos(cosv);
    };
    return std::min({angle(la, lb, lc), angle(lb, lc, la), angle(lc, la, lb)});
}

double mesh_quality(const Mesh& mesh) {
    double amin = std::numeric_limits<double>::infinity();
    double amax = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const double a = std::abs(2.0 * triangle_area(mesh, t));
        amin = std::min(amin, a);
        amax = std::max(amax, a);
    }
    return amax > 0.0 ? amin / amax : 0.0;
}

std::vector<Vec2> resample_polyline(const std::vector<Vec2>& poly, double h) {
    if (poly.size() < 2) throw std::invalid_argument("resample_polyline: too few points");
    std::vector<double> cum(poly.size(), 0.0);
    for (std::size_t i = 1; i < poly.size(); ++i)
        cum[i] = cum[i - 1] + (poly[i] - poly[i - 1]).norm();
    const double length = cum.back();
    const int n = std::max(2, static_cast<int>(std::ceil(length / h))) + 1;

    std::vector<Vec2> out(n);
    out.front() = poly.front();
    out.back() = poly.back();
    std::size_t seg = 0;
    for (int k = 1; k + 1 < n; ++k) {
        const double target = length * k / (n - 1);
        while (seg + 2 < poly.size() && cum[seg + 1] < target) ++seg;
        const double denom = cum[seg + 1] - cum[seg];
        const double t = denom > 0.0 ? (target - cum[seg]) / denom : 0.0;
        out[k] = poly[seg] + t * (poly[seg + 1] - poly[seg]);
    }
    return out;
}

std::vector<Vec2> sample_rim_on_curve(const WoundGeometry& geometry, double h,
                                      int dense_samples) {
    const BoundaryCurve dense = boundary_curve(geometry, dense_samples);
    std::vector<double> cum(dense.size(), 0.0);
    for (std::size_t i = 1; i < dense.size(); ++i)
        cum[i] = cum[i - 1] + (dense.points[i] - dense.points[i - 1]).norm();
    const double length = cum.back();
    const int n = std::max(2, static_cast<int>(std::ceil(length / h))) + 1;

    // Pick parameter values at equal arclength and evaluate the analytic
    // curve there, so samples lie on the rim itself rather than on chords.
    std::vector<Vec2> out(n);
    out.front() = dense.points.front();
    out.back() = dense.points.back();
    std::size_t seg = 0;
    for (int k = 1; k + 1 < n; ++k) {
        const double target = length * k / (n - 1);
        while (seg + 2 < dense.size() && cum[seg + 1] < target) ++seg;
        const double denom = cum[seg + 1] - cum[seg];
        const double t = denom > 0.0 ? (target - cum[seg]) / denom : 0.0;
        const double s = dense.s[seg] + t * (dense.s[seg + 1] - dense.s[seg]);
        if (geometry.kind == WoundKind::Convex) {
            Vec2 r = Vec2::Zero();
            const std::array<WoundKind, 3> kinds = {WoundKind::Rectangle, WoundKind::Rhombus,
                                                    WoundKind::Ellipse};
            for (int p = 0; p < 3; ++p)
                r += geometry.weights[p] * shape_point(kinds[p], geometry.x_cut, geometry.y_cut, s);
            out[k] = r;
        } else {
            out[k] = shape_point(geometry.kind, geometry.x_cut, geometry.y_cut, s);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bowyer-Watson Delaunay triangulation with neighbor adjacency
// ---------------------------------------------------------------------------

namespace {

struct Delaunay {
    std::vector<Vec2> pts;                       // [0..2] super triangle
    std::vector<std::array<int, 3>> tv;          // vertices, CCW
    std::vector<std::array<int, 3>> tn;          // neighbor opposite vertex i
    std::vector<char> alive;
    int hint = 0;

    static long double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
        const long double abx = (long double)b.x() - a.x();
        const long double aby = (long double)b.y() - a.y();
        const long double acx = (long double)c.x() - a.x();
        const long double acy = (long double)c.y() - a.y();
        return abx * acy - aby * acx;
    }

    bool in_circumcircle(int t, const Vec2& p) const {
        const Vec2& a = pts[tv[t][0]];
        const Vec2& b = pts[tv[t][1]];
        const Vec2& c = pts[tv[t][2]];
        const long double ax = a.x() - p.x(), ay = a.y() - p.y();
        const long double bx = b.x() - p.x(), by = b.y() - p.y();
        const long double cx = c.x() - p.x(), cy = c.y() - p.y();
        const long double a2 = ax * ax + ay * ay;
        const long double b2 = bx * bx + by * by;
        const long double c2 = cx * cx + cy * cy;
        const long double det = ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx)
                                + a2 * (bx * cy - by * cx);
        const long double mag = std::abs(ax * by * c2) + std::abs(ax * b2 * cy)
                                + std::abs(ay * bx * c2) + std::abs(ay * b2 * cx)
                                + std::abs(a2 * bx * cy) + std::abs(a2 * by * cx) + 1e-300L;
        return det > 1e-14L * mag;
    }

    void init(double x0, double y0, double x1, double y1) {
        const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        const double r = 10.0 * std::max({x1 - x0, y1 - y0, 1e-6});
        pts.push_back(Vec2(cx - 3.0 * r, cy - r));
        pts.push_back(Vec2(cx + 3.0 * r, cy - r));
        pts.push_back(Vec2(cx, cy + 3.0 * r));
        tv.push_back({0, 1, 2});
        tn.push_back({-1, -1, -1});
        alive.push_back(1);
    }

    int locate(const Vec2& p) const {
        int t = alive[hint] ? hint : -1;
        if (t < 0)
            for (int i = 0; i < (int)tv.size(); ++i)
                if (alive[i]) { t = i; break; }
        const int max_steps = 4 * (int)tv.size() + 16;
        for (int step = 0; step < max_steps; ++step) {
            int next = -1;
            for (int i = 0; i < 3; ++i) {
                const int u = tv[t][(i + 1) % 3];
                const int v = tv[t][(i + 2) % 3];
                if (orient(pts[u], pts[v], p) < 0.0L) {
                    next = tn[t][i];
                    break;
                }
            }
            if (next < 0) return t;
            t = next;
        }
        // Walk cycled (degenerate geometry); fall back to a full scan.
        for (int i = 0; i < (int)tv.size(); ++i) {
            if (!alive[i]) continue;
            bool ok = true;
            for (int e = 0; e < 3 && ok; ++e)
                ok = orient(pts[tv[i][(e + 1) % 3]], pts[tv[i][(e + 2) % 3]], p) >= 0.0L;
            if (ok) return i;
        }
        throw std::runtime_error("mesh: point location failed");
    }

    int neighbor_slot(int t, int nb) const {
        for (int i = 0; i < 3; ++i)
            if (tn[t][i] == nb) return i;
        return -1;
    }

    void insert(int pi) {
        const Vec2 p = pts[pi];
        const int t0 = locate(p);

        std::unordered_set<int> cavity;
        std::vector<int> stack{t0};
        cavity.insert(t0);
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            for (int i = 0; i < 3; ++i) {
                const int nb = tn[t][i];
                if (nb < 0 || cavity.count(nb)) continue;
                if (in_circumcircle(nb, p)) {
                    cavity.insert(nb);
                    stack.push_back(nb);
                }
            }
        }

        // Collect boundary edges; grow the cavity where p is (numerically)
        // on a boundary edge so every fan triangle has positive area.
        struct BEdge { int u, v, outside; };
        std::vector<BEdge> boundary;
        for (int pass = 0; pass < 1024; ++pass) {
            boundary.clear();
            bool grew = false;
            for (int t : cavity) {
                for (int i = 0; i < 3; ++i) {
                    const int nb = tn[t][i];
                    if (nb >= 0 && cavity.count(nb)) continue;
                    const int u = tv[t][(i + 1) % 3];
                    const int v = tv[t][(i + 2) % 3];
                    if (orient(pts[u], pts[v], p) <= 0.0L) {
                        if (nb >= 0 && !cavity.count(nb)) {
                            cavity.insert(nb);
                            grew = true;
                        } else if (nb < 0) {
                            throw std::runtime_error("mesh: insertion outside hull");
                        }
                    } else {
                        boundary.push_back({u, v, nb});
                    }
                }
                if (grew) break;
            }
            if (!grew) break;
        }

        for (int t : cavity) alive[t] = 0;

        std::unordered_map<std::uint64_t, std::pair<int, int>> open_edges;
        auto key = [](int a, int b) {
            return (std::uint64_t)std::min(a, b) << 32 | (std::uint32_t)std::max(a, b);
        };
        for (const BEdge& e : boundary) {
            const int t = (int)tv.size();
            tv.push_back({e.u, e.v, pi});
            tn.push_back({-1, -1, e.outside});
            alive.push_back(1);
            if (e.outside >= 0) {
                const int slot = [&] {
                    for (int i = 0; i < 3; ++i) {
                        const int a = tv[e.outside][(i + 1) % 3];
                        const int b = tv[e.outside][(i + 2) % 3];
                        if ((a == e.u && b == e.v) || (a == e.v && b == e.u)) return i;
                    }
                    return -1;
                }();
                if (slot < 0) throw std::runtime_error("mesh: adjacency corrupted");
                tn[e.outside][slot] = t;
            }
            // Stitch fan neighbors through the spoke edges (u,pi) and (v,pi).
            for (int i = 0; i < 2; ++i) {
                const int a = tv[t][i];
                const auto k = key(a, pi);
                auto it = open_edges.find(k);
                if (it == open_edges.end()) {
                    open_edges[k] = {t, 1 - i};  // slot opposite the other edge vertex
                } else {
                    const auto [t2, slot2] = it->second;
                    tn[t][1 - i] = t2;
                    tn[t2][slot2] = t;
                    open_edges.erase(it);
                }
            }
            hint = t;
        }
        if (!open_edges.empty()) throw std::runtime_error("mesh: cavity not closed");
    }

    /// Flip the edge shared by t and tn[t][slot]. Returns the new diagonal.
    std::pair<int, int> flip(int t, int slot) {
        const int t2 = tn[t][slot];
        const int c = tv[t][slot];
        const int u = tv[t][(slot + 1) % 3];
        const int v = tv[t][(slot + 2) % 3];
        const int slot2 = [&] {
            for (int i = 0; i < 3; ++i)
                if (tv[t2][i] != u && tv[t2][i] != v) return i;
            return -1;
        }();
        const int d = tv[t2][slot2];

        // Both new triangles (c,u,d) and (c,d,v) must come out CCW.
        if (orient(pts[c], pts[u], pts[d]) <= 0.0L || orient(pts[c], pts[d], pts[v]) <= 0.0L)
            return {-1, -1};

        const int Xu = tn[t][(slot + 2) % 3];   // t's neighbor across (c,u)
        const int Xv = tn[t][(slot + 1) % 3];   // t's neighbor across (v,c)
        int slot2u = -1, slot2v = -1;           // t2's slots across (u,d) and (d,v)
        for (int i = 0; i < 3; ++i) {
            if (tv[t2][i] == u) slot2u = i;     // slot opposite u: edge (d,v)
            if (tv[t2][i] == v) slot2v = i;     // slot opposite v: edge (u,d)
        }
        const int Yu = tn[t2][slot2v];
        const int Yv = tn[t2][slot2u];

        tv[t] = {c, u, d};
        tv[t2] = {c, d, v};
        tn[t] = {Yu, t2, Xu};
        tn[t2] = {Yv, Xv, t};
        auto repoint = [&](int nb, int from, int to) {
            if (nb < 0) return;
            const int s = neighbor_slot(nb, from);
            if (s >= 0) tn[nb][s] = to;
        };
        repoint(Yu, t2, t);
        repoint(Xv, t, t2);
        return {c, d};
    }
};

std::uint64_t edge_key(int a, int b) {
    return (std::uint64_t)std::min(a, b) << 32 | (std::uint32_t)std::max(a, b);
}

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    auto o = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        const double v = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
        return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    };
    const int o1 = o(a, b, c), o2 = o(a, b, d), o3 = o(c, d, a), o4 = o(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

Mesh generate_mesh_from_rim(const std::vector<Vec2>& rim_polyline, double x_l,
                            double y_l, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("generate_mesh: h must be positive");
    if (rim_polyline.size() < 2)
        throw std::runtime_error("mesh: rim polyline needs at least 2 points");
    const Vec2 rim_a = rim_polyline.front();  // on the x-axis
    const Vec2 rim_b = rim_polyline.back();   // on the y-axis
    if (std::abs(rim_a.y()) > 1e-9 * y_l || std::abs(rim_b.x()) > 1e-9 * x_l)
        throw std::runtime_error("mesh: rim endpoints must lie on the axes");
    for (std::size_t i = 0; i + 1 < rim_polyline.size(); ++i)
        for (std::size_t j = i + 2; j + 1 < rim_polyline.size(); ++j)
            if (segments_properly_intersect(rim_polyline[i], rim_polyline[i + 1],
                                            rim_polyline[j], rim_polyline[j + 1]))
                throw std::runtime_error("mesh: rim polyline self-intersects");

    std::vector<Vec2> points;
    std::vector<int> rim_ids;

    // Rectangle corners and edge points; skip edge points that would crowd a
    // rim endpoint sitting on the same edge.
    points.push_back(Vec2(0.0, 0.0));
    points.push_back(Vec2(x_l, 0.0));
    points.push_back(Vec2(x_l, y_l));
    points.push_back(Vec2(0.0, y_l));
    auto add_edge_points = [&](const Vec2& from, const Vec2& to, const Vec2* avoid) {
        const double len = (to - from).norm();
        const int n = std::max(1, (int)std::lround(len / h));
        for (int k = 1; k < n; ++k) {
            const Vec2 p = from + (to - from) * (static_cast<double>(k) / n);
            if (avoid && (p - *avoid).norm() < 0.5 * h) continue;
            points.push_back(p);
        }
    };
    add_edge_points(Vec2(0.0, 0.0), Vec2(x_l, 0.0), &rim_a);
    add_edge_points(Vec2(x_l, 0.0), Vec2(x_l, y_l), nullptr);
    add_edge_points(Vec2(x_l, y_l), Vec2(0.0, y_l), nullptr);
    add_edge_points(Vec2(0.0, y_l), Vec2(0.0, 0.0), &rim_b);

    for (const Vec2& p : rim_polyline) {
        rim_ids.push_back((int)points.size());
        points.push_back(p);
    }

    // Interior hexagonal lattice, kept clear of the rim and the rectangle
    // boundary so rim segments stay Gabriel edges.
    auto rim_distance = [&](const Vec2& p) {
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < rim_polyline.size(); ++i) {
            const Vec2& a = rim_polyline[i];
            const Vec2& b = rim_polyline[i + 1];
            const Vec2 ab = b - a;
            const double len2 = ab.squaredNorm();
            const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
            d = std::min(d, (p - (a + t * ab)).norm());
        }
        return d;
    };
    const double dy = h * std::sqrt(3.0) / 2.0;
    const double margin = 0.6 * h;
    int row = 0;
    for (double y = dy; y < y_l - margin; y += dy, ++row) {
        const double x_off = (row % 2 == 0) ? h : 0.5 * h;
        for (double x = x_off; x < x_l - margin; x += h) {
            const Vec2 p(x, y);
            if (rim_distance(p) < 0.75 * h) continue;
            points.push_back(p);
        }
    }

    // Triangulate.
    Delaunay dt;
    dt.init(0.0, 0.0, x_l, y_l);
    dt.pts.reserve(points.size() + 3);
    for (const Vec2& p : points) dt.pts.push_back(p);
    for (std::size_t i = 0; i < points.size(); ++i) dt.insert((int)i + 3);

    std::set<std::uint64_t> constrained;
    for (std::size_t i = 0; i + 1 < rim_ids.size(); ++i)
        constrained.insert(edge_key(rim_ids[i] + 3, rim_ids[i + 1] + 3));

    // Recover any rim edge that the Delaunay triangulation missed.
    auto edge_present = [&](int u, int v) {
        for (std::size_t t = 0; t < dt.tv.size(); ++t) {
            if (!dt.alive[t]) continue;
            for (int i = 0; i < 3; ++i) {
                const int a = dt.tv[t][(i + 1) % 3];
                const int b = dt.tv[t][(i + 2) % 3];
                if (edge_key(a, b) == edge_key(u, v)) return true;
            }
        }
        return false;
    };
    for (std::size_t e = 0; e + 1 < rim_ids.size(); ++e) {
        const int u = rim_ids[e] + 3, v = rim_ids[e + 1] + 3;
        for (int iter = 0; iter < 256 && !edge_present(u, v); ++iter) {
            bool flipped = false;
            for (std::size_t t = 0; t < dt.tv.size() && !flipped; ++t) {
                if (!dt.alive[t]) continue;
                for (int i = 0; i < 3 && !flipped; ++i) {
                    const int a = dt.tv[t][(i + 1) % 3];
                    const int b = dt.tv[t][(i + 2) % 3];
                    if (a == u || a == v || b == u || b == v) continue;
                    if (dt.tn[t][i] < 0) continue;
                    if (!segments_properly_intersect(dt.pts[a], dt.pts[b], dt.pts[u], dt.pts[v]))
                        continue;
                    if (dt.flip((int)t, i).first >= 0) flipped = true;
                }
            }
            if (!flipped && !edge_present(u, v))
                throw std::runtime_error("mesh: failed to recover rim edge");
        }
    }

    // Laplacian smoothing of interior non-rim nodes with a positivity guard.
    std::vector<char> movable(dt.pts.size(), 0);
    {
        std::unordered_set<int> fixed;
        for (int i = 0; i < 3; ++i) fixed.insert(i);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const Vec2& p = points[i];
            const bool on_boundary = p.x() == 0.0 || p.y() == 0.0 || p.x() == x_l || p.y() == y_l;
            if (on_boundary) fixed.insert((int)i + 3);
        }
        for (int id : rim_ids) fixed.insert(id + 3);
        for (std::size_t i = 3; i < dt.pts.size(); ++i)
            if (!fixed.count((int)i)) movable[i] = 1;
    }
    for (int sweep = 0; sweep < 3; ++sweep) {
        std::vector<std::vector<int>> incident(dt.pts.size());
        std::vector<std::set<int>> neighbors(dt.pts.size());
        for (std::size_t t = 0; t < dt.tv.size(); ++t) {
            if (!dt.alive[t]) continue;
            for (int i = 0; i < 3; ++i) {
                const int a = dt.tv[t][i];
                incident[a].push_back((int)t);
                neighbors[a].insert(dt.tv[t][(i + 1) % 3]);
                neighbors[a].insert(dt.tv[t][(i + 2) % 3]);
            }
        }
        for (std::size_t v = 3; v < dt.pts.size(); ++v) {
            if (!movable[v]) continue;
            bool super_neighbor = false;
            Vec2 centroid = Vec2::Zero();
            for (int nb : neighbors[v]) {
                if (nb < 3) super_neighbor = true;
                centroid += dt.pts[nb];
            }
            if (super_neighbor || neighbors[v].empty()) continue;
            centroid /= (double)neighbors[v].size();
            const Vec2 old = dt.pts[v];
            dt.pts[v] = centroid;
            bool ok = true;
            for (int t : incident[v]) {
                if (triangle_area(dt.pts[dt.tv[t][0]], dt.pts[dt.tv[t][1]], dt.pts[dt.tv[t][2]])
                    <= 1e-12 * h * h) {
                    ok = false;
                    break;
                }
            }
            if (!ok) dt.pts[v] = old;
        }
        // Restore the Delaunay property around moved nodes.
        for (int pass = 0; pass < 8; ++pass) {
            bool changed = false;
            for (std::size_t t = 0; t < dt.tv.size(); ++t) {
                if (!dt.alive[t]) continue;
                if (dt.tv[t][0] < 3 || dt.tv[t][1] < 3 || dt.tv[t][2] < 3) continue;
                for (int i = 0; i < 3; ++i) {
                    const int nb = dt.tn[t][i];
                    if (nb < (int)t) continue;
                    if (dt.tv[nb][0] < 3 || dt.tv[nb][1] < 3 || dt.tv[nb][2] < 3) continue;
                    const int u = dt.tv[t][(i + 1) % 3];
                    const int v = dt.tv[t][(i + 2) % 3];
                    if (constrained.count(edge_key(u, v))) continue;
                    const int opp = [&] {
                        for (int k = 0; k < 3; ++k)
                            if (dt.tv[nb][k] != u && dt.tv[nb][k] != v) return dt.tv[nb][k];
                        return -1;
                    }();
                    if (opp >= 0 && dt.in_circumcircle((int)t, dt.pts[opp])) {
                        if (dt.flip((int)t, i).first >= 0) {
                            changed = true;
                            break;
                        }
                    }
                }
            }
            if (!changed) break;
        }
    }

    // Extract the final mesh, dropping the super-triangle vertices.
    Mesh mesh;
    mesh.extent_x = x_l;
    mesh.extent_y = y_l;
    mesh.nodes = points;
    mesh.tags.assign(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2& p = points[i];
        if (p.x() == 0.0) mesh.tags[i] |= TagLeft;
        if (p.y() == 0.0) mesh.tags[i] |= TagBottom;
        if (p.x() == x_l) mesh.tags[i] |= TagRight;
        if (p.y() == y_l) mesh.tags[i] |= TagTop;
    }
    mesh.rim = rim_ids;

    for (std::size_t t = 0; t < dt.tv.size(); ++t) {
        if (!dt.alive[t]) continue;
        const auto& v = dt.tv[t];
        if (v[0] < 3 || v[1] < 3 || v[2] < 3) continue;
        std::array<int, 3> tri = {v[0] - 3, v[1] - 3, v[2] - 3};
        if (triangle_area(mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]) < 0.0)
            std::swap(tri[1], tri[2]);
        mesh.triangles.push_back(tri);
    }

    for (int t = 0; t < mesh.n_triangles(); ++t)
        if (triangle_area(mesh, t) <= 0.0)
            throw std::runtime_error("mesh: degenerate element produced");
    mesh.quality_at_build = mesh_quality(mesh);
    return mesh;
}

Mesh generate_mesh(const WoundGeometry& geometry, double h) {
    if (!(h > 0.0) || h >= std::min(geometry.x_cut, geometry.y_cut))
        throw std::invalid_argument("generate_mesh: require 0 < h < min(x_cut, y_cut)");
    const Vec2 ext = domain_extent(geometry);
    const std::vector<Vec2> rim = sample_rim_on_curve(geometry, h);
    return generate_mesh_from_rim(rim, ext.x(), ext.y(), h);
}

// ---------------------------------------------------------------------------
// Point location
// ---------------------------------------------------------------------------

MeshLocator::MeshLocator(const std::vector<Vec2>& nodes,
                         const std::vector<std::array<int, 3>>& triangles)
    : nodes_(nodes), tris_(triangles) {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
    double x1 = -x0, y1 = -x0;
    for (const Vec2& p : nodes) {
        x0 = std::min(x0, p.x());
        y0 = std::min(y0, p.y());
        x1 = std::max(x1, p.x());
        y1 = std::max(y1, p.y());
    }
    const double pad = 1e-9 * std::max(x1 - x0, y1 - y0) + 1e-300;
    x0_ = x0 - pad;
    y0_ = y0 - pad;
    const int n = std::max(1, (int)std::lround(std::sqrt((double)triangles.size() / 2.0)));
    nx_ = ny_ = n;
    inv_dx_ = nx_ / (x1 - x0 + 2.0 * pad);
    inv_dy_ = ny_ / (y1 - y0 + 2.0 * pad);
    bins_.resize((std::size_t)nx_ * ny_);
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        double tx0 = std::min({nodes[tri[0]].x(), nodes[tri[1]].x(), nodes[tri[2]].x()});
        double tx1 = std::max({nodes[tri[0]].x(), nodes[tri[1]].x(), nodes[tri[2]].x()});
        double ty0 = std::min({nodes[tri[0]].y(), nodes[tri[1]].y(), nodes[tri[2]].y()});
        double ty1 = std::max({nodes[tri[0]].y(), nodes[tri[1]].y(), nodes[tri[2]].y()});
        const int i0 = std::clamp((int)((tx0 - x0_) * inv_dx_), 0, nx_ - 1);
        const int i1 = std::clamp((int)((tx1 - x0_) * inv_dx_), 0, nx_ - 1);
        const int j0 = std::clamp((int)((ty0 - y0_) * inv_dy_), 0, ny_ - 1);
        const int j1 = std::clamp((int)((ty1 - y0_) * inv_dy_), 0, ny_ - 1);
        for (int j = j0; j <= j1; ++j)
            for (int i = i0; i <= i1; ++i) bins_[(std::size_t)j * nx_ + i].push_back((int)t);
    }
}

static std::array<double, 3> barycentric(const Vec2& a, const Vec2& b, const Vec2& c,
                                         const Vec2& p) {
    const double denom = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    if (denom == 0.0) return {-1.0, -1.0, -1.0};
    const double wa = ((b.x() - p.x()) * (c.y() - p.y()) - (c.x() - p.x()) * (b.y() - p.y())) / denom;
    const double wb = ((c.x() - p.x()) * (a.y() - p.y()) - (a.x() - p.x()) * (c.y() - p.y())) / denom;
    return {wa, wb, 1.0 - wa - wb};
}

MeshLocator::Location MeshLocator::locate(const Vec2& p) const {
    Location best;
    double best_violation = std::numeric_limits<double>::infinity();

    auto consider = [&](int t) {
        const auto& tri = tris_[t];
        const auto w = barycentric(nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]], p);
        const double violation = -std::min({w[0], w[1], w[2]});
        if (violation < best_violation) {
            best_violation = violation;
            best.tri = t;
            best.bary = w;
            best.inside = violation <= 1e-12;
        }
        return best.inside;
    };

    const int ci = std::clamp((int)((p.x() - x0_) * inv_dx_), 0, nx_ - 1);
    const int cj = std::clamp((int)((p.y() - y0_) * inv_dy_), 0, ny_ - 1);
    for (int ring = 0; ring <= std::max(nx_, ny_); ++ring) {
        bool any_cell = false;
        for (int j = cj - ring; j <= cj + ring; ++j) {
            if (j < 0 || j >= ny_) continue;
            for (int i = ci - ring; i <= ci + ring; ++i) {
                if (i < 0 || i >= nx_) continue;
                if (ring > 0 && std::abs(i - ci) != ring && std::abs(j - cj) != ring) continue;
                any_cell = true;
                for (int t : bins_[(std::size_t)j * nx_ + i])
                    if (consider(t)) return best;
            }
        }
        if (best.tri >= 0 && ring > 0) break;  // nearest candidate found
        if (!any_cell && ring > 0) break;
    }
    if (best.tri < 0) {
        for (int t = 0; t < (int)tris_.size(); ++t)
            if (consider(t)) return best;
    }
    // Nearest-element fallback: clamp and renormalize the coordinates.
    if (!best.inside && best.tri >= 0) {
        double sum = 0.0;
        for (double& w : best.bary) {
            w = std::max(w, 0.0);
            sum += w;
        }
        if (sum > 0.0)
            for (double& w : best.bary) w /= sum;
    }
    return best;
}

double MeshLocator::interpolate(const Vec2& p, const std::vector<double>& nodal) const {
    const Location loc = locate(p);
    if (loc.tri < 0) throw std::runtime_error("interpolate: empty mesh");
    const auto& tri = tris_[loc.tri];
    return loc.bary[0] * nodal[tri[0]] + loc.bary[1] * nodal[tri[1]] + loc.bary[2] * nodal[tri[2]];
}

}  // namespace wsim
