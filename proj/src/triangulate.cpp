#include "fracshape/triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "fracshape/errors.hpp"

namespace fracshape {

namespace {

constexpr double kGeomEps = 1e-13;

std::pair<int, int> ekey(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, c - a);
}

// > 0 iff d strictly inside the circumcircle of CCW triangle (a,b,c).
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    double ax = a[0] - d[0], ay = a[1] - d[1];
    double bx = b[0] - d[0], by = b[1] - d[1];
    double cx = c[0] - d[0], cy = c[1] - d[1];
    double a2 = ax * ax + ay * ay;
    double b2 = bx * bx + by * by;
    double c2 = cx * cx + cy * cy;
    return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    double d1 = orient(q1, q2, p1);
    double d2 = orient(q1, q2, p2);
    double d3 = orient(p1, p2, q1);
    double d4 = orient(p1, p2, q2);
    return ((d1 > kGeomEps && d2 < -kGeomEps) || (d1 < -kGeomEps && d2 > kGeomEps)) &&
           ((d3 > kGeomEps && d4 < -kGeomEps) || (d3 < -kGeomEps && d4 > kGeomEps));
}

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    Vec2 ab = b - a, ac = c - a;
    double d = 2.0 * cross(ab, ac);
    double ab2 = dot(ab, ab), ac2 = dot(ac, ac);
    double ux = (ac[1] * ab2 - ab[1] * ac2) / d;
    double uy = (ab[0] * ac2 - ac[0] * ab2) / d;
    return {a[0] + ux, a[1] + uy};
}

// Incremental constrained Delaunay triangulation (Bowyer-Watson insertion,
// flip-based segment recovery). A large finite super-triangle keeps every
// vertex interior until extraction.
class Cdt {
public:
    explicit Cdt(const std::vector<Vec2>& fixed_pts) {
        pts = {{-200.0, -150.0}, {200.0, -150.0}, {0.0, 250.0}};
        tris.push_back({{0, 1, 2}, {-1, -1, -1}, true});
        vtri = {0, 0, 0};
        for (const auto& p : fixed_pts) insert(p);
    }

    int insert(const Vec2& p) {
        int t0 = locate(p);
        int v = static_cast<int>(pts.size());
        pts.push_back(p);
        vtri.push_back(-1);
        dig_cavity(v, t0);
        return v;
    }

    void add_constraint(int a, int b) {
        recover(a, b);
        constraints.insert(ekey(a, b));
    }

    bool edge_exists(int a, int b) const {
        for (int t : star(a)) {
            const auto& v = tris[t].v;
            if (v[0] == b || v[1] == b || v[2] == b) return true;
        }
        return false;
    }

    // Flood fill from the super-triangle: everything reachable without
    // crossing a constrained edge is outside the domain.
    void classify() {
        inside.assign(tris.size(), true);
        std::deque<int> stack;
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (!tris[t].alive) {
                inside[t] = false;
                continue;
            }
            const auto& v = tris[t].v;
            if (v[0] < 3 || v[1] < 3 || v[2] < 3) {
                inside[t] = false;
                stack.push_back(static_cast<int>(t));
            }
        }
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                int s = tris[t].n[k];
                if (s < 0 || !inside[s]) continue;
                if (constraints.count(ekey(tris[t].v[k], tris[t].v[(k + 1) % 3]))) continue;
                inside[s] = false;
                stack.push_back(s);
            }
        }
    }

    bool is_inside(int t) const { return tris[t].alive && t < static_cast<int>(inside.size()) && inside[t]; }

    // Graded Delaunay refinement by circumcenter insertion. Boundary
    // segments are never split, so insertions that would encroach them
    // or leave the domain are skipped.
    void refine(const SizingFn& sizing, double quality_target) {
        for (int round = 0; round < 60; ++round) {
            int inserted = 0;
            std::size_t ntri = tris.size();
            for (std::size_t t = 0; t < ntri; ++t) {
                if (!is_inside(static_cast<int>(t))) continue;
                const auto& v = tris[t].v;
                const Vec2 &a = pts[v[0]], &b = pts[v[1]], &c = pts[v[2]];
                Vec2 cc = circumcenter(a, b, c);
                double R = norm(cc - a);
                Vec2 ctr = (1.0 / 3.0) * (a + b + c);
                double h = sizing(ctr);
                bool too_big = R > 0.68 * h;
                bool too_thin = triangle_quality(a, b, c) < quality_target;
                if (!too_big && !too_thin) continue;
                if (!std::isfinite(cc[0]) || !std::isfinite(cc[1])) continue;
                if (try_insert_interior(cc, static_cast<int>(t))) ++inserted;
            }
            if (inserted == 0) break;
        }
    }

    // Moves interior vertices to the average of their neighbors, rejecting
    // moves that would invert an incident triangle, then restores the
    // Delaunay property by Lawson flips.
    void smooth(int passes, int n_fixed) {
        for (int pass = 0; pass < passes; ++pass) {
            for (int v = 3 + n_fixed; v < static_cast<int>(pts.size()); ++v) {
                auto ring = star(v);
                if (ring.empty()) continue;
                Vec2 sum{0.0, 0.0};
                int cnt = 0;
                bool touches_outside = false;
                for (int t : ring) {
                    if (!is_inside(t)) touches_outside = true;
                    for (int k = 0; k < 3; ++k)
                        if (tris[t].v[k] != v) {
                            sum = sum + pts[tris[t].v[k]];
                            ++cnt;
                        }
                }
                if (touches_outside || cnt == 0) continue;
                Vec2 target = (1.0 / cnt) * sum;  // each neighbor counted twice; uniform
                Vec2 old = pts[v];
                for (double f = 1.0; f > 0.2; f *= 0.5) {
                    pts[v] = old + f * (target - old);
                    bool ok = true;
                    for (int t : ring)
                        if (orient(pts[tris[t].v[0]], pts[tris[t].v[1]], pts[tris[t].v[2]]) < kGeomEps) {
                            ok = false;
                            break;
                        }
                    if (ok) break;
                    pts[v] = old;
                }
            }
            delaunayize();
        }
    }

    // Drops super-triangle vertices and exterior triangles. The first
    // n_fixed inserted points keep indices 0..n_fixed-1.
    TriMesh extract(int n_fixed) const {
        TriMesh out;
        std::vector<int> remap(pts.size(), -1);
        for (int i = 0; i < n_fixed; ++i) {
            remap[3 + i] = i;
            out.nodes.push_back(pts[3 + i]);
        }
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (!is_inside(static_cast<int>(t))) continue;
            std::array<int, 3> tv;
            for (int k = 0; k < 3; ++k) {
                int v = tris[t].v[k];
                if (remap[v] < 0) {
                    remap[v] = out.node_count();
                    out.nodes.push_back(pts[v]);
                }
                tv[k] = remap[v];
            }
            out.triangles.push_back(tv);
        }
        return out;
    }

private:
    struct Tri {
        std::array<int, 3> v;  // CCW; edge k = v[k] -> v[k+1]
        std::array<int, 3> n;  // neighbor across edge k, -1 on hull
        bool alive;
    };

    std::vector<Vec2> pts;
    std::vector<Tri> tris;
    std::vector<int> vtri;  // one alive incident triangle per vertex
    std::vector<bool> inside;
    std::set<std::pair<int, int>> constraints;
    int last_tri = 0;

    int edge_index(int t, int a, int b) const {
        for (int k = 0; k < 3; ++k)
            if (tris[t].v[k] == a && tris[t].v[(k + 1) % 3] == b) return k;
        return -1;
    }

    void set_neighbor(int t, int a, int b, int s) {
        if (t < 0) return;
        int k = edge_index(t, a, b);
        if (k >= 0) tris[t].n[k] = s;
    }

    // All alive triangles incident to v (walk by neighbor rotation).
    std::vector<int> star(int v) const {
        std::vector<int> out;
        int t0 = vtri[v];
        if (t0 < 0 || !tris[t0].alive) {  // stale hint: linear rescue
            t0 = -1;
            for (std::size_t t = 0; t < tris.size(); ++t)
                if (tris[t].alive &&
                    (tris[t].v[0] == v || tris[t].v[1] == v || tris[t].v[2] == v)) {
                    t0 = static_cast<int>(t);
                    break;
                }
            if (t0 < 0) return out;
        }
        int t = t0;
        for (int guard = 0; guard < 1024; ++guard) {
            out.push_back(t);
            int k = 0;
            while (tris[t].v[k] != v) ++k;
            int next = tris[t].n[k];  // rotate CCW around v
            if (next < 0 || next == t0) break;
            t = next;
        }
        return out;
    }

    int locate(const Vec2& p) const {
        int t = last_tri;
        if (t < 0 || !tris[t].alive) t = 0;
        while (!tris[t].alive) ++t;
        int prev = -1;
        for (int guard = 0; guard < 1 << 20; ++guard) {
            bool moved = false;
            for (int k = 0; k < 3; ++k) {
                int s = tris[t].n[k];
                if (s < 0 || s == prev) continue;
                if (orient(pts[tris[t].v[k]], pts[tris[t].v[(k + 1) % 3]], p) < -kGeomEps) {
                    prev = t;
                    t = s;
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        throw MeshingFailure("point location failed");
    }

    void dig_cavity(int v, int t0) {
        const Vec2& p = pts[v];
        // Grow the cavity over circumcircle-violating triangles; never
        // step across a constrained edge.
        std::vector<int> cavity;
        std::vector<char> in_cavity(tris.size(), 0);
        std::deque<int> stack{t0};
        in_cavity[t0] = 1;
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int k = 0; k < 3; ++k) {
                int s = tris[t].n[k];
                if (s < 0 || in_cavity[s]) continue;
                if (constraints.count(ekey(tris[t].v[k], tris[t].v[(k + 1) % 3]))) continue;
                const auto& sv = tris[s].v;
                if (incircle(pts[sv[0]], pts[sv[1]], pts[sv[2]], p) > kGeomEps) {
                    in_cavity[s] = 1;
                    stack.push_back(s);
                }
            }
        }
        // Boundary edges of the cavity, directed CCW as seen from inside.
        struct BEdge {
            int a, b, outer;
        };
        std::map<int, BEdge> by_start;
        for (int t : cavity)
            for (int k = 0; k < 3; ++k) {
                int s = tris[t].n[k];
                if (s >= 0 && in_cavity[s]) continue;
                int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
                by_start[a] = {a, b, s};
            }
        for (int t : cavity) tris[t].alive = false;

        std::map<int, int> fan_by_start;
        for (const auto& [a, e] : by_start) {
            int nt = static_cast<int>(tris.size());
            tris.push_back({{e.a, e.b, v}, {e.outer, -1, -1}, true});
            set_neighbor(e.outer, e.b, e.a, nt);
            fan_by_start[e.a] = nt;
            vtri[e.a] = nt;
            vtri[e.b] = nt;
            vtri[v] = nt;
        }
        for (const auto& [a, e] : by_start) {
            int t = fan_by_start[a];
            int succ = fan_by_start[e.b];
            tris[t].n[1] = succ;   // shares edge (b, v)
            tris[succ].n[2] = t;   // its edge (v, b)
        }
        last_tri = vtri[v];
        if (static_cast<std::size_t>(last_tri) >= tris.size() || !tris[last_tri].alive)
            throw MeshingFailure("cavity retriangulation failed");
    }

    bool flip(int t, int k) {
        int s = tris[t].n[k];
        if (s < 0) return false;
        int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3], c = tris[t].v[(k + 2) % 3];
        int m = edge_index(s, b, a);
        if (m < 0) return false;
        int d = tris[s].v[(m + 2) % 3];
        if (orient(pts[a], pts[d], pts[c]) < kGeomEps) return false;
        if (orient(pts[d], pts[b], pts[c]) < kGeomEps) return false;
        int tab = tris[t].n[k];            // == s
        int tbc = tris[t].n[(k + 1) % 3];
        int tca = tris[t].n[(k + 2) % 3];
        int sba = tris[s].n[m];            // == t
        int sad = tris[s].n[(m + 1) % 3];
        int sdb = tris[s].n[(m + 2) % 3];
        (void)tab;
        (void)sba;
        tris[t] = {{a, d, c}, {sad, s, tca}, true};
        tris[s] = {{d, b, c}, {sdb, tbc, t}, true};
        set_neighbor(sad, a, d, t);
        set_neighbor(sad, d, a, t);
        set_neighbor(tca, a, c, t);
        set_neighbor(tca, c, a, t);
        set_neighbor(sdb, b, d, s);
        set_neighbor(sdb, d, b, s);
        set_neighbor(tbc, c, b, s);
        set_neighbor(tbc, b, c, s);
        vtri[a] = t;
        vtri[b] = s;
        vtri[c] = t;
        vtri[d] = t;
        return true;
    }

    void delaunayize() {
        for (int sweep = 0; sweep < 50; ++sweep) {
            int flips = 0;
            for (std::size_t t = 0; t < tris.size(); ++t) {
                if (!tris[t].alive) continue;
                for (int k = 0; k < 3; ++k) {
                    int s = tris[t].n[k];
                    if (s < 0 || !tris[s].alive) continue;
                    int a = tris[t].v[k], b = tris[t].v[(k + 1) % 3];
                    if (constraints.count(ekey(a, b))) continue;
                    int m = edge_index(s, b, a);
                    if (m < 0) continue;
                    int d = tris[s].v[(m + 2) % 3];
                    const auto& v = tris[t].v;
                    if (incircle(pts[v[0]], pts[v[1]], pts[v[2]], pts[d]) > kGeomEps)
                        if (flip(static_cast<int>(t), k)) ++flips;
                }
            }
            if (flips == 0) break;
        }
    }

    void recover(int a, int b) {
        for (int guard = 0; guard < 10000; ++guard) {
            if (edge_exists(a, b)) return;
            bool flipped = false;
            for (std::size_t t = 0; t < tris.size() && !flipped; ++t) {
                if (!tris[t].alive) continue;
                for (int k = 0; k < 3; ++k) {
                    int u = tris[t].v[k], w = tris[t].v[(k + 1) % 3];
                    if (u == a || u == b || w == a || w == b) continue;
                    if (constraints.count(ekey(u, w))) continue;
                    if (!segments_cross(pts[a], pts[b], pts[u], pts[w])) continue;
                    if (flip(static_cast<int>(t), k)) {
                        flipped = true;
                        break;
                    }
                }
            }
            if (!flipped)
                throw MeshingFailure("segment recovery failed (self-intersecting boundary?)");
        }
        throw MeshingFailure("segment recovery did not terminate");
    }

    bool try_insert_interior(const Vec2& p, int hint) {
        last_tri = hint;
        int t;
        try {
            t = locate(p);
        } catch (const MeshingFailure&) {
            return false;
        }
        if (!is_inside(t)) return false;
        // reject points encroaching a constrained segment (cannot be split)
        for (const auto& [a, b] : constraints) {
            Vec2 m = 0.5 * (pts[a] + pts[b]);
            double r = 0.5 * norm(pts[b] - pts[a]);
            if (norm(p - m) < r * 0.999) return false;
        }
        // reject points nearly coincident with an existing vertex of t
        for (int k = 0; k < 3; ++k)
            if (norm(p - pts[tris[t].v[k]]) < 1e-10) return false;
        int v = static_cast<int>(pts.size());
        pts.push_back(p);
        vtri.push_back(-1);
        std::size_t before = tris.size();
        dig_cavity(v, t);
        inside.resize(tris.size(), true);
        for (std::size_t i = before; i < tris.size(); ++i) inside[i] = true;
        return true;
    }
};

// Walks a straight segment placing points at the local sizing; endpoints
// are always kept. Returns interior sample points only.
std::vector<Vec2> sample_segment(const Vec2& p, const Vec2& q, const SizingFn& h) {
    double len = norm(q - p);
    // estimate count from sizing sampled along the segment
    int probes = 33;
    double inv_sum = 0.0;
    for (int i = 0; i < probes; ++i) {
        double s = (i + 0.5) / probes;
        inv_sum += 1.0 / h(p + s * (q - p));
    }
    double target = len * inv_sum / probes;
    int n = std::max(1, static_cast<int>(std::lround(target)));
    // place points at equal fractions of the integral of 1/h
    std::vector<Vec2> out;
    double acc = 0.0;
    int next = 1;
    double step = target / n;
    for (int i = 0; i < probes && next < n; ++i) {
        double s0 = static_cast<double>(i) / probes;
        double s1 = static_cast<double>(i + 1) / probes;
        double seg = len / probes / h(p + (0.5 * (s0 + s1)) * (q - p));
        while (next < n && acc + seg >= next * step) {
            double frac = (next * step - acc) / seg;
            double s = s0 + frac * (s1 - s0);
            out.push_back(p + s * (q - p));
            ++next;
        }
        acc += seg;
    }
    return out;
}

void check_no_boundary_self_intersection(const std::vector<Vec2>& pts,
                                         const std::vector<BoundaryEdge>& edges) {
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const auto& e = edges[i];
            const auto& f = edges[j];
            if (e.a == f.a || e.a == f.b || e.b == f.a || e.b == f.b) continue;
            if (segments_cross(pts[e.a], pts[e.b], pts[f.a], pts[f.b])) {
                char buf[160];
                std::snprintf(buf, sizeof buf,
                              "boundary polygon self-intersects: (%.6f,%.6f)-(%.6f,%.6f) x "
                              "(%.6f,%.6f)-(%.6f,%.6f)",
                              pts[e.a][0], pts[e.a][1], pts[e.b][0], pts[e.b][1], pts[f.a][0],
                              pts[f.a][1], pts[f.b][0], pts[f.b][1]);
                throw MeshingFailure(buf);
            }
        }
}

}  // namespace

std::vector<int> boundary_crossing_nodes(const std::vector<Vec2>& pts,
                                         const std::vector<BoundaryEdge>& edges) {
    std::set<int> bad;
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const auto& e = edges[i];
            const auto& f = edges[j];
            if (e.a == f.a || e.a == f.b || e.b == f.a || e.b == f.b) continue;
            if (segments_cross(pts[e.a], pts[e.b], pts[f.a], pts[f.b])) {
                bad.insert(e.a);
                bad.insert(e.b);
                bad.insert(f.a);
                bad.insert(f.b);
            }
        }
    return {bad.begin(), bad.end()};
}

SizingFn graded_sizing(Vec2 tip, double h_tip, double h_far, double radius) {
    return [=](const Vec2& p) {
        double d = norm(p - tip);
        double f = std::clamp(d / radius, 0.0, 1.0);
        return h_tip + (h_far - h_tip) * f;
    };
}

TriMesh triangulate_boundary(const std::vector<Vec2>& boundary_nodes,
                             const std::vector<BoundaryEdge>& boundary_edges,
                             const std::vector<int>& crack_polyline,
                             const SizingFn& sizing) {
    check_no_boundary_self_intersection(boundary_nodes, boundary_edges);
    Cdt cdt(boundary_nodes);
    for (const auto& e : boundary_edges) cdt.add_constraint(3 + e.a, 3 + e.b);
    cdt.classify();
    cdt.refine(sizing, 0.45);
    cdt.smooth(5, static_cast<int>(boundary_nodes.size()));

    TriMesh out = cdt.extract(static_cast<int>(boundary_nodes.size()));
    out.boundary_edges = boundary_edges;
    out.crack_polyline = crack_polyline;
    // CCW orientation of every triangle
    for (auto& t : out.triangles) {
        if (orient(out.nodes[t[0]], out.nodes[t[1]], out.nodes[t[2]]) < 0.0)
            std::swap(t[1], t[2]);
    }
    check_mesh(out);
    return out;
}

TriMesh generate_notched_square(double h_far, double h_tip) {
    if (!(h_tip > 0.0) || !(h_tip <= h_far) || !(h_tip < 0.01))
        throw InvalidSizing("need 0 < h_tip <= h_far and h_tip < 0.01");

    const Vec2 tip_center{0.5, 0.5};
    const double r_tip = 0.01;
    SizingFn h = graded_sizing({0.49, 0.5}, h_tip, h_far, 0.35);

    std::vector<Vec2> pts;
    std::vector<BoundaryEdge> edges;
    auto add_chain = [&](const Vec2& p, const Vec2& q, BoundaryTag tag,
                         std::vector<int>* record) {
        // assumes pts.back() == p already present
        int start = static_cast<int>(pts.size()) - 1;
        auto mids = sample_segment(p, q, h);
        for (const auto& m : mids) pts.push_back(m);
        pts.push_back(q);
        for (int i = start; i + 1 < static_cast<int>(pts.size()); ++i) {
            edges.push_back({i, i + 1, tag});
            if (record) record->push_back(i + 1);
        }
    };

    // CCW loop around the material domain, starting at the origin.
    std::vector<int> crack;
    pts.push_back({0.0, 0.0});
    add_chain({0.0, 0.0}, {1.0, 0.0}, BoundaryTag::Bottom, nullptr);
    add_chain({1.0, 0.0}, {1.0, 0.49}, BoundaryTag::Right, nullptr);
    // crack traversed P2 -> tip -> P1 along the CCW loop
    crack.push_back(static_cast<int>(pts.size()) - 1);  // P2 = (1, 0.49)
    add_chain({1.0, 0.49}, {0.5, 0.49}, BoundaryTag::Crack, &crack);
    {   // semicircular tip, from (0.5,0.49) at -90 deg to (0.5,0.51) at +90 deg
        int n_arc = std::max(8, static_cast<int>(std::lround(M_PI * r_tip / h_tip)));
        int start = static_cast<int>(pts.size()) - 1;
        for (int i = 1; i < n_arc; ++i) {
            double ang = -M_PI / 2.0 - M_PI * static_cast<double>(i) / n_arc;
            pts.push_back({tip_center[0] + r_tip * std::cos(ang),
                           tip_center[1] + r_tip * std::sin(ang)});
        }
        pts.push_back({0.5, 0.51});
        for (int i = start; i + 1 < static_cast<int>(pts.size()); ++i) {
            edges.push_back({i, i + 1, BoundaryTag::Crack});
            crack.push_back(i + 1);
        }
    }
    add_chain({0.5, 0.51}, {1.0, 0.51}, BoundaryTag::Crack, &crack);
    add_chain({1.0, 0.51}, {1.0, 1.0}, BoundaryTag::Right, nullptr);
    add_chain({1.0, 1.0}, {0.0, 1.0}, BoundaryTag::Top, nullptr);
    add_chain({0.0, 1.0}, {0.0, 0.0}, BoundaryTag::Left, nullptr);
    // close the loop: last inserted q duplicates the origin
    pts.pop_back();
    edges.back().b = 0;

    // polyline is stored P1 -> P2
    std::reverse(crack.begin(), crack.end());

    return triangulate_boundary(pts, edges, crack, h);
}

TriMesh remesh(const TriMesh& mesh, double h_far, double h_tip) {
    // compact boundary nodes, preserving coordinates exactly
    std::vector<int> old2new(mesh.nodes.size(), -1);
    std::vector<Vec2> bpts;
    auto touch = [&](int v) {
        if (old2new[v] < 0) {
            old2new[v] = static_cast<int>(bpts.size());
            bpts.push_back(mesh.nodes[v]);
        }
        return old2new[v];
    };
    std::vector<BoundaryEdge> bedges;
    for (const auto& e : mesh.boundary_edges)
        bedges.push_back({touch(e.a), touch(e.b), e.tag});
    std::vector<int> crack;
    for (int v : mesh.crack_polyline) crack.push_back(touch(v));

    int tip_old = crack_tip_node(mesh);
    Vec2 tip = mesh.nodes[tip_old];
    SizingFn h = graded_sizing(tip, h_tip, h_far, 0.35);

    // Split boundary segments that have stretched past the local sizing by
    // inserting points on them. Existing boundary nodes stay at their exact
    // coordinates and the boundary curve is geometrically unchanged, but
    // without this the crack faces grow long segments that force sliver
    // triangles no retriangulation can fix.
    std::vector<BoundaryEdge> sedges;
    std::map<std::pair<int, int>, std::vector<int>> chain;  // (a,b) -> inserted ids
    for (const auto& e : bedges) {
        auto mids = sample_segment(bpts[e.a], bpts[e.b], h);
        int prev = e.a;
        auto& rec = chain[{e.a, e.b}];
        for (const auto& m : mids) {
            int id = static_cast<int>(bpts.size());
            bpts.push_back(m);
            rec.push_back(id);
            sedges.push_back({prev, id, e.tag});
            prev = id;
        }
        sedges.push_back({prev, e.b, e.tag});
    }
    std::vector<int> scrack;
    for (std::size_t k = 0; k < crack.size(); ++k) {
        scrack.push_back(crack[k]);
        if (k + 1 == crack.size()) break;
        auto it = chain.find({crack[k], crack[k + 1]});
        if (it != chain.end()) {
            scrack.insert(scrack.end(), it->second.begin(), it->second.end());
        } else if ((it = chain.find({crack[k + 1], crack[k]})) != chain.end()) {
            scrack.insert(scrack.end(), it->second.rbegin(), it->second.rend());
        }
    }
    return triangulate_boundary(bpts, sedges, scrack, h);
}

}  // namespace fracshape
