#include "fracshape/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <limits>
#include <utility>

#include "fracshape/errors.hpp"

namespace fracshape {

namespace {
std::pair<int, int> ekey(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }
}  // namespace

double crack_length(const TriMesh& mesh) {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < mesh.crack_polyline.size(); ++i) {
        const Vec2& a = mesh.nodes[mesh.crack_polyline[i]];
        const Vec2& b = mesh.nodes[mesh.crack_polyline[i + 1]];
        len += norm(b - a);
    }
    return len;
}

CurveGeometry curve_geometry(const TriMesh& mesh) {
    const auto& poly = mesh.crack_polyline;
    const std::size_t n = poly.size();
    if (n < 3) throw std::runtime_error("curve_geometry: crack_polyline needs >= 3 nodes");

    CurveGeometry geo;
    geo.segment_length.resize(n - 1);
    std::vector<Vec2> tangent(n - 1);  // unit, along P1->P2 traversal
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Vec2 d = mesh.nodes[poly[i + 1]] - mesh.nodes[poly[i]];
        double len = norm(d);
        if (len < 1e-14) throw DegenerateSegment("crack segment " + std::to_string(i));
        geo.segment_length[i] = len;
        tangent[i] = (1.0 / len) * d;
    }

    geo.normal.resize(n);
    geo.curvature.resize(n);
    geo.turning_angle.resize(n);
    geo.node_weight.resize(n);
    auto rot90 = [](const Vec2& t) { return Vec2{-t[1], t[0]}; };  // outward normal of Omega

    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            geo.normal[i] = rot90(tangent[0]);
            geo.turning_angle[i] = 0.0;
            geo.node_weight[i] = 0.5 * geo.segment_length[0];
            geo.curvature[i] = 0.0;  // one-sided: no turning information
        } else if (i == n - 1) {
            geo.normal[i] = rot90(tangent[n - 2]);
            geo.turning_angle[i] = 0.0;
            geo.node_weight[i] = 0.5 * geo.segment_length[n - 2];
            geo.curvature[i] = 0.0;
        } else {
            Vec2 avg = rot90(tangent[i - 1]) + rot90(tangent[i]);
            double len = norm(avg);
            if (len < 1e-14) throw DegenerateSegment("cusp at crack node " + std::to_string(i));
            geo.normal[i] = (1.0 / len) * avg;
            // signed turning angle from incoming to outgoing tangent (CCW positive)
            double theta = std::atan2(cross(tangent[i - 1], tangent[i]), dot(tangent[i - 1], tangent[i]));
            double w = 0.5 * (geo.segment_length[i - 1] + geo.segment_length[i]);
            geo.turning_angle[i] = theta;
            geo.node_weight[i] = w;
            geo.curvature[i] = -theta / w;
        }
    }
    return geo;
}

double triangle_quality(const Vec2& a, const Vec2& b, const Vec2& c) {
    double la = norm(b - c), lb = norm(c - a), lc = norm(a - b);
    double area = 0.5 * cross(b - a, c - a);
    if (area <= 0.0) return 0.0;
    double s = 0.5 * (la + lb + lc);
    double r_in = area / s;
    double r_circ = la * lb * lc / (4.0 * area);
    return 2.0 * r_in / r_circ;
}

double mesh_quality(const TriMesh& mesh) {
    double q = 1.0;
    for (const auto& t : mesh.triangles)
        q = std::min(q, triangle_quality(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]));
    return q;
}

TriMesh deform(const TriMesh& mesh, const NodalVectorField& V, double alpha) {
    if (V.size() != mesh.nodes.size())
        throw std::runtime_error("deform: field size mismatch");
    TriMesh out = mesh;
    for (std::size_t i = 0; i < out.nodes.size(); ++i)
        out.nodes[i] = out.nodes[i] + alpha * V[i];
    for (int t = 0; t < out.triangle_count(); ++t)
        if (out.signed_area(t) <= 0.0)
            throw ElementInversion("triangle " + std::to_string(t) + " inverted");
    return out;
}

TriMesh uniform_refine(const TriMesh& mesh) {
    TriMesh out;
    out.nodes = mesh.nodes;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
        auto key = ekey(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        int idx = out.node_count();
        out.nodes.push_back(0.5 * (mesh.nodes[a] + mesh.nodes[b]));
        midpoint.emplace(key, idx);
        return idx;
    };
    for (const auto& t : mesh.triangles) {
        int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
        out.triangles.push_back({t[0], m01, m20});
        out.triangles.push_back({t[1], m12, m01});
        out.triangles.push_back({t[2], m20, m12});
        out.triangles.push_back({m01, m12, m20});
    }
    for (const auto& e : mesh.boundary_edges) {
        int m = mid(e.a, e.b);
        out.boundary_edges.push_back({e.a, m, e.tag});
        out.boundary_edges.push_back({m, e.b, e.tag});
    }
    for (std::size_t i = 0; i + 1 < mesh.crack_polyline.size(); ++i) {
        int a = mesh.crack_polyline[i], b = mesh.crack_polyline[i + 1];
        out.crack_polyline.push_back(a);
        out.crack_polyline.push_back(mid(a, b));
    }
    if (!mesh.crack_polyline.empty())
        out.crack_polyline.push_back(mesh.crack_polyline.back());
    return out;
}

void check_mesh(const TriMesh& mesh) {
    for (int t = 0; t < mesh.triangle_count(); ++t)
        if (mesh.signed_area(t) <= 0.0)
            throw std::runtime_error("non-positive triangle area at " + std::to_string(t));

    // edge -> incident triangle count
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            auto key = ekey(t[k], t[(k + 1) % 3]);
            edge_count[key]++;
        }
    for (const auto& [e, c] : edge_count)
        if (c > 2)
            throw std::runtime_error("edge shared by more than two triangles");

    std::set<std::pair<int, int>> tagged;
    for (const auto& be : mesh.boundary_edges) {
        auto key = ekey(be.a, be.b);
        auto it = edge_count.find(key);
        if (it == edge_count.end() || it->second != 1)
            throw std::runtime_error("tagged boundary edge not a topological boundary edge");
        tagged.insert(key);
    }
    for (const auto& [e, c] : edge_count)
        if (c == 1 && !tagged.count(e))
            throw std::runtime_error("topological boundary edge without tag");

    // crack polyline: distinct nodes, consecutive pairs are Crack edges
    std::set<std::pair<int, int>> crack_edges;
    for (const auto& be : mesh.boundary_edges)
        if (be.tag == BoundaryTag::Crack) crack_edges.insert(ekey(be.a, be.b));
    std::set<int> seen;
    for (int v : mesh.crack_polyline)
        if (!seen.insert(v).second)
            throw std::runtime_error("repeated node in crack_polyline");
    for (std::size_t i = 0; i + 1 < mesh.crack_polyline.size(); ++i) {
        auto key = ekey(mesh.crack_polyline[i], mesh.crack_polyline[i + 1]);
        if (!crack_edges.count(key))
            throw std::runtime_error("crack_polyline segment is not a Crack boundary edge");
    }
    if (mesh.crack_polyline.size() >= 2 && crack_edges.size() != mesh.crack_polyline.size() - 1)
        throw std::runtime_error("Crack edges not covered by crack_polyline");
}

double domain_area(const TriMesh& mesh) {
    double area = 0.0;
    for (int t = 0; t < mesh.triangle_count(); ++t) area += mesh.signed_area(t);
    return area;
}

double slit_area(const TriMesh& mesh) {
    const auto& poly = mesh.crack_polyline;
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& p = mesh.nodes[poly[i]];
        const Vec2& q = mesh.nodes[poly[(i + 1) % poly.size()]];  // wraps P2 -> P1
        twice += cross(p, q);
    }
    return std::abs(0.5 * twice);
}

double mean_edge_length(const TriMesh& mesh) {
    std::set<std::pair<int, int>> edges;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) edges.insert(ekey(t[k], t[(k + 1) % 3]));
    double sum = 0.0;
    for (const auto& [a, b] : edges) sum += norm(mesh.nodes[b] - mesh.nodes[a]);
    return edges.empty() ? 0.0 : sum / static_cast<double>(edges.size());
}

double edge_length_quantile(const TriMesh& mesh, double q) {
    std::set<std::pair<int, int>> edges;
    for (const auto& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) edges.insert(ekey(t[k], t[(k + 1) % 3]));
    std::vector<double> len;
    len.reserve(edges.size());
    for (const auto& [a, b] : edges) len.push_back(norm(mesh.nodes[b] - mesh.nodes[a]));
    if (len.empty()) return 0.0;
    auto nth = len.begin() + static_cast<std::ptrdiff_t>(q * (len.size() - 1));
    std::nth_element(len.begin(), nth, len.end());
    return *nth;
}

int crack_tip_node(const TriMesh& mesh) {
    int best = -1;
    double best_x = std::numeric_limits<double>::infinity();
    for (int v : mesh.crack_polyline)
        if (mesh.nodes[v][0] < best_x) {
            best_x = mesh.nodes[v][0];
            best = v;
        }
    return best;
}

}  // namespace fracshape
