#include "fracshape/msh_io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fracshape/errors.hpp"

namespace fracshape {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

BoundaryTag tag_from_name(const std::string& name) {
    std::string n = lower(name);
    if (n == "bottom") return BoundaryTag::Bottom;
    if (n == "top") return BoundaryTag::Top;
    if (n == "left") return BoundaryTag::Left;
    if (n == "right") return BoundaryTag::Right;
    if (n == "crack") return BoundaryTag::Crack;
    throw UnknownTag("unknown physical name '" + name + "'");
}

std::string next_line(std::istream& in, const char* what) {
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty()) return line;
    }
    throw MalformedFile(std::string("unexpected end of file while reading ") + what);
}

}  // namespace

TriMesh read_msh(std::istream& in) {
    std::map<int, BoundaryTag> phys_tag;  // physical id -> tag
    std::map<long, int> node_remap;       // msh node id -> index
    TriMesh mesh;
    bool saw_nodes = false, saw_elements = false;

    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line == "$MeshFormat") {
            std::istringstream fs(next_line(in, "$MeshFormat"));
            double version = 0.0;
            int file_type = -1, data_size = 0;
            if (!(fs >> version >> file_type >> data_size))
                throw MalformedFile("bad $MeshFormat line");
            if (version < 2.0 || version >= 3.0 || file_type != 0)
                throw MalformedFile("only MSH 2.x ASCII is supported");
            if (next_line(in, "$EndMeshFormat") != "$EndMeshFormat")
                throw MalformedFile("missing $EndMeshFormat");
        } else if (line == "$PhysicalNames") {
            int count = 0;
            std::istringstream hs(next_line(in, "$PhysicalNames"));
            if (!(hs >> count)) throw MalformedFile("bad $PhysicalNames count");
            for (int i = 0; i < count; ++i) {
                std::istringstream ls(next_line(in, "$PhysicalNames entry"));
                int dim = 0, id = 0;
                std::string name;
                if (!(ls >> dim >> id >> name)) throw MalformedFile("bad physical name entry");
                if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
                    name = name.substr(1, name.size() - 2);
                if (dim == 1) phys_tag[id] = tag_from_name(name);
            }
            if (next_line(in, "$EndPhysicalNames") != "$EndPhysicalNames")
                throw MalformedFile("missing $EndPhysicalNames");
        } else if (line == "$Nodes") {
            long count = 0;
            std::istringstream hs(next_line(in, "$Nodes"));
            if (!(hs >> count) || count < 0) throw MalformedFile("bad $Nodes count");
            for (long i = 0; i < count; ++i) {
                std::istringstream ls(next_line(in, "node"));
                long id = 0;
                double x = 0, y = 0, z = 0;
                if (!(ls >> id >> x >> y >> z)) throw MalformedFile("bad node line");
                node_remap[id] = mesh.node_count();
                mesh.nodes.push_back({x, y});
            }
            if (next_line(in, "$EndNodes") != "$EndNodes")
                throw MalformedFile("missing $EndNodes (truncated node section?)");
            saw_nodes = true;
        } else if (line == "$Elements") {
            long count = 0;
            std::istringstream hs(next_line(in, "$Elements"));
            if (!(hs >> count) || count < 0) throw MalformedFile("bad $Elements count");
            for (long i = 0; i < count; ++i) {
                std::istringstream ls(next_line(in, "element"));
                long id = 0;
                int type = 0, ntags = 0;
                if (!(ls >> id >> type >> ntags)) throw MalformedFile("bad element line");
                std::vector<int> tags(ntags);
                for (int k = 0; k < ntags; ++k)
                    if (!(ls >> tags[k])) throw MalformedFile("bad element tags");
                auto node = [&](long msh_id) {
                    auto it = node_remap.find(msh_id);
                    if (it == node_remap.end())
                        throw MalformedFile("element references unknown node");
                    return it->second;
                };
                if (type == 1) {
                    long a = 0, b = 0;
                    if (!(ls >> a >> b)) throw MalformedFile("bad line element");
                    if (ntags < 1) throw MalformedFile("line element without physical tag");
                    auto it = phys_tag.find(tags[0]);
                    if (it == phys_tag.end())
                        throw UnknownTag("line element with unnamed physical id " +
                                         std::to_string(tags[0]));
                    mesh.boundary_edges.push_back({node(a), node(b), it->second});
                } else if (type == 2) {
                    long a = 0, b = 0, c = 0;
                    if (!(ls >> a >> b >> c)) throw MalformedFile("bad triangle element");
                    mesh.triangles.push_back({node(a), node(b), node(c)});
                } else if (type == 15) {
                    // point elements are ignored
                } else {
                    throw MalformedFile("unsupported element type " + std::to_string(type));
                }
            }
            if (next_line(in, "$EndElements") != "$EndElements")
                throw MalformedFile("missing $EndElements");
            saw_elements = true;
        }
        // unknown sections are skipped line by line
    }
    if (!saw_nodes || !saw_elements)
        throw MalformedFile("missing $Nodes or $Elements section");

    for (auto& t : mesh.triangles) {
        Vec2 ab = mesh.nodes[t[1]] - mesh.nodes[t[0]];
        Vec2 ac = mesh.nodes[t[2]] - mesh.nodes[t[0]];
        if (cross(ab, ac) < 0.0) std::swap(t[1], t[2]);
    }

    // chain Crack edges into a single open path
    std::map<int, std::vector<int>> adj;
    int crack_edge_count = 0;
    for (const auto& e : mesh.boundary_edges)
        if (e.tag == BoundaryTag::Crack) {
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
            ++crack_edge_count;
        }
    if (crack_edge_count > 0) {
        std::vector<int> ends;
        for (const auto& [v, nb] : adj) {
            if (nb.size() > 2) throw DisconnectedCrack("crack edges branch at a node");
            if (nb.size() == 1) ends.push_back(v);
        }
        if (ends.size() != 2)
            throw DisconnectedCrack("crack edges do not form a single open path");
        // deterministic start: endpoint with larger y, then larger x (= P1
        // for the benchmark geometry)
        auto key = [&](int v) { return std::pair{mesh.nodes[v][1], mesh.nodes[v][0]}; };
        int start = key(ends[0]) >= key(ends[1]) ? ends[0] : ends[1];
        int prev = -1, cur = start;
        mesh.crack_polyline.push_back(cur);
        while (true) {
            const auto& nb = adj[cur];
            int nxt = -1;
            for (int v : nb)
                if (v != prev) nxt = v;
            if (nxt < 0) break;
            mesh.crack_polyline.push_back(nxt);
            prev = cur;
            cur = nxt;
        }
        if (mesh.crack_polyline.size() != static_cast<std::size_t>(crack_edge_count) + 1)
            throw DisconnectedCrack("crack path does not cover all crack edges");
    }

    try {
        check_mesh(mesh);
    } catch (const std::exception& e) {
        throw MalformedFile(std::string("mesh invariants violated: ") + e.what());
    }
    return mesh;
}

}  // namespace fracshape
