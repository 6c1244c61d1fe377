#include "twindesc/constellation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "twindesc/aas.hpp"

namespace twindesc {

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string render_dot(const Constellation& c, const Slice* highlight) {
    const std::size_t n = c.nodes.size();

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(c.nodes[i].name, i);

    IdShortPool pool;
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = pool.allocate(c.nodes[i].name);

    std::set<std::string> highlighted;
    if (highlight != nullptr) highlighted.insert(highlight->nodes.begin(), highlight->nodes.end());

    std::ostringstream out;
    out << "digraph constellation {\n";
    out << "  rankdir=BT;\n";
    out << "  node [shape=box];\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << "  " << ids[i] << " [label=\"" << dot_escape(c.nodes[i].name) << "\"";
        if (highlighted.count(c.nodes[i].name)) {
            out << ", style=filled, fillcolor=lightgrey";
        }
        out << "];\n";
    }
    for (NodeKind kind : {NodeKind::Usage, NodeKind::Enabler, NodeKind::ModelData}) {
        bool any = false;
        std::ostringstream group;
        group << "  { rank=same;";
        for (std::size_t i = 0; i < n; ++i) {
            if (c.nodes[i].kind != kind) continue;
            group << " " << ids[i] << ";";
            any = true;
        }
        group << " }\n";
        if (any) out << group.str();
    }
    for (const auto& e : c.edges) {
        auto s = index.find(e.source);
        auto t = index.find(e.target);
        if (s == index.end() || t == index.end()) continue;  // undeclared, flagged by validate
        out << "  " << ids[s->second] << " -> " << ids[t->second] << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace

Slice extract_slice(const Constellation& c, std::string_view usage) {
    const std::size_t n = c.nodes.size();
    const std::size_t start = c.node_index(usage);
    if (start == Constellation::npos) {
        throw Error("unknown node \"" + std::string(usage) + "\"");
    }
    if (c.nodes[start].kind != NodeKind::Usage) {
        throw Error("node \"" + std::string(usage) + "\" is not a usage");
    }

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(c.nodes[i].name, i);

    std::vector<std::vector<std::size_t>> pred(n);
    for (const auto& e : c.edges) {
        auto s = index.find(e.source);
        auto t = index.find(e.target);
        if (s == index.end() || t == index.end()) continue;
        pred[t->second].push_back(s->second);
    }

    std::vector<char> visited(n, 0);
    visited[start] = 1;
    std::vector<std::size_t> work = {start};
    while (!work.empty()) {
        const std::size_t v = work.back();
        work.pop_back();
        for (std::size_t w : pred[v]) {
            if (!visited[w]) {
                visited[w] = 1;
                work.push_back(w);
            }
        }
    }

    Slice slice;
    slice.usage = std::string(usage);
    for (std::size_t i = 0; i < n; ++i) {
        if (visited[i]) slice.nodes.push_back(c.nodes[i].name);
    }
    for (const auto& e : c.edges) {
        auto s = index.find(e.source);
        auto t = index.find(e.target);
        if (s == index.end() || t == index.end()) continue;
        if (visited[s->second] && visited[t->second]) slice.edges.push_back(e);
    }
    return slice;
}

std::vector<Slice> enumerate_slices(const Constellation& c) {
    std::vector<Slice> slices;
    for (const auto& node : c.nodes) {
        if (node.kind == NodeKind::Usage) slices.push_back(extract_slice(c, node.name));
    }
    return slices;
}

std::string to_dot(const Constellation& c) {
    return render_dot(c, nullptr);
}

std::string to_dot(const Constellation& c, const Slice& highlight) {
    return render_dot(c, &highlight);
}

}  // namespace twindesc
