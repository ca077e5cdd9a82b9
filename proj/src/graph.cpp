#include "imscale/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace imscale {

namespace {

std::vector<std::pair<NodeId, NodeId>> normalize_edges(
    std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::pair<NodeId, NodeId>> cleaned;
    cleaned.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        if (u == v)
            continue;  // self-loop
        if (u >= n || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        cleaned.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(cleaned.begin(), cleaned.end());
    cleaned.erase(std::unique(cleaned.begin(), cleaned.end()), cleaned.end());
    return cleaned;
}

}  // namespace

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges) {
    std::vector<std::int64_t> labels(n);
    for (std::size_t i = 0; i < n; ++i)
        labels[i] = static_cast<std::int64_t>(i);
    return from_edges(n, edges, std::move(labels));
}

Graph Graph::from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                        std::vector<std::int64_t> labels) {
    if (labels.size() != n)
        throw std::invalid_argument("label count does not match node count");
    const auto cleaned = normalize_edges(n, edges);

    Graph g;
    g.labels_ = std::move(labels);
    g.edge_count_ = cleaned.size();
    g.offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : cleaned) {
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i)
        g.offsets_[i + 1] += g.offsets_[i];
    g.neighbors_.resize(2 * cleaned.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v] : cleaned) {
        g.neighbors_[cursor[u]++] = v;
        g.neighbors_[cursor[v]++] = u;
    }
    // Both endpoints were inserted in ascending (u, v) order, so every
    // adjacency list is already sorted.
    return g;
}

Graph Graph::load_edge_list(std::istream& in) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos)
            continue;
        if (line[pos] == '#' || line[pos] == '%')
            continue;
        const char* cursor = line.c_str() + pos;
        char* end = nullptr;
        errno = 0;
        const std::int64_t u = std::strtoll(cursor, &end, 10);
        if (end == cursor || errno != 0)
            throw std::runtime_error("edge list parse error at line " + std::to_string(line_no));
        cursor = end;
        const std::int64_t v = std::strtoll(cursor, &end, 10);
        if (end == cursor || errno != 0)
            throw std::runtime_error("edge list parse error at line " + std::to_string(line_no));
        // Only trailing whitespace may follow the two tokens.
        for (const char* p = end; *p != '\0'; ++p) {
            if (*p != ' ' && *p != '\t' && *p != '\r')
                throw std::runtime_error("edge list parse error at line " +
                                         std::to_string(line_no));
        }
        raw.emplace_back(u, v);
    }
    if (raw.empty())
        throw std::runtime_error("edge list is empty");

    std::vector<std::int64_t> ids;
    ids.reserve(raw.size() * 2);
    for (const auto& [u, v] : raw) {
        ids.push_back(u);
        ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    const auto to_internal = [&ids](std::int64_t ext) {
        const auto it = std::lower_bound(ids.begin(), ids.end(), ext);
        return static_cast<NodeId>(it - ids.begin());
    };
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(raw.size());
    for (const auto& [u, v] : raw)
        edges.emplace_back(to_internal(u), to_internal(v));
    const std::size_t n = ids.size();
    return from_edges(n, edges, std::move(ids));
}

Graph Graph::load_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open edge list: " + path);
    return load_edge_list(in);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto nbrs = neighbors(u);
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::optional<NodeId> Graph::find_label(std::int64_t label) const {
    const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
        return std::nullopt;
    return static_cast<NodeId>(it - labels_.begin());
}

std::vector<std::size_t> degree_sequence(const Graph& g) {
    std::vector<std::size_t> degrees(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v)
        degrees[v] = g.degree(v);
    return degrees;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<NodeId>> components;
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < n; ++start) {
        if (seen[start])
            continue;
        std::vector<NodeId> comp;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const NodeId v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (const NodeId w : g.neighbors(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
    }
    return components;
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> keep,
                       std::vector<NodeId>* old_to_new) {
    std::vector<NodeId> map(g.node_count(), kInvalidNode);
    std::vector<std::int64_t> labels(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const NodeId v = keep[i];
        if (!g.valid_node(v) || map[v] != kInvalidNode)
            throw std::invalid_argument("induced_subgraph: keep list invalid");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw std::invalid_argument("induced_subgraph: keep list must be sorted");
        map[v] = static_cast<NodeId>(i);
        labels[i] = g.label(v);
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (const NodeId u : keep) {
        for (const NodeId v : g.neighbors(u)) {
            if (u < v && map[v] != kInvalidNode)
                edges.emplace_back(map[u], map[v]);
        }
    }
    if (old_to_new)
        *old_to_new = std::move(map);
    return Graph::from_edges(keep.size(), edges, std::move(labels));
}

void write_edge_list(const Graph& g, std::ostream& out) {
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const NodeId v : g.neighbors(u)) {
            if (u < v)
                out << g.label(u) << ' ' << g.label(v) << '\n';
        }
    }
}

void write_edge_list_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write edge list: " + path);
    write_edge_list(g, out);
}

}  // namespace imscale
