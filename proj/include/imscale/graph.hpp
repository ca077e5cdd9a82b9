#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace imscale {

using NodeId = std::uint32_t;

// Undirected simple graph with contiguous node ids 0..n-1 and sorted
// adjacency stored in CSR form. Immutable after construction; safe to share
// read-only across threads.
//
// Each node carries an external label: the id it had in the source edge list
// (identity for synthetic graphs). Labels are strictly increasing with the
// internal id, which makes label lookup a binary search and keeps edge-list
// round trips stable.
class Graph {
public:
    Graph() = default;

    // Builds from internal-id edges; self-loops and duplicates are dropped.
    // Labels default to the identity.
    static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges);
    static Graph from_edges(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                            std::vector<std::int64_t> labels);

    // Parses an edge-list stream: one "u v" pair per line, `#`/`%` comments
    // and blank lines skipped. External ids are remapped to 0..n-1 in
    // ascending order of the sorted distinct external ids. Throws
    // std::runtime_error with the line number on malformed input, and on
    // empty input.
    static Graph load_edge_list(std::istream& in);
    static Graph load_edge_list_file(const std::string& path);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    std::int64_t label(NodeId v) const { return labels_[v]; }
    std::span<const std::int64_t> labels() const { return labels_; }
    std::optional<NodeId> find_label(std::int64_t label) const;

    bool valid_node(NodeId v) const { return v < node_count(); }

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<std::int64_t> labels_;
    std::size_t edge_count_ = 0;
};

// Per-node degrees; sums to 2m.
std::vector<std::size_t> degree_sequence(const Graph& g);

// Connected components as sorted node lists, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

// Induced subgraph on `keep` (must be sorted, distinct, valid). Ids are
// recompacted in `keep` order; labels carry over. If old_to_new is given it
// receives a node_count()-sized map with kInvalidNode for dropped nodes.
inline constexpr NodeId kInvalidNode = static_cast<NodeId>(-1);
Graph induced_subgraph(const Graph& g, std::span<const NodeId> keep,
                       std::vector<NodeId>* old_to_new = nullptr);

// Writes one "label(u) label(v)" line per edge, u < v, in internal id order.
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list_file(const Graph& g, const std::string& path);

}  // namespace imscale
