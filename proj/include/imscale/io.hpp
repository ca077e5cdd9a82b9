#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "imscale/community.hpp"
#include "imscale/front.hpp"
#include "imscale/graph.hpp"

namespace imscale {

// Shortest-width representation that parses back to the same double.
std::string format_double(double value);

// Front CSV: header plus one row per point,
//   influence_fraction,seed_fraction,seed_nodes
// with seed nodes as semicolon-separated external labels.
void write_front_csv(const Front& front, const Graph& id_space, std::ostream& out);
void write_front_csv_file(const Front& front, const Graph& id_space, const std::string& path);
Front read_front_csv(std::istream& in, const Graph& id_space);
Front read_front_csv_file(const std::string& path, const Graph& id_space);

// Points-only reader for fronts evaluated without a graph at hand.
std::vector<Fitness> read_front_points_file(const std::string& path);

// Partition CSV: header plus one `node_id,community_id` row per node, with
// node ids as external labels.
void write_partition_csv(const Partition& p, const Graph& g, std::ostream& out);
void write_partition_csv_file(const Partition& p, const Graph& g, const std::string& path);

// Rebuilds a graph and its partition from an edge list plus a partition CSV.
// The partition rows define the node universe, so nodes that are isolated in
// the edge list survive the round trip.
std::pair<Graph, Partition> load_graph_with_partition(const std::string& edges_path,
                                                      const std::string& partition_path);

// Community map CSV: `scaled_community,original_community`.
void write_community_map_csv_file(const std::vector<std::uint32_t>& map, const std::string& path);
std::vector<std::uint32_t> read_community_map_csv_file(const std::string& path);

// FNV-1a 64 content hash, as fixed-width hex.
std::string file_content_hash(const std::string& path);

}  // namespace imscale
