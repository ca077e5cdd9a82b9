#include "imscale/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace imscale {

std::string format_double(double value) {
    char buffer[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
        if (std::strtod(buffer, nullptr) == value)
            break;
    }
    return buffer;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    return in;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double(const std::string& text, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str())
        throw std::runtime_error(std::string("malformed ") + what + ": " + text);
    return v;
}

std::int64_t parse_int(const std::string& text, const char* what) {
    char* end = nullptr;
    const std::int64_t v = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str())
        throw std::runtime_error(std::string("malformed ") + what + ": " + text);
    return v;
}

}  // namespace

void write_front_csv(const Front& front, const Graph& id_space, std::ostream& out) {
    out << "influence_fraction,seed_fraction,seed_nodes\n";
    for (const FrontEntry& entry : front) {
        out << format_double(entry.point.influence_fraction) << ','
            << format_double(entry.point.seed_fraction) << ',';
        for (std::size_t i = 0; i < entry.seeds.size(); ++i) {
            if (i > 0)
                out << ';';
            out << id_space.label(entry.seeds[i]);
        }
        out << '\n';
    }
}

void write_front_csv_file(const Front& front, const Graph& id_space, const std::string& path) {
    auto out = open_out(path);
    write_front_csv(front, id_space, out);
}

Front read_front_csv(std::istream& in, const Graph& id_space) {
    Front front;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (first) {
            first = false;
            if (line.rfind("influence_fraction", 0) == 0)
                continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 3)
            throw std::runtime_error("front CSV row needs 3 fields: " + line);
        FrontEntry entry;
        entry.point.influence_fraction = parse_double(fields[0], "influence_fraction");
        entry.point.seed_fraction = parse_double(fields[1], "seed_fraction");
        for (const std::string& token : split(fields[2], ';')) {
            if (token.empty())
                continue;
            const std::int64_t label = parse_int(token, "seed node");
            const auto node = id_space.find_label(label);
            if (!node)
                throw std::runtime_error("seed label not in graph: " + token);
            entry.seeds.push_back(*node);
        }
        front.push_back(std::move(entry));
    }
    return front;
}

Front read_front_csv_file(const std::string& path, const Graph& id_space) {
    auto in = open_in(path);
    return read_front_csv(in, id_space);
}

std::vector<Fitness> read_front_points_file(const std::string& path) {
    auto in = open_in(path);
    std::vector<Fitness> points;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (first) {
            first = false;
            if (line.rfind("influence_fraction", 0) == 0)
                continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() < 2)
            throw std::runtime_error("front CSV row needs at least 2 fields: " + line);
        points.push_back({parse_double(fields[0], "influence_fraction"),
                          parse_double(fields[1], "seed_fraction")});
    }
    return points;
}

void write_partition_csv(const Partition& p, const Graph& g, std::ostream& out) {
    out << "node_id,community_id\n";
    for (NodeId v = 0; v < g.node_count(); ++v)
        out << g.label(v) << ',' << p.assignment[v] << '\n';
}

void write_partition_csv_file(const Partition& p, const Graph& g, const std::string& path) {
    auto out = open_out(path);
    write_partition_csv(p, g, out);
}

std::pair<Graph, Partition> load_graph_with_partition(const std::string& edges_path,
                                                      const std::string& partition_path) {
    auto pin = open_in(partition_path);
    std::vector<std::pair<std::int64_t, std::uint32_t>> rows;
    std::string line;
    bool first = true;
    while (std::getline(pin, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (first) {
            first = false;
            if (line.rfind("node_id", 0) == 0)
                continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 2)
            throw std::runtime_error("partition CSV row needs 2 fields: " + line);
        rows.emplace_back(parse_int(fields[0], "node_id"),
                          static_cast<std::uint32_t>(parse_int(fields[1], "community_id")));
    }
    if (rows.empty())
        throw std::runtime_error("partition CSV is empty: " + partition_path);
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first)
            throw std::runtime_error("duplicate node id in partition CSV");
    }

    std::vector<std::int64_t> labels(rows.size());
    std::vector<std::uint32_t> assignment(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        labels[i] = rows[i].first;
        assignment[i] = rows[i].second;
    }

    auto ein = open_in(edges_path);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::size_t line_no = 0;
    const auto to_internal = [&labels](std::int64_t ext, std::size_t line_number) {
        const auto it = std::lower_bound(labels.begin(), labels.end(), ext);
        if (it == labels.end() || *it != ext)
            throw std::runtime_error("edge endpoint missing from partition CSV (line " +
                                     std::to_string(line_number) + ")");
        return static_cast<NodeId>(it - labels.begin());
    };
    while (std::getline(ein, line)) {
        ++line_no;
        const std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#' || line[pos] == '%')
            continue;
        std::istringstream ls(line);
        std::int64_t u = 0, v = 0;
        if (!(ls >> u >> v))
            throw std::runtime_error("edge list parse error at line " + std::to_string(line_no));
        edges.emplace_back(to_internal(u, line_no), to_internal(v, line_no));
    }

    Graph g = Graph::from_edges(rows.size(), edges, std::move(labels));
    Partition p = Partition::from_assignment(std::move(assignment));
    if (g.edge_count() > 0)
        p.quality = modularity(g, p);
    return {std::move(g), std::move(p)};
}

void write_community_map_csv_file(const std::vector<std::uint32_t>& map, const std::string& path) {
    auto out = open_out(path);
    out << "scaled_community,original_community\n";
    for (std::size_t c = 0; c < map.size(); ++c)
        out << c << ',' << map[c] << '\n';
}

std::vector<std::uint32_t> read_community_map_csv_file(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::uint32_t> map;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (first) {
            first = false;
            if (line.rfind("scaled_community", 0) == 0)
                continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 2)
            throw std::runtime_error("community map row needs 2 fields: " + line);
        const auto scaled = static_cast<std::size_t>(parse_int(fields[0], "scaled_community"));
        if (scaled != map.size())
            throw std::runtime_error("community map rows must be contiguous from 0");
        map.push_back(static_cast<std::uint32_t>(parse_int(fields[1], "original_community")));
    }
    return map;
}

std::string file_content_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buffer[1 << 16];
    while (in) {
        in.read(buffer, sizeof(buffer));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buffer[i]);
            h *= 0x100000001b3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace imscale
