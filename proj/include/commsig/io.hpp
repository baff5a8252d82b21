#pragma once

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commsig/graph.hpp"

namespace commsig {

enum class WeightMode { unweighted, integer_weights, round_to_integer };

struct LoadOptions {
    WeightMode weight_mode = WeightMode::unweighted;
    bool allow_self_loops = false;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

namespace detail {

inline bool is_comment_or_blank(const std::string& line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

inline std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(std::move(tok));
    return out;
}

}  // namespace detail

/// Parses an edge-list stream: one edge per line, "u v" or "u v w", with
/// '#' comment lines. Node labels are arbitrary whitespace-free strings and
/// are mapped to dense ids in order of first appearance. Duplicate pairs
/// accumulate multiplicity.
inline Graph load_graph(std::istream& in, const LoadOptions& options = {}) {
    std::vector<std::string> labels;
    std::unordered_map<std::string, NodeId> index;
    std::vector<std::tuple<NodeId, NodeId, Count>> edges;

    auto intern = [&](const std::string& label) {
        auto it = index.find(label);
        if (it != index.end()) return it->second;
        NodeId id = static_cast<NodeId>(labels.size());
        labels.push_back(label);
        index.emplace(label, id);
        return id;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        auto tokens = detail::split_ws(line);
        if (tokens.size() < 2 || tokens.size() > 3)
            throw ParseError(line_no, "expected 'u v' or 'u v w'");

        NodeId u = intern(tokens[0]);
        NodeId v = intern(tokens[1]);
        if (u == v && !options.allow_self_loops) throw ParseError(line_no, "self-loop rejected");

        Count mult = 1;
        if (options.weight_mode != WeightMode::unweighted && tokens.size() == 3) {
            double w;
            try {
                std::size_t pos;
                w = std::stod(tokens[2], &pos);
                if (pos != tokens[2].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError(line_no, "bad weight '" + tokens[2] + "'");
            }
            if (w < 0) throw ParseError(line_no, "negative weight");
            if (options.weight_mode == WeightMode::integer_weights) {
                if (w != std::floor(w)) throw ParseError(line_no, "non-integer weight");
                mult = static_cast<Count>(w);
                if (mult == 0) throw ParseError(line_no, "zero weight");
            } else {
                mult = static_cast<Count>(std::floor(w + 0.5));  // half-up
                if (mult == 0) continue;  // rounds away; endpoints stay as nodes
            }
        }
        edges.emplace_back(u, v, mult);
    }
    return Graph(std::move(labels), edges, options.allow_self_loops);
}

inline Graph load_graph_file(const std::string& path, const LoadOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    return load_graph(in, options);
}

inline void write_graph(std::ostream& out, const Graph& graph) {
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        for (const Neighbor& nb : graph.neighbors(u)) {
            if (nb.node < u) continue;
            if (nb.multiplicity == 1)
                out << graph.label(u) << ' ' << graph.label(nb.node) << '\n';
            else
                out << graph.label(u) << ' ' << graph.label(nb.node) << ' ' << nb.multiplicity
                    << '\n';
        }
    }
}

/// Reads groups from JSON Lines ({"id": ..., "nodes": [labels]}) or TSV
/// (id <TAB> space-separated labels); the format is detected per line.
/// '#' comment lines are skipped in both formats.
inline std::vector<Group> load_groups(std::istream& in, const Graph& graph) {
    std::vector<Group> groups;
    std::string line;
    std::size_t line_no = 0;
    auto resolve = [&](const std::string& label) {
        auto id = graph.find(label);
        if (!id) throw ParseError(line_no, "unknown node label '" + label + "'");
        return *id;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_comment_or_blank(line)) continue;
        std::string id;
        std::vector<NodeId> members;
        auto first = line.find_first_not_of(" \t\r");
        if (line[first] == '{') {
            nlohmann::json obj;
            try {
                obj = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(line_no, e.what());
            }
            if (!obj.contains("id") || !obj.contains("nodes"))
                throw ParseError(line_no, "group object needs 'id' and 'nodes'");
            id = obj["id"].is_string() ? obj["id"].get<std::string>() : obj["id"].dump();
            for (const auto& node : obj["nodes"]) {
                std::string label =
                    node.is_string() ? node.get<std::string>() : node.dump();
                members.push_back(resolve(label));
            }
        } else {
            auto tab = line.find('\t');
            if (tab == std::string::npos) throw ParseError(line_no, "expected JSON object or TSV");
            id = line.substr(0, tab);
            for (const auto& label : detail::split_ws(line.substr(tab + 1)))
                members.push_back(resolve(label));
        }
        try {
            groups.push_back(make_group(std::move(id), std::move(members), graph.node_count()));
        } catch (const std::exception& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return groups;
}

inline std::vector<Group> load_groups_file(const std::string& path, const Graph& graph) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open group file: " + path);
    return load_groups(in, graph);
}

inline void write_groups(std::ostream& out, const std::vector<Group>& groups,
                         const Graph& graph) {
    for (const Group& g : groups) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (NodeId v : g.members) nodes.push_back(graph.label(v));
        nlohmann::ordered_json obj;
        obj["id"] = g.id;
        obj["nodes"] = std::move(nodes);
        out << obj.dump() << '\n';
    }
}

}  // namespace commsig
