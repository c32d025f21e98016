#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "spcops/errors.hpp"
#include "spcops/graph.hpp"
#include "spcops/simulate.hpp"
#include "spcops/solver.hpp"
#include "spcops/strategy.hpp"

namespace spcops {

using json = nlohmann::json;

struct graph_file_error : argument_error {
    using argument_error::argument_error;
};

namespace detail {

// Line number (1-based) of each element of the top-level "edges" array.
// Assumes the text already parsed as JSON.
inline std::vector<int> edge_lines(std::string_view text) {
    std::vector<int> lines;
    int depth = 0, line = 1, edges_depth = -1;
    bool in_string = false, escaped = false, expect_edges = false;
    std::string current, last_string;
    for (char c : text) {
        if (in_string) {
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"') {
                in_string = false;
                if (depth == 1)
                    last_string = current;
            } else
                current.push_back(c);
            continue;
        }
        switch (c) {
        case '\n': ++line; break;
        case '"':
            in_string = true;
            current.clear();
            break;
        case ':':
            expect_edges = depth == 1 && last_string == "edges";
            break;
        case '[':
        case '{':
            ++depth;
            if (c == '[' && expect_edges && depth == 2)
                edges_depth = 2;
            else if (edges_depth != -1 && depth == edges_depth + 1)
                lines.push_back(line);
            expect_edges = false;
            break;
        case ']':
        case '}':
            if (depth == edges_depth)
                edges_depth = -1;
            --depth;
            break;
        default: break;
        }
    }
    return lines;
}

} // namespace detail

/// Parses {"n": N, "edges": [[a, b], ...]}. Self-loops, repeated edges and
/// out-of-range ids are rejected with the line of the offending edge.
inline Graph parse_graph_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw graph_file_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges"))
        throw graph_file_error("graph file must be an object with \"n\" and \"edges\"");
    if (!doc["n"].is_number_integer() || doc["n"].get<long long>() < 0)
        throw graph_file_error("\"n\" must be a non-negative integer");
    if (!doc["edges"].is_array())
        throw graph_file_error("\"edges\" must be an array");
    const int n = doc["n"].get<int>();
    const auto lines = detail::edge_lines(text);
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::set<std::pair<Vertex, Vertex>> seen;
    const auto& arr = doc["edges"];
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string where = "line " + std::to_string(i < lines.size() ? lines[i] : 0) + ": edges[" +
                                  std::to_string(i) + "]";
        const auto& e = arr[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            throw graph_file_error(where + " must be a pair of integers");
        Vertex a = e[0].get<Vertex>(), b = e[1].get<Vertex>();
        if (a < 0 || b < 0 || a >= n || b >= n)
            throw graph_file_error(where + " = [" + std::to_string(a) + "," + std::to_string(b) +
                                   "] is outside 0.." + std::to_string(n - 1));
        if (a == b)
            throw graph_file_error(where + " is a self-loop at " + std::to_string(a));
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
            throw graph_file_error(where + " repeats edge " + std::to_string(a) + "-" + std::to_string(b));
        edges.emplace_back(a, b);
    }
    return Graph(n, std::move(edges));
}

/// Whitespace-separated "a b" lines; '#' starts a comment. An optional
/// "n N" line fixes the vertex count, otherwise it is the largest id + 1.
inline Graph parse_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0, n = -1, max_id = -1;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::set<std::pair<Vertex, Vertex>> seen;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream ls(raw);
        std::string first;
        if (!(ls >> first))
            continue;
        const std::string where = "line " + std::to_string(line_no);
        if (first == "n") {
            if (!(ls >> n) || n < 0)
                throw graph_file_error(where + ": bad vertex count");
            continue;
        }
        Vertex a, b;
        try {
            a = std::stoi(first);
        } catch (const std::exception&) {
            throw graph_file_error(where + ": expected two vertex ids");
        }
        if (!(ls >> b))
            throw graph_file_error(where + ": expected two vertex ids");
        if (a < 0 || b < 0)
            throw graph_file_error(where + ": negative vertex id");
        if (a == b)
            throw graph_file_error(where + ": self-loop at " + std::to_string(a));
        if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
            throw graph_file_error(where + ": repeated edge " + std::to_string(a) + "-" + std::to_string(b));
        max_id = std::max({max_id, a, b});
        edges.emplace_back(a, b);
    }
    if (n == -1)
        n = max_id + 1;
    if (max_id >= n)
        throw graph_file_error("edge endpoint " + std::to_string(max_id) + " exceeds n = " + std::to_string(n));
    return Graph(n, std::move(edges));
}

/// JSON if the first non-blank character is '{', edge list otherwise.
inline Graph parse_graph_text(std::string_view text) {
    auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string_view::npos && text[pos] == '{')
        return parse_graph_json(text);
    return parse_edge_list(text);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw argument_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Graph read_graph_file(const std::string& path) { return parse_graph_text(read_file(path)); }

inline json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges())
        edges.push_back({e.a, e.b});
    return json{{"n", g.vertex_count()}, {"edges", std::move(edges)}};
}

inline Graph graph_from_json(const json& j) { return parse_graph_json(j.dump()); }

inline json to_json(const StrategyAnnotation& a) {
    json j;
    j["mode"] = std::string(to_string(a.mode));
    j["phase"] = std::string(to_string(a.phase));
    if (!a.events.empty())
        j["events"] = a.events;
    j["depth"] = {{"outer", a.outer_depth}, {"inner", a.inner_depth}};
    if (a.exit)
        j["exit"] = *a.exit;
    if (a.sentry)
        j["roles"] = {{"sentry", *a.sentry}, {"patrol", *a.patrol}};
    if (!a.block.empty())
        j["block"] = a.block;
    if (a.block_end)
        j["block_end"] = *a.block_end;
    if (a.avatar)
        j["projection"] = *a.avatar;
    if (a.u_cop) {
        json ends = {{"u_cop", *a.u_cop}, {"v_cop", *a.v_cop}, {"u", *a.u_home}, {"v", *a.v_home}};
        if (a.u_opposite) {
            ends["u_opposite"] = *a.u_opposite;
            ends["v_opposite"] = *a.v_opposite;
        }
        j["ends"] = std::move(ends);
        j["active_vertices"] = a.active_vertices;
    }
    if (a.phi)
        j["phi"] = *a.phi;
    if (!a.claims.empty()) {
        json claims = json::object();
        for (const ClaimCheck& c : a.claims) {
            // one flag per claim name: false if any instance failed
            bool prev = claims.contains(c.name) ? claims[c.name].get<bool>() : true;
            claims[c.name] = prev && c.passed;
        }
        j["claims"] = std::move(claims);
    }
    return j;
}

inline json to_json(const TranscriptEntry& e) {
    json j{{"actor", std::string(to_string(e.actor))}, {"phase", std::string(to_string(e.phase))}};
    json action{{"type", std::string(to_string(e.kind))}};
    if (e.kind == ActionKind::place_robber || (e.kind == ActionKind::move && e.actor == Actor::robber))
        action["vertex"] = e.vertices.at(0);
    else
        action["vertices"] = e.vertices;
    j["action"] = std::move(action);
    if (e.annotation)
        j["strategy"] = to_json(*e.annotation);
    return j;
}

inline TranscriptEntry entry_from_json(const json& j) {
    TranscriptEntry e;
    const std::string actor = j.at("actor");
    e.actor = actor == "cops" ? Actor::cops : Actor::robber;
    const json& action = j.at("action");
    const std::string type = action.at("type");
    if (type == "place-free-cops")
        e.kind = ActionKind::place_free_cops;
    else if (type == "place-robber")
        e.kind = ActionKind::place_robber;
    else if (type == "move")
        e.kind = ActionKind::move;
    else
        throw argument_error("unknown action type " + type);
    if (action.contains("vertex"))
        e.vertices = {action.at("vertex").get<Vertex>()};
    else
        e.vertices = action.at("vertices").get<std::vector<Vertex>>();
    const std::string phase = j.at("phase");
    for (Phase p : {Phase::placing_free_cops, Phase::placing_robber, Phase::cops_turn, Phase::robber_turn,
                    Phase::cops_won, Phase::robber_won})
        if (to_string(p) == phase)
            e.phase = p;
    return e;
}

inline json to_json(const Transcript& t, bool with_claims = true) {
    json entries = json::array();
    for (const TranscriptEntry& e : t.entries) {
        json je = to_json(e);
        if (!with_claims && je.contains("strategy"))
            je["strategy"].erase("claims");
        entries.push_back(std::move(je));
    }
    json j{{"graph", graph_to_json(t.config.graph)},
           {"exits", t.config.exits},
           {"cops", t.config.cops},
           {"robber_policy", t.robber_policy},
           {"entries", std::move(entries)},
           {"outcome", std::string(to_string(t.outcome))},
           {"rounds", t.rounds},
           {"max_rounds", t.max_rounds}};
    if (with_claims)
        j["violations"] = t.violations;
    return j;
}

inline json to_json(const GameState& s) {
    json j{{"cops", s.cops}, {"phase", std::string(to_string(s.phase))}, {"round", s.round}};
    j["robber"] = s.robber ? json(*s.robber) : json(nullptr);
    return j;
}

/// Labels (1 = cops win) and capture distances, both indexed by the
/// canonical state number described in StateIndexer.
inline json to_json(const SolveTable& t) {
    return json{{"n", t.config().graph.vertex_count()},
                {"cops", t.config().cops},
                {"exits", t.config().exits},
                {"state_count", t.state_count()},
                {"encoding", "state = (rank * n + robber) * 2 + mover; mover 0 = cops, 1 = robber; "
                             "rank = sum_i C(c_i + i, i + 1) over the sorted cop positions c_i"},
                {"labels", std::vector<int>(t.labels().begin(), t.labels().end())},
                {"distance_to_capture", std::vector<std::uint32_t>(t.distances().begin(), t.distances().end())}};
}

} // namespace spcops
