#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spcops/errors.hpp"
#include "spcops/graph.hpp"

namespace spcops {

/// k cops, one robber, exits X with k >= |X|. Cops 0..|X|-1 start pinned on
/// the exits in increasing order; the rest are placed by the robber.
struct GameConfig {
    Graph graph;
    VertexSet exits;
    int cops = 2;

    int free_cops() const { return cops - static_cast<int>(exits.size()); }

    void validate() const {
        if (cops < 1)
            throw config_error("need at least one cop");
        if (exits != make_vertex_set(exits))
            throw config_error("exit set must be sorted and duplicate-free");
        for (Vertex x : exits)
            if (!graph.valid(x))
                throw config_error("exit " + std::to_string(x) + " is not a vertex");
        if (free_cops() < 0)
            throw config_error("k = " + std::to_string(cops) + " is smaller than the number of exits (" +
                               std::to_string(exits.size()) + ")");
    }
};

enum class Phase { placing_free_cops, placing_robber, cops_turn, robber_turn, cops_won, robber_won };

inline std::string_view to_string(Phase p) {
    switch (p) {
    case Phase::placing_free_cops: return "placing-free-cops";
    case Phase::placing_robber: return "placing-robber";
    case Phase::cops_turn: return "cops-turn";
    case Phase::robber_turn: return "robber-turn";
    case Phase::cops_won: return "cops-won";
    case Phase::robber_won: return "robber-won";
    }
    return "?";
}

inline bool is_terminal(Phase p) { return p == Phase::cops_won || p == Phase::robber_won; }

/// Cop positions are indexed by cop; the game itself only cares about the
/// multiset, but the strategy assigns roles to individual cops.
struct GameState {
    std::vector<Vertex> cops;
    std::optional<Vertex> robber;
    Phase phase = Phase::placing_free_cops;
    int round = 0;

    bool cop_on(Vertex v) const { return std::find(cops.begin(), cops.end(), v) != cops.end(); }

    friend bool operator==(const GameState&, const GameState&) = default;
};

/// Destination per cop; staying put is passing.
struct JointCopMove {
    std::vector<Vertex> to;

    friend bool operator==(const JointCopMove&, const JointCopMove&) = default;
};

namespace detail {

inline void expect_phase(const GameState& s, Phase p, const char* op) {
    if (s.phase != p)
        throw precondition_error(std::string(op) + ": expected phase " + std::string(to_string(p)) +
                                 ", game is in " + std::string(to_string(s.phase)));
}

inline bool in_closed_neighborhood(const Graph& g, Vertex from, Vertex to) {
    return from == to || g.adjacent(from, to);
}

} // namespace detail

inline GameState new_game(const GameConfig& cfg) {
    cfg.validate();
    GameState s;
    s.cops = cfg.exits;
    s.phase = cfg.free_cops() > 0 ? Phase::placing_free_cops : Phase::placing_robber;
    return s;
}

inline GameState place_free_cops(const GameConfig& cfg, GameState s, const std::vector<Vertex>& positions) {
    detail::expect_phase(s, Phase::placing_free_cops, "place_free_cops");
    if (static_cast<int>(positions.size()) != cfg.free_cops())
        throw move_error("expected " + std::to_string(cfg.free_cops()) + " free cop positions, got " +
                         std::to_string(positions.size()));
    for (Vertex v : positions) {
        if (!cfg.graph.valid(v))
            throw move_error("cop position " + std::to_string(v) + " is not a vertex");
        s.cops.push_back(v);
    }
    s.phase = Phase::placing_robber;
    return s;
}

inline GameState place_robber(const GameConfig& cfg, GameState s, Vertex r) {
    detail::expect_phase(s, Phase::placing_robber, "place_robber");
    if (!cfg.graph.valid(r))
        throw move_error("robber position " + std::to_string(r) + " is not a vertex");
    s.robber = r;
    s.phase = s.cop_on(r) ? Phase::cops_won : Phase::cops_turn;
    return s;
}

inline void check_cop_move(const GameConfig& cfg, const GameState& s, const JointCopMove& m) {
    if (m.to.size() != s.cops.size())
        throw move_error("joint move has " + std::to_string(m.to.size()) + " actions for " +
                         std::to_string(s.cops.size()) + " cops");
    for (std::size_t i = 0; i < m.to.size(); ++i)
        if (!cfg.graph.valid(m.to[i]) || !detail::in_closed_neighborhood(cfg.graph, s.cops[i], m.to[i]))
            throw move_error("cop " + std::to_string(i) + " cannot move from " + std::to_string(s.cops[i]) +
                             " to " + std::to_string(m.to[i]));
}

/// Capture is checked before escape: a robber sharing an exit with a cop
/// is caught, not escaped.
inline GameState apply_cop_move(const GameConfig& cfg, GameState s, const JointCopMove& m) {
    detail::expect_phase(s, Phase::cops_turn, "apply_cop_move");
    check_cop_move(cfg, s, m);
    s.cops = m.to;
    const Vertex r = *s.robber;
    if (s.cop_on(r))
        s.phase = Phase::cops_won;
    else if (contains(cfg.exits, r))
        s.phase = Phase::robber_won;
    else
        s.phase = Phase::robber_turn;
    return s;
}

/// Stepping onto a cop counts as capture. Escape is only judged after the
/// cops' move, never here.
inline GameState apply_robber_move(const GameConfig& cfg, GameState s, Vertex to) {
    detail::expect_phase(s, Phase::robber_turn, "apply_robber_move");
    if (!cfg.graph.valid(to) || !detail::in_closed_neighborhood(cfg.graph, *s.robber, to))
        throw move_error("robber cannot move from " + std::to_string(*s.robber) + " to " + std::to_string(to));
    s.robber = to;
    s.phase = s.cop_on(to) ? Phase::cops_won : Phase::cops_turn;
    ++s.round;
    return s;
}

/// Cartesian product of closed neighborhoods, cop 0 varying slowest.
inline std::vector<JointCopMove> legal_cop_moves(const GameConfig& cfg, const GameState& s) {
    detail::expect_phase(s, Phase::cops_turn, "legal_cop_moves");
    std::vector<std::vector<Vertex>> options;
    for (Vertex c : s.cops) {
        std::vector<Vertex> o{c};
        for (Vertex y : cfg.graph.neighbors(c))
            o.push_back(y);
        std::sort(o.begin(), o.end());
        options.push_back(std::move(o));
    }
    std::vector<JointCopMove> out;
    std::vector<std::size_t> idx(options.size(), 0);
    while (true) {
        JointCopMove m;
        for (std::size_t i = 0; i < options.size(); ++i)
            m.to.push_back(options[i][idx[i]]);
        out.push_back(std::move(m));
        std::size_t i = options.size();
        while (i > 0) {
            --i;
            if (++idx[i] < options[i].size())
                break;
            idx[i] = 0;
            if (i == 0)
                return out;
        }
        if (options.empty())
            return out;
    }
}

inline VertexSet legal_robber_moves(const GameConfig& cfg, const GameState& s) {
    detail::expect_phase(s, Phase::robber_turn, "legal_robber_moves");
    VertexSet out{*s.robber};
    for (Vertex y : cfg.graph.neighbors(*s.robber))
        out.push_back(y);
    return make_vertex_set(std::move(out));
}

} // namespace spcops
