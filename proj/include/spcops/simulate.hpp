#pragma once

#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "spcops/errors.hpp"
#include "spcops/game.hpp"
#include "spcops/rng.hpp"
#include "spcops/solver.hpp"
#include "spcops/strategy.hpp"

namespace spcops {

enum class Actor { cops, robber };
enum class ActionKind { place_free_cops, place_robber, move };

inline std::string_view to_string(Actor a) { return a == Actor::cops ? "cops" : "robber"; }

inline std::string_view to_string(ActionKind k) {
    switch (k) {
    case ActionKind::place_free_cops: return "place-free-cops";
    case ActionKind::place_robber: return "place-robber";
    case ActionKind::move: return "move";
    }
    return "?";
}

/// One transcript record. `vertices` holds the placed cops, the robber's
/// vertex, or the per-cop destinations, depending on the action.
struct TranscriptEntry {
    Actor actor = Actor::cops;
    ActionKind kind = ActionKind::move;
    std::vector<Vertex> vertices;
    Phase phase = Phase::cops_turn;
    std::optional<StrategyAnnotation> annotation;
};

enum class Outcome { in_progress, cops_won, robber_won, round_limit, strategy_error };

inline std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::in_progress: return "in-progress";
    case Outcome::cops_won: return "cops-won";
    case Outcome::robber_won: return "robber-won";
    case Outcome::round_limit: return "round-limit";
    case Outcome::strategy_error: return "strategy-error";
    }
    return "?";
}

struct Transcript {
    GameConfig config;
    std::string robber_policy;
    std::vector<TranscriptEntry> entries;
    Outcome outcome = Outcome::in_progress;
    int rounds = 0;
    int max_rounds = 0;
    std::vector<std::string> violations;

    bool cops_won_cleanly() const { return outcome == Outcome::cops_won && violations.empty(); }
};

/// Applies one record to the engine.
inline GameState apply_entry(const GameConfig& cfg, const GameState& s, const TranscriptEntry& e) {
    switch (e.kind) {
    case ActionKind::place_free_cops: return place_free_cops(cfg, s, e.vertices);
    case ActionKind::place_robber:
        if (e.vertices.size() != 1)
            throw move_error("robber placement needs one vertex");
        return place_robber(cfg, s, e.vertices[0]);
    case ActionKind::move:
        if (e.actor == Actor::cops)
            return apply_cop_move(cfg, s, JointCopMove{e.vertices});
        if (e.vertices.size() != 1)
            throw move_error("robber move needs one vertex");
        return apply_robber_move(cfg, s, e.vertices[0]);
    }
    throw move_error("unknown action");
}

/// Replays records through the engine, checking each recorded phase.
inline GameState replay(const GameConfig& cfg, const std::vector<TranscriptEntry>& entries) {
    GameState s = new_game(cfg);
    for (const TranscriptEntry& e : entries) {
        s = apply_entry(cfg, s, e);
        if (s.phase != e.phase)
            throw invariant_violation("replay diverged: recorded " + std::string(to_string(e.phase)) +
                                      ", engine reached " + std::string(to_string(s.phase)));
    }
    return s;
}

class RobberPolicy {
  public:
    virtual ~RobberPolicy() = default;
    virtual std::string name() const = 0;
    virtual Placement place(const GameConfig& cfg) = 0;
    virtual Vertex move(const GameConfig& cfg, const GameState& s) = 0;
};

/// Plays from the solved table: worst-case placement, then robber-win moves
/// or the longest delay of capture.
class OptimalRobber : public RobberPolicy {
  public:
    explicit OptimalRobber(const GameConfig& cfg, SolveOptions opts = {}) : table_(solve(cfg, opts)) {}
    explicit OptimalRobber(SolveTable table) : table_(std::move(table)) {}

    std::string name() const override { return "optimal"; }
    Placement place(const GameConfig&) override { return adversarial_placement(table_); }
    Vertex move(const GameConfig&, const GameState& s) override { return optimal_robber_policy(table_, s); }

    const SolveTable& table() const { return table_; }

  private:
    SolveTable table_;
};

/// Uniform placement off the cops, then uniform among moves that do not
/// step onto a cop (passing is always one of them).
class RandomRobber : public RobberPolicy {
  public:
    explicit RandomRobber(std::uint64_t seed) : rng_(seed) {}

    std::string name() const override { return "random"; }

    Placement place(const GameConfig& cfg) override {
        const int n = cfg.graph.vertex_count();
        Placement p;
        for (int i = 0; i < cfg.free_cops(); ++i)
            p.free_cops.push_back(rng_.below(n));
        std::vector<Vertex> free_spots;
        for (Vertex v = 0; v < n; ++v)
            if (!contains(cfg.exits, v) && std::find(p.free_cops.begin(), p.free_cops.end(), v) == p.free_cops.end())
                free_spots.push_back(v);
        p.robber = free_spots.empty() ? 0 : free_spots[rng_.below(static_cast<int>(free_spots.size()))];
        return p;
    }

    Vertex move(const GameConfig& cfg, const GameState& s) override {
        std::vector<Vertex> safe;
        for (Vertex v : legal_robber_moves(cfg, s))
            if (!s.cop_on(v))
                safe.push_back(v);
        return safe[rng_.below(static_cast<int>(safe.size()))];
    }

  private:
    Rng rng_;
};

/// Never moves. Starts at `start` if given, otherwise as far from the exits
/// as possible.
class PassiveRobber : public RobberPolicy {
  public:
    PassiveRobber() = default;
    explicit PassiveRobber(Vertex start) : start_(start) {}

    std::string name() const override { return "passive"; }

    Placement place(const GameConfig& cfg) override {
        Placement p;
        for (int i = 0; i < cfg.free_cops(); ++i)
            p.free_cops.push_back(cfg.exits.empty() ? 0 : cfg.exits[0]);
        if (start_) {
            p.robber = *start_;
            return p;
        }
        int best = -1;
        for (Vertex v = 0; v < cfg.graph.vertex_count(); ++v) {
            int d = INT32_MAX;
            for (Vertex x : cfg.exits)
                d = std::min(d, *distance(cfg.graph, x, v));
            if (d > best) {
                best = d;
                p.robber = v;
            }
        }
        return p;
    }

    Vertex move(const GameConfig&, const GameState& s) override { return *s.robber; }

  private:
    std::optional<Vertex> start_;
};

/// Reads "free-cop... robber" for placement and one vertex per move.
class StreamRobber : public RobberPolicy {
  public:
    StreamRobber(std::istream& in, std::ostream& prompt) : in_(in), prompt_(prompt) {}

    std::string name() const override { return "interactive"; }

    Placement place(const GameConfig& cfg) override {
        prompt_ << "exits:";
        for (Vertex x : cfg.exits)
            prompt_ << ' ' << x;
        prompt_ << "\nplace " << cfg.free_cops() << " free cop(s) then the robber: " << std::flush;
        Placement p;
        for (int i = 0; i < cfg.free_cops(); ++i)
            p.free_cops.push_back(read());
        p.robber = read();
        return p;
    }

    Vertex move(const GameConfig& cfg, const GameState& s) override {
        prompt_ << "cops at";
        for (Vertex c : s.cops)
            prompt_ << ' ' << c;
        prompt_ << ", robber at " << *s.robber << "; moves:";
        for (Vertex v : legal_robber_moves(cfg, s))
            prompt_ << ' ' << v;
        prompt_ << "\n> " << std::flush;
        return read();
    }

  private:
    Vertex read() {
        Vertex v;
        if (!(in_ >> v))
            throw argument_error("robber input ended");
        return v;
    }

    std::istream& in_;
    std::ostream& prompt_;
};

struct SimulationOptions {
    int max_rounds = 0; // 0: 4 |V|^2
    StrategyOptions strategy;
};

/// Plays the two-cop strategy against `robber`. One exit runs the block
/// strategy; two exits that form a pair of ends run the end-pair strategy.
inline Transcript simulate(const GameConfig& cfg, RobberPolicy& robber, SimulationOptions opts = {}) {
    cfg.validate();
    detail::require_two_cops(cfg);
    const int n = cfg.graph.vertex_count();

    Transcript t;
    t.config = cfg;
    t.robber_policy = robber.name();
    t.max_rounds = opts.max_rounds > 0 ? opts.max_rounds : 4 * n * n;

    StrategyMemory memory = cfg.exits.size() == 1 ? theorem1_memory(cfg, opts.strategy)
                                                  : lemma4_memory(cfg, opts.strategy);
    GameState s = new_game(cfg);
    const Placement p = robber.place(cfg);
    if (s.phase == Phase::placing_free_cops) {
        s = place_free_cops(cfg, s, p.free_cops);
        t.entries.push_back({Actor::robber, ActionKind::place_free_cops, p.free_cops, s.phase, {}});
    }
    s = place_robber(cfg, s, p.robber);
    t.entries.push_back({Actor::robber, ActionKind::place_robber, {p.robber}, s.phase, {}});

    while (!is_terminal(s.phase)) {
        if (s.round >= t.max_rounds) {
            t.outcome = Outcome::round_limit;
            t.violations.push_back("no capture within " + std::to_string(t.max_rounds) + " rounds");
            break;
        }
        if (s.phase == Phase::cops_turn) {
            StrategyStep step;
            try {
                step = strategy_move(cfg, s, memory);
            } catch (const invariant_violation& e) {
                t.outcome = Outcome::strategy_error;
                t.violations.push_back(std::string("strategy invariant: ") + e.what());
                break;
            }
            for (const ClaimCheck& c : step.annotation.claims)
                if (!c.passed)
                    t.violations.push_back("round " + std::to_string(s.round) + ": " + c.name + ": " + c.detail);
            memory = std::move(step.memory);
            s = apply_cop_move(cfg, s, step.move);
            t.entries.push_back({Actor::cops, ActionKind::move, step.move.to, s.phase, std::move(step.annotation)});
        } else {
            const Vertex to = robber.move(cfg, s);
            s = apply_robber_move(cfg, s, to);
            t.entries.push_back({Actor::robber, ActionKind::move, {to}, s.phase, {}});
        }
    }
    if (s.phase == Phase::cops_won)
        t.outcome = Outcome::cops_won;
    else if (s.phase == Phase::robber_won) {
        t.outcome = Outcome::robber_won;
        t.violations.push_back("robber escaped through exit " + std::to_string(*s.robber));
    }
    t.rounds = s.round;
    return t;
}

inline Transcript simulate(const Graph& g, Vertex exit, RobberPolicy& robber, int max_rounds = 0) {
    g.check_vertex(exit);
    return simulate(GameConfig{g, {exit}, 2}, robber, SimulationOptions{max_rounds, {}});
}

} // namespace spcops
