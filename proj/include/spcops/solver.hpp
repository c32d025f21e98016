#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spcops/errors.hpp"
#include "spcops/game.hpp"
#include "spcops/graph.hpp"

namespace spcops {

enum class Mover : std::uint8_t { cops = 0, robber = 1 };
enum class Label : std::uint8_t { robber_win = 0, cops_win = 1 };

struct SolveOptions {
    std::size_t state_budget = 10'000'000;
};

/// Canonical numbering of post-placement positions.
///
/// A cop multiset c_0 <= ... <= c_{k-1} over n vertices maps to the strictly
/// increasing d_i = c_i + i in [0, n+k-1) and is ranked colexicographically:
/// rank = sum_i C(d_i, i+1), giving 0..C(n+k-1, k)-1. A state is
/// (rank * n + robber) * 2 + mover with mover 0 for cops, 1 for robber.
class StateIndexer {
  public:
    StateIndexer() = default;
    StateIndexer(int n, int k) : n_(n), k_(k) {
        const int top = n + k;
        binom_.assign(static_cast<std::size_t>(top + 1) * (k + 2), 0);
        for (int a = 0; a <= top; ++a) {
            binom(a, 0) = 1;
            for (int b = 1; b <= std::min(a, k + 1); ++b)
                binom(a, b) = binom(a - 1, b - 1) + (b <= a - 1 ? binom(a - 1, b) : 0);
        }
        multiset_count_ = binom(n + k - 1, k);
    }

    int vertex_count() const { return n_; }
    int cop_count() const { return k_; }
    std::size_t multiset_count() const { return multiset_count_; }
    std::size_t state_count() const { return multiset_count_ * static_cast<std::size_t>(n_) * 2; }

    /// `cops` must be sorted.
    std::size_t rank(std::span<const Vertex> cops) const {
        std::size_t r = 0;
        for (int i = 0; i < k_; ++i)
            r += binom(cops[i] + i, i + 1);
        return r;
    }

    std::size_t state(std::size_t rank, Vertex robber, Mover m) const {
        return (rank * n_ + robber) * 2 + static_cast<std::size_t>(m);
    }

    std::size_t rank_of_state(std::size_t s) const { return s / 2 / n_; }
    Vertex robber_of_state(std::size_t s) const { return static_cast<Vertex>((s / 2) % n_); }
    Mover mover_of_state(std::size_t s) const { return static_cast<Mover>(s % 2); }

  private:
    std::size_t& binom(int a, int b) { return binom_[static_cast<std::size_t>(a) * (k_ + 2) + b]; }
    std::size_t binom(int a, int b) const {
        if (b < 0 || a < b)
            return 0;
        return binom_[static_cast<std::size_t>(a) * (k_ + 2) + b];
    }

    int n_ = 0;
    int k_ = 0;
    std::size_t multiset_count_ = 0;
    std::vector<std::size_t> binom_;
};

/// Complete win/loss labelling of the exit game, with distance to capture
/// (in plies, under optimal play) for cops-win states.
class SolveTable {
  public:
    static constexpr std::uint32_t no_move = UINT32_MAX;

    const GameConfig& config() const { return cfg_; }
    const StateIndexer& indexer() const { return idx_; }
    std::size_t state_count() const { return label_.size(); }

    std::span<const Vertex> multiset(std::size_t rank) const { return multisets_[rank]; }

    /// Any cop order is accepted.
    std::size_t index(std::vector<Vertex> cops, Vertex robber, Mover m) const {
        if (static_cast<int>(cops.size()) != cfg_.cops)
            throw argument_error("state has " + std::to_string(cops.size()) + " cops, table has " +
                                 std::to_string(cfg_.cops));
        for (Vertex c : cops)
            cfg_.graph.check_vertex(c);
        cfg_.graph.check_vertex(robber);
        std::sort(cops.begin(), cops.end());
        return idx_.state(idx_.rank(cops), robber, m);
    }

    /// Index of a cops-turn or robber-turn game state.
    std::size_t index(const GameState& s) const {
        if (s.phase != Phase::cops_turn && s.phase != Phase::robber_turn)
            throw argument_error("state is not a post-placement turn state");
        return index(s.cops, *s.robber, s.phase == Phase::cops_turn ? Mover::cops : Mover::robber);
    }

    Label label(std::size_t state) const { return static_cast<Label>(label_.at(state)); }
    bool cops_win(std::size_t state) const { return label(state) == Label::cops_win; }

    /// Plies until capture under optimal play; meaningful for cops-win only.
    std::uint32_t distance_to_capture(std::size_t state) const { return dtc_.at(state); }

    /// For a cops-turn cops-win state, the rank of the successor multiset
    /// realising the shortest forced capture.
    std::uint32_t best_successor(std::size_t state) const { return best_.at(state); }

    std::span<const std::uint8_t> labels() const { return label_; }
    std::span<const std::uint32_t> distances() const { return dtc_; }

  private:
    friend SolveTable solve(const GameConfig&, SolveOptions);

    GameConfig cfg_;
    StateIndexer idx_;
    std::vector<std::vector<Vertex>> multisets_;
    std::vector<std::uint8_t> label_;
    std::vector<std::uint32_t> dtc_;
    std::vector<std::uint32_t> best_;
};

namespace detail {

// Ranks of all multisets reachable by one joint cop move, sorted, unique.
// The relation is symmetric, so these are also the predecessors.
inline std::vector<std::uint32_t> cop_successors(const Graph& g, const StateIndexer& idx,
                                                 std::span<const Vertex> cops) {
    std::vector<std::uint32_t> out;
    std::vector<Vertex> cur(cops.size());
    std::vector<Vertex> sorted(cops.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == cops.size()) {
            sorted = cur;
            std::sort(sorted.begin(), sorted.end());
            out.push_back(static_cast<std::uint32_t>(idx.rank(sorted)));
            return;
        }
        cur[i] = cops[i];
        self(self, i + 1);
        for (Vertex y : g.neighbors(cops[i])) {
            cur[i] = y;
            self(self, i + 1);
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace detail

/// Backward induction (attractor computation) over the full game graph.
/// Anything the cops cannot force within finitely many plies is labelled
/// robber-win, which covers both escapes and endless evasion.
inline SolveTable solve(const GameConfig& cfg, SolveOptions opts = {}) {
    cfg.validate();
    if (!is_connected(cfg.graph))
        throw precondition_error("solve: graph must be connected");
    const int n = cfg.graph.vertex_count();
    const int k = cfg.cops;

    SolveTable t;
    t.cfg_ = cfg;
    t.idx_ = StateIndexer(n, k);
    const std::size_t states = t.idx_.state_count();
    if (states > opts.state_budget)
        throw capacity_error(states, opts.state_budget);

    const std::size_t ranks = t.idx_.multiset_count();
    t.multisets_.resize(ranks);
    {
        std::vector<Vertex> cur(k, 0);
        while (true) {
            t.multisets_[t.idx_.rank(cur)] = cur;
            int i = k - 1;
            while (i >= 0 && cur[i] == n - 1)
                --i;
            if (i < 0)
                break;
            ++cur[i];
            for (int j = i + 1; j < k; ++j)
                cur[j] = cur[i];
        }
    }
    std::vector<std::vector<std::uint32_t>> succ(ranks);
    for (std::size_t m = 0; m < ranks; ++m)
        succ[m] = detail::cop_successors(cfg.graph, t.idx_, t.multisets_[m]);

    t.label_.assign(states, static_cast<std::uint8_t>(Label::robber_win));
    t.dtc_.assign(states, 0);
    t.best_.assign(states, SolveTable::no_move);
    std::vector<std::uint32_t> escapes(states, 0);
    std::vector<std::size_t> queue;
    queue.reserve(states);

    auto holds = [&](std::size_t m, Vertex v) {
        const auto& ms = t.multisets_[m];
        return std::binary_search(ms.begin(), ms.end(), v);
    };
    auto win = [&](std::size_t s, std::uint32_t d) {
        t.label_[s] = static_cast<std::uint8_t>(Label::cops_win);
        t.dtc_[s] = d;
    };

    for (std::size_t m = 0; m < ranks; ++m) {
        for (Vertex r = 0; r < n; ++r) {
            const std::size_t cs = t.idx_.state(m, r, Mover::cops);
            const std::size_t rs = t.idx_.state(m, r, Mover::robber);
            if (holds(m, r)) {
                win(cs, 0);
                win(rs, 0);
                continue;
            }
            if (!contains(cfg.exits, r)) {
                std::uint32_t c = 1; // pass
                for (Vertex y : cfg.graph.neighbors(r))
                    c += holds(m, y) ? 0 : 1;
                escapes[rs] = c;
            }
            for (std::uint32_t next : succ[m]) {
                if (holds(next, r)) {
                    win(cs, 1);
                    t.best_[cs] = next;
                    queue.push_back(cs);
                    break;
                }
            }
        }
    }

    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t s = queue[head];
        const std::uint32_t d = t.dtc_[s];
        const std::size_t m = t.idx_.rank_of_state(s);
        const Vertex r = t.idx_.robber_of_state(s);
        if (t.idx_.mover_of_state(s) == Mover::cops) {
            auto visit = [&](Vertex from) {
                if (holds(m, from) || contains(cfg.exits, from))
                    return;
                const std::size_t p = t.idx_.state(m, from, Mover::robber);
                if (t.cops_win(p))
                    return;
                if (--escapes[p] == 0) {
                    win(p, d + 1);
                    queue.push_back(p);
                }
            };
            visit(r);
            for (Vertex y : cfg.graph.neighbors(r))
                visit(y);
        } else {
            for (std::uint32_t prev : succ[m]) {
                if (holds(prev, r))
                    continue;
                const std::size_t p = t.idx_.state(prev, r, Mover::cops);
                if (t.cops_win(p))
                    continue;
                win(p, d + 1);
                t.best_[p] = static_cast<std::uint32_t>(m);
                queue.push_back(p);
            }
        }
    }
    return t;
}

/// Worst placement for the cops: a robber-win start if one exists, else the
/// one with the longest forced capture. Ties go to the lexicographically
/// first (free cops, robber).
struct Placement {
    std::vector<Vertex> free_cops; // sorted
    Vertex robber = -1;
    Label label = Label::cops_win;
    std::uint32_t distance_to_capture = 0;
};

inline Placement adversarial_placement(const SolveTable& t) {
    const GameConfig& cfg = t.config();
    const int n = cfg.graph.vertex_count();
    const int f = cfg.free_cops();
    std::optional<Placement> best;
    std::vector<Vertex> free(f, 0);
    while (true) {
        std::vector<Vertex> all = cfg.exits;
        all.insert(all.end(), free.begin(), free.end());
        std::sort(all.begin(), all.end());
        for (Vertex r = 0; r < n; ++r) {
            Placement p{free, r, Label::cops_win, 0};
            if (!std::binary_search(all.begin(), all.end(), r)) {
                const std::size_t s = t.index(all, r, Mover::cops);
                p.label = t.label(s);
                p.distance_to_capture = t.distance_to_capture(s);
            }
            if (!best)
                best = p;
            else if (best->label == Label::cops_win &&
                     (p.label == Label::robber_win || p.distance_to_capture > best->distance_to_capture))
                best = p;
            if (best->label == Label::robber_win)
                return *best;
        }
        int i = f - 1;
        while (i >= 0 && free[i] == n - 1)
            --i;
        if (i < 0)
            break;
        ++free[i];
        for (int j = i + 1; j < f; ++j)
            free[j] = free[i];
    }
    return *best;
}

/// True iff every placement of the free cops and the robber is a cops-win
/// start.
inline bool is_exit_copwin(const SolveTable& t) {
    return adversarial_placement(t).label == Label::cops_win;
}

inline bool is_exit_copwin(const GameConfig& cfg, SolveOptions opts = {}) {
    return is_exit_copwin(solve(cfg, opts));
}

/// A robber move keeping a robber-win label if possible, else the one
/// delaying capture longest; smallest vertex id on ties.
inline Vertex optimal_robber_policy(const SolveTable& t, const GameState& s) {
    if (s.phase != Phase::robber_turn)
        throw argument_error("optimal_robber_policy: not a robber-turn state");
    const Graph& g = t.config().graph;
    const Vertex r = *s.robber;
    (void)t.index(s);
    VertexSet options{r};
    options.insert(options.end(), g.neighbors(r).begin(), g.neighbors(r).end());
    options = make_vertex_set(std::move(options));

    Vertex best = -1;
    std::int64_t best_score = -1;
    for (Vertex to : options) {
        std::int64_t score = 0; // stepping onto a cop
        if (!s.cop_on(to)) {
            const std::size_t next = t.index(s.cops, to, Mover::cops);
            score = t.cops_win(next) ? 1 + static_cast<std::int64_t>(t.distance_to_capture(next))
                                     : INT64_MAX;
        }
        if (score > best_score) {
            best = to;
            best_score = score;
        }
    }
    return best;
}

/// Turns the table's optimal successor multiset into per-cop destinations.
inline JointCopMove optimal_cop_move(const SolveTable& t, const GameState& s) {
    if (s.phase != Phase::cops_turn)
        throw argument_error("optimal_cop_move: not a cops-turn state");
    const std::size_t idx = t.index(s);
    if (!t.cops_win(idx) || t.best_successor(idx) == SolveTable::no_move)
        throw argument_error("optimal_cop_move: no winning move from this state");
    std::vector<Vertex> target(t.multiset(t.best_successor(idx)).begin(),
                               t.multiset(t.best_successor(idx)).end());
    const Graph& g = t.config().graph;
    do {
        bool ok = true;
        for (std::size_t i = 0; i < target.size() && ok; ++i)
            ok = target[i] == s.cops[i] || g.adjacent(s.cops[i], target[i]);
        if (ok)
            return JointCopMove{target};
    } while (std::next_permutation(target.begin(), target.end()));
    throw invariant_violation("optimal_cop_move: successor multiset not realisable");
}

} // namespace spcops
