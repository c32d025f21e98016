#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "spcops/errors.hpp"
#include "spcops/game.hpp"
#include "spcops/graph.hpp"
#include "spcops/structure.hpp"

namespace spcops {

// The two-cop strategy on series-parallel graphs.
//
// Outer level (exit x): pick the block B at x leading toward the robber, walk
// the patrol to x's end partner v in B while the sentry holds x, then play
// the end-pair strategy inside B against the robber's projection onto B.
// Catching the projection on a cut vertex hands the sentry role to that cop;
// the other cop joins and the game recurses into the robber's side.
//
// Inner level (ends u, v of a path-like graph P): a single block is cut down
// to the robber's branch between u and v. With several blocks each cop steps
// toward its home end when the robber is at least as close to that end as
// the cop, and toward the home block's cut vertex otherwise. Once a cop
// stands on its cut vertex with the robber outside its home block, the other
// cop walks home and the cleared block is dropped.

enum class StrategyMode { theorem1, lemma4 };

enum class StrategyPhase {
    select_block,
    patrol_to_v,
    play_block,
    handoff_walk,
    multi_block_push,
    send_home,
    recurse,
};

inline std::string_view to_string(StrategyPhase p) {
    switch (p) {
    case StrategyPhase::select_block: return "select-block";
    case StrategyPhase::patrol_to_v: return "patrol-to-v";
    case StrategyPhase::play_block: return "play-block";
    case StrategyPhase::handoff_walk: return "handoff-walk";
    case StrategyPhase::multi_block_push: return "multi-block-push";
    case StrategyPhase::send_home: return "send-home";
    case StrategyPhase::recurse: return "recurse";
    }
    return "?";
}

inline std::string_view to_string(StrategyMode m) {
    return m == StrategyMode::theorem1 ? "theorem1" : "lemma4";
}

struct ClaimCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

/// What the strategy did on one cop turn, in full-graph vertex ids.
struct StrategyAnnotation {
    StrategyMode mode = StrategyMode::theorem1;
    StrategyPhase phase = StrategyPhase::select_block;
    std::vector<std::string> events; // transitions taken before the move
    int outer_depth = 0;
    int inner_depth = 0;

    std::optional<Vertex> exit;
    std::optional<int> sentry;
    std::optional<int> patrol;
    VertexSet block;
    std::optional<Vertex> block_end;
    std::optional<Vertex> avatar;

    std::optional<int> u_cop;
    std::optional<int> v_cop;
    std::optional<Vertex> u_home;
    std::optional<Vertex> v_home;
    std::optional<Vertex> u_opposite;
    std::optional<Vertex> v_opposite;
    VertexSet active_vertices;
    std::optional<int> phi;

    std::vector<ClaimCheck> claims;

    bool all_claims_hold() const {
        for (const auto& c : claims)
            if (!c.passed)
                return false;
        return true;
    }
};

struct StrategyOptions {
    // Mutation hook for harness tests: uses d(x,r) < d(x,c) instead of <=
    // in the step-toward-home rule. Never set in real play.
    bool break_home_rule = false;
};

/// Immutable graph data of one recursion level; maps go straight to the
/// full graph.
struct StrategyLevel {
    Subgraph sub;
    DistanceMatrix dist;
    BlockCutTree bct;

    const Graph& graph() const { return sub.graph; }
    int size() const { return sub.graph.vertex_count(); }
};
using LevelPtr = std::shared_ptr<const StrategyLevel>;

inline LevelPtr make_level(Subgraph sub) {
    auto level = std::make_shared<StrategyLevel>();
    level->dist = DistanceMatrix(sub.graph);
    if (sub.graph.vertex_count() >= 2 && is_connected(sub.graph))
        level->bct = block_cut_tree(sub.graph);
    level->sub = std::move(sub);
    return level;
}

struct Lemma4State {
    LevelPtr level; // the active path-like graph
    Vertex u = -1;  // ends, local ids
    Vertex v = -1;
    int u_cop = 0;
    int v_cop = 1;
    StrategyPhase phase = StrategyPhase::recurse;
    int u_home_block = -1;
    int v_home_block = -1;
    Vertex u_opposite = -1;
    Vertex v_opposite = -1;
    int stationary = -1; // send-home: the cop holding its opposite vertex
    std::optional<int> last_phi;
    int push_rounds = 0;
    int depth = 0;
};

struct Theorem1State {
    LevelPtr level;  // graph with exit
    Vertex exit = -1; // local id
    int sentry = 0;
    int patrol = 1;
    StrategyPhase phase = StrategyPhase::select_block;
    int block = -1;          // index into level->bct
    LevelPtr block_level;    // the block as its own graph
    Vertex block_end = -1;   // exit's end partner, local to block_level
    Vertex handoff = -1;     // local id
    std::optional<Vertex> last_avatar; // full-graph id
    int depth = 0;
};

/// The strategy's memory between cop turns. A plain value: every move
/// returns an updated copy.
struct StrategyMemory {
    StrategyMode mode = StrategyMode::theorem1;
    std::optional<Theorem1State> outer;
    std::optional<Lemma4State> inner;
    StrategyOptions options;

    StrategyPhase phase() const {
        if (mode == StrategyMode::theorem1 && outer->phase != StrategyPhase::play_block)
            return outer->phase;
        if (inner)
            return inner->phase;
        return outer->phase;
    }
};

struct StrategyStep {
    JointCopMove move;
    StrategyMemory memory;
    StrategyAnnotation annotation;
};

namespace detail {

inline void require_two_cops(const GameConfig& cfg) {
    if (cfg.cops != 2)
        throw precondition_error("the strategy plays exactly two cops");
    if (!is_connected(cfg.graph))
        throw precondition_error("graph must be connected");
    if (!is_series_parallel(cfg.graph))
        throw precondition_error("graph is not series-parallel");
}

// Vertices reachable from `start` without entering `blocked`.
inline VertexSet reach_avoiding(const Graph& g, Vertex start, const VertexSet& blocked) {
    std::vector<bool> seen(g.vertex_count(), false);
    for (Vertex b : blocked)
        seen[b] = true;
    std::vector<Vertex> stack{start};
    seen[start] = true;
    VertexSet out;
    while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        out.push_back(x);
        for (Vertex y : g.neighbors(x))
            if (!seen[y]) {
                seen[y] = true;
                stack.push_back(y);
            }
    }
    return make_vertex_set(std::move(out));
}

inline VertexSet to_global(const Subgraph& sub, const VertexSet& local) {
    VertexSet out;
    for (Vertex v : local)
        out.push_back(sub.to_parent[v]);
    return make_vertex_set(std::move(out));
}

inline Vertex local_or_throw(const Subgraph& sub, Vertex global, const char* what) {
    Vertex l = sub.local(global);
    if (l == -1)
        throw invariant_violation(std::string(what) + " is outside the active subgraph");
    return l;
}

inline void check(StrategyAnnotation& ann, std::string name, bool ok, std::string detail = {}) {
    ann.claims.push_back({std::move(name), ok, ok ? std::string{} : std::move(detail)});
}

// The single home block containing end `x` and that block's cut vertex.
inline std::pair<int, Vertex> home_block(const StrategyLevel& L, Vertex x) {
    const auto& bs = L.bct.blocks_of_vertex[x];
    if (bs.size() != 1)
        throw invariant_violation("an end of a path-like graph lies in several blocks");
    Vertex opp = -1;
    for (Vertex w : L.bct.blocks[bs[0]]) {
        if (L.bct.is_cut(w)) {
            if (opp != -1)
                throw invariant_violation("an end block of a path-like graph has two cut vertices");
            opp = w;
        }
    }
    if (opp == -1)
        throw invariant_violation("home block has no cut vertex");
    return {bs[0], opp};
}

inline void describe_inner(const Lemma4State& st, StrategyAnnotation& ann) {
    const Subgraph& sub = st.level->sub;
    ann.inner_depth = st.depth;
    ann.u_cop = st.u_cop;
    ann.v_cop = st.v_cop;
    ann.u_home = sub.to_parent[st.u];
    ann.v_home = sub.to_parent[st.v];
    if (st.u_opposite != -1) {
        ann.u_opposite = sub.to_parent[st.u_opposite];
        ann.v_opposite = sub.to_parent[st.v_opposite];
    }
    ann.active_vertices = sub.to_parent;
}

// Advances the end-pair strategy by one cop turn against `target` (the
// robber, or its projection when played inside a block). Returns full-graph
// destinations for both cops.
inline JointCopMove lemma4_advance(Lemma4State& st, const GameState& s, Vertex target,
                                   const StrategyOptions& opts, StrategyAnnotation& ann) {
    for (int guard = 0;; ++guard) {
        if (guard > 4 * st.level->size() + 16)
            throw invariant_violation("end-pair strategy made no progress");
        const StrategyLevel& L = *st.level;
        const Graph& P = L.graph();
        const Vertex a = local_or_throw(L.sub, target, "robber");
        const Vertex cu = local_or_throw(L.sub, s.cops[st.u_cop], "u-cop");
        const Vertex cv = local_or_throw(L.sub, s.cops[st.v_cop], "v-cop");

        switch (st.phase) {
        case StrategyPhase::recurse: {
            if (cu != st.u || cv != st.v)
                throw invariant_violation("cops are not on the ends at phase entry");
            if (a == st.u || a == st.v)
                throw invariant_violation("robber shares an end with a cop");
            if (!is_path_like(P, st.u, st.v))
                throw invariant_violation("active subgraph is not path-like for its ends");
            if (L.bct.block_count() == 1) {
                // The branch holding the robber, without the direct uv edge:
                // keeping it could leave the graph unchanged.
                VertexSet keep = reach_avoiding(P, a, make_vertex_set({st.u, st.v}));
                keep.push_back(st.u);
                keep.push_back(st.v);
                Subgraph child = induced_subgraph(P, make_vertex_set(std::move(keep)));
                const Vertex nu = child.local(st.u), nv = child.local(st.v);
                if (child.graph.adjacent(nu, nv))
                    child = without_edge(child, nu, nv);
                if (child.graph.edge_count() >= P.edge_count())
                    throw invariant_violation("single-block reduction did not shrink the graph");
                st.level = make_level(compose(L.sub, child));
                st.u = nu;
                st.v = nv;
                ++st.depth;
                ann.events.push_back("recurse");
                continue;
            }
            std::tie(st.u_home_block, st.u_opposite) = home_block(L, st.u);
            std::tie(st.v_home_block, st.v_opposite) = home_block(L, st.v);
            st.phase = StrategyPhase::multi_block_push;
            st.last_phi.reset();
            st.push_rounds = 0;
            ann.events.push_back("multi-block-push");
            continue;
        }

        case StrategyPhase::multi_block_push: {
            struct Role {
                int cop;
                Vertex pos, home, opp;
                int block;
            };
            const Role roles[2] = {{st.u_cop, cu, st.u, st.u_opposite, st.u_home_block},
                                   {st.v_cop, cv, st.v, st.v_opposite, st.v_home_block}};
            bool triggered = false;
            for (const Role& y : roles) {
                if (y.pos == y.opp && !contains(L.bct.blocks[y.block], a)) {
                    st.stationary = y.cop;
                    st.phase = StrategyPhase::send_home;
                    ann.events.push_back("send-home");
                    triggered = true;
                    break;
                }
            }
            if (triggered)
                continue;

            JointCopMove m{s.cops};
            Vertex next[2];
            for (int i = 0; i < 2; ++i) {
                const Role& x = roles[i];
                const bool toward_home = opts.break_home_rule ? L.dist(x.home, a) < L.dist(x.home, x.pos)
                                                              : L.dist(x.home, a) <= L.dist(x.home, x.pos);
                next[i] = step_toward(P, L.dist, x.pos, toward_home ? x.home : x.opp);
                m.to[x.cop] = L.sub.to_parent[next[i]];

                const std::string who = i == 0 ? "u-cop" : "v-cop";
                check(ann, "C1", L.dist(x.home, next[i]) <= L.dist(x.home, a),
                      who + " farther from home than the robber");
                check(ann, "C2", L.dist(x.home, next[i]) + L.dist(next[i], x.opp) == L.dist(x.home, x.opp),
                      who + " left every shortest home-opposite path");
                if (toward_home)
                    check(ann, "C3", contains(interior(L.bct, x.block), a),
                          who + " stepped home with the robber outside its home block interior");
            }
            const int phi = L.dist(next[0], st.u_opposite) + L.dist(next[1], st.v_opposite);
            if (st.last_phi) {
                check(ann, "C4", phi <= *st.last_phi,
                      "phi rose from " + std::to_string(*st.last_phi) + " to " + std::to_string(phi));
                if (phi == *st.last_phi)
                    check(ann, "C5",
                          contains(interior(L.bct, st.u_home_block), a) ||
                              contains(interior(L.bct, st.v_home_block), a),
                          "phi stalled with the robber outside both home block interiors");
            }
            ++st.push_rounds;
            const int n = P.vertex_count();
            check(ann, "C6", st.push_rounds <= 4 * n * n,
                  "push phase exceeded " + std::to_string(4 * n * n) + " rounds");
            st.last_phi = phi;
            ann.phi = phi;
            ann.phase = StrategyPhase::multi_block_push;
            describe_inner(st, ann);
            return m;
        }

        case StrategyPhase::send_home: {
            const bool u_stays = st.stationary == st.u_cop;
            const int mover = u_stays ? st.v_cop : st.u_cop;
            const Vertex pos = u_stays ? cv : cu;
            const Vertex home = u_stays ? st.v : st.u;
            if (pos == home) {
                const int block = u_stays ? st.u_home_block : st.v_home_block;
                const Vertex opp = u_stays ? st.u_opposite : st.v_opposite;
                VertexSet keep;
                for (Vertex w = 0; w < P.vertex_count(); ++w)
                    if (w == opp || !contains(L.bct.blocks[block], w))
                        keep.push_back(w);
                Subgraph child = induced_subgraph(P, keep);
                const Vertex nu = child.local(u_stays ? opp : st.u);
                const Vertex nv = child.local(u_stays ? st.v : opp);
                st.level = make_level(compose(L.sub, child));
                st.u = nu;
                st.v = nv;
                st.phase = StrategyPhase::recurse;
                st.u_opposite = st.v_opposite = -1;
                st.u_home_block = st.v_home_block = -1;
                st.stationary = -1;
                ++st.depth;
                ann.events.push_back("drop-home-block");
                continue;
            }
            const Vertex next = step_toward(P, L.dist, pos, home);
            JointCopMove m{s.cops};
            m.to[mover] = L.sub.to_parent[next];
            const Vertex after_u = u_stays ? cu : next;
            const Vertex after_v = u_stays ? next : cv;
            check(ann, "C1",
                  L.dist(st.u, after_u) <= L.dist(st.u, a) && L.dist(st.v, after_v) <= L.dist(st.v, a),
                  "a cop is farther from home than the robber");
            check(ann, "C2",
                  L.dist(st.u, after_u) + L.dist(after_u, st.u_opposite) == L.dist(st.u, st.u_opposite) &&
                      L.dist(st.v, after_v) + L.dist(after_v, st.v_opposite) == L.dist(st.v, st.v_opposite),
                  "a cop left every shortest home-opposite path");
            ann.phase = StrategyPhase::send_home;
            describe_inner(st, ann);
            return m;
        }

        default:
            throw invariant_violation("end-pair strategy in an outer phase");
        }
    }
}

inline JointCopMove theorem1_advance(StrategyMemory& mem, const GameState& s, StrategyAnnotation& ann) {
    Theorem1State& st = *mem.outer;
    for (int guard = 0;; ++guard) {
        if (guard > 8 * st.level->size() + 16)
            throw invariant_violation("block strategy made no progress");
        const StrategyLevel& L = *st.level;
        const Graph& H = L.graph();
        const Vertex r = local_or_throw(L.sub, *s.robber, "robber");
        const Vertex sentry_pos = local_or_throw(L.sub, s.cops[st.sentry], "sentry");
        const Vertex patrol_pos = local_or_throw(L.sub, s.cops[st.patrol], "patrol");

        ann.outer_depth = st.depth;
        ann.exit = L.sub.to_parent[st.exit];
        ann.sentry = st.sentry;
        ann.patrol = st.patrol;

        switch (st.phase) {
        case StrategyPhase::select_block: {
            if (r == st.exit)
                throw invariant_violation("robber stands on the guarded exit");
            st.block = block_toward_robber(H, L.bct, st.exit, r);
            st.block_level = make_level(compose(L.sub, induced_subgraph(H, L.bct.blocks[st.block])));
            const Vertex u = st.block_level->sub.local(L.sub.to_parent[st.exit]);
            st.block_end = find_end_pair(st.block_level->graph(), u).v;
            st.last_avatar.reset();
            st.phase = StrategyPhase::patrol_to_v;
            mem.inner.reset();
            ann.events.push_back("select-block");
            continue;
        }

        case StrategyPhase::patrol_to_v:
        case StrategyPhase::play_block: {
            if (r != st.exit)
                check(ann, "block-stability", block_toward_robber(H, L.bct, st.exit, r) == st.block,
                      "selected block no longer leads toward the robber");
            ann.block = to_global(L.sub, L.bct.blocks[st.block]);
            ann.block_end = st.block_level->sub.to_parent[st.block_end];

            if (st.phase == StrategyPhase::patrol_to_v) {
                const Vertex v = L.sub.local(*ann.block_end);
                if (patrol_pos != v) {
                    JointCopMove m{s.cops};
                    m.to[st.patrol] = L.sub.to_parent[step_toward(H, L.dist, patrol_pos, v)];
                    ann.phase = StrategyPhase::patrol_to_v;
                    return m;
                }
                Lemma4State in;
                in.level = st.block_level;
                in.u = st.block_level->sub.local(L.sub.to_parent[st.exit]);
                in.v = st.block_end;
                in.u_cop = st.sentry;
                in.v_cop = st.patrol;
                mem.inner = in;
                st.phase = StrategyPhase::play_block;
                ann.events.push_back("play-block");
                continue;
            }

            const Vertex avatar = projection(H, L.bct.blocks[st.block], r);
            const Vertex avatar_global = L.sub.to_parent[avatar];
            ann.avatar = avatar_global;
            if (st.last_avatar) {
                const Vertex prev = L.sub.local(*st.last_avatar);
                check(ann, "projection-legality", prev == avatar || H.adjacent(prev, avatar),
                      "projection jumped from " + std::to_string(*st.last_avatar) + " to " +
                          std::to_string(avatar_global));
            }
            st.last_avatar = avatar_global;

            int catcher = -1;
            for (int c : {0, 1})
                if (s.cops[c] == avatar_global) {
                    catcher = c;
                    break;
                }
            if (catcher != -1) {
                if (avatar == r)
                    throw invariant_violation("asked to move after capture");
                st.sentry = catcher;
                st.patrol = 1 - catcher;
                st.handoff = avatar;
                st.phase = StrategyPhase::handoff_walk;
                mem.inner.reset();
                ann.events.push_back("handoff");
                continue;
            }
            ann.mode = StrategyMode::theorem1;
            JointCopMove m = lemma4_advance(*mem.inner, s, avatar_global, mem.options, ann);
            return m;
        }

        case StrategyPhase::handoff_walk: {
            if (sentry_pos != st.handoff)
                throw invariant_violation("sentry left the handoff vertex");
            if (patrol_pos == st.handoff) {
                VertexSet keep = reach_avoiding(H, r, {st.handoff});
                keep.push_back(st.handoff);
                Subgraph child = induced_subgraph(H, make_vertex_set(std::move(keep)));
                const Vertex exit = child.local(st.handoff);
                st.level = make_level(compose(L.sub, child));
                st.exit = exit;
                st.block = -1;
                st.block_level.reset();
                st.block_end = -1;
                st.handoff = -1;
                st.phase = StrategyPhase::select_block;
                ++st.depth;
                ann.events.push_back("recurse");
                continue;
            }
            JointCopMove m{s.cops};
            m.to[st.patrol] = L.sub.to_parent[step_toward(H, L.dist, patrol_pos, st.handoff)];
            ann.phase = StrategyPhase::handoff_walk;
            return m;
        }

        default:
            throw invariant_violation("block strategy in an inner phase");
        }
    }
}

inline void require_turn(const GameState& s) {
    if (s.phase != Phase::cops_turn || !s.robber)
        throw precondition_error("strategy called outside a cops' turn");
    if (s.cops.size() != 2)
        throw precondition_error("strategy expects two cops");
}

} // namespace detail

/// Fresh memory for the single-exit game: cop 0 is pinned on the exit and
/// becomes the sentry, cop 1 the patrol.
inline StrategyMemory theorem1_memory(const GameConfig& cfg, StrategyOptions opts = {}) {
    detail::require_two_cops(cfg);
    if (cfg.exits.size() != 1)
        throw precondition_error("block strategy needs exactly one exit");
    StrategyMemory mem;
    mem.mode = StrategyMode::theorem1;
    mem.options = opts;
    Theorem1State st;
    st.level = make_level(identity_subgraph(cfg.graph));
    st.exit = cfg.exits[0];
    mem.outer = std::move(st);
    return mem;
}

/// Fresh memory for the end-pair game with exits {u, v}: cop 0 starts on
/// exits[0], cop 1 on exits[1].
inline StrategyMemory lemma4_memory(const GameConfig& cfg, StrategyOptions opts = {}) {
    detail::require_two_cops(cfg);
    if (cfg.exits.size() != 2)
        throw precondition_error("end-pair strategy needs exactly two exits");
    if (!is_path_like(cfg.graph, cfg.exits[0], cfg.exits[1]))
        throw precondition_error("exits are not a pair of ends of the graph");
    StrategyMemory mem;
    mem.mode = StrategyMode::lemma4;
    mem.options = opts;
    Lemma4State st;
    st.level = make_level(identity_subgraph(cfg.graph));
    st.u = cfg.exits[0];
    st.v = cfg.exits[1];
    mem.inner = std::move(st);
    return mem;
}

inline StrategyStep theorem1_move(const GameConfig& cfg, const GameState& s, const StrategyMemory& m) {
    detail::require_turn(s);
    if (m.mode != StrategyMode::theorem1 || !m.outer)
        throw precondition_error("theorem1_move: memory is not in block mode");
    (void)cfg;
    StrategyStep step{{}, m, {}};
    step.annotation.mode = StrategyMode::theorem1;
    step.move = detail::theorem1_advance(step.memory, s, step.annotation);
    return step;
}

inline StrategyStep lemma4_move(const GameConfig& cfg, const GameState& s, const StrategyMemory& m) {
    detail::require_turn(s);
    if (m.mode != StrategyMode::lemma4 || !m.inner)
        throw precondition_error("lemma4_move: memory is not in end-pair mode");
    (void)cfg;
    StrategyStep step{{}, m, {}};
    step.annotation.mode = StrategyMode::lemma4;
    step.move = detail::lemma4_advance(*step.memory.inner, s, *s.robber, step.memory.options, step.annotation);
    return step;
}

/// Dispatches on the memory's mode.
inline StrategyStep strategy_move(const GameConfig& cfg, const GameState& s, const StrategyMemory& m) {
    return m.mode == StrategyMode::theorem1 ? theorem1_move(cfg, s, m) : lemma4_move(cfg, s, m);
}

/// d(c_u, u') + d(c_v, v') in the active path-like graph.
inline int phi(const StrategyMemory& m, const GameState& s) {
    if (!m.inner || m.inner->phase != StrategyPhase::multi_block_push)
        throw precondition_error("phi is defined only while both cops push");
    if (m.mode == StrategyMode::theorem1 && m.outer->phase != StrategyPhase::play_block)
        throw precondition_error("phi is defined only while both cops push");
    const Lemma4State& st = *m.inner;
    const StrategyLevel& L = *st.level;
    const Vertex cu = detail::local_or_throw(L.sub, s.cops[st.u_cop], "u-cop");
    const Vertex cv = detail::local_or_throw(L.sub, s.cops[st.v_cop], "v-cop");
    return L.dist(cu, st.u_opposite) + L.dist(cv, st.v_opposite);
}

} // namespace spcops
