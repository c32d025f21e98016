#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spcops/errors.hpp"
#include "spcops/graph.hpp"
#include "spcops/rng.hpp"

namespace spcops {

/// Blocks (maximal 2-connected subgraphs or bridges) and cut vertices.
struct BlockCutTree {
    std::vector<VertexSet> blocks;               // sorted lexicographically
    VertexSet cut_vertices;
    std::vector<int> block_of_edge;              // indexed like Graph::edges()
    std::vector<std::vector<int>> blocks_of_vertex;

    bool is_cut(Vertex v) const { return contains(cut_vertices, v); }
    int block_count() const { return static_cast<int>(blocks.size()); }
};

namespace detail {

// Hopcroft-Tarjan with an explicit stack. Works on any graph; isolated
// vertices belong to no block.
inline BlockCutTree biconnected_components(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> disc(n, -1), low(n, 0);
    std::vector<int> edge_stack;
    std::vector<VertexSet> raw_blocks;
    std::vector<std::vector<int>> raw_block_edges;
    std::vector<bool> is_cut(n, false);
    int timer = 0;

    struct Frame {
        Vertex v;
        int parent_edge;
        std::size_t next;
        int children;
    };

    for (Vertex root = 0; root < n; ++root) {
        if (disc[root] != -1)
            continue;
        std::vector<Frame> stack{{root, -1, 0, 0}};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            auto nbrs = g.neighbors(f.v);
            if (f.next < nbrs.size()) {
                Vertex w = nbrs[f.next++];
                int e = g.edge_index(f.v, w);
                if (e == f.parent_edge)
                    continue;
                if (disc[w] == -1) {
                    edge_stack.push_back(e);
                    disc[w] = low[w] = timer++;
                    ++f.children;
                    stack.push_back({w, e, 0, 0});
                } else if (disc[w] < disc[f.v]) {
                    edge_stack.push_back(e);
                    low[f.v] = std::min(low[f.v], disc[w]);
                }
                continue;
            }
            Frame done = f;
            stack.pop_back();
            if (stack.empty()) {
                if (done.children >= 2)
                    is_cut[done.v] = true;
                break;
            }
            Frame& parent = stack.back();
            low[parent.v] = std::min(low[parent.v], low[done.v]);
            if (low[done.v] >= disc[parent.v]) {
                if (stack.size() > 1)
                    is_cut[parent.v] = true;
                VertexSet verts;
                std::vector<int> edges;
                while (true) {
                    int e = edge_stack.back();
                    edge_stack.pop_back();
                    edges.push_back(e);
                    verts.push_back(g.edges()[e].a);
                    verts.push_back(g.edges()[e].b);
                    if (e == done.parent_edge)
                        break;
                }
                raw_blocks.push_back(make_vertex_set(std::move(verts)));
                raw_block_edges.push_back(std::move(edges));
            }
        }
    }

    std::vector<int> order(raw_blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return raw_blocks[x] < raw_blocks[y]; });

    BlockCutTree bct;
    bct.block_of_edge.assign(g.edge_count(), -1);
    bct.blocks_of_vertex.assign(n, {});
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int src = order[i];
        for (int e : raw_block_edges[src])
            bct.block_of_edge[e] = static_cast<int>(i);
        for (Vertex v : raw_blocks[src])
            bct.blocks_of_vertex[v].push_back(static_cast<int>(i));
        bct.blocks.push_back(std::move(raw_blocks[src]));
    }
    for (Vertex v = 0; v < n; ++v)
        if (is_cut[v])
            bct.cut_vertices.push_back(v);
    return bct;
}

enum class ReductionKind { series, merge };

// series: w (degree 2, neighbors a and b) was removed and replaced by an
// edge a-b. merge: two parallel a-b edges became one.
struct ReductionStep {
    ReductionKind kind;
    Vertex a;
    Vertex b;
    Vertex w = -1;
};

// Series/parallel reduction on a multigraph. Parallel edges are merged as
// soon as they appear, so multiplicities stay at one. Non-terminal vertices
// of degree two are reduced in increasing id order.
class SpReducer {
  public:
    SpReducer(const Graph& g, std::vector<Vertex> terminals)
        : adj_(g.vertex_count()), alive_(g.vertex_count(), true),
          terminal_(g.vertex_count(), false), alive_count_(g.vertex_count()) {
        for (const Edge& e : g.edges()) {
            adj_[e.a].insert(e.b);
            adj_[e.b].insert(e.a);
        }
        for (Vertex t : terminals)
            terminal_[t] = true;
    }

    void run() {
        std::set<Vertex> work;
        for (Vertex v = 0; v < static_cast<Vertex>(adj_.size()); ++v)
            if (!terminal_[v])
                work.insert(v);
        while (!work.empty()) {
            Vertex w = *work.begin();
            work.erase(work.begin());
            if (!alive_[w] || terminal_[w] || adj_[w].size() != 2)
                continue;
            Vertex a = *adj_[w].begin();
            Vertex b = *std::next(adj_[w].begin());
            adj_[a].erase(w);
            adj_[b].erase(w);
            adj_[w].clear();
            alive_[w] = false;
            --alive_count_;
            log_.push_back({ReductionKind::series, a, b, w});
            if (adj_[a].count(b)) {
                log_.push_back({ReductionKind::merge, a, b});
            } else {
                adj_[a].insert(b);
                adj_[b].insert(a);
            }
            if (!terminal_[a])
                work.insert(a);
            if (!terminal_[b])
                work.insert(b);
        }
    }

    int alive_count() const { return alive_count_; }
    bool alive(Vertex v) const { return alive_[v]; }
    bool adjacent(Vertex a, Vertex b) const { return adj_[a].count(b) != 0; }
    const std::vector<ReductionStep>& log() const { return log_; }

  private:
    std::vector<std::set<Vertex>> adj_;
    std::vector<bool> alive_;
    std::vector<bool> terminal_;
    int alive_count_;
    std::vector<ReductionStep> log_;
};

inline bool two_terminal_reduces(const Graph& g, Vertex u, Vertex v, SpReducer& r) {
    r.run();
    return r.alive_count() == 2 && r.alive(u) && r.alive(v) && r.adjacent(u, v);
}

} // namespace detail

/// Requires a connected graph with at least two vertices.
inline BlockCutTree block_cut_tree(const Graph& g) {
    if (g.vertex_count() < 2)
        throw argument_error("block_cut_tree: need at least two vertices");
    if (!is_connected(g))
        throw argument_error("block_cut_tree: graph is disconnected");
    return detail::biconnected_components(g);
}

/// True iff `g` has no K4 minor. Each block is reduced by series and parallel
/// reductions; a block is K4-minor-free iff it shrinks to a single edge.
inline bool is_series_parallel(const Graph& g) {
    BlockCutTree bct = detail::biconnected_components(g);
    for (const VertexSet& block : bct.blocks) {
        if (block.size() <= 3)
            continue;
        Subgraph sub = induced_subgraph(g, block);
        detail::SpReducer r(sub.graph, {});
        r.run();
        if (r.alive_count() > 2)
            return false;
    }
    return true;
}

/// True iff `g` can be built from the single edge uv by duplicating and
/// subdividing edges, i.e. g is two-terminal series-parallel with terminals
/// u and v.
inline bool is_path_like(const Graph& g, Vertex u, Vertex v) {
    g.check_vertex(u);
    g.check_vertex(v);
    if (u == v || !is_connected(g))
        return false;
    detail::SpReducer r(g, {u, v});
    return detail::two_terminal_reduces(g, u, v, r);
}

struct ConstructionStep {
    enum class Kind { base_edge, duplicate, subdivide };
    Kind kind;
    Vertex a;
    Vertex b;
    Vertex added = -1; // subdivide only

    friend bool operator==(const ConstructionStep&, const ConstructionStep&) = default;
};

/// Witness that (u, v) is a pair of ends: replaying `steps` from the edge uv
/// rebuilds the graph with the same vertex ids.
struct EndPairCertificate {
    Vertex u = -1;
    Vertex v = -1;
    std::vector<ConstructionStep> steps;
};

/// Replays the construction. Returns nullopt if a step refers to a missing
/// edge, reuses a vertex, or the result still carries parallel edges.
inline std::optional<Graph> replay_certificate(const EndPairCertificate& cert, int vertex_count) {
    if (cert.steps.empty() || cert.steps.front().kind != ConstructionStep::Kind::base_edge)
        return std::nullopt;
    std::map<std::pair<Vertex, Vertex>, int> mult;
    std::vector<bool> present(vertex_count, false);
    auto in_range = [&](Vertex x) { return x >= 0 && x < vertex_count; };
    auto key = [](Vertex a, Vertex b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };

    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        const ConstructionStep& s = cert.steps[i];
        if (!in_range(s.a) || !in_range(s.b) || s.a == s.b)
            return std::nullopt;
        switch (s.kind) {
        case ConstructionStep::Kind::base_edge:
            if (i != 0 || s.a != cert.u || s.b != cert.v)
                return std::nullopt;
            present[s.a] = present[s.b] = true;
            mult[key(s.a, s.b)] = 1;
            break;
        case ConstructionStep::Kind::duplicate:
            if (mult[key(s.a, s.b)] < 1)
                return std::nullopt;
            ++mult[key(s.a, s.b)];
            break;
        case ConstructionStep::Kind::subdivide:
            if (mult[key(s.a, s.b)] < 1 || !in_range(s.added) || present[s.added])
                return std::nullopt;
            --mult[key(s.a, s.b)];
            present[s.added] = true;
            ++mult[key(s.a, s.added)];
            ++mult[key(s.added, s.b)];
            break;
        }
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (auto [e, m] : mult) {
        if (m > 1)
            return std::nullopt;
        if (m == 1)
            edges.push_back(e);
    }
    if (std::find(present.begin(), present.end(), false) != present.end())
        return std::nullopt;
    return Graph(vertex_count, std::move(edges));
}

inline bool certifies(const EndPairCertificate& cert, const Graph& g) {
    auto rebuilt = replay_certificate(cert, g.vertex_count());
    return rebuilt && *rebuilt == g;
}

struct EndPair {
    Vertex v;
    EndPairCertificate certificate;
};

/// For a 2-connected series-parallel graph and any vertex u, the smallest v
/// such that (u, v) is a pair of ends, with its construction certificate.
inline EndPair find_end_pair(const Graph& g, Vertex u) {
    g.check_vertex(u);
    if (g.vertex_count() < 2 || !is_connected(g))
        throw precondition_error("find_end_pair: graph must be connected with >= 2 vertices");
    if (detail::biconnected_components(g).block_count() != 1)
        throw precondition_error("find_end_pair: graph is not 2-connected");
    if (!is_series_parallel(g))
        throw precondition_error("find_end_pair: graph is not series-parallel");

    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (v == u)
            continue;
        detail::SpReducer r(g, {u, v});
        if (!detail::two_terminal_reduces(g, u, v, r))
            continue;
        EndPair out{v, {u, v, {}}};
        out.certificate.steps.push_back({ConstructionStep::Kind::base_edge, u, v});
        const auto& log = r.log();
        for (auto it = log.rbegin(); it != log.rend(); ++it) {
            if (it->kind == detail::ReductionKind::merge)
                out.certificate.steps.push_back({ConstructionStep::Kind::duplicate, it->a, it->b});
            else
                out.certificate.steps.push_back(
                    {ConstructionStep::Kind::subdivide, it->a, it->b, it->w});
        }
        return out;
    }
    throw invariant_violation("find_end_pair: no end partner for a 2-connected SP graph");
}

/// Block vertices that are not cut vertices of the whole graph.
inline VertexSet interior(const BlockCutTree& bct, int block) {
    if (block < 0 || block >= bct.block_count())
        throw argument_error("interior: bad block index " + std::to_string(block));
    VertexSet out;
    for (Vertex v : bct.blocks[block])
        if (!bct.is_cut(v))
            out.push_back(v);
    return out;
}

/// The vertex of block `b` closest to `r`. Unique whenever `b` is a block of
/// a connected graph; a tie means `b` is not a block.
inline Vertex projection(const Graph& g, const VertexSet& b, Vertex r) {
    g.check_vertex(r);
    if (b.empty())
        throw argument_error("projection: empty block");
    auto dist = all_distances_from(g, r);
    Vertex best = -1;
    bool tied = false;
    for (Vertex x : b) {
        if (dist[x] == unreachable)
            continue;
        if (best == -1 || dist[x] < dist[best]) {
            best = x;
            tied = false;
        } else if (dist[x] == dist[best]) {
            tied = true;
        }
    }
    if (best == -1)
        throw argument_error("projection: block unreachable from robber");
    if (tied)
        throw invariant_violation("projection: closest vertex is not unique");
    return best;
}

/// Among the blocks containing `u`, the one containing an edge of a path
/// from `u` to `r`.
inline int block_toward_robber(const Graph& g, const BlockCutTree& bct, Vertex u, Vertex r) {
    g.check_vertex(u);
    g.check_vertex(r);
    if (u == r)
        throw argument_error("block_toward_robber: u equals robber vertex");
    auto dist = all_distances_from(g, r);
    if (dist[u] == unreachable)
        throw argument_error("block_toward_robber: robber unreachable from u");
    for (Vertex w : g.neighbors(u))
        if (dist[w] == dist[u] - 1)
            return bct.block_of_edge[g.edge_index(u, w)];
    throw invariant_violation("block_toward_robber: no neighbor closer to robber");
}

/// Random connected series-parallel graph with exactly `n_vertices`
/// vertices and `n_blocks` blocks. Each block of size >= 3 grows from a
/// doubled edge by random duplications and subdivisions; blocks are glued
/// onto random existing vertices and ids are shuffled at the end.
inline Graph generate_sp(std::uint64_t seed, int n_vertices, int n_blocks) {
    if (n_vertices < 2)
        throw argument_error("generate_sp: need at least 2 vertices");
    if (n_blocks < 1 || n_blocks > n_vertices - 1)
        throw argument_error("generate_sp: " + std::to_string(n_blocks) + " blocks cannot fit in " +
                             std::to_string(n_vertices) + " vertices");
    Rng rng(seed);
    std::vector<int> sizes(n_blocks, 2);
    for (int extra = n_vertices - n_blocks - 1; extra > 0; --extra)
        ++sizes[rng.below(n_blocks)];

    std::vector<std::pair<Vertex, Vertex>> edges;
    int next_id = 0;
    for (int i = 0; i < n_blocks; ++i) {
        const int s = sizes[i];
        std::vector<std::pair<int, int>> local{{0, 1}};
        if (s >= 3) {
            local.push_back({0, 1});
            int count = 2;
            while (count < s) {
                auto e = static_cast<std::size_t>(rng.below(static_cast<int>(local.size())));
                if (rng.unit() < 0.35) {
                    local.push_back(local[e]);
                } else {
                    auto [a, b] = local[e];
                    local[e] = {a, count};
                    local.push_back({count, b});
                    ++count;
                }
            }
        }
        std::vector<Vertex> id(s);
        if (i == 0) {
            for (int j = 0; j < s; ++j)
                id[j] = next_id++;
        } else {
            Vertex attach = rng.below(next_id);
            int glued = rng.below(s);
            for (int j = 0; j < s; ++j)
                id[j] = j == glued ? attach : next_id++;
        }
        for (auto [a, b] : local)
            edges.emplace_back(id[a], id[b]);
    }

    std::vector<Vertex> perm(n_vertices);
    for (int v = 0; v < n_vertices; ++v)
        perm[v] = v;
    rng.shuffle(perm);
    for (auto& [a, b] : edges) {
        a = perm[a];
        b = perm[b];
    }
    return Graph(n_vertices, std::move(edges));
}

} // namespace spcops
