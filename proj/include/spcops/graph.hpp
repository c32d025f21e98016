#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spcops/errors.hpp"

namespace spcops {

using Vertex = int;

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

struct Edge {
    Vertex a;
    Vertex b; // a < b

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline constexpr int unreachable = -1;

inline VertexSet make_vertex_set(std::vector<Vertex> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

inline bool contains(const VertexSet& s, Vertex v) {
    return std::binary_search(s.begin(), s.end(), v);
}

/// Finite simple undirected graph on vertices 0..vertex_count()-1.
///
/// Immutable once built. Edges are stored normalized (a < b) and sorted;
/// adjacency lists are sorted by vertex id, which every deterministic
/// tie-break in the library relies on.
class Graph {
  public:
    Graph() = default;

    /// Throws argument_error on out-of-range endpoints or self-loops.
    /// Repeated edges are merged.
    Graph(int vertex_count, std::vector<std::pair<Vertex, Vertex>> edge_list)
        : n_(vertex_count), adj_(vertex_count > 0 ? vertex_count : 0) {
        if (vertex_count < 0)
            throw argument_error("negative vertex count");
        edges_.reserve(edge_list.size());
        for (auto [a, b] : edge_list) {
            if (a < 0 || b < 0 || a >= n_ || b >= n_)
                throw argument_error("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                     ") has an endpoint outside 0.." + std::to_string(n_ - 1));
            if (a == b)
                throw argument_error("self-loop at vertex " + std::to_string(a));
            if (a > b)
                std::swap(a, b);
            edges_.push_back({a, b});
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (const Edge& e : edges_) {
            adj_[e.a].push_back(e.b);
            adj_[e.b].push_back(e.a);
        }
        for (auto& row : adj_)
            std::sort(row.begin(), row.end());
    }

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    std::span<const Edge> edges() const { return edges_; }

    std::span<const Vertex> neighbors(Vertex v) const {
        check_vertex(v);
        return adj_[v];
    }
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }

    bool adjacent(Vertex a, Vertex b) const {
        const auto& row = adj_.at(a);
        return std::binary_search(row.begin(), row.end(), b);
    }

    /// Index into edges(), or -1.
    int edge_index(Vertex a, Vertex b) const {
        if (a > b)
            std::swap(a, b);
        auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{a, b});
        if (it == edges_.end() || *it != Edge{a, b})
            return -1;
        return static_cast<int>(it - edges_.begin());
    }

    bool valid(Vertex v) const { return v >= 0 && v < n_; }

    void check_vertex(Vertex v) const {
        if (!valid(v))
            throw argument_error("vertex " + std::to_string(v) + " is not in 0.." +
                                 std::to_string(n_ - 1));
    }

    void check_vertex_set(const VertexSet& s) const {
        for (Vertex v : s)
            check_vertex(v);
    }

    std::vector<std::pair<Vertex, Vertex>> edge_pairs() const {
        std::vector<std::pair<Vertex, Vertex>> out;
        out.reserve(edges_.size());
        for (const Edge& e : edges_)
            out.emplace_back(e.a, e.b);
        return out;
    }

    friend bool operator==(const Graph& x, const Graph& y) {
        return x.n_ == y.n_ && x.edges_ == y.edges_;
    }

  private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adj_;
};

/// BFS distances from `source`; `unreachable` for other components.
inline std::vector<int> all_distances_from(const Graph& g, Vertex source) {
    g.check_vertex(source);
    std::vector<int> dist(g.vertex_count(), unreachable);
    std::deque<Vertex> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        Vertex x = queue.front();
        queue.pop_front();
        for (Vertex y : g.neighbors(x)) {
            if (dist[y] == unreachable) {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    return dist;
}

inline std::optional<int> distance(const Graph& g, Vertex a, Vertex b) {
    g.check_vertex(b);
    int d = all_distances_from(g, a)[b];
    if (d == unreachable)
        return std::nullopt;
    return d;
}

/// Components ordered by their smallest vertex; each component sorted.
inline std::vector<VertexSet> connected_components(const Graph& g) {
    std::vector<int> label(g.vertex_count(), -1);
    std::vector<VertexSet> out;
    for (Vertex s = 0; s < g.vertex_count(); ++s) {
        if (label[s] != -1)
            continue;
        VertexSet comp;
        std::vector<Vertex> stack{s};
        label[s] = static_cast<int>(out.size());
        while (!stack.empty()) {
            Vertex x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            for (Vertex y : g.neighbors(x)) {
                if (label[y] == -1) {
                    label[y] = label[s];
                    stack.push_back(y);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

inline bool is_connected(const Graph& g) {
    return g.vertex_count() > 0 && connected_components(g).size() == 1;
}

/// A graph derived from a parent graph together with the id translation.
/// Local ids follow the parent's id order, so "smallest id" tie-breaks agree
/// across levels.
struct Subgraph {
    Graph graph;
    std::vector<Vertex> to_parent;   // local -> parent
    std::vector<Vertex> from_parent; // parent -> local, -1 when absent

    Vertex local(Vertex parent_id) const {
        if (parent_id < 0 || parent_id >= static_cast<int>(from_parent.size()))
            return -1;
        return from_parent[parent_id];
    }
    bool holds(Vertex parent_id) const { return local(parent_id) != -1; }
};

inline Subgraph induced_subgraph(const Graph& g, const VertexSet& s) {
    if (s.empty())
        throw argument_error("induced_subgraph: empty vertex set");
    g.check_vertex_set(s);
    Subgraph sub;
    sub.to_parent = make_vertex_set(s);
    sub.from_parent.assign(g.vertex_count(), -1);
    for (int i = 0; i < static_cast<int>(sub.to_parent.size()); ++i)
        sub.from_parent[sub.to_parent[i]] = i;
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (const Edge& e : g.edges()) {
        Vertex a = sub.from_parent[e.a], b = sub.from_parent[e.b];
        if (a != -1 && b != -1)
            edges.emplace_back(a, b);
    }
    sub.graph = Graph(static_cast<int>(sub.to_parent.size()), std::move(edges));
    return sub;
}

/// Same vertex set and maps, one edge (given in local ids) dropped.
inline Subgraph without_edge(const Subgraph& sub, Vertex a, Vertex b) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (const Edge& e : sub.graph.edges())
        if (!(e == Edge{std::min(a, b), std::max(a, b)}))
            edges.emplace_back(e.a, e.b);
    Subgraph out = sub;
    out.graph = Graph(sub.graph.vertex_count(), std::move(edges));
    return out;
}

/// Composes child (ids local to `parent.graph`) with parent, giving maps
/// straight into the parent's parent.
inline Subgraph compose(const Subgraph& parent, const Subgraph& child) {
    Subgraph out;
    out.graph = child.graph;
    out.to_parent.resize(child.to_parent.size());
    out.from_parent.assign(parent.from_parent.size(), -1);
    for (std::size_t i = 0; i < child.to_parent.size(); ++i) {
        Vertex top = parent.to_parent[child.to_parent[i]];
        out.to_parent[i] = top;
        out.from_parent[top] = static_cast<Vertex>(i);
    }
    return out;
}

inline Subgraph identity_subgraph(const Graph& g) {
    Subgraph sub;
    sub.graph = g;
    sub.to_parent.resize(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        sub.to_parent[v] = v;
    sub.from_parent = sub.to_parent;
    return sub;
}

/// All-pairs BFS distances; fine for the desk-scale graphs the strategy and
/// solver work on.
class DistanceMatrix {
  public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(const Graph& g) : n_(g.vertex_count()) {
        d_.reserve(static_cast<std::size_t>(n_) * n_);
        for (Vertex s = 0; s < n_; ++s) {
            auto row = all_distances_from(g, s);
            d_.insert(d_.end(), row.begin(), row.end());
        }
    }

    int operator()(Vertex a, Vertex b) const {
        return d_[static_cast<std::size_t>(a) * n_ + b];
    }
    int size() const { return n_; }

  private:
    int n_ = 0;
    std::vector<int> d_;
};

/// One step from `from` along a shortest path to `to`: the smallest-id
/// neighbor that decreases the distance, or `from` itself when already there.
inline Vertex step_toward(const Graph& g, const DistanceMatrix& dist, Vertex from, Vertex to) {
    if (from == to)
        return from;
    int d = dist(from, to);
    if (d == unreachable)
        throw invariant_violation("step_toward: target unreachable");
    for (Vertex y : g.neighbors(from))
        if (dist(y, to) == d - 1)
            return y;
    throw invariant_violation("step_toward: no neighbor closer to target");
}

} // namespace spcops
