#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "spcops/io.hpp"
#include "spcops/rng.hpp"
#include "spcops/simulate.hpp"
#include "spcops/solver.hpp"
#include "spcops/strategy.hpp"
#include "spcops/structure.hpp"

namespace spcops {

struct VerifyOptions {
    int count = 200;
    int max_vertices = 12;
    std::uint64_t seed = 1;
    int max_rounds = 0; // 0: 4 |V|^2 per game
    SolveOptions solve;
    StrategyOptions strategy;
};

struct InstanceSpec {
    std::uint64_t seed = 0;
    int vertices = 2;
    int blocks = 1;
};

/// The i-th instance drawn from `seed`: 2..max_vertices vertices and a
/// uniform block count.
inline std::vector<InstanceSpec> draw_instances(std::uint64_t seed, int count, int max_vertices) {
    if (max_vertices < 2)
        throw argument_error("max-vertices must be at least 2");
    Rng rng(seed);
    std::vector<InstanceSpec> out;
    for (int i = 0; i < count; ++i) {
        InstanceSpec s;
        s.vertices = 2 + rng.below(max_vertices - 1);
        s.blocks = 1 + rng.below(s.vertices - 1);
        s.seed = rng.next();
        out.push_back(s);
    }
    return out;
}

struct VerifyReport {
    int instances = 0;
    int exit_games = 0;
    int exit_wins = 0;
    int copwin_verdicts = 0;
    int end_pair_pairs = 0;
    int end_pair_games = 0;
    int end_pair_wins = 0;
    int capacity_errors = 0;
    std::vector<std::string> failures;

    bool ok() const { return failures.empty(); }

    std::string summary() const {
        std::ostringstream out;
        out << "instances: " << instances << '\n'
            << "exit games: " << exit_games << " (cops won cleanly: " << exit_wins << ")\n"
            << "solver verdicts: " << copwin_verdicts << " copwin / " << exit_games - copwin_verdicts
            << " not copwin\n"
            << "end pairs: " << end_pair_pairs << '\n'
            << "end-pair games: " << end_pair_games << " (cops won cleanly: " << end_pair_wins << ")\n"
            << "capacity errors: " << capacity_errors << '\n'
            << "failures: " << failures.size() << '\n';
        for (const auto& f : failures)
            out << "  " << f << '\n';
        out << (ok() ? "PASS" : "FAIL") << '\n';
        return out.str();
    }
};

namespace detail {

inline std::string describe(const InstanceSpec& spec, const Graph& g) {
    return "instance(seed=" + std::to_string(spec.seed) + ", n=" + std::to_string(spec.vertices) +
           ", blocks=" + std::to_string(spec.blocks) + ") " + graph_to_json(g).dump();
}

} // namespace detail

/// For every drawn instance and every exit vertex: the solver must call the
/// single-exit two-cop game a cops win, and the strategy must capture the
/// solver-optimal robber with every claim check holding. Every pair of ends
/// also plays the end-pair game, against the optimal robber and against a
/// stationary robber on each other vertex.
inline VerifyReport verify(const VerifyOptions& opts) {
    VerifyReport rep;
    SimulationOptions sim{opts.max_rounds, opts.strategy};
    for (const InstanceSpec& spec : draw_instances(opts.seed, opts.count, opts.max_vertices)) {
        ++rep.instances;
        const Graph g = generate_sp(spec.seed, spec.vertices, spec.blocks);
        for (Vertex x = 0; x < g.vertex_count(); ++x) {
            const std::string where = detail::describe(spec, g) + " exit " + std::to_string(x);
            try {
                GameConfig cfg{g, {x}, 2};
                OptimalRobber robber(cfg, opts.solve);
                ++rep.exit_games;
                if (is_exit_copwin(robber.table()))
                    ++rep.copwin_verdicts;
                else
                    rep.failures.push_back(where + ": solver says not {x}-exit 2-copwin");
                Transcript t = simulate(cfg, robber, sim);
                if (t.cops_won_cleanly())
                    ++rep.exit_wins;
                else
                    rep.failures.push_back(where + ": " + std::string(to_string(t.outcome)) +
                                           (t.violations.empty() ? "" : " / " + t.violations.front()));
            } catch (const capacity_error&) {
                ++rep.capacity_errors;
            }
        }
        for (Vertex u = 0; u < g.vertex_count(); ++u) {
            for (Vertex v = u + 1; v < g.vertex_count(); ++v) {
                if (!is_path_like(g, u, v))
                    continue;
                const std::string where =
                    detail::describe(spec, g) + " ends " + std::to_string(u) + "," + std::to_string(v);
                GameConfig cfg{g, make_vertex_set({u, v}), 2};
                auto record = [&](const Transcript& t) {
                    ++rep.end_pair_games;
                    if (t.cops_won_cleanly())
                        ++rep.end_pair_wins;
                    else
                        rep.failures.push_back(where + " vs " + t.robber_policy + " robber at " +
                                               std::to_string(t.entries.front().vertices.at(0)) + ": " +
                                               std::string(to_string(t.outcome)) +
                                               (t.violations.empty() ? "" : " / " + t.violations.front()));
                };
                try {
                    OptimalRobber robber(cfg, opts.solve);
                    ++rep.end_pair_pairs;
                    if (!is_exit_copwin(robber.table()))
                        rep.failures.push_back(where + ": solver says not {u,v}-exit 2-copwin");
                    record(simulate(cfg, robber, sim));
                } catch (const capacity_error&) {
                    ++rep.capacity_errors;
                }
                // a robber that sits still from each start
                for (Vertex r = 0; r < g.vertex_count(); ++r) {
                    if (r == u || r == v)
                        continue;
                    PassiveRobber robber(r);
                    record(simulate(cfg, robber, sim));
                }
            }
        }
    }
    return rep;
}

} // namespace spcops
