// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fail.
// Usage: acceptance <path to spcops binary>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "oracles.hpp"
#include "spcops/io.hpp"
#include "spcops/simulate.hpp"
#include "spcops/structure.hpp"
#include "spcops/verify.hpp"
#include "test_graphs.hpp"

using namespace spcops;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string first_failure;

    void fail(const std::string& why) {
        if (pass)
            first_failure = why;
        pass = false;
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass)
        ++failures;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << " [" << secs << " s]";
    if (!o.pass)
        line << " first failure: " << o.first_failure;
    std::cout << line.str() << std::endl;
}

std::string label(const Graph& g) { return graph_to_json(g).dump(); }

Outcome exit_copwin_oracle() {
    Outcome o;
    int graphs = 0, exits = 0;
    for (const InstanceSpec& spec : draw_instances(101, 250, 10)) {
        const Graph g = generate_sp(spec.seed, spec.vertices, spec.blocks);
        ++graphs;
        for (Vertex x = 0; x < g.vertex_count(); ++x) {
            ++exits;
            if (!is_exit_copwin(GameConfig{g, {x}, 2}))
                o.fail(label(g) + " exit " + std::to_string(x));
        }
    }
    o.detail = std::to_string(graphs) + " graphs up to 10 vertices, " + std::to_string(exits) +
               " exits, all 2-copwin";
    if (!o.pass)
        o.detail = std::to_string(graphs) + " graphs, some exit not 2-copwin";
    return o;
}

Outcome strategy_vs_optimal() {
    Outcome o;
    int graphs = 0, games = 0, clean = 0, longest = 0;
    for (const InstanceSpec& spec : draw_instances(202, 250, 12)) {
        const Graph g = generate_sp(spec.seed, spec.vertices, spec.blocks);
        const int n = g.vertex_count();
        ++graphs;
        for (Vertex x = 0; x < n; ++x) {
            const GameConfig cfg{g, {x}, 2};
            OptimalRobber robber(cfg);
            const Transcript t = simulate(cfg, robber, SimulationOptions{4 * n * n, {}});
            ++games;
            longest = std::max(longest, t.rounds);
            if (t.cops_won_cleanly() && t.rounds <= 4 * n * n)
                ++clean;
            else
                o.fail(label(g) + " exit " + std::to_string(x) + ": " + std::string(to_string(t.outcome)) +
                       (t.violations.empty() ? "" : " / " + t.violations.front()));
        }
    }
    o.detail = std::to_string(graphs) + " graphs up to 12 vertices, " + std::to_string(clean) + "/" +
               std::to_string(games) + " exit games won with no claim violation, longest " +
               std::to_string(longest) + " rounds";
    return o;
}

Outcome end_pair_direct() {
    Outcome o;
    int graphs = 0, pairs = 0, wins = 0;
    Rng rng(303);
    for (int i = 0; i < 300; ++i) {
        const int n = 2 + static_cast<int>(rng.below(11));
        const Graph g = generate_sp(rng.next(), n, 1);
        ++graphs;
        for (Vertex u = 0; u < n; ++u) {
            const EndPair ep = find_end_pair(g, u);
            ++pairs;
            const GameConfig cfg{g, make_vertex_set({u, ep.v}), 2};
            SolveTable table = solve(cfg);
            const std::string where = label(g) + " ends " + std::to_string(u) + "," + std::to_string(ep.v);
            if (!is_exit_copwin(table)) {
                o.fail(where + ": solver says not copwin");
                continue;
            }
            OptimalRobber robber(std::move(table));
            const Transcript t = simulate(cfg, robber);
            if (t.cops_won_cleanly())
                ++wins;
            else
                o.fail(where + ": " + std::string(to_string(t.outcome)) +
                       (t.violations.empty() ? "" : " / " + t.violations.front()));
        }
    }
    o.detail = std::to_string(graphs) + " 2-connected graphs up to 12 vertices, " + std::to_string(wins) + "/" +
               std::to_string(pairs) + " end pairs copwin and won by the end-pair strategy";
    return o;
}

Outcome petersen_control() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const bool two = is_exit_copwin(GameConfig{graphs::petersen(), {}, 2});
    const bool three = is_exit_copwin(GameConfig{graphs::petersen(), {}, 3});
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (two)
        o.fail("2 cops reported copwin");
    if (!three)
        o.fail("3 cops reported not copwin");
    if (secs >= 60)
        o.fail("took " + std::to_string(secs) + " s");
    o.detail = std::string("2 cops ") + (two ? "copwin" : "not copwin") + ", 3 cops " +
               (three ? "copwin" : "not copwin");
    return o;
}

Outcome minimax_cross_check() {
    Outcome o;
    int configs = 0;
    long states = 0;
    for (int n = 1; n <= 6; ++n)
        for (const Graph& g : oracle::connected_graphs_up_to_iso(n))
            for (int k = 1; k <= 2; ++k)
                for (Vertex x = -1; x < n; ++x) {
                    std::vector<Vertex> exits;
                    if (x >= 0)
                        exits.push_back(x);
                    SolveTable t = solve(GameConfig{g, make_vertex_set(exits), k});
                    oracle::Minimax mm(g, exits, k);
                    ++configs;
                    const std::size_t tuples = k == 1 ? n : n * n;
                    for (std::size_t tup = 0; tup < tuples; ++tup) {
                        const auto cops = mm.cops_of(tup);
                        for (Vertex r = 0; r < n; ++r) {
                            if (std::find(cops.begin(), cops.end(), r) != cops.end())
                                continue;
                            for (int mover = 0; mover < 2; ++mover) {
                                if (mover == 1 && x == r)
                                    continue;
                                ++states;
                                const int want = mm.value(cops, r, mover);
                                const std::size_t s = t.index(cops, r, mover == 0 ? Mover::cops : Mover::robber);
                                const bool same = t.cops_win(s) == (want != -1) &&
                                                  (want == -1 || static_cast<int>(t.distance_to_capture(s)) == want);
                                if (!same)
                                    o.fail(label(g) + " k=" + std::to_string(k) + " exit=" + std::to_string(x));
                            }
                        }
                    }
                    if (is_exit_copwin(t) != mm.exit_copwin())
                        o.fail(label(g) + " k=" + std::to_string(k) + " exit=" + std::to_string(x) + " verdict");
                }
    o.detail = std::to_string(configs) + " configurations on all connected graphs up to 6 vertices, " +
               std::to_string(states) + " states, labels and capture distances match";
    return o;
}

Graph from_mask(int n, std::uint64_t mask) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    int bit = 0;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b, ++bit)
            if (mask >> bit & 1)
                edges.push_back({a, b});
    return Graph(n, std::move(edges));
}

Outcome sp_recognition() {
    Outcome o;
    long exhaustive = 0, sampled = 0, sp = 0, certificates = 0;
    auto check = [&](const Graph& g) {
        const bool mine = is_series_parallel(g);
        if (mine == oracle::has_k4_minor(g))
            o.fail(label(g) + (mine ? " has a K4 minor" : " has no K4 minor"));
        sp += mine;
        if (mine && g.vertex_count() >= 2 && is_connected(g) && block_cut_tree(g).block_count() == 1)
            for (Vertex u = 0; u < g.vertex_count(); ++u) {
                ++certificates;
                if (!certifies(find_end_pair(g, u).certificate, g))
                    o.fail(label(g) + " certificate from " + std::to_string(u) + " does not replay");
            }
    };
    for (int n = 1; n <= 6; ++n)
        for (std::uint64_t mask = 0; mask < (1ULL << (n * (n - 1) / 2)); ++mask) {
            check(from_mask(n, mask));
            ++exhaustive;
        }
    Rng rng(606);
    for (int i = 0; i < 10000; ++i) {
        const int n = 7 + static_cast<int>(rng.below(2));
        const int pairs = n * (n - 1) / 2;
        // densities from sparse to dense so both answers show up
        const int percent = 15 + static_cast<int>(rng.below(50));
        std::uint64_t mask = 0;
        for (int b = 0; b < pairs; ++b)
            if (static_cast<int>(rng.below(100)) < percent)
                mask |= 1ULL << b;
        check(from_mask(n, mask));
        ++sampled;
    }
    o.detail = std::to_string(exhaustive) + " labelled graphs up to 6 vertices and " + std::to_string(sampled) +
               " sampled on 7-8 vertices agree with the K4-minor oracle (" + std::to_string(sp) +
               " series-parallel), " + std::to_string(certificates) + " end-pair certificates replay";
    return o;
}

std::pair<int, std::string> capture(const std::string& cmd) {
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome verify_determinism(const std::string& cli) {
    Outcome o;
    const std::string cmd = cli + " verify --seed 1 2>&1";
    const auto a = capture(cmd);
    const auto b = capture(cmd);
    if (a.first != 0)
        o.fail("verify exited with " + std::to_string(a.first));
    if (a.second != b.second || a.first != b.first)
        o.fail("outputs differ");
    if (a.second.empty())
        o.fail("no output");
    o.detail = "two verify runs with seed 1 produced " + std::to_string(a.second.size()) + " identical bytes" +
               (a.first == 0 ? " and reported PASS" : "");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <spcops binary>\n";
        return 2;
    }
    criterion("exit-copwin-oracle", exit_copwin_oracle);
    criterion("strategy-vs-optimal-robber", strategy_vs_optimal);
    criterion("end-pair-direct", end_pair_direct);
    criterion("petersen-control", petersen_control);
    criterion("minimax-cross-check", minimax_cross_check);
    criterion("sp-recognition", sp_recognition);
    criterion("verify-determinism", [&] { return verify_determinism(argv[1]); });
    return failures == 0 ? 0 : 1;
}
