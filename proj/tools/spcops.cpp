// spcops: solve, simulate, generate, verify and serve the cops-and-robber
// game with exits.
//
// Exit codes: 0 success / true verdict, 1 false verdict, 2 error.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "spcops/http_api.hpp"
#include "spcops/io.hpp"
#include "spcops/session.hpp"
#include "spcops/simulate.hpp"
#include "spcops/solver.hpp"
#include "spcops/structure.hpp"
#include "spcops/verify.hpp"

using namespace spcops;

namespace {

constexpr int exit_true = 0;
constexpr int exit_false = 1;
constexpr int exit_error = 2;

// Flag first, then SP_COPWIN_STATE_BUDGET, then the default.
SolveOptions solve_options(std::optional<std::size_t> flag) {
    SolveOptions o;
    if (flag)
        o.state_budget = *flag;
    else if (const char* env = std::getenv("SP_COPWIN_STATE_BUDGET")) {
        try {
            std::size_t used = 0;
            o.state_budget = std::stoull(env, &used);
            if (used != std::string(env).size())
                throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw argument_error(std::string("SP_COPWIN_STATE_BUDGET is not a number: ") + env);
        }
    }
    return o;
}

VertexSet parse_csv(const std::string& csv) {
    std::vector<Vertex> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos)
            continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos)
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw argument_error("bad vertex id in --exits: '" + item + "'");
        }
    }
    return make_vertex_set(std::move(out));
}

std::string join(const std::vector<Vertex>& vs) {
    std::string s;
    for (Vertex v : vs)
        s += (s.empty() ? "" : " ") + std::to_string(v);
    return s.empty() ? "-" : s;
}

struct SolveArgs {
    std::string graph;
    int cops = 2;
    std::string exits;
    std::optional<std::size_t> budget;
    std::string dump;
};

int run_solve(const SolveArgs& a) {
    GameConfig cfg{read_graph_file(a.graph), parse_csv(a.exits), a.cops};
    cfg.validate();
    const SolveTable t = solve(cfg, solve_options(a.budget));
    const Placement p = adversarial_placement(t);
    const bool win = p.label == Label::cops_win;
    std::cout << (win ? "copwin" : "not copwin") << '\n' << "states: " << t.state_count() << '\n';
    if (win) {
        std::cout << "worst placement: free cops " << join(p.free_cops) << ", robber " << p.robber;
        std::vector<Vertex> cops = cfg.exits;
        cops.insert(cops.end(), p.free_cops.begin(), p.free_cops.end());
        if (std::find(cops.begin(), cops.end(), p.robber) != cops.end()) {
            std::cout << " (caught on placement)\n";
        } else {
            std::cout << " (capture in " << p.distance_to_capture << " plies)\n";
            GameState s = new_game(cfg);
            if (s.phase == Phase::placing_free_cops)
                s = place_free_cops(cfg, s, p.free_cops);
            s = place_robber(cfg, s, p.robber);
            std::cout << "opening cop move: " << join(optimal_cop_move(t, s).to) << '\n';
        }
    }
    if (!a.dump.empty()) {
        std::ofstream out(a.dump);
        if (!out)
            throw argument_error("cannot write " + a.dump);
        out << to_json(t).dump() << '\n';
    }
    return win ? exit_true : exit_false;
}

struct SimulateArgs {
    std::string graph;
    Vertex exit = 0;
    std::string robber = "optimal";
    std::uint64_t seed = 1;
    int max_rounds = 0;
    bool check_claims = false;
    std::optional<std::size_t> budget;
};

int run_simulate(const SimulateArgs& a) {
    const Graph g = read_graph_file(a.graph);
    g.check_vertex(a.exit);
    if (!is_connected(g))
        throw precondition_error("graph is not connected");
    if (!is_series_parallel(g))
        throw precondition_error("graph is not series-parallel");
    GameConfig cfg{g, {a.exit}, 2};
    std::unique_ptr<RobberPolicy> robber;
    if (a.robber == "optimal")
        robber = std::make_unique<OptimalRobber>(cfg, solve_options(a.budget));
    else if (a.robber == "random")
        robber = std::make_unique<RandomRobber>(a.seed);
    else if (a.robber == "passive")
        robber = std::make_unique<PassiveRobber>();
    else
        robber = std::make_unique<StreamRobber>(std::cin, std::cerr);
    const Transcript t = simulate(cfg, *robber, SimulationOptions{a.max_rounds, {}});
    std::cout << to_json(t, a.check_claims).dump(2) << '\n';
    if (t.outcome != Outcome::cops_won)
        return exit_false;
    return a.check_claims && !t.violations.empty() ? exit_false : exit_true;
}

std::function<void()> stop_server;

void on_signal(int) {
    if (stop_server)
        stop_server();
}

int run_serve(const std::string& host, int port, const std::string& snapshot_dir) {
    std::optional<std::filesystem::path> dir;
    if (!snapshot_dir.empty())
        dir = snapshot_dir;
    SessionStore store(dir);
    httplib::Server server;
    install_routes(server, store);
    if (!server.bind_to_port(host, port)) {
        std::cerr << "error: cannot bind " << host << ":" << port << '\n';
        return exit_error;
    }
    stop_server = [&server] { server.stop(); };
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << host << ":" << port << std::endl;
    server.listen_after_bind();
    stop_server = nullptr;
    return exit_true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cops and robber with exits on series-parallel graphs"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "decide whether the cops win the exit game");
    solve_cmd->add_option("--graph", sa.graph, "graph file (JSON or edge list)")->required();
    solve_cmd->add_option("--cops", sa.cops, "number of cops")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--exits", sa.exits, "comma-separated exit vertices");
    solve_cmd->add_option("--state-budget", sa.budget, "maximum number of solver states");
    solve_cmd->add_option("--dump", sa.dump, "write the solved table as JSON");

    SimulateArgs ma;
    auto* sim_cmd = app.add_subcommand("simulate", "play the two-cop strategy against a robber");
    sim_cmd->add_option("--graph", ma.graph, "graph file (JSON or edge list)")->required();
    sim_cmd->add_option("--exit", ma.exit, "exit vertex")->required();
    sim_cmd->add_option("--robber", ma.robber, "robber policy")
        ->check(CLI::IsMember({"optimal", "random", "interactive", "passive"}));
    sim_cmd->add_option("--seed", ma.seed, "seed for the random robber");
    sim_cmd->add_option("--max-rounds", ma.max_rounds, "round limit (default 4|V|^2)")->check(CLI::NonNegativeNumber);
    sim_cmd->add_flag("--check-claims", ma.check_claims, "report claim checks; fail on any violation");
    sim_cmd->add_option("--state-budget", ma.budget, "solver budget for the optimal robber");

    std::uint64_t gen_seed = 1;
    int gen_vertices = 8, gen_blocks = 1;
    auto* gen_cmd = app.add_subcommand("gen", "generate a connected series-parallel graph");
    gen_cmd->add_option("--seed", gen_seed, "random seed");
    gen_cmd->add_option("--vertices", gen_vertices, "vertex count");
    gen_cmd->add_option("--blocks", gen_blocks, "block count");

    VerifyOptions vo;
    std::optional<std::size_t> verify_budget;
    auto* verify_cmd = app.add_subcommand("verify", "check solver and strategy on generated graphs");
    verify_cmd->add_option("--count", vo.count, "number of instances")->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--max-vertices", vo.max_vertices, "largest instance")->check(CLI::Range(2, 64));
    verify_cmd->add_option("--seed", vo.seed, "random seed");
    verify_cmd->add_option("--state-budget", verify_budget, "solver budget per game");

    std::string host = "127.0.0.1", snapshot_dir;
    int port = 8080;
    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP game service");
    serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--snapshot-dir", snapshot_dir, "persist sessions as JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_true : exit_error;
    }

    try {
        if (*solve_cmd)
            return run_solve(sa);
        if (*sim_cmd)
            return run_simulate(ma);
        if (*gen_cmd) {
            std::cout << graph_to_json(generate_sp(gen_seed, gen_vertices, gen_blocks)).dump() << '\n';
            return exit_true;
        }
        if (*verify_cmd) {
            vo.solve = solve_options(verify_budget);
            const VerifyReport r = verify(vo);
            std::cout << r.summary();
            return r.ok() ? exit_true : exit_false;
        }
        if (*serve_cmd)
            return run_serve(host, port, snapshot_dir);
    } catch (const capacity_error& e) {
        std::cerr << "error: capacity exceeded: " << e.what() << '\n';
        return exit_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}
