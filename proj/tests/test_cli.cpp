#include <gtest/gtest.h>

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <netinet/in.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

#include "httplib.h"

#include "spcops/io.hpp"
#include "spcops/structure.hpp"
#include "test_graphs.hpp"

extern char** environ;

using namespace spcops;

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + SPCOPS_CLI + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

int free_port() {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ::close(fd);
    return ntohs(addr.sin_port);
}

class Cli : public ::testing::Test {
  protected:
    static void SetUpTestSuite() {
        dir_ = std::filesystem::temp_directory_path() / ("spcops-cli-" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
        write("p2.json", graph_to_json(graphs::p2()).dump());
        write("bowtie.json", graph_to_json(graphs::bowtie()).dump());
        write("k4.json", graph_to_json(graphs::k4()).dump());
        write("petersen.json", graph_to_json(graphs::petersen()).dump());
        write("broken.json", "{\"n\": 2, \"edges\": [[0, 1]");
        write("loop.json", "{\"n\": 3,\n \"edges\": [\n  [1, 1]]}");
        write("bowtie.txt", "# two triangles\n0 1\n1 2\n0 2\n2 3\n3 4\n2 4\n");
    }

    static void TearDownTestSuite() { std::filesystem::remove_all(dir_); }

    static void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

    static std::string path(const std::string& name) { return (dir_ / name).string(); }

    static std::filesystem::path dir_;
};

std::filesystem::path Cli::dir_;

} // namespace

TEST_F(Cli, SolveVerdicts) {
    CliRun p2 = run("solve --graph " + path("p2.json") + " --cops 1");
    EXPECT_EQ(p2.code, 0);
    EXPECT_EQ(p2.out.rfind("copwin\n", 0), 0u);
    EXPECT_NE(p2.out.find("states: 8"), std::string::npos);

    CliRun pet = run("solve --graph " + path("petersen.json") + " --cops 2");
    EXPECT_EQ(pet.code, 1);
    EXPECT_EQ(pet.out.rfind("not copwin\n", 0), 0u);

    CliRun bow = run("solve --graph " + path("bowtie.json") + " --cops 2 --exits 0");
    EXPECT_EQ(bow.code, 0);
    EXPECT_NE(bow.out.find("opening cop move:"), std::string::npos);

    EXPECT_EQ(run("solve --graph " + path("bowtie.txt") + " --cops 2 --exits 0").out, bow.out);
}

TEST_F(Cli, SolveErrors) {
    EXPECT_EQ(run("solve --graph " + path("broken.json") + " --cops 1").code, 2);
    EXPECT_EQ(run("solve --graph " + path("loop.json") + " --cops 1").code, 2);
    EXPECT_EQ(run("solve --graph " + path("missing.json")).code, 2);
    EXPECT_EQ(run("solve --graph " + path("bowtie.json") + " --exits 0,x").code, 2);
    EXPECT_EQ(run("solve --graph " + path("bowtie.json") + " --cops 1 --exits 0,1").code, 2);
    EXPECT_EQ(run("solve").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, StateBudgetFlagAndEnvironment) {
    const std::string base = "solve --graph " + path("bowtie.json") + " --cops 2 --exits 0";
    EXPECT_EQ(run(base + " --state-budget 10").code, 2);
    EXPECT_EQ(run(base, "SP_COPWIN_STATE_BUDGET=10").code, 2);
    EXPECT_EQ(run(base + " --state-budget 1000", "SP_COPWIN_STATE_BUDGET=10").code, 0);
    EXPECT_EQ(run(base, "SP_COPWIN_STATE_BUDGET=lots").code, 2);
}

TEST_F(Cli, SolveDump) {
    const std::string out = path("table.json");
    ASSERT_EQ(run("solve --graph " + path("p2.json") + " --cops 1 --dump " + out).code, 0);
    const json j = json::parse(read_file(out));
    EXPECT_EQ(j["state_count"], 8);
    EXPECT_EQ(j["labels"].size(), 8u);
}

TEST_F(Cli, SimulateBowtie) {
    CliRun r = run("simulate --graph " + path("bowtie.json") + " --exit 0 --robber optimal --check-claims");
    EXPECT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["outcome"], "cops-won");
    EXPECT_TRUE(j["violations"].empty());
}

TEST_F(Cli, SimulateRandomDeterministic) {
    const std::string args = "simulate --graph " + path("bowtie.json") + " --exit 0 --robber random --seed 7";
    CliRun a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}

TEST_F(Cli, SimulateInteractive) {
    // free cop on 1, robber on 4, then pass until the end
    const std::string cmd = "printf '1 4 4 4 4 4 4 4 4 4' | " + std::string(SPCOPS_CLI) + " simulate --graph " +
                            path("bowtie.json") + " --exit 0 --robber interactive 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    const int status = pclose(pipe);
    EXPECT_EQ(WEXITSTATUS(status), 0);
    EXPECT_EQ(json::parse(out)["robber_policy"], "interactive");
}

TEST_F(Cli, SimulateRejectsK4) {
    const std::string cmd = std::string(SPCOPS_CLI) + " simulate --graph " + path("k4.json") + " --exit 0 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[512];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    EXPECT_EQ(WEXITSTATUS(pclose(pipe)), 2);
    EXPECT_NE(out.find("not series-parallel"), std::string::npos);
}

TEST_F(Cli, GenRoundTripsAndSolves) {
    for (int seed = 1; seed <= 8; ++seed) {
        CliRun g = run("gen --seed " + std::to_string(seed) + " --vertices 8 --blocks 2");
        ASSERT_EQ(g.code, 0);
        const Graph parsed = parse_graph_text(g.out);
        EXPECT_EQ(parsed, generate_sp(seed, 8, 2));
        EXPECT_TRUE(is_series_parallel(parsed));
        write("gen.json", g.out);
        EXPECT_EQ(run("solve --graph " + path("gen.json") + " --cops 2 --exits 0").code, 0);
    }
    EXPECT_EQ(run("gen --seed 7 --vertices 12 --blocks 3").out,
              read_file(std::string(SPCOPS_TEST_DATA) + "/gen_seed7_n12_b3.json"));
    EXPECT_EQ(run("gen --vertices 3 --blocks 5").code, 2);
}

TEST_F(Cli, VerifyRuns) {
    CliRun empty = run("verify --count 0");
    EXPECT_EQ(empty.code, 0);
    EXPECT_NE(empty.out.find("PASS"), std::string::npos);

    CliRun small = run("verify --count 15 --max-vertices 8 --seed 4");
    EXPECT_EQ(small.code, 0);
    EXPECT_EQ(small.out, run("verify --count 15 --max-vertices 8 --seed 4").out);
}

TEST_F(Cli, ServeHealthAndBusyPort) {
    const int port = free_port();
    const std::string port_s = std::to_string(port);
    const char* argv[] = {SPCOPS_CLI, "serve", "--port", port_s.c_str(), nullptr};
    pid_t pid;
    ASSERT_EQ(posix_spawn(&pid, SPCOPS_CLI, nullptr, nullptr, const_cast<char**>(argv), environ), 0);

    httplib::Client client("127.0.0.1", port);
    client.set_read_timeout(5);
    httplib::Result res;
    for (int i = 0; i < 100 && !res; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        res = client.Get("/health");
    }
    ASSERT_TRUE(res);
    EXPECT_EQ(json::parse(res->body)["status"], "ok");

    // create, then read back
    auto created = client.Post("/games", json{{"graph", graph_to_json(graphs::bowtie())}, {"exit", 0}}.dump(),
                               "application/json");
    ASSERT_EQ(created->status, 201);
    const std::string id = json::parse(created->body)["id"];
    auto got = client.Get("/games/" + id);
    EXPECT_EQ(json::parse(got->body), json::parse(created->body));

    // a second server on the same port
    EXPECT_EQ(run("serve --port " + port_s).code, 2);

    kill(pid, SIGINT);
    int status = 0;
    waitpid(pid, &status, 0);
    EXPECT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 0);
}
