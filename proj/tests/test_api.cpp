#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include "httplib.h"

#include "spcops/http_api.hpp"
#include "spcops/simulate.hpp"
#include "test_graphs.hpp"

using namespace spcops;

namespace {

class Api : public ::testing::Test {
  protected:
    void SetUp() override {
        install_routes(server_, store_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    }

    void TearDown() override {
        server_.stop();
        thread_.join();
    }

    std::pair<int, json> post(const std::string& path, const json& body) {
        auto res = client_->Post(path, body.dump(), "application/json");
        return {res->status, json::parse(res->body)};
    }

    std::pair<int, json> get(const std::string& path) {
        auto res = client_->Get(path);
        return {res->status, json::parse(res->body)};
    }

    std::string create_bowtie() {
        auto [status, body] = post("/games", {{"graph", graph_to_json(graphs::bowtie())}, {"exit", 0}});
        EXPECT_EQ(status, 201);
        return body["id"];
    }

    SessionStore store_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::unique_ptr<httplib::Client> client_;
};

// Plays back a fixed placement and move list.
class ScriptRobber : public RobberPolicy {
  public:
    ScriptRobber(Vertex free_cop, Vertex start, std::vector<Vertex> moves)
        : free_cop_(free_cop), start_(start), moves_(std::move(moves)) {}
    std::string name() const override { return "script"; }
    Placement place(const GameConfig&) override { return {{free_cop_}, start_, Label::cops_win, 0}; }
    Vertex move(const GameConfig&, const GameState& s) override {
        return next_ < moves_.size() ? moves_[next_++] : *s.robber;
    }

  private:
    Vertex free_cop_, start_;
    std::vector<Vertex> moves_;
    std::size_t next_ = 0;
};

} // namespace

TEST_F(Api, Health) {
    auto [status, body] = get("/health");
    EXPECT_EQ(status, 200);
    EXPECT_EQ(body["status"], "ok");
}

TEST_F(Api, CreateBowtie) {
    auto [status, body] = post("/games", {{"graph", graph_to_json(graphs::bowtie())}, {"exit", 0}});
    EXPECT_EQ(status, 201);
    EXPECT_EQ(body["state"]["phase"], "placing-free-cops");
    EXPECT_EQ(body["state"]["cops"], json::array({0}));
    EXPECT_EQ(body["exit"], 0);
    EXPECT_EQ(body["legal"]["free_cop"].size(), 5u);
    EXPECT_EQ(body["legal"]["robber"].size(), 5u);
}

TEST_F(Api, CreateFromGenerator) {
    auto [status, body] = post("/games", {{"generate", {{"seed", 7}, {"vertices", 12}, {"blocks", 3}}}, {"exit", 4}});
    EXPECT_EQ(status, 201);
    EXPECT_EQ(graph_from_json(body["graph"]), generate_sp(7, 12, 3));
}

TEST_F(Api, CreateRejections) {
    auto [k4_status, k4] = post("/games", {{"graph", graph_to_json(graphs::k4())}, {"exit", 0}});
    EXPECT_EQ(k4_status, 422);
    EXPECT_EQ(k4["code"], "not_series_parallel");

    auto [bad_exit, e] = post("/games", {{"graph", graph_to_json(graphs::bowtie())}, {"exit", 9}});
    EXPECT_EQ(bad_exit, 400);
    EXPECT_EQ(e["code"], "invalid_vertex");

    auto [loop, l] = post("/games", {{"graph", {{"n", 2}, {"edges", {{1, 1}}}}}, {"exit", 0}});
    EXPECT_EQ(loop, 400);
    EXPECT_EQ(l["code"], "invalid_graph");

    auto res = client_->Post("/games", "{not json", "application/json");
    EXPECT_EQ(res->status, 400);
    EXPECT_EQ(json::parse(res->body)["code"], "bad_request");
}

TEST_F(Api, PlacementOntoFreeCopIsImmediateCapture) {
    const std::string id = create_bowtie();
    auto [status, body] = post("/games/" + id + "/placement", {{"free_cop", 3}, {"robber", 3}});
    EXPECT_EQ(status, 200);
    EXPECT_EQ(body["state"]["phase"], "cops-won");
}

TEST_F(Api, PlacementThenWrongPhase) {
    const std::string id = create_bowtie();
    auto [status, body] = post("/games/" + id + "/placement", {{"free_cop", 1}, {"robber", 4}});
    EXPECT_EQ(status, 200);
    EXPECT_EQ(body["state"]["phase"], "robber-turn");
    EXPECT_TRUE(body["legal"].contains("robber_moves"));
    // the cops' first reply is already in the transcript
    ASSERT_EQ(body["transcript"].size(), 3u);
    EXPECT_EQ(body["transcript"][2]["actor"], "cops");
    EXPECT_TRUE(body["transcript"][2].contains("strategy"));

    auto [again, err] = post("/games/" + id + "/placement", {{"free_cop", 1}, {"robber", 4}});
    EXPECT_EQ(again, 409);
    EXPECT_EQ(err["code"], "wrong_phase");

    auto [bad, e2] = post("/games/" + create_bowtie() + "/placement", {{"free_cop", 11}, {"robber", 4}});
    EXPECT_EQ(bad, 400);
}

TEST_F(Api, RobberMoves) {
    const std::string id = create_bowtie();
    auto [s0, placed] = post("/games/" + id + "/placement", {{"free_cop", 1}, {"robber", 4}});
    ASSERT_EQ(placed["state"]["phase"], "robber-turn");
    const int round = placed["state"]["round"];

    // not adjacent: rejected with the legal list, nothing changes
    auto [bad, err] = post("/games/" + id + "/robber-move", {{"to", 0}});
    EXPECT_EQ(bad, 400);
    EXPECT_EQ(err["code"], "illegal_move");
    EXPECT_EQ(err["legal_moves"], json(legal_robber_moves(GameConfig{graphs::bowtie(), {0}, 2},
                                                         GameState{{2, 2}, 4, Phase::robber_turn, 0})));
    auto [g0, unchanged] = get("/games/" + id);
    EXPECT_EQ(unchanged["state"], placed["state"]);
    EXPECT_EQ(unchanged["transcript"].size(), placed["transcript"].size());

    // a pass advances one full round (robber move plus cop reply)
    auto [ok, passed] = post("/games/" + id + "/robber-move", {{"to", 4}});
    EXPECT_EQ(ok, 200);
    EXPECT_EQ(passed["transcript"].size(), placed["transcript"].size() + 2);
    if (passed["state"]["phase"] == "robber-turn")
        EXPECT_EQ(passed["state"]["round"], round + 1);
}

TEST_F(Api, MoveOntoCopIsCapture) {
    const std::string id = create_bowtie();
    auto [s0, placed] = post("/games/" + id + "/placement", {{"free_cop", 1}, {"robber", 4}});
    ASSERT_EQ(placed["state"]["cops"], json::array({2, 2}));
    auto [s1, caught] = post("/games/" + id + "/robber-move", {{"to", 2}});
    EXPECT_EQ(s1, 200);
    EXPECT_EQ(caught["state"]["phase"], "cops-won");
    auto [s2, after] = post("/games/" + id + "/robber-move", {{"to", 2}});
    EXPECT_EQ(s2, 409);
}

TEST_F(Api, UnknownAndDeleted) {
    auto [s0, e0] = get("/games/doesnotexist");
    EXPECT_EQ(s0, 404);
    EXPECT_EQ(e0["code"], "not_found");

    const std::string id = create_bowtie();
    auto del = client_->Delete("/games/" + id);
    EXPECT_EQ(del->status, 200);
    auto [s1, e1] = get("/games/" + id);
    EXPECT_EQ(s1, 404);
    EXPECT_EQ(client_->Delete("/games/" + id)->status, 404);
}

TEST_F(Api, CorsHeaders) {
    auto res = client_->Get("/health");
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
    auto pre = client_->Options("/games");
    EXPECT_EQ(pre->status, 204);
}

TEST_F(Api, AuditReplaysTranscript) {
    const std::string id = create_bowtie();
    post("/games/" + id + "/placement", {{"free_cop", 0}, {"robber", 3}});
    post("/games/" + id + "/robber-move", {{"to", 3}});
    auto [status, body] = get("/games/" + id + "/audit");
    EXPECT_EQ(status, 200);
    EXPECT_EQ(body["consistent"], true);
}

// The cop replies served over HTTP equal a simulation of the same robber.
TEST_F(Api, MatchesSimulation) {
    const Graph g = generate_sp(21, 11, 3);
    for (Vertex exit : {0, 5}) {
        auto [s0, created] = post("/games", {{"graph", graph_to_json(g)}, {"exit", exit}});
        ASSERT_EQ(s0, 201);
        const std::string id = created["id"];
        auto [s1, view] = post("/games/" + id + "/placement", {{"free_cop", exit}, {"robber", (exit + 6) % 11}});
        std::vector<Vertex> moves;
        Rng rng(exit + 1);
        while (view["state"]["phase"] == "robber-turn" && moves.size() < 200) {
            const auto legal = view["legal"]["robber_moves"].get<std::vector<Vertex>>();
            const Vertex to = legal[rng.below(static_cast<int>(legal.size()))];
            moves.push_back(to);
            view = post("/games/" + id + "/robber-move", {{"to", to}}).second;
        }
        ScriptRobber robber(exit, (exit + 6) % 11, moves);
        const json sim = to_json(simulate(g, exit, robber));
        ASSERT_EQ(view["transcript"].size(), sim["entries"].size());
        for (std::size_t i = 0; i < sim["entries"].size(); ++i)
            EXPECT_EQ(view["transcript"][i], sim["entries"][i]) << "entry " << i;
    }
}

TEST_F(Api, TranscriptLengthTracksActions) {
    const std::string id = create_bowtie();
    auto [s0, v] = post("/games/" + id + "/placement", {{"free_cop", 0}, {"robber", 3}});
    std::size_t expected = 3; // two placements and the cops' reply
    EXPECT_EQ(v["transcript"].size(), expected);
    while (v["state"]["phase"] == "robber-turn") {
        v = post("/games/" + id + "/robber-move", {{"to", v["state"]["robber"]}}).second;
        expected += 2; // a pass never lands on a cop, so the cops always reply
        EXPECT_EQ(v["transcript"].size(), expected);
    }
}

TEST_F(Api, ConcurrentSessions) {
    std::vector<std::string> ids;
    for (int i = 0; i < 6; ++i)
        ids.push_back(create_bowtie());
    std::atomic<int> errors{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 12; ++i)
        threads.emplace_back([&, i] {
            httplib::Client c("127.0.0.1", port_);
            const std::string& id = ids[i % ids.size()];
            auto r = c.Post("/games/" + id + "/placement", json{{"free_cop", 1}, {"robber", 4}}.dump(),
                            "application/json");
            // exactly one of the two racing placements wins per session
            if (!r || (r->status != 200 && r->status != 409))
                ++errors;
            for (int k = 0; k < 5; ++k) {
                auto m = c.Post("/games/" + id + "/robber-move", json{{"to", 4}}.dump(), "application/json");
                if (!m || (m->status != 200 && m->status != 409 && m->status != 400))
                    ++errors;
            }
        });
    for (auto& t : threads)
        t.join();
    EXPECT_EQ(errors.load(), 0);
    for (const auto& id : ids) {
        auto [status, audit] = get("/games/" + id + "/audit");
        EXPECT_EQ(audit["consistent"], true);
        auto [s2, view] = get("/games/" + id);
        EXPECT_EQ(view["transcript"][0]["action"]["vertices"], json::array({1}));
    }
}

TEST(SessionStore, SnapshotsSurviveRestart) {
    const auto dir = std::filesystem::temp_directory_path() / ("spcops-snap-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::string id;
    json before;
    {
        SessionStore store(dir);
        id = store.create(graphs::bowtie(), 0)["id"];
        store.place(id, 1, 4);
        before = store.robber_move(id, 3);
    }
    {
        SessionStore store(dir);
        EXPECT_EQ(store.size(), 1u);
        EXPECT_EQ(store.get(id), before);
        EXPECT_EQ(store.audit(id)["consistent"], true);
        store.remove(id);
    }
    EXPECT_EQ(SessionStore(dir).size(), 0u);
    std::filesystem::remove_all(dir);
}
