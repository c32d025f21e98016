#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include "spcops/io.hpp"
#include "spcops/simulate.hpp"
#include "spcops/strategy.hpp"
#include "spcops/structure.hpp"

namespace spcops {

/// Error surfaced to API clients as {code, message, legal_moves?}.
struct api_error : std::runtime_error {
    api_error(int status, std::string code, const std::string& message, std::optional<VertexSet> legal = {})
        : std::runtime_error(message), status(status), code(std::move(code)), legal_moves(std::move(legal)) {}

    int status;
    std::string code;
    std::optional<VertexSet> legal_moves;

    json body() const {
        json j{{"code", code}, {"message", what()}};
        if (legal_moves)
            j["legal_moves"] = *legal_moves;
        return j;
    }
};

/// One robber-vs-strategy game. The cops always move eagerly, so between
/// requests the session waits on a placement or a robber move.
struct Session {
    std::string id;
    GameConfig config;
    GameState state;
    StrategyMemory memory;
    std::vector<TranscriptEntry> transcript;
    std::vector<std::string> violations;
    mutable std::mutex mutex;
};

inline json view(const Session& s) {
    const int n = s.config.graph.vertex_count();
    json j{{"id", s.id},
           {"graph", graph_to_json(s.config.graph)},
           {"exit", s.config.exits.at(0)},
           {"state", to_json(s.state)},
           {"violations", s.violations}};
    json legal = json::object();
    switch (s.state.phase) {
    case Phase::placing_free_cops: {
        std::vector<Vertex> all(n);
        for (Vertex v = 0; v < n; ++v)
            all[v] = v;
        legal["free_cop"] = all;
        legal["robber"] = all;
        break;
    }
    case Phase::robber_turn: legal["robber_moves"] = legal_robber_moves(s.config, s.state); break;
    default: break;
    }
    j["legal"] = std::move(legal);
    json entries = json::array();
    for (const TranscriptEntry& e : s.transcript)
        entries.push_back(to_json(e));
    j["transcript"] = std::move(entries);
    return j;
}

class SessionStore {
  public:
    explicit SessionStore(std::optional<std::filesystem::path> snapshot_dir = {})
        : snapshot_dir_(std::move(snapshot_dir)), rng_(std::random_device{}()) {
        if (snapshot_dir_) {
            std::filesystem::create_directories(*snapshot_dir_);
            load_snapshots();
        }
    }

    /// Starts a single-exit game. The cop on the exit is placed; the client
    /// places the free cop and the robber next.
    json create(const Graph& g, Vertex exit) {
        if (exit < 0 || exit >= g.vertex_count())
            throw api_error(400, "invalid_vertex", "exit " + std::to_string(exit) + " is not a vertex");
        auto s = std::make_shared<Session>();
        s->config = GameConfig{g, {exit}, 2};
        try {
            s->memory = theorem1_memory(s->config);
        } catch (const precondition_error& e) {
            throw api_error(422, std::string(e.what()) == "graph is not series-parallel" ? "not_series_parallel"
                                                                                          : "precondition",
                            e.what());
        }
        s->state = new_game(s->config);
        std::unique_lock lock(mutex_);
        do
            s->id = token();
        while (sessions_.count(s->id));
        sessions_[s->id] = s;
        lock.unlock();
        std::lock_guard guard(s->mutex);
        persist(*s);
        return view(*s);
    }

    json get(const std::string& id) const {
        auto s = find(id);
        std::lock_guard guard(s->mutex);
        return view(*s);
    }

    json place(const std::string& id, Vertex free_cop, Vertex robber) {
        auto s = find(id);
        std::lock_guard guard(s->mutex);
        if (s->state.phase != Phase::placing_free_cops)
            throw api_error(409, "wrong_phase",
                            "placement is over; phase is " + std::string(to_string(s->state.phase)));
        check_vertex(*s, free_cop, "free_cop");
        check_vertex(*s, robber, "robber");
        GameState st = place_free_cops(s->config, s->state, {free_cop});
        s->transcript.push_back({Actor::robber, ActionKind::place_free_cops, {free_cop}, st.phase, {}});
        st = place_robber(s->config, st, robber);
        s->transcript.push_back({Actor::robber, ActionKind::place_robber, {robber}, st.phase, {}});
        s->state = st;
        cop_reply(*s);
        persist(*s);
        return view(*s);
    }

    json robber_move(const std::string& id, Vertex to) {
        auto s = find(id);
        std::lock_guard guard(s->mutex);
        if (s->state.phase != Phase::robber_turn)
            throw api_error(409, "wrong_phase", "not the robber's turn; phase is " +
                                                    std::string(to_string(s->state.phase)));
        VertexSet legal = legal_robber_moves(s->config, s->state);
        if (!contains(legal, to))
            throw api_error(400, "illegal_move",
                            "robber cannot move from " + std::to_string(*s->state.robber) + " to " +
                                std::to_string(to),
                            legal);
        s->state = apply_robber_move(s->config, s->state, to);
        s->transcript.push_back({Actor::robber, ActionKind::move, {to}, s->state.phase, {}});
        cop_reply(*s);
        persist(*s);
        return view(*s);
    }

    void remove(const std::string& id) {
        std::unique_lock lock(mutex_);
        if (!sessions_.erase(id))
            throw api_error(404, "not_found", "no game " + id);
        lock.unlock();
        if (snapshot_dir_)
            std::filesystem::remove(*snapshot_dir_ / (id + ".json"));
    }

    /// Replays the transcript through the engine and the strategy and
    /// compares against the stored state.
    json audit(const std::string& id) const {
        auto s = find(id);
        std::lock_guard guard(s->mutex);
        json j{{"id", id}};
        try {
            Session copy;
            rebuild(copy, s->config, s->transcript);
            const bool same = copy.state.cops == s->state.cops && copy.state.robber == s->state.robber &&
                              copy.state.phase == s->state.phase && copy.state.round == s->state.round;
            j["consistent"] = same;
            j["replayed_state"] = to_json(copy.state);
        } catch (const std::exception& e) {
            j["consistent"] = false;
            j["error"] = e.what();
        }
        j["state"] = to_json(s->state);
        return j;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return sessions_.size();
    }

  private:
    std::shared_ptr<Session> find(const std::string& id) const {
        std::shared_lock lock(mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end())
            throw api_error(404, "not_found", "no game " + id);
        return it->second;
    }

    static void check_vertex(const Session& s, Vertex v, const char* what) {
        if (v < 0 || v >= s.config.graph.vertex_count())
            throw api_error(400, "invalid_vertex", std::string(what) + " " + std::to_string(v) + " is not a vertex");
    }

    // Plays the strategy's move if it is the cops' turn.
    static void cop_reply(Session& s) {
        if (s.state.phase != Phase::cops_turn)
            return;
        StrategyStep step;
        try {
            step = strategy_move(s.config, s.state, s.memory);
        } catch (const invariant_violation& e) {
            throw api_error(500, "strategy_error", e.what());
        }
        for (const ClaimCheck& c : step.annotation.claims)
            if (!c.passed)
                s.violations.push_back("round " + std::to_string(s.state.round) + ": " + c.name + ": " + c.detail);
        s.memory = std::move(step.memory);
        s.state = apply_cop_move(s.config, s.state, step.move);
        s.transcript.push_back({Actor::cops, ActionKind::move, step.move.to, s.state.phase, std::move(step.annotation)});
    }

    // Re-derives state and memory from the robber's recorded actions.
    static void rebuild(Session& s, const GameConfig& cfg, const std::vector<TranscriptEntry>& entries) {
        s.config = cfg;
        s.memory = theorem1_memory(cfg);
        s.state = new_game(cfg);
        s.transcript.clear();
        for (const TranscriptEntry& e : entries) {
            if (e.actor == Actor::cops) {
                if (s.state.phase != Phase::cops_turn)
                    throw invariant_violation("recorded cop move outside the cops' turn");
                cop_reply(s);
                if (s.transcript.back().vertices != e.vertices)
                    throw invariant_violation("recorded cop move differs from the strategy's move");
            } else {
                s.state = apply_entry(cfg, s.state, e);
                s.transcript.push_back({e.actor, e.kind, e.vertices, s.state.phase, {}});
            }
            if (s.state.phase != e.phase)
                throw invariant_violation("replay reached " + std::string(to_string(s.state.phase)) +
                                          ", recorded " + std::string(to_string(e.phase)));
        }
    }

    void persist(const Session& s) const {
        if (!snapshot_dir_)
            return;
        json entries = json::array();
        for (const TranscriptEntry& e : s.transcript)
            entries.push_back(to_json(e));
        json j{{"id", s.id}, {"graph", graph_to_json(s.config.graph)}, {"exit", s.config.exits.at(0)},
               {"transcript", std::move(entries)}};
        const auto path = *snapshot_dir_ / (s.id + ".json");
        const auto tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump() << '\n';
        }
        std::filesystem::rename(tmp, path);
    }

    void load_snapshots() {
        for (const auto& f : std::filesystem::directory_iterator(*snapshot_dir_)) {
            if (f.path().extension() != ".json")
                continue;
            try {
                json j = json::parse(read_file(f.path().string()));
                auto s = std::make_shared<Session>();
                s->id = j.at("id").get<std::string>();
                std::vector<TranscriptEntry> entries;
                for (const json& e : j.at("transcript"))
                    entries.push_back(entry_from_json(e));
                rebuild(*s, GameConfig{graph_from_json(j.at("graph")), {j.at("exit").get<Vertex>()}, 2}, entries);
                sessions_[s->id] = s;
            } catch (const std::exception&) {
                // unreadable snapshots are skipped
            }
        }
    }

    std::string token() {
        static const char hex[] = "0123456789abcdef";
        std::string t;
        for (int i = 0; i < 16; ++i)
            t.push_back(hex[rng_() & 15]);
        return t;
    }

    std::optional<std::filesystem::path> snapshot_dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 rng_;
};

} // namespace spcops
