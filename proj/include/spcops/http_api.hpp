#pragma once

#include <functional>
#include <string>

#include "httplib.h"

#include "spcops/io.hpp"
#include "spcops/session.hpp"
#include "spcops/structure.hpp"

namespace spcops {

namespace detail {

inline void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline json request_body(const httplib::Request& req) {
    try {
        json j = json::parse(req.body);
        if (!j.is_object())
            throw api_error(400, "bad_request", "request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw api_error(400, "bad_request", std::string("malformed JSON: ") + e.what());
    }
}

inline Vertex vertex_field(const json& j, const char* name) {
    if (!j.contains(name) || !j[name].is_number_integer())
        throw api_error(400, "bad_request", std::string("\"") + name + "\" must be an integer vertex id");
    return j[name].get<Vertex>();
}

// Graph from {"graph": GraphFile} or {"generate": {seed, vertices, blocks}}.
inline Graph graph_field(const json& body) {
    try {
        if (body.contains("graph"))
            return graph_from_json(body["graph"]);
        if (body.contains("generate")) {
            const json& g = body["generate"];
            return generate_sp(g.value("seed", std::uint64_t{1}), g.value("vertices", 8), g.value("blocks", 1));
        }
    } catch (const api_error&) {
        throw;
    } catch (const std::exception& e) {
        throw api_error(400, "invalid_graph", e.what());
    }
    throw api_error(400, "bad_request", "body needs \"graph\" or \"generate\"");
}

// Runs a handler, mapping errors to JSON error bodies.
inline httplib::Server::Handler guarded(std::function<void(const httplib::Request&, httplib::Response&)> f) {
    return [f = std::move(f)](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const api_error& e) {
            send_json(res, e.status, e.body());
        } catch (const move_error& e) {
            send_json(res, 400, {{"code", "illegal_move"}, {"message", e.what()}});
        } catch (const std::exception& e) {
            send_json(res, 500, {{"code", "internal"}, {"message", e.what()}});
        }
    };
}

} // namespace detail

/// Registers the game routes on `server`. `store` must outlive it.
inline void install_routes(httplib::Server& server, SessionStore& store) {
    using detail::guarded;
    using detail::send_json;

    // no SO_REUSEPORT: a second server on a busy port must fail to bind
    server.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });

    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, {{"status", "ok"}});
    });

    server.Post("/games", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const json body = detail::request_body(req);
                    const Graph g = detail::graph_field(body);
                    send_json(res, 201, store.create(g, detail::vertex_field(body, "exit")));
                }));

    server.Get(R"(/games/([0-9a-zA-Z]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, store.get(req.matches[1]));
               }));

    server.Delete(R"(/games/([0-9a-zA-Z]+))",
                  guarded([&store](const httplib::Request& req, httplib::Response& res) {
                      const std::string id = req.matches[1];
                      store.remove(id);
                      send_json(res, 200, {{"deleted", id}});
                  }));

    server.Post(R"(/games/([0-9a-zA-Z]+)/placement)",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const json body = detail::request_body(req);
                    send_json(res, 200,
                              store.place(req.matches[1], detail::vertex_field(body, "free_cop"),
                                          detail::vertex_field(body, "robber")));
                }));

    server.Post(R"(/games/([0-9a-zA-Z]+)/robber-move)",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const json body = detail::request_body(req);
                    send_json(res, 200, store.robber_move(req.matches[1], detail::vertex_field(body, "to")));
                }));

    server.Get(R"(/games/([0-9a-zA-Z]+)/audit)",
               guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, store.audit(req.matches[1]));
               }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty())
            send_json(res, res.status, {{"code", res.status == 404 ? "not_found" : "error"},
                                        {"message", "no route"}});
    });
}

} // namespace spcops
