#include "logquest/service.hpp"

#include <httplib.h>

#include "logquest/errors.hpp"

namespace logquest {

namespace {

using nlohmann::json;

HttpReply error_reply(int status, const std::string& message) {
    return HttpReply{status, json{{"error", message}}.dump(), {}};
}

void send(const HttpReply& reply, httplib::Response& res) {
    res.status = reply.status;
    if (!reply.diagnostic.empty()) res.set_header(kDiagnosticHeader, reply.diagnostic);
    res.set_content(reply.body, "application/json");
}

}  // namespace

json to_json(const AnswerRecord& r) {
    json bindings = json::object();
    for (const auto& [k, v] : r.bindings) bindings[k] = v;
    json spans = json::array();
    for (const auto& [b, e] : r.highlight_spans) spans.push_back({b, e});
    return json{{"answer_text", r.answer_text},   {"bindings", bindings},
                {"confidence", r.confidence},     {"passage_id", r.passage_id},
                {"passage_text", r.passage_text}, {"highlight_spans", spans},
                {"relax_count", r.relax_count},   {"dropped_subgoals", r.dropped_subgoals}};
}

json to_json(const PipelineConfig& c) {
    return json{{"top_k_passages", c.top_k_passages},
                {"per_candidate_budget_ms", c.per_candidate_budget.count()},
                {"max_relax", c.max_relax},
                {"max_level", c.max_level},
                {"max_branches", c.max_branches},
                {"answers_returned", c.answers_returned},
                {"question_budget_ms", c.question_budget.count()},
                {"workers", c.workers}};
}

HttpReply handle_ask(const Engine& engine, std::string_view request_body) {
    json request;
    try {
        request = json::parse(request_body);
    } catch (const json::parse_error&) {
        return error_reply(400, "invalid JSON");
    }
    if (!request.is_object() || !request.contains("question")) return error_reply(400, "missing field: question");
    if (!request["question"].is_string()) return error_reply(400, "field question must be a string");

    AskOptions options;
    if (request.contains("answers")) {
        const auto& a = request["answers"];
        if (!a.is_number_integer() || a.get<long long>() < 1) {
            return error_reply(400, "field answers must be a positive integer");
        }
        options.answers = a.get<std::size_t>();
    }
    if (request.contains("max_relax")) {
        const auto& m = request["max_relax"];
        if (!m.is_number_integer() || m.get<long long>() < 0 || m.get<long long>() > 64) {
            return error_reply(400, "field max_relax must be an integer in [0, 64]");
        }
        options.max_relax = m.get<int>();
    }

    try {
        const AskResult result = engine.ask(request["question"].get<std::string>(), options);
        json body = json::array();
        for (const auto& r : result.answers) body.push_back(to_json(r));
        return HttpReply{200, body.dump(), result.diagnostic};
    } catch (const NoPatternMatch& e) {
        return error_reply(422, e.what());
    } catch (const std::exception& e) {
        return error_reply(500, e.what());
    }
}

HttpReply handle_health(const Engine& engine) {
    return HttpReply{200,
                     json{{"status", "ok"},
                          {"passages", engine.retriever().passages().size()},
                          {"background_clauses", engine.background().size()}}
                         .dump(),
                     {}};
}

HttpReply handle_config(const Engine& engine) { return HttpReply{200, to_json(engine.config()).dump(), {}}; }

Service::Service(const Engine& engine) : engine_(engine), server_(std::make_unique<httplib::Server>()) {
    server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Headers", "Content-Type"},
                                  {"Access-Control-Expose-Headers", kDiagnosticHeader}});
    server_->Post("/ask", [this](const httplib::Request& req, httplib::Response& res) {
        send(handle_ask(engine_, req.body), res);
    });
    server_->Options("/ask", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Methods", "POST, OPTIONS");
    });
    server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
        send(handle_health(engine_), res);
    });
    server_->Get("/config", [this](const httplib::Request&, httplib::Response& res) {
        send(handle_config(engine_), res);
    });
}

Service::~Service() = default;

int Service::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = server_->bind_to_any_port(host);
        if (bound < 0) throw Error("cannot bind " + host);
        return bound;
    }
    if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void Service::listen() { server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

}  // namespace logquest
