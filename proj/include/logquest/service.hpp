#pragma once

#include <json.hpp>

#include <memory>
#include <string>
#include <string_view>

#include "logquest/engine.hpp"

namespace httplib {
class Server;
}

namespace logquest {

nlohmann::json to_json(const AnswerRecord& record);
nlohmann::json to_json(const PipelineConfig& config);

inline constexpr const char* kDiagnosticHeader = "X-Logquest-Diagnostic";

/// Transport-independent result of one HTTP request.
struct HttpReply {
    int status = 200;
    std::string body;        // JSON
    std::string diagnostic;  // sent as kDiagnosticHeader when non-empty
};

/// POST /ask: {"question": string, "answers"?: int >= 1, "max_relax"?: int >= 0}.
HttpReply handle_ask(const Engine& engine, std::string_view request_body);
HttpReply handle_health(const Engine& engine);
HttpReply handle_config(const Engine& engine);

/// HTTP front end over a shared engine. Requests run concurrently.
class Service {
public:
    explicit Service(const Engine& engine);
    ~Service();

    /// Port 0 picks a free port. Returns the bound port; throws Error on failure.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();

private:
    const Engine& engine_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace logquest
