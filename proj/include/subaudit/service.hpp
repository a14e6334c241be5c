#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "subaudit/priority.hpp"

namespace subaudit {

/// One audited match as held by the service.
struct StoredMatch {
    MatchAudit audit;
    std::vector<PlayerSliceState> states;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Read-only JSON API over precomputed audits. what-if requests re-run
/// inference only. handle() is const and safe to call concurrently.
class AuditService {
public:
    AuditService(std::shared_ptr<const PriorityModel> model, std::vector<StoredMatch> matches);

    /// Routes GET /health, /matches, /matches/{id}/timeline,
    /// /matches/{id}/players/{pid} and POST /matches/{id}/whatif.
    HttpResponse handle(std::string_view method, std::string_view path, std::string_view body) const;

    /// Blocking. Serves until stop() from another thread. Returns false if
    /// the address cannot be bound.
    bool listen(const std::string& host, int port);
    /// Binds to an ephemeral port and returns it (0 on failure); serve with
    /// listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

    /// Origin sent in Access-Control-Allow-Origin.
    void set_cors_origin(std::string origin) { cors_origin_ = std::move(origin); }

    ~AuditService();

private:
    HttpResponse whatif(const StoredMatch& match, std::string_view body) const;
    void ensure_server();

    std::shared_ptr<const PriorityModel> model_;
    std::map<std::string, StoredMatch, std::less<>> matches_;
    std::string cors_origin_ = "*";
    struct Server;
    std::unique_ptr<Server> server_;
};

/// Parses "host:port" (SUBAUDIT_LISTEN); defaults to 127.0.0.1:8080.
std::pair<std::string, int> parse_listen_address(std::string_view text);

}  // namespace subaudit
