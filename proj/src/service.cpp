#include "subaudit/service.hpp"

#include <httplib.h>

#include "subaudit/audit_io.hpp"
#include "subaudit/error.hpp"

namespace subaudit {

struct AuditService::Server {
    httplib::Server http;
};

namespace {

HttpResponse json_response(int status, const ojson& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_response(int status, const std::string& message, const std::string& field = {}) {
    ojson j;
    j["error"] = message;
    if (!field.empty()) j["field"] = field;
    return json_response(status, j);
}

std::vector<std::string_view> split_path(std::string_view path) {
    if (const auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        const auto end = path.find('/', start);
        const auto part = path.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (!part.empty()) parts.push_back(part);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return parts;
}

std::string id_from_json(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw SchemaError("identifier must be a string or an integer");
}

}  // namespace

AuditService::AuditService(std::shared_ptr<const PriorityModel> model, std::vector<StoredMatch> matches)
    : model_(std::move(model)) {
    if (!model_) throw Error("audit service needs a model");
    for (auto& m : matches) {
        auto id = m.audit.match_id;
        matches_.emplace(std::move(id), std::move(m));
    }
}

AuditService::~AuditService() = default;

HttpResponse AuditService::handle(std::string_view method, std::string_view path, std::string_view body) const {
    const auto parts = split_path(path);
    const auto& config = model_->config();

    if (method == "GET" && parts.size() == 1 && parts[0] == "health") {
        return json_response(200, {{"status", "ok"}, {"matches", matches_.size()}});
    }
    if (parts.empty() || parts[0] != "matches") return error_response(404, "no such endpoint");

    if (parts.size() == 1) {
        if (method != "GET") return error_response(405, "method not allowed");
        ojson list = ojson::array();
        for (const auto& [id, m] : matches_) {
            list.push_back({{"match_id", id},
                            {"slices", m.audit.slices.size()},
                            {"substitutions", m.audit.substitutions.size()}});
        }
        return json_response(200, list);
    }

    const auto it = matches_.find(parts[1]);
    if (it == matches_.end()) return error_response(404, "unknown match '" + std::string(parts[1]) + "'");
    const auto& match = it->second;

    if (parts.size() == 3 && parts[2] == "timeline") {
        if (method != "GET") return error_response(405, "method not allowed");
        return json_response(200, timeline_json(match.audit, config));
    }
    if (parts.size() == 4 && parts[2] == "players") {
        if (method != "GET") return error_response(405, "method not allowed");
        auto series = player_series_json(match.audit, parts[3], &model_->system());
        if (series["series"].empty()) return error_response(404, "unknown player '" + std::string(parts[3]) + "'");
        return json_response(200, series);
    }
    if (parts.size() == 3 && parts[2] == "whatif") {
        if (method != "POST") return error_response(405, "method not allowed");
        return whatif(match, body);
    }
    return error_response(404, "no such endpoint");
}

HttpResponse AuditService::whatif(const StoredMatch& match, std::string_view body) const {
    nlohmann::json request;
    try {
        request = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        return error_response(400, std::string("malformed JSON body: ") + e.what());
    }
    int slice = 0;
    std::string player;
    std::map<std::string, OverrideValue> overrides;
    try {
        if (!request.is_object()) throw SchemaError("body must be an object");
        if (!request.contains("slice") || !request["slice"].is_number_integer()) {
            throw SchemaError("'slice' must be an integer slice label");
        }
        if (!request.contains("player")) throw SchemaError("'player' is required");
        slice = request["slice"].get<int>();
        player = id_from_json(request["player"]);
        if (request.contains("overrides")) {
            const auto& o = request["overrides"];
            if (!o.is_object()) throw SchemaError("'overrides' must be an object");
            for (const auto& item : o.items()) {
                if (item.value().is_number()) overrides[item.key()] = item.value().get<double>();
                else if (item.value().is_string()) overrides[item.key()] = item.value().get<std::string>();
                else if (item.value().is_boolean()) overrides[item.key()] = item.value().get<bool>() ? 1.0 : 0.0;
                else throw SchemaError("override '" + item.key() + "' must be a number or a string");
            }
        }
    } catch (const SchemaError& e) {
        return error_response(400, e.what());
    }

    const PlayerSliceState* state = nullptr;
    for (const auto& s : match.states) {
        if (s.player_id == player && s.tempo_partida == slice) state = &s;
    }
    const SliceRanking* ranking = nullptr;
    for (const auto& r : match.audit.slices) {
        if (r.tempo_partida == slice) ranking = &r;
    }
    if (!state || !ranking || !match.audit.find(player, slice)) {
        return error_response(404, "no audited state for player '" + player + "' at slice " + std::to_string(slice));
    }
    try {
        auto result = what_if(*state, overrides, *model_);
        rank_against(result, *ranking);
        return json_response(200, to_json(result, &model_->system()));
    } catch (const OverrideError& e) {
        return error_response(422, e.what(), e.field());
    } catch (const DomainError& e) {
        return error_response(422, e.what());
    }
}

void AuditService::ensure_server() {
    if (server_) return;
    server_ = std::make_unique<Server>();
    auto& http = server_->http;
    const auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
        HttpResponse r;
        try {
            r = handle(req.method, req.path, req.body);
        } catch (const std::exception& e) {
            r = error_response(500, e.what());
        }
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    http.Get(".*", dispatch);
    http.Post(".*", dispatch);
    http.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    http.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", cors_origin_);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
}

bool AuditService::listen(const std::string& host, int port) {
    ensure_server();
    return server_->http.listen(host, port);
}

int AuditService::bind_any_port(const std::string& host) {
    ensure_server();
    const int port = server_->http.bind_to_any_port(host);
    return port < 0 ? 0 : port;
}

bool AuditService::listen_after_bind() {
    ensure_server();
    return server_->http.listen_after_bind();
}

void AuditService::stop() {
    if (server_) server_->http.stop();
}

std::pair<std::string, int> parse_listen_address(std::string_view text) {
    std::pair<std::string, int> out{"127.0.0.1", 8080};
    if (text.empty()) return out;
    const auto colon = text.rfind(':');
    std::string_view host = colon == std::string_view::npos ? text : text.substr(0, colon);
    std::string_view port = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (!host.empty()) out.first = std::string(host);
    if (!port.empty()) {
        int p = 0;
        for (char c : port) {
            if (c < '0' || c > '9') throw DomainError("invalid port in listen address '" + std::string(text) + "'");
            p = p * 10 + (c - '0');
            if (p > 65535) throw DomainError("port out of range in '" + std::string(text) + "'");
        }
        out.second = p;
    }
    return out;
}

}  // namespace subaudit
