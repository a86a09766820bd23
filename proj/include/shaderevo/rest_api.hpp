#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "shaderevo/evolution.hpp"
#include "shaderevo/service.hpp"

namespace httplib {
class Server;
}

namespace shaderevo {

struct HttpRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::string body;
};

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Applies a JSON object of overrides to the default config. Unknown keys
/// and wrongly typed values are validation errors.
EvolutionConfig config_from_json(const nlohmann::json& overrides);
nlohmann::json config_to_json(const EvolutionConfig& config);

/// JSON-over-HTTP routes for the evolution service and the store:
///
///   POST /api/sessions                      {"config"?, "seed"?}
///   GET  /api/sessions/{id}/candidates
///   GET  /api/sessions/{id}/population
///   POST /api/sessions/{id}/step            {"selected": [...]}
///   POST /api/sessions/{id}/save            {"candidate_id", "name"}
///   POST /api/sessions/{id}/inject          {"transformation_id"}
///   GET  /api/transformations[?offset&limit]
///   GET  /api/transformations/{id}
///   POST /api/models                        Model JSON
///   GET  /api/models[?offset&limit]
///   GET  /api/models/{id}
///
/// Errors are {"error": {"code", "message"}} with 400, 404, 405 or 409.
class RestApi {
public:
    explicit RestApi(Service& service) : service_(service) {}

    HttpResponse handle(const HttpRequest& request);

    /// Routes every /api request of `server` through handle().
    void mount(httplib::Server& server);

private:
    Service& service_;
};

} // namespace shaderevo
