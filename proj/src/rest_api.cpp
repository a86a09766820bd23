#include "shaderevo/rest_api.hpp"

#include <charconv>
#include <limits>
#include <vector>

namespace shaderevo {

using nlohmann::json;

namespace {

constexpr std::size_t kDefaultPageSize = 50;
constexpr std::size_t kMaxPageSize = 1000;

class BadMethod : public Error {
public:
    using Error::Error;
};

HttpResponse reply(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_reply(int status, std::string_view code, const std::string& message,
                         const std::vector<std::string>& violations = {}) {
    json err = {{"code", code}, {"message", message}};
    if (!violations.empty()) {
        err["violations"] = violations;
    }
    return reply(status, {{"error", err}});
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') {
            ++i;
        }
        const auto start = i;
        while (i < path.size() && path[i] != '/') {
            ++i;
        }
        if (i > start) {
            parts.emplace_back(path.substr(start, i - start));
        }
    }
    return parts;
}

json parse_body(const HttpRequest& request, bool required) {
    if (request.body.empty()) {
        if (required) {
            throw ValidationError("request body must be a JSON object");
        }
        return json::object();
    }
    auto doc = json::parse(request.body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ValidationError("request body must be a JSON object");
    }
    return doc;
}

std::string require_string(const json& body, const char* key) {
    if (!body.contains(key) || !body.at(key).is_string()) {
        throw ValidationError(std::string("'") + key + "' must be a string");
    }
    return body.at(key).get<std::string>();
}

std::size_t query_count(const HttpRequest& request, const char* key, std::size_t fallback, std::size_t max) {
    const auto it = request.query.find(key);
    if (it == request.query.end() || it->second.empty()) {
        return fallback;
    }
    std::size_t value = 0;
    const auto& text = it->second;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size() || value > max) {
        throw ValidationError(std::string("query parameter '") + key + "' must be an integer in [0, " +
                              std::to_string(max) + "]");
    }
    return value;
}

json session_json(const SessionView& view, bool with_id) {
    json candidates = json::array();
    for (const auto& c : view.candidates) {
        candidates.push_back({{"candidate_id", c.candidate_id}, {"expression", c.expression}, {"shader", c.shader}});
    }
    json out = {{"generation", view.generation}, {"candidates", std::move(candidates)}};
    if (with_id) {
        out["session_id"] = view.session_id;
    }
    return out;
}

json model_summary_json(const ModelSummary& m) {
    return {{"id", m.id}, {"name", m.name}, {"vertex_count", m.vertex_count}, {"triangle_count", m.triangle_count}};
}

void expect_method(const HttpRequest& request, std::string_view method) {
    if (request.method != method) {
        throw BadMethod("method " + request.method + " not allowed here");
    }
}

template <typename T>
void read_field(const json& obj, const char* key, T& target, std::vector<std::string>& problems) {
    if (!obj.contains(key)) {
        return;
    }
    const auto& v = obj.at(key);
    if constexpr (std::is_same_v<T, int>) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < std::numeric_limits<int>::min() ||
            v.get<std::int64_t>() > std::numeric_limits<int>::max()) {
            problems.push_back(std::string("'") + key + "' must be an integer");
            return;
        }
        target = static_cast<int>(v.get<std::int64_t>());
    } else {
        if (!v.is_number()) {
            problems.push_back(std::string("'") + key + "' must be a number");
            return;
        }
        target = v.get<double>();
    }
}

} // namespace

EvolutionConfig config_from_json(const json& overrides) {
    EvolutionConfig config;
    if (overrides.is_null()) {
        return config;
    }
    if (!overrides.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    static const std::vector<std::string> kKeys = {
        "population_size", "display_count", "crossover_prob", "mutation_prob", "tournament_size",
        "growth",          "grid_points_per_axis", "grid_interval", "per_point_cap",
    };
    static const std::vector<std::string> kGrowthKeys = {"min_init_depth", "max_init_depth", "hard_max_depth",
                                                         "terminal_probability"};
    std::vector<std::string> problems;
    for (const auto& [key, _] : overrides.items()) {
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            problems.push_back("unknown config key '" + key + "'");
        }
    }
    read_field(overrides, "population_size", config.population_size, problems);
    read_field(overrides, "display_count", config.display_count, problems);
    read_field(overrides, "crossover_prob", config.crossover_prob, problems);
    read_field(overrides, "mutation_prob", config.mutation_prob, problems);
    read_field(overrides, "tournament_size", config.tournament_size, problems);
    read_field(overrides, "grid_points_per_axis", config.grid_points_per_axis, problems);
    read_field(overrides, "per_point_cap", config.per_point_cap, problems);
    if (overrides.contains("grid_interval")) {
        const auto& iv = overrides.at("grid_interval");
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
            problems.emplace_back("'grid_interval' must be [lo, hi]");
        } else {
            config.grid_lo = iv[0].get<double>();
            config.grid_hi = iv[1].get<double>();
        }
    }
    if (overrides.contains("growth")) {
        const auto& g = overrides.at("growth");
        if (!g.is_object()) {
            problems.emplace_back("'growth' must be an object");
        } else {
            for (const auto& [key, _] : g.items()) {
                if (std::find(kGrowthKeys.begin(), kGrowthKeys.end(), key) == kGrowthKeys.end()) {
                    problems.push_back("unknown growth key '" + key + "'");
                }
            }
            read_field(g, "min_init_depth", config.growth.min_init_depth, problems);
            read_field(g, "max_init_depth", config.growth.max_init_depth, problems);
            read_field(g, "hard_max_depth", config.growth.hard_max_depth, problems);
            read_field(g, "terminal_probability", config.growth.terminal_probability, problems);
        }
    }
    if (!problems.empty()) {
        throw ValidationError("invalid evolution config", std::move(problems));
    }
    config.validate();
    return config;
}

json config_to_json(const EvolutionConfig& config) {
    return {
        {"population_size", config.population_size},
        {"display_count", config.display_count},
        {"crossover_prob", config.crossover_prob},
        {"mutation_prob", config.mutation_prob},
        {"tournament_size", config.tournament_size},
        {"growth",
         {{"min_init_depth", config.growth.min_init_depth},
          {"max_init_depth", config.growth.max_init_depth},
          {"hard_max_depth", config.growth.hard_max_depth},
          {"terminal_probability", config.growth.terminal_probability}}},
        {"grid_points_per_axis", config.grid_points_per_axis},
        {"grid_interval", {config.grid_lo, config.grid_hi}},
        {"per_point_cap", config.per_point_cap},
    };
}

HttpResponse RestApi::handle(const HttpRequest& request) {
    try {
        const auto parts = split_path(request.path);
        if (parts.size() < 2 || parts[0] != "api") {
            return error_reply(404, "not_found", "no such route");
        }
        const auto& collection = parts[1];

        if (collection == "sessions") {
            if (parts.size() == 2) {
                expect_method(request, "POST");
                const auto body = parse_body(request, false);
                const auto config = config_from_json(body.value("config", json()));
                std::optional<std::uint64_t> seed;
                if (body.contains("seed")) {
                    if (!body["seed"].is_number_unsigned() && !(body["seed"].is_number_integer() && body["seed"].get<std::int64_t>() >= 0)) {
                        throw ValidationError("'seed' must be a non-negative integer");
                    }
                    seed = body["seed"].get<std::uint64_t>();
                }
                return reply(201, session_json(service_.create_session(config, seed), true));
            }
            if (parts.size() != 4) {
                return error_reply(404, "not_found", "no such route");
            }
            const auto& sid = parts[2];
            const auto& action = parts[3];
            if (action == "candidates") {
                expect_method(request, "GET");
                return reply(200, session_json(service_.candidates(sid), false));
            }
            if (action == "population") {
                expect_method(request, "GET");
                return reply(200, {{"members", service_.population(sid)}});
            }
            if (action == "step") {
                expect_method(request, "POST");
                const auto body = parse_body(request, true);
                if (!body.contains("selected") || !body["selected"].is_array()) {
                    throw ValidationError("'selected' must be an array of candidate ids");
                }
                std::vector<std::string> ids;
                for (const auto& v : body["selected"]) {
                    if (!v.is_string()) {
                        throw ValidationError("'selected' must be an array of candidate ids");
                    }
                    ids.push_back(v.get<std::string>());
                }
                return reply(200, session_json(service_.step_generation(sid, ids), false));
            }
            if (action == "save") {
                expect_method(request, "POST");
                const auto body = parse_body(request, true);
                std::optional<std::string> model;
                if (body.contains("source_model_id") && !body["source_model_id"].is_null()) {
                    model = require_string(body, "source_model_id");
                }
                const auto id =
                    service_.save_candidate(sid, require_string(body, "candidate_id"), require_string(body, "name"), model);
                return reply(201, {{"transformation_id", id}});
            }
            if (action == "inject") {
                expect_method(request, "POST");
                const auto body = parse_body(request, true);
                return reply(200, session_json(service_.inject_transformation(sid, require_string(body, "transformation_id")), false));
            }
            return error_reply(404, "not_found", "no such route");
        }

        if (collection == "transformations") {
            expect_method(request, "GET");
            if (parts.size() == 2) {
                const auto offset = query_count(request, "offset", 0, std::numeric_limits<std::uint32_t>::max());
                const auto limit = query_count(request, "limit", kDefaultPageSize, kMaxPageSize);
                const auto page = service_.store().list_transformations(offset, limit);
                json items = json::array();
                for (const auto& r : page.items) {
                    items.push_back(to_json(r));
                }
                return reply(200, {{"total", page.total}, {"items", std::move(items)}});
            }
            if (parts.size() == 3) {
                return reply(200, to_json(service_.store().get_transformation(parts[2])));
            }
            return error_reply(404, "not_found", "no such route");
        }

        if (collection == "models") {
            if (parts.size() == 2 && request.method == "POST") {
                return reply(201, {{"model_id", service_.store().put_model(request.body)}});
            }
            expect_method(request, "GET");
            if (parts.size() == 2) {
                const auto offset = query_count(request, "offset", 0, std::numeric_limits<std::uint32_t>::max());
                const auto limit = query_count(request, "limit", kDefaultPageSize, kMaxPageSize);
                const auto page = service_.store().list_models(offset, limit);
                json items = json::array();
                for (const auto& m : page.items) {
                    items.push_back(model_summary_json(m));
                }
                return reply(200, {{"total", page.total}, {"items", std::move(items)}});
            }
            if (parts.size() == 3) {
                return {200, service_.store().get_model(parts[2]).payload, "application/json"};
            }
            return error_reply(404, "not_found", "no such route");
        }

        return error_reply(404, "not_found", "no such route");
    } catch (const ValidationError& e) {
        return error_reply(400, "validation_error", e.what(), e.violations());
    } catch (const NotFoundError& e) {
        return error_reply(404, "not_found", e.what());
    } catch (const StaleCandidateError& e) {
        return error_reply(409, "stale_candidate", e.what());
    } catch (const BadMethod& e) {
        return error_reply(405, "method_not_allowed", e.what());
    } catch (const StorageError& e) {
        return error_reply(500, "storage_error", e.what());
    }
}

} // namespace shaderevo
