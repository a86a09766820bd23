#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shaderevo/evolution.hpp"
#include "shaderevo/store.hpp"

namespace shaderevo {

struct CandidateView {
    std::string candidate_id;
    std::string expression;
    std::string shader;
};

struct SessionView {
    std::string session_id;
    int generation = 0;
    std::vector<CandidateView> candidates;
};

struct ServiceOptions {
    std::chrono::milliseconds idle_timeout = std::chrono::hours(1);
};

/// The interactive loop behind the REST API: one evolving population per
/// session, nine candidates at a time. Calls for different sessions may run
/// concurrently; calls on one session are serialized.
class Service {
public:
    explicit Service(Store& store, ServiceOptions options = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    SessionView create_session(const EvolutionConfig& config, std::optional<std::uint64_t> seed = std::nullopt);
    SessionView candidates(std::string_view session_id);
    SessionView step_generation(std::string_view session_id, const std::vector<std::string>& selected_candidate_ids);
    std::string save_candidate(std::string_view session_id, std::string_view candidate_id, std::string_view name,
                               std::optional<std::string> source_model_id = std::nullopt);
    SessionView inject_transformation(std::string_view session_id, std::string_view transformation_id);

    /// Serialized genomes of the session's whole population, in member order.
    std::vector<std::string> population(std::string_view session_id);

    std::size_t session_count();
    Store& store() noexcept { return store_; }

private:
    struct Session;

    std::shared_ptr<Session> find(std::string_view session_id);
    void purge_expired(std::chrono::steady_clock::time_point now);

    Store& store_;
    ServiceOptions options_;
    std::mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
};

} // namespace shaderevo
