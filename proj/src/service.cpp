#include "shaderevo/service.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <random>

#include "shaderevo/codegen.hpp"

namespace shaderevo {

struct Service::Session {
    struct Candidate {
        std::string id;
        std::size_t member_index = 0;
        Expression genome;
        std::string shader;
    };

    std::mutex mutex;
    std::string id;
    EvolutionConfig config;
    SampleGrid grid;
    Population population;
    Rng rng;
    std::uint64_t epoch = 0;
    std::vector<Candidate> last_candidates;
    std::chrono::steady_clock::time_point last_access;

    /// Replaces the displayed candidates. `must_show` keeps one member on
    /// screen, taking the last slot if ranking alone would hide it.
    void refresh(std::optional<std::size_t> must_show = std::nullopt) {
        auto shown = display_subset(population, config);
        if (must_show) {
            const bool present = std::any_of(shown.begin(), shown.end(),
                                             [&](const DisplayEntry& e) { return e.member_index == *must_show; });
            if (!present) {
                shown.back() = {*must_show, population.members[*must_show]};
            }
        }
        last_candidates.clear();
        for (std::size_t slot = 0; slot < shown.size(); ++slot) {
            auto& entry = shown[slot];
            auto shader = emit_vertex_shader(entry.individual.genome).glsl_source;
            last_candidates.push_back({"c" + std::to_string(epoch) + "-" + std::to_string(slot), entry.member_index,
                                       std::move(entry.individual.genome), std::move(shader)});
        }
        ++epoch;
    }

    SessionView view() const {
        SessionView v{id, population.generation, {}};
        for (const auto& c : last_candidates) {
            v.candidates.push_back({c.id, serialize(c.genome), c.shader});
        }
        return v;
    }

    const Candidate& candidate(std::string_view candidate_id) const {
        const auto it = std::find_if(last_candidates.begin(), last_candidates.end(),
                                     [&](const Candidate& c) { return c.id == candidate_id; });
        if (it == last_candidates.end()) {
            throw StaleCandidateError("candidate '" + std::string(candidate_id) + "' is not currently displayed");
        }
        return *it;
    }
};

namespace {

std::string random_session_id() {
    static thread_local std::mt19937_64 gen{std::random_device{}()};
    std::array<char, 33> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx%016llx", static_cast<unsigned long long>(gen()),
                  static_cast<unsigned long long>(gen()));
    return buf.data();
}

} // namespace

Service::Service(Store& store, ServiceOptions options) : store_(store), options_(options) {}

Service::~Service() = default;

void Service::purge_expired(std::chrono::steady_clock::time_point now) {
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        // A session whose mutex is held is in use and therefore not idle.
        std::unique_lock lock(it->second->mutex, std::try_to_lock);
        if (lock.owns_lock() && now - it->second->last_access > options_.idle_timeout) {
            lock.unlock();
            it = sessions_.erase(it);
        } else {
            ++it;
        }
    }
}

std::shared_ptr<Service::Session> Service::find(std::string_view session_id) {
    std::lock_guard lock(sessions_mutex_);
    purge_expired(std::chrono::steady_clock::now());
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        throw NotFoundError("unknown session '" + std::string(session_id) + "'");
    }
    return it->second;
}

SessionView Service::create_session(const EvolutionConfig& config, std::optional<std::uint64_t> seed) {
    config.validate();
    auto session = std::make_shared<Session>();
    session->config = config;
    session->grid = build_sample_grid(config);
    session->rng = Rng(seed.value_or(std::random_device{}()));
    session->population = init_population(config, session->rng);
    session->refresh();
    session->last_access = std::chrono::steady_clock::now();

    std::lock_guard lock(sessions_mutex_);
    purge_expired(session->last_access);
    do {
        session->id = random_session_id();
    } while (sessions_.count(session->id) != 0);
    sessions_.emplace(session->id, session);
    return session->view();
}

SessionView Service::candidates(std::string_view session_id) {
    auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    session->last_access = std::chrono::steady_clock::now();
    return session->view();
}

SessionView Service::step_generation(std::string_view session_id, const std::vector<std::string>& selected_candidate_ids) {
    auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    session->last_access = std::chrono::steady_clock::now();
    if (selected_candidate_ids.empty()) {
        throw ValidationError("select at least one candidate");
    }

    std::vector<std::string> seen;
    std::vector<Expression> selections;
    for (const auto& id : selected_candidate_ids) {
        const auto& c = session->candidate(id);
        if (std::find(seen.begin(), seen.end(), id) == seen.end()) {
            seen.push_back(id);
            selections.push_back(c.genome);
        }
    }

    const auto rated = assign_fitness(session->population, selections, session->grid);
    session->population = next_generation(rated, selections, session->config, session->rng);
    session->refresh();
    return session->view();
}

std::string Service::save_candidate(std::string_view session_id, std::string_view candidate_id, std::string_view name,
                                    std::optional<std::string> source_model_id) {
    auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    session->last_access = std::chrono::steady_clock::now();
    if (name.empty()) {
        throw ValidationError("a transformation needs a non-empty name");
    }
    const auto& c = session->candidate(candidate_id);
    return store_.put_transformation(name, serialize(c.genome), std::move(source_model_id));
}

SessionView Service::inject_transformation(std::string_view session_id, std::string_view transformation_id) {
    auto session = find(session_id);
    const auto record = store_.get_transformation(transformation_id);
    const auto expr = parse(record.expression_text);

    std::lock_guard lock(session->mutex);
    session->last_access = std::chrono::steady_clock::now();
    if (expr.depth() > session->config.growth.hard_max_depth) {
        throw ValidationError("transformation is deeper than the session's hard_max_depth",
                              {"depth " + std::to_string(expr.depth()) + " > " +
                               std::to_string(session->config.growth.hard_max_depth)});
    }
    auto injected = inject(session->population, expr, session->rng);
    session->population = std::move(injected.population);
    session->refresh(injected.replaced_index);
    return session->view();
}

std::vector<std::string> Service::population(std::string_view session_id) {
    auto session = find(session_id);
    std::lock_guard lock(session->mutex);
    session->last_access = std::chrono::steady_clock::now();
    std::vector<std::string> out;
    out.reserve(session->population.members.size());
    for (const auto& m : session->population.members) {
        out.push_back(serialize(m.genome));
    }
    return out;
}

std::size_t Service::session_count() {
    std::lock_guard lock(sessions_mutex_);
    purge_expired(std::chrono::steady_clock::now());
    return sessions_.size();
}

} // namespace shaderevo
