#include <doctest.h>

#include <algorithm>
#include <thread>

#include "shaderevo/codegen.hpp"
#include "shaderevo/service.hpp"

using namespace shaderevo;

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

void check_view(const SessionView& view) {
    REQUIRE(view.candidates.size() == 9);
    for (const auto& c : view.candidates) {
        CHECK(lint_shader(c.shader).ok());
        CHECK(serialize(parse(c.expression)) == c.expression);
        CHECK(c.shader == emit_vertex_shader(parse(c.expression)).glsl_source);
    }
    std::vector<std::string> ids;
    for (const auto& c : view.candidates) {
        ids.push_back(c.candidate_id);
    }
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

} // namespace

TEST_CASE("create_session") {
    Store store(":memory:");
    Service service(store);
    const auto view = service.create_session({}, 7);
    CHECK(view.generation == 0);
    CHECK_FALSE(view.session_id.empty());
    check_view(view);
    CHECK(service.population(view.session_id).size() == 100);

    EvolutionConfig bad;
    bad.population_size = 5;
    CHECK_THROWS_AS(service.create_session(bad, 1), ValidationError);
}

TEST_CASE("seeded sessions are reproducible across services") {
    Store s1(":memory:");
    Store s2(":memory:");
    Service a(s1);
    Service b(s2);
    const auto va = a.create_session({}, 7);
    const auto vb = b.create_session({}, 7);
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(va.candidates[i].expression == vb.candidates[i].expression);
        CHECK(va.candidates[i].candidate_id == vb.candidates[i].candidate_id);
    }
}

TEST_CASE("step_generation") {
    Store store(":memory:");
    Service service(store);
    const auto v0 = service.create_session({}, 3);
    const auto& sid = v0.session_id;

    const auto v1 = service.step_generation(sid, {v0.candidates[4].candidate_id});
    CHECK(v1.generation == 1);
    check_view(v1);
    CHECK(contains(service.population(sid), v0.candidates[4].expression));
    // The elite leads the new population and is therefore displayed again.
    CHECK(v1.candidates[0].expression == v0.candidates[4].expression);

    const auto v2 = service.step_generation(
        sid, {v1.candidates[0].candidate_id, v1.candidates[2].candidate_id, v1.candidates[8].candidate_id});
    CHECK(v2.generation == 2);
    check_view(v2);
    const auto pop = service.population(sid);
    CHECK(pop.size() == 100);
    for (auto k : {0, 2, 8}) {
        CHECK(contains(pop, v1.candidates[static_cast<std::size_t>(k)].expression));
    }

    CHECK_THROWS_AS(service.step_generation(sid, {}), ValidationError);
    CHECK_THROWS_AS(service.step_generation(sid, {v1.candidates[0].candidate_id}), StaleCandidateError);
    CHECK_THROWS_AS(service.step_generation(sid, {"made-up"}), StaleCandidateError);
    CHECK_THROWS_AS(service.step_generation("no-such-session", {v2.candidates[0].candidate_id}), NotFoundError);
    // Failed calls leave the session untouched.
    CHECK(service.candidates(sid).generation == 2);
    CHECK(service.candidates(sid).candidates[0].candidate_id == v2.candidates[0].candidate_id);
}

TEST_CASE("duplicate ids in one step count once") {
    Store store(":memory:");
    Service service(store);
    const auto v0 = service.create_session({}, 3);
    const auto id = v0.candidates[1].candidate_id;
    const auto v1 = service.step_generation(v0.session_id, {id, id});
    const auto pop = service.population(v0.session_id);
    CHECK(pop[0] == v0.candidates[1].expression);
    CHECK(v1.candidates.size() == 9);
}

TEST_CASE("save_candidate") {
    Store store(":memory:");
    Service service(store);
    const auto v0 = service.create_session({}, 11);
    const auto& c = v0.candidates[2];
    const auto t1 = service.save_candidate(v0.session_id, c.candidate_id, "wave");
    CHECK(store.get_transformation(t1).expression_text == c.expression);
    const auto t2 = service.save_candidate(v0.session_id, c.candidate_id, "wave");
    CHECK(t1 != t2);
    CHECK_THROWS_AS(service.save_candidate(v0.session_id, c.candidate_id, ""), ValidationError);
    CHECK_THROWS_AS(service.save_candidate(v0.session_id, "c99-0", "x"), StaleCandidateError);
    CHECK_THROWS_AS(service.save_candidate("nope", c.candidate_id, "x"), NotFoundError);
}

TEST_CASE("inject_transformation") {
    Store store(":memory:");
    Service service(store);
    const auto tid = store.put_transformation("wave", "(sin y)");
    const auto v0 = service.create_session({}, 5);
    const auto v1 = service.inject_transformation(v0.session_id, tid);
    CHECK(v1.generation == 0);
    check_view(v1);
    CHECK(contains(service.population(v0.session_id), "(sin y)"));

    const auto shown = std::find_if(v1.candidates.begin(), v1.candidates.end(),
                                    [](const CandidateView& c) { return c.expression == "(sin y)"; });
    REQUIRE(shown != v1.candidates.end());
    // The refreshed display invalidates the previous ids.
    CHECK_THROWS_AS(service.step_generation(v0.session_id, {v0.candidates[0].candidate_id}), StaleCandidateError);

    const auto v2 = service.step_generation(v0.session_id, {shown->candidate_id});
    CHECK(contains(service.population(v0.session_id), "(sin y)"));
    CHECK(v2.candidates[0].expression == "(sin y)");

    CHECK_THROWS_AS(service.inject_transformation(v0.session_id, "unknown"), NotFoundError);
    CHECK_THROWS_AS(service.inject_transformation("unknown", tid), NotFoundError);

    const auto deep = store.put_transformation("deep", "(sin (sin (sin (sin (sin (sin (sin (sin (sin x)))))))))");
    CHECK_THROWS_AS(service.inject_transformation(v0.session_id, deep), ValidationError);
}

TEST_CASE("sessions are isolated") {
    Store store(":memory:");
    Service service(store);
    const auto a = service.create_session({}, 1);
    const auto b = service.create_session({}, 1);
    CHECK(a.session_id != b.session_id);
    const auto before = service.population(b.session_id);
    service.step_generation(a.session_id, {a.candidates[0].candidate_id});
    service.inject_transformation(a.session_id, store.put_transformation("t", "(cos x)"));
    CHECK(service.population(b.session_id) == before);
    CHECK(service.candidates(b.session_id).generation == 0);
    // b's ids are still current even though a has moved on.
    CHECK_NOTHROW(service.step_generation(b.session_id, {b.candidates[0].candidate_id}));
}

TEST_CASE("idle sessions expire") {
    Store store(":memory:");
    Service service(store, ServiceOptions{std::chrono::milliseconds(20)});
    const auto v = service.create_session({}, 1);
    CHECK(service.session_count() == 1);
    std::this_thread::sleep_for(std::chrono::milliseconds(60));
    CHECK_THROWS_AS(service.candidates(v.session_id), NotFoundError);
    CHECK(service.session_count() == 0);
}

TEST_CASE("concurrent steps on distinct sessions") {
    Store store(":memory:");
    Service service(store);
    std::vector<SessionView> views;
    for (int i = 0; i < 4; ++i) {
        views.push_back(service.create_session({}, static_cast<std::uint64_t>(i)));
    }
    std::vector<std::thread> workers;
    for (auto& v : views) {
        workers.emplace_back([&service, &v] {
            for (int g = 0; g < 3; ++g) {
                v = service.step_generation(v.session_id, {v.candidates[0].candidate_id});
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (const auto& v : views) {
        CHECK(v.generation == 3);
    }
}
