#include <doctest.h>

#include <filesystem>
#include <set>
#include <thread>

#include "shaderevo/store.hpp"

using namespace shaderevo;

namespace {

const std::string kTriangle = R"({"name":"tri","positions":[0,0,0, 1,0,0, 0,1,0],"indices":[0,1,2]})";

struct TempDb {
    std::filesystem::path path;
    TempDb() {
        path = std::filesystem::temp_directory_path() /
               ("shaderevo-test-" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".db");
        std::filesystem::remove(path);
    }
    ~TempDb() {
        for (const char* suffix : {"", "-wal", "-shm"}) {
            std::filesystem::remove(path.string() + suffix);
        }
    }
};

} // namespace

TEST_CASE("transformations put/get") {
    Store store(":memory:");
    const auto id = store.put_transformation("wave", "(sin y)");
    const auto r = store.get_transformation(id);
    CHECK(r.id == id);
    CHECK(r.name == "wave");
    CHECK(r.expression_text == "(sin y)");
    CHECK_FALSE(r.source_model_id.has_value());
    CHECK(r.created_at.size() == 24);
    CHECK(r.created_at.back() == 'Z');

    const auto with_model = store.put_transformation("w2", "(sin y)", "model-1");
    CHECK(store.get_transformation(with_model).source_model_id == "model-1");
    CHECK(with_model != id);

    CHECK_THROWS_AS(store.put_transformation("bad", "(sin"), ValidationError);
    CHECK_THROWS_AS(store.get_transformation("nope"), NotFoundError);
    CHECK(store.list_transformations(0, 10).total == 2);
}

TEST_CASE("transformation listing is newest first with totals") {
    Store store(":memory:");
    const auto a = store.put_transformation("a", "x");
    const auto b = store.put_transformation("b", "y");
    const auto c = store.put_transformation("c", "z");
    const auto all = store.list_transformations(0, 10);
    REQUIRE(all.items.size() == 3);
    CHECK(all.total == 3);
    CHECK(all.items[0].id == c);
    CHECK(all.items[1].id == b);
    CHECK(all.items[2].id == a);

    const auto first = store.list_transformations(0, 2);
    CHECK(first.items.size() == 2);
    CHECK(first.total == 3);
    const auto rest = store.list_transformations(2, 2);
    REQUIRE(rest.items.size() == 1);
    CHECK(rest.items[0].id == a);
    CHECK(store.list_transformations(5, 2).items.empty());
}

TEST_CASE("transformation JSON export round trip") {
    Store store(":memory:");
    const auto r = store.get_transformation(store.put_transformation("wave", "(sin y)", "m1"));
    const auto doc = to_json(r);
    CHECK(doc.at("expression") == "(sin y)");
    CHECK(doc.at("source_model_id") == "m1");
    CHECK(transformation_from_json(doc) == r);

    auto no_model = to_json(store.get_transformation(store.put_transformation("n", "x")));
    CHECK(no_model.at("source_model_id").is_null());

    auto broken = doc;
    broken["expression"] = "(pow x x)";
    CHECK_THROWS_AS(transformation_from_json(broken), ValidationError);
    CHECK_THROWS_AS(transformation_from_json(nlohmann::json::array()), ValidationError);
}

TEST_CASE("model validation") {
    const auto ok = validate_model(kTriangle);
    CHECK(ok.ok());
    CHECK(ok.name == "tri");
    CHECK(ok.vertex_count == 3);
    CHECK(ok.triangle_count == 1);

    CHECK_FALSE(validate_model(R"({"name":"t","positions":[0,0,0,1],"indices":[]})").ok());
    const auto range = validate_model(R"({"name":"t","positions":[0,0,0, 1,0,0, 0,1,0],"indices":[0,1,5]})");
    REQUIRE(range.violations.size() == 1);
    CHECK(range.violations[0].find("out of range") != std::string::npos);

    CHECK_FALSE(validate_model("not json").ok());
    CHECK_FALSE(validate_model("[1,2,3]").ok());
    CHECK_FALSE(validate_model(R"({"positions":[],"indices":[]})").ok());
    CHECK_FALSE(validate_model(R"({"name":"t","positions":[0,0,"a"],"indices":[]})").ok());
    CHECK_FALSE(validate_model(R"({"name":"t","positions":[0,0,0],"indices":[-1,0,0]})").ok());
    CHECK_FALSE(validate_model(R"({"name":"t","positions":[0,0,0],"indices":[0.5,0,0]})").ok());
    CHECK_FALSE(validate_model(R"({"name":"t","positions":[0,0,0],"indices":[0,0]})").ok());
    CHECK(validate_model(R"({"name":"empty","positions":[],"indices":[]})").ok());
}

TEST_CASE("models put/get/list") {
    Store store(":memory:");
    const std::string spaced = "{ \"name\" : \"tri\", \"positions\": [0,0,0, 1,0,0, 0,1,0], \"indices\": [0,1,2] }";
    const auto id = store.put_model(spaced);
    const auto asset = store.get_model(id);
    CHECK(asset.payload == spaced);
    CHECK(asset.summary.name == "tri");
    CHECK(asset.summary.vertex_count == 3);
    CHECK(asset.summary.triangle_count == 1);

    CHECK(store.get_model(store.put_model(kTriangle, "renamed")).summary.name == "renamed");
    CHECK(store.list_models(0, 10).items.size() == 2);

    CHECK_THROWS_AS(store.put_model(R"({"name":"t","positions":[0],"indices":[]})"), ValidationError);
    CHECK(store.list_models(0, 10).total == 2);
    CHECK_THROWS_AS(store.get_model("missing"), NotFoundError);
}

TEST_CASE("records survive reopening the store") {
    TempDb db;
    std::string tid;
    std::string mid;
    TransformationRecord before;
    {
        Store store(db.path);
        tid = store.put_transformation("wave", "(sin (add y time))");
        mid = store.put_model(kTriangle);
        before = store.get_transformation(tid);
    }
    Store reopened(db.path);
    CHECK(reopened.get_transformation(tid) == before);
    CHECK(reopened.get_model(mid).payload == kTriangle);
}

TEST_CASE("ids are unique under concurrent writers") {
    Store store(":memory:");
    std::vector<std::thread> writers;
    std::vector<std::vector<std::string>> ids(4);
    for (int t = 0; t < 4; ++t) {
        writers.emplace_back([&, t] {
            for (int i = 0; i < 50; ++i) {
                ids[static_cast<std::size_t>(t)].push_back(store.put_transformation("n", "x"));
            }
        });
    }
    for (auto& w : writers) {
        w.join();
    }
    std::set<std::string> unique;
    for (const auto& v : ids) {
        unique.insert(v.begin(), v.end());
    }
    CHECK(unique.size() == 200);
    CHECK(store.list_transformations(0, 1).total == 200);
}

TEST_CASE("opening an unwritable path fails cleanly") {
    CHECK_THROWS_AS(Store("/nonexistent-dir/sub/store.db"), StorageError);
}
