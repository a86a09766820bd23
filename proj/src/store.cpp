#include "shaderevo/store.hpp"

#include <sqlite3.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <random>

#include "shaderevo/expression.hpp"

namespace shaderevo {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS transformations (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    id TEXT NOT NULL UNIQUE,
    name TEXT NOT NULL,
    expression TEXT NOT NULL,
    created_at TEXT NOT NULL,
    source_model_id TEXT
);
CREATE TABLE IF NOT EXISTS models (
    seq INTEGER PRIMARY KEY AUTOINCREMENT,
    id TEXT NOT NULL UNIQUE,
    name TEXT NOT NULL,
    payload BLOB NOT NULL,
    vertex_count INTEGER NOT NULL,
    triangle_count INTEGER NOT NULL,
    created_at TEXT NOT NULL
);
)sql";

class Statement {
public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
            throw StorageError(std::string("sqlite prepare failed: ") + sqlite3_errmsg(db));
        }
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int index, std::string_view text) {
        check(sqlite3_bind_text(stmt_, index, text.data(), static_cast<int>(text.size()), SQLITE_TRANSIENT));
        return *this;
    }
    Statement& bind_blob(int index, std::string_view bytes) {
        check(sqlite3_bind_blob(stmt_, index, bytes.data(), static_cast<int>(bytes.size()), SQLITE_TRANSIENT));
        return *this;
    }
    Statement& bind(int index, std::int64_t value) {
        check(sqlite3_bind_int64(stmt_, index, value));
        return *this;
    }
    Statement& bind_null(int index) {
        check(sqlite3_bind_null(stmt_, index));
        return *this;
    }

    /// True while a row is available.
    bool step() {
        const int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) {
            return true;
        }
        if (rc == SQLITE_DONE) {
            return false;
        }
        throw StorageError(std::string("sqlite step failed: ") + sqlite3_errmsg(db_));
    }

    std::string text(int col) const {
        const auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, col));
        return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col))) : std::string{};
    }
    std::string blob(int col) const {
        const auto* p = static_cast<const char*>(sqlite3_column_blob(stmt_, col));
        return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, col))) : std::string{};
    }
    bool is_null(int col) const { return sqlite3_column_type(stmt_, col) == SQLITE_NULL; }
    std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

private:
    void check(int rc) const {
        if (rc != SQLITE_OK) {
            throw StorageError(std::string("sqlite bind failed: ") + sqlite3_errmsg(db_));
        }
    }

    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string message = err ? err : "unknown error";
        sqlite3_free(err);
        throw StorageError("sqlite exec failed: " + message);
    }
}

std::int64_t clamp_count(std::size_t n) {
    return static_cast<std::int64_t>(std::min<std::size_t>(n, static_cast<std::size_t>(INT64_MAX)));
}

TransformationRecord read_transformation(const Statement& s) {
    TransformationRecord r;
    r.id = s.text(0);
    r.name = s.text(1);
    r.expression_text = s.text(2);
    r.created_at = s.text(3);
    if (!s.is_null(4)) {
        r.source_model_id = s.text(4);
    }
    return r;
}

std::size_t count_rows(sqlite3* db, const char* sql) {
    Statement s(db, sql);
    s.step();
    return static_cast<std::size_t>(s.integer(0));
}

} // namespace

std::string utc_timestamp_now() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t secs = system_clock::to_time_t(now);
    std::tm utc{};
    gmtime_r(&secs, &utc);
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", utc.tm_year + 1900, utc.tm_mon + 1,
                  utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec, static_cast<int>(ms));
    return buf.data();
}

nlohmann::json to_json(const TransformationRecord& record) {
    return {
        {"id", record.id},
        {"name", record.name},
        {"expression", record.expression_text},
        {"created_at", record.created_at},
        {"source_model_id", record.source_model_id ? nlohmann::json(*record.source_model_id) : nlohmann::json(nullptr)},
    };
}

TransformationRecord transformation_from_json(const nlohmann::json& doc) {
    std::vector<std::string> problems;
    const auto string_field = [&](const char* key) -> std::string {
        if (!doc.is_object() || !doc.contains(key) || !doc.at(key).is_string()) {
            problems.push_back(std::string("'") + key + "' must be a string");
            return {};
        }
        return doc.at(key).get<std::string>();
    };
    TransformationRecord r;
    r.id = string_field("id");
    r.name = string_field("name");
    r.expression_text = string_field("expression");
    r.created_at = string_field("created_at");
    if (doc.is_object() && doc.contains("source_model_id") && !doc.at("source_model_id").is_null()) {
        if (doc.at("source_model_id").is_string()) {
            r.source_model_id = doc.at("source_model_id").get<std::string>();
        } else {
            problems.emplace_back("'source_model_id' must be a string or null");
        }
    }
    if (problems.empty()) {
        try {
            parse(r.expression_text);
        } catch (const ParseError& e) {
            problems.emplace_back(e.what());
        }
    }
    if (!problems.empty()) {
        throw ValidationError("invalid transformation record", std::move(problems));
    }
    return r;
}

ModelCheck validate_model(std::string_view bytes) {
    ModelCheck check;
    const auto doc = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (doc.is_discarded()) {
        check.violations.emplace_back("payload is not valid JSON");
        return check;
    }
    if (!doc.is_object()) {
        check.violations.emplace_back("payload must be a JSON object");
        return check;
    }

    if (!doc.contains("name") || !doc["name"].is_string()) {
        check.violations.emplace_back("'name' must be a string");
    } else {
        check.name = doc["name"].get<std::string>();
    }

    std::size_t positions = 0;
    bool positions_ok = false;
    if (!doc.contains("positions") || !doc["positions"].is_array()) {
        check.violations.emplace_back("'positions' must be an array of numbers");
    } else {
        const auto& arr = doc["positions"];
        positions = arr.size();
        positions_ok = true;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (!arr[i].is_number() || !std::isfinite(arr[i].get<double>())) {
                check.violations.push_back("positions[" + std::to_string(i) + "] must be a finite number");
                positions_ok = false;
            }
        }
        if (positions % 3 != 0) {
            check.violations.push_back("'positions' length " + std::to_string(positions) + " is not divisible by 3");
            positions_ok = false;
        }
    }

    const std::size_t vertices = positions / 3;
    std::size_t indices = 0;
    if (!doc.contains("indices") || !doc["indices"].is_array()) {
        check.violations.emplace_back("'indices' must be an array of non-negative integers");
    } else {
        const auto& arr = doc["indices"];
        indices = arr.size();
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& v = arr[i];
            const bool integral = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
            if (!integral) {
                check.violations.push_back("indices[" + std::to_string(i) + "] must be a non-negative integer");
            } else if (positions_ok && v.get<std::uint64_t>() >= vertices) {
                check.violations.push_back("indices[" + std::to_string(i) + "] = " + std::to_string(v.get<std::uint64_t>()) +
                                           " is out of range for " + std::to_string(vertices) + " vertices");
            }
        }
        if (indices % 3 != 0) {
            check.violations.push_back("'indices' length " + std::to_string(indices) + " is not divisible by 3");
        }
    }

    check.vertex_count = vertices;
    check.triangle_count = indices / 3;
    return check;
}

Store::Store(const std::filesystem::path& path) {
    const auto name = path.string();
    const int flags = SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX;
    if (sqlite3_open_v2(name.c_str(), &db_, flags, nullptr) != SQLITE_OK) {
        std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw StorageError("cannot open store '" + name + "': " + message);
    }
    try {
        exec(db_, "PRAGMA journal_mode=WAL;");
        exec(db_, kSchema);
    } catch (...) {
        sqlite3_close(db_);
        throw;
    }
}

Store::~Store() { sqlite3_close(db_); }

std::string Store::fresh_id() {
    static thread_local std::mt19937_64 gen{std::random_device{}()};
    const std::uint64_t hi = gen();
    const std::uint64_t lo = gen();
    // RFC 4122 version 4 layout.
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%08llx-%04llx-4%03llx-%04llx-%012llx",
                  static_cast<unsigned long long>(hi >> 32), static_cast<unsigned long long>((hi >> 16) & 0xffff),
                  static_cast<unsigned long long>(hi & 0x0fff),
                  static_cast<unsigned long long>(((lo >> 48) & 0x3fff) | 0x8000),
                  static_cast<unsigned long long>(lo & 0xffffffffffffULL));
    return buf.data();
}

std::string Store::put_transformation(std::string_view name, std::string_view expression_text,
                                      std::optional<std::string> source_model_id) {
    try {
        parse(expression_text);
    } catch (const ParseError& e) {
        throw ValidationError("invalid expression", {e.what()});
    }
    std::lock_guard lock(mutex_);
    for (;;) {
        auto id = fresh_id();
        Statement exists(db_, "SELECT 1 FROM transformations WHERE id = ?1");
        exists.bind(1, id);
        if (exists.step()) {
            continue;
        }
        Statement insert(db_, "INSERT INTO transformations (id, name, expression, created_at, source_model_id) "
                              "VALUES (?1, ?2, ?3, ?4, ?5)");
        insert.bind(1, id).bind(2, name).bind(3, expression_text).bind(4, utc_timestamp_now());
        if (source_model_id) {
            insert.bind(5, *source_model_id);
        } else {
            insert.bind_null(5);
        }
        insert.step();
        return id;
    }
}

TransformationRecord Store::get_transformation(std::string_view id) const {
    std::lock_guard lock(mutex_);
    Statement s(db_, "SELECT id, name, expression, created_at, source_model_id FROM transformations WHERE id = ?1");
    s.bind(1, id);
    if (!s.step()) {
        throw NotFoundError("unknown transformation '" + std::string(id) + "'");
    }
    return read_transformation(s);
}

Page<TransformationRecord> Store::list_transformations(std::size_t offset, std::size_t limit) const {
    std::lock_guard lock(mutex_);
    Page<TransformationRecord> page;
    page.total = count_rows(db_, "SELECT COUNT(*) FROM transformations");
    Statement s(db_, "SELECT id, name, expression, created_at, source_model_id FROM transformations "
                     "ORDER BY created_at DESC, seq DESC LIMIT ?1 OFFSET ?2");
    s.bind(1, clamp_count(limit)).bind(2, clamp_count(offset));
    while (s.step()) {
        page.items.push_back(read_transformation(s));
    }
    return page;
}

std::string Store::put_model(std::string_view bytes, std::string_view name) {
    const auto check = validate_model(bytes);
    if (!check.ok()) {
        throw ValidationError("invalid model payload", check.violations);
    }
    const std::string stored_name = name.empty() ? check.name : std::string(name);
    std::lock_guard lock(mutex_);
    for (;;) {
        auto id = fresh_id();
        Statement exists(db_, "SELECT 1 FROM models WHERE id = ?1");
        exists.bind(1, id);
        if (exists.step()) {
            continue;
        }
        Statement insert(db_, "INSERT INTO models (id, name, payload, vertex_count, triangle_count, created_at) "
                              "VALUES (?1, ?2, ?3, ?4, ?5, ?6)");
        insert.bind(1, id)
            .bind(2, stored_name)
            .bind_blob(3, bytes)
            .bind(4, clamp_count(check.vertex_count))
            .bind(5, clamp_count(check.triangle_count))
            .bind(6, utc_timestamp_now());
        insert.step();
        return id;
    }
}

ModelAsset Store::get_model(std::string_view id) const {
    std::lock_guard lock(mutex_);
    Statement s(db_, "SELECT id, name, vertex_count, triangle_count, payload FROM models WHERE id = ?1");
    s.bind(1, id);
    if (!s.step()) {
        throw NotFoundError("unknown model '" + std::string(id) + "'");
    }
    ModelAsset asset;
    asset.summary = {s.text(0), s.text(1), static_cast<std::size_t>(s.integer(2)), static_cast<std::size_t>(s.integer(3))};
    asset.payload = s.blob(4);
    return asset;
}

Page<ModelSummary> Store::list_models(std::size_t offset, std::size_t limit) const {
    std::lock_guard lock(mutex_);
    Page<ModelSummary> page;
    page.total = count_rows(db_, "SELECT COUNT(*) FROM models");
    Statement s(db_, "SELECT id, name, vertex_count, triangle_count FROM models "
                     "ORDER BY created_at DESC, seq DESC LIMIT ?1 OFFSET ?2");
    s.bind(1, clamp_count(limit)).bind(2, clamp_count(offset));
    while (s.step()) {
        page.items.push_back({s.text(0), s.text(1), static_cast<std::size_t>(s.integer(2)), static_cast<std::size_t>(s.integer(3))});
    }
    return page;
}

} // namespace shaderevo
