#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "shaderevo/errors.hpp"

struct sqlite3;

namespace shaderevo {

struct TransformationRecord {
    std::string id;
    std::string name;
    std::string expression_text;
    std::string created_at; // UTC, ISO-8601 with milliseconds
    std::optional<std::string> source_model_id;

    friend bool operator==(const TransformationRecord&, const TransformationRecord&) = default;
};

/// Export format: {"id", "name", "expression", "created_at", "source_model_id"}.
nlohmann::json to_json(const TransformationRecord& record);
TransformationRecord transformation_from_json(const nlohmann::json& doc);

struct ModelSummary {
    std::string id;
    std::string name;
    std::size_t vertex_count = 0;
    std::size_t triangle_count = 0;
};

struct ModelAsset {
    ModelSummary summary;
    std::string payload; // exactly the uploaded bytes
};

struct ModelCheck {
    std::string name;
    std::size_t vertex_count = 0;
    std::size_t triangle_count = 0;
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Validates a Model JSON document:
/// {"name": string, "positions": [float x 3k], "indices": [uint x 3m]}.
ModelCheck validate_model(std::string_view bytes);

template <typename T>
struct Page {
    std::vector<T> items;
    std::size_t total = 0;
};

/// Embedded, file-backed store for saved transformations and uploaded models.
/// All operations are atomic and serialized on a single connection.
class Store {
public:
    /// Opens (creating if needed) the database at `path`; ":memory:" gives a
    /// private in-memory store.
    explicit Store(const std::filesystem::path& path);
    ~Store();

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    std::string put_transformation(std::string_view name, std::string_view expression_text,
                                   std::optional<std::string> source_model_id = std::nullopt);
    TransformationRecord get_transformation(std::string_view id) const;
    /// Newest first.
    Page<TransformationRecord> list_transformations(std::size_t offset, std::size_t limit) const;

    /// An empty `name` keeps the name inside the payload.
    std::string put_model(std::string_view bytes, std::string_view name = {});
    ModelAsset get_model(std::string_view id) const;
    Page<ModelSummary> list_models(std::size_t offset, std::size_t limit) const;

private:
    std::string fresh_id();

    sqlite3* db_ = nullptr;
    mutable std::mutex mutex_;
};

std::string utc_timestamp_now();

} // namespace shaderevo
