#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shaderevo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller-supplied data was rejected. Carries every violation found.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message, std::vector<std::string> violations = {})
        : Error(message), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

/// A candidate id that is not part of the session's current display.
class StaleCandidateError : public Error {
public:
    using Error::Error;
};

class StorageError : public Error {
public:
    using Error::Error;
};

} // namespace shaderevo
