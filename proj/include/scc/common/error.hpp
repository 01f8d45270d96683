#pragma once

#include <stdexcept>
#include <string>

namespace scc {

/// Broad failure classes; the CLI maps them onto exit codes.
enum class ErrorKind {
    usage,   // invalid arguments or violated preconditions
    data,    // malformed or inconsistent input data
    remote,  // remote service or cache failures
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error(ErrorKind::usage, message) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error(ErrorKind::data, message) {}
};

class RemoteError : public Error {
public:
    explicit RemoteError(const std::string& message) : Error(ErrorKind::remote, message) {}
};

int exit_code_for(ErrorKind kind) noexcept;

}  // namespace scc
