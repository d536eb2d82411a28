#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace leadlag {

/// Coarse classification used by the CLI for exit codes and by the pipeline to
/// decide whether a per-cell failure is a degenerate input or a real error.
enum class ErrorKind {
    invalid_argument,
    degenerate,   // zero variance, collinear design, constant series
    insufficient, // too few observations for the requested method
    input,        // malformed or inconsistent input files
    config,
    io,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace leadlag
