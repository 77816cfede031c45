#pragma once

#include <stdexcept>
#include <string>

namespace pas {

enum class ErrorKind {
    invalid_parameter,
    infeasible,
    invalid_index,
    invalid_sequence,
    precision_too_small,
    numerical_error,
    io_error,
};

const char* to_string(ErrorKind kind) noexcept;

/// Library-wide exception. Every throw site in pas tags the failure with a
/// kind so front ends can map it to an exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace pas
