#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ricciflat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its real domain (log of a non-positive
/// number, real power of a negative base, 1/0, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what, std::string code = "LOG_DOMAIN")
        : Error(what), code_(std::move(code)) {}

    /// Machine-readable reason: RHO_NONPOSITIVE or LOG_DOMAIN.
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class InadmissiblePoint : public Error {
public:
    using Error::Error;
};

class SingularMetric : public Error {
public:
    using Error::Error;
};

class TooCloseToBoundary : public Error {
public:
    using Error::Error;
};

class SingularJacobian : public Error {
public:
    using Error::Error;
};

} // namespace ricciflat
