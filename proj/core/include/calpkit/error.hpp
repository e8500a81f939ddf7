#pragma once

#include <stdexcept>
#include <string>

namespace calpkit {

enum class ErrorKind {
    InvalidInput,  // malformed or inconsistent input
    Infeasible,    // no feasible answer exists
    Budget,        // search space larger than the configured budget
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidInput, what);
}

}  // namespace calpkit
