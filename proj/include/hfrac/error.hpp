#pragma once

#include <stdexcept>
#include <string>

namespace hfrac {

// Every error carries a stable short code so the CLI can print one
// machine-parsable line and pick an exit status.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Bad arguments, bad configuration, parameter out of range.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
    DomainError(std::string code, const std::string& what) : Error(std::move(code), what) {}
};

// A ball inclusion required by an estimate does not hold.
class GeometryError : public Error {
public:
    explicit GeometryError(const std::string& what) : Error("geometry", what) {}
};

// Quadrature or iterative solve did not reach its tolerance.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error("convergence", what) {}
};

} // namespace hfrac
