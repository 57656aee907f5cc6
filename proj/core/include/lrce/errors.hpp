#pragma once

#include <stdexcept>
#include <string>

namespace lrce {

/// Process exit status associated with each failure class.
enum class ErrorCode : int {
    config = 2,
    validation = 2,
    no_active_equilibrium = 3,
    numerical = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Malformed or schema-violating configuration. `pointer` is a JSON pointer to the
/// offending field (empty when the whole document is at fault).
class ConfigError : public Error {
public:
    ConfigError(std::string pointer, const std::string& what);
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

/// A model primitive violates a structural requirement of the model.
/// `check` is the id of the violated check (see ValidationReport).
class ValidationError : public Error {
public:
    ValidationError(std::string check, const std::string& what);
    const std::string& check() const noexcept { return check_; }

private:
    std::string check_;
};

/// Demand is zero at the long-run supply price: the industry is inactive.
class NoActiveEquilibrium : public Error {
public:
    explicit NoActiveEquilibrium(const std::string& what)
        : Error(ErrorCode::no_active_equilibrium, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

} // namespace lrce
