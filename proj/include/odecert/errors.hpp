#pragma once

#include <stdexcept>
#include <string>

namespace odecert {

// Base error: carries a short machine-greppable code (E_PARSE, E_VALIDATE, ...)
// in addition to the human-readable message.
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct divisor_contains_zero : error {
    explicit divisor_contains_zero(const std::string& msg = "interval divisor contains zero")
        : error("E_DOMAIN", msg) {}
};

struct division_by_zero : error {
    explicit division_by_zero(const std::string& msg = "division by zero")
        : error("E_DOMAIN", msg) {}
};

struct division_by_zero_poly : error {
    explicit division_by_zero_poly(const std::string& msg = "polynomial division by zero polynomial")
        : error("E_DOMAIN", msg) {}
};

struct degree_zero_input : error {
    explicit degree_zero_input(const std::string& msg = "polynomial degree must be >= 1")
        : error("E_DOMAIN", msg) {}
};

struct dimension_mismatch : error {
    explicit dimension_mismatch(const std::string& msg = "matrix dimension mismatch")
        : error("E_VALIDATE", msg) {}
};

struct domain_error : error {
    explicit domain_error(const std::string& msg = "argument outside [0,1]")
        : error("E_DOMAIN", msg) {}
};

struct order_unavailable : error {
    explicit order_unavailable(const std::string& msg = "derivative order not available")
        : error("E_ORDER", msg) {}
};

struct derivative_order_unavailable : error {
    explicit derivative_order_unavailable(const std::string& msg = "signal does not provide enough derivatives")
        : error("E_ORDER", msg) {}
};

struct unsupported_order : error {
    explicit unsupported_order(const std::string& msg = "only order-(1,n) systems are supported")
        : error("E_ORDER", msg) {}
};

struct zero_leading_coefficient : error {
    explicit zero_leading_coefficient(const std::string& msg = "leading coefficient is zero")
        : error("E_VALIDATE", msg) {}
};

struct nonpositive_time_constant : error {
    explicit nonpositive_time_constant(const std::string& msg = "time constants must be positive")
        : error("E_VALIDATE", msg) {}
};

struct validation_error : error {
    explicit validation_error(const std::string& msg) : error("E_VALIDATE", msg) {}
};

// Parse errors carry a position: byte offset for expressions, line number for spec files.
struct syntax_error : error {
    syntax_error(std::size_t offset, const std::string& msg)
        : error("E_PARSE", msg + " (at byte " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

struct unknown_function : error {
    unknown_function(std::size_t offset, const std::string& name)
        : error("E_PARSE", "unknown function '" + name + "' (at byte " + std::to_string(offset) + ")"),
          offset(offset), name(name) {}
    std::size_t offset;
    std::string name;
};

struct parse_error : error {
    parse_error(std::size_t line, const std::string& msg)
        : error("E_PARSE", msg + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

struct quadrature_budget_exceeded : error {
    explicit quadrature_budget_exceeded(const std::string& msg = "quadrature node budget exceeded")
        : error("E_BUDGET", msg) {}
};

struct budget_exceeded : error {
    explicit budget_exceeded(const std::string& msg = "accumulated error budget exceeded")
        : error("E_BUDGET", msg) {}
};

struct missing_smoothness_bound : error {
    explicit missing_smoothness_bound(const std::string& msg = "no derivative sup bound available for integrand")
        : error("E_DOMAIN", msg) {}
};

struct root_uncertifiable : error {
    explicit root_uncertifiable(const std::string& msg = "could not certify root enclosure")
        : error("E_INTERNAL", msg) {}
};

struct insufficient_rows : error {
    explicit insufficient_rows(const std::string& msg = "need at least 4 profile rows to fit")
        : error("E_VALIDATE", msg) {}
};

struct internal_error : error {
    explicit internal_error(const std::string& msg) : error("E_INTERNAL", msg) {}
};

} // namespace odecert
