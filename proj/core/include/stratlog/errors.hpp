#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace stratlog {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SyntaxError : EngineError {
    explicit SyntaxError(const std::string& msg, std::size_t line = 0)
        : EngineError(line ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {}
    std::size_t line;
};

struct SafetyError : EngineError {
    using EngineError::EngineError;
};

struct AggregateError : EngineError {
    using EngineError::EngineError;
};

// The combined positive/negative hyper-edge relation is not a DAG, or an
// aggregate rule participates in a cycle.
struct UnsafeProgramError : EngineError {
    explicit UnsafeProgramError(const std::string& msg, std::vector<std::string> cycle = {})
        : EngineError(msg), cycle(std::move(cycle)) {}
    std::vector<std::string> cycle;
};

struct PlanError : EngineError {
    using EngineError::EngineError;
};

struct ArithmeticError : EngineError {
    using EngineError::EngineError;
};

struct TypeError : EngineError {
    using EngineError::EngineError;
};

struct DuplicateRuleError : EngineError {
    using EngineError::EngineError;
};

struct UnknownRuleError : EngineError {
    using EngineError::EngineError;
};

}  // namespace stratlog
