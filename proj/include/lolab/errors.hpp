#pragma once

#include <stdexcept>
#include <string>

namespace lolab {

// All recoverable failures are typed so callers (and the CLI exit-code
// contract) can tell budget problems apart from bad input.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Enumeration or table size would exceed the configured cap.
struct CapExceeded : Error {
    explicit CapExceeded(const std::string& msg) : Error(msg) {}
};

// A projected computation (DP table, scan, search) exceeds its budget.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& msg) : Error(msg) {}
};

// A stated hypothesis of an operation was checked and found false.
struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& msg) : Error(msg) {}
};

struct RankTooLarge : Error {
    explicit RankTooLarge(const std::string& msg) : Error(msg) {}
};

struct SearchBudgetExceeded : Error {
    explicit SearchBudgetExceeded(const std::string& msg) : Error(msg) {}
};

struct NoHeavyLevel : Error {
    explicit NoHeavyLevel(const std::string& msg) : Error(msg) {}
};

struct FitFailed : Error {
    explicit FitFailed(const std::string& msg) : Error(msg) {}
};

struct GrowthHypothesisFailed : Error {
    explicit GrowthHypothesisFailed(const std::string& msg) : Error(msg) {}
};

struct NoWindow : Error {
    explicit NoWindow(const std::string& msg) : Error(msg) {}
};

struct MCTooNoisy : Error {
    explicit MCTooNoisy(const std::string& msg) : Error(msg) {}
};

struct HypothesisViolated : Error {
    explicit HypothesisViolated(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

} // namespace lolab
