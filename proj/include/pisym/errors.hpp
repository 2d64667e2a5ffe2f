#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pisym {

/// Base of every error the library reports. `code()` is a stable
/// machine-readable tag used by the CLI (`error: <code>: <message>`).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& detail);

    std::size_t position() const noexcept { return position_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t position_;
    std::string detail_;
    std::vector<std::string> expected_;
};

class UnboundName : public Error {
public:
    explicit UnboundName(const std::string& name)
        : Error("UnboundName", "free name '" + name + "' is not declared in the prefix") {}
};

class DuplicatePrefixName : public Error {
public:
    explicit DuplicatePrefixName(const std::string& name)
        : Error("DuplicatePrefixName", "name '" + name + "' occurs twice in the prefix") {}
};

class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error("InternalError", what) {}
};

class ReplicationUnsupported : public Error {
public:
    ReplicationUnsupported()
        : Error("ReplicationUnsupported", "bisimulation checking does not support replication '!'") {}
};

class DepthBudgetExceeded : public Error {
public:
    explicit DepthBudgetExceeded(std::size_t budget)
        : Error("DepthBudgetExceeded", "search depth budget of " + std::to_string(budget) + " exceeded") {}
};

class StateBudgetExceeded : public Error {
public:
    explicit StateBudgetExceeded(std::size_t budget)
        : Error("StateBudgetExceeded", "more than " + std::to_string(budget) + " states reachable") {}
};

class WitnessMalformed : public Error {
public:
    explicit WitnessMalformed(const std::string& what) : Error("WitnessMalformed", what) {}
};

class FreeInputModality : public Error {
public:
    FreeInputModality()
        : Error("FreeInputModality", "formulas with a free input modality cannot be checked") {}
};

class FormulaOutsideLM : public Error {
public:
    explicit FormulaOutsideLM(const std::string& what)
        : Error("FormulaOutside_LM", "open-mode checking accepts LM formulas only: " + what) {}
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error("UsageError", what) {}
};

}  // namespace pisym
