#include "pisym/errors.hpp"

namespace pisym {

namespace {

std::string syntax_message(std::size_t position, const std::vector<std::string>& expected,
                           const std::string& detail) {
    std::string msg = "at position " + std::to_string(position) + ": " + detail;
    if (!expected.empty()) {
        msg += " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += i + 1 == expected.size() ? " or " : ", ";
            msg += "'" + expected[i] + "'";
        }
        msg += ")";
    }
    return msg;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& detail)
    : Error("SyntaxError", syntax_message(position, expected, detail)),
      position_(position),
      detail_(detail),
      expected_(std::move(expected)) {}

}  // namespace pisym
