#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pisym/bisim.hpp"

namespace pisym::cli {

/// Runs one command line (without the program name). Returns the exit
/// code: 0 affirmative, 1 negative, 2 error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// Compact encoding of a name: "n3" (nabla level), "e2@1" (eigenvariable
/// with its ceiling), "b0" (bound index).
std::string name_code(const Name& n);
Name parse_name_code(const std::string& s);

nlohmann::json witness_json(const Witness& w, const Prefix& prefix);
/// Rebuilds a witness from `witness_json` output. Throws WitnessMalformed.
Witness witness_from_json(const nlohmann::json& j);

}  // namespace pisym::cli
