// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "linf/greedy_engine.hpp"

namespace linf
{

// Unset optionals serialize as null; non-finite doubles as the strings "inf", "-inf", "nan".
nlohmann::json to_json(const SolverResult &r);
SolverResult result_from_json(const nlohmann::json &j);

std::string serialize(const SolverResult &r, int indent = 2);
// Throws ParseError on malformed input.
SolverResult parse_report(const std::string &text);

}  // namespace linf
