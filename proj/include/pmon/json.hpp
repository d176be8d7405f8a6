#pragma once

#include <json.hpp>

#include <vector>

#include "pmon/compiler.hpp"
#include "pmon/deduction.hpp"
#include "pmon/monitor.hpp"

namespace pmon {

using Json = nlohmann::ordered_json;

Json to_json(const Trace& t);
Json to_json(const Equation& e);
Json to_json(const Basis& b);  // {"pairs": [[lhs, rhs], ...]}
Json to_json(const ActiveFrame& f);
Json to_json(const ExecutionLog& log);
Json to_json(const MonitorVerdictRule& r);
Json to_json(const EvalResult& r);

Equation equation_from_json(const Json& j, const DeductionSystem& sys);
MonitorVerdictRule rule_from_json(const Json& j, const DeductionSystem& sys);
/// Accepts a rule object, an array of rules, or a synthesize report.
std::vector<MonitorVerdictRule> rules_from_json(const Json& j, const DeductionSystem& sys);
ActiveFrame frame_from_json(const Json& j, const DeductionSystem& sys);

}  // namespace pmon
