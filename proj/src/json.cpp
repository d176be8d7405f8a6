#include "pmon/json.hpp"

#include "pmon/errors.hpp"

namespace pmon {

Json to_json(const Trace& t) {
  Json out = Json::array();
  for (const auto& m : t) out.push_back(std::string(1, polarity_mark(m.polarity)) + m.payload.str());
  return out;
}

Json to_json(const Equation& e) { return Json::array({e.lhs.str(), e.rhs.str()}); }

Json to_json(const Basis& b) {
  Json pairs = Json::array();
  for (const auto& e : b.equations) pairs.push_back(to_json(e));
  return {{"pairs", pairs}};
}

Json to_json(const ActiveFrame& f) {
  Json steps = Json::array();
  for (const auto& s : f.steps) {
    if (s.is_send()) {
      steps.push_back({{"kind", "send"}, {"recipe", s.recipe->str()}});
    } else {
      Json tests = Json::array();
      for (const auto& e : s.tests.equations) tests.push_back(to_json(e));
      steps.push_back({{"kind", "receive"}, {"tests", tests}});
    }
  }
  return {{"steps", steps}};
}

Json to_json(const ExecutionLog& log) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < log.entries.size(); ++i) {
    const LogEntry& p = log.provenance.at(i);
    entries.push_back({{"message", "!" + log.entries[i].payload.str()},
                       {"participant", p.participant},
                       {"role", p.role},
                       {"step", p.step}});
  }
  return {{"order", log.order}, {"entries", entries}};
}

Json to_json(const MonitorVerdictRule& r) {
  return {{"lhs", r.equation.lhs.str()},
          {"rhs", r.equation.rhs.str()},
          {"polarity", polarity_name(r.polarity)}};
}

Json to_json(const EvalResult& r) {
  Json transcript = Json::array();
  for (const auto& t : r.transcript)
    transcript.push_back({{"step", t.step}, {"test", t.equation.str()}, {"passed", t.passed}});
  Json out = {{"accepted", r.accepted}, {"trace", to_json(r.trace)}, {"transcript", transcript}};
  if (r.rejection) out["rejected_at"] = r.rejection->step;
  return out;
}

namespace {

std::string field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string())
    throw Error(std::string("expected string field '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

Equation equation_from_json(const Json& j, const DeductionSystem& sys) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw Error("expected an equation [lhs, rhs]");
  return {Context::parse(j[0].get<std::string>(), sys), Context::parse(j[1].get<std::string>(), sys)};
}

MonitorVerdictRule rule_from_json(const Json& j, const DeductionSystem& sys) {
  std::string pol = field(j, "polarity");
  VerdictPolarity p;
  if (pol == "block_if_satisfied")
    p = VerdictPolarity::BlockIfSatisfied;
  else if (pol == "block_if_violated")
    p = VerdictPolarity::BlockIfViolated;
  else
    throw Error("unknown polarity '" + pol + "'");
  return {{Context::parse(field(j, "lhs"), sys), Context::parse(field(j, "rhs"), sys)}, p};
}

std::vector<MonitorVerdictRule> rules_from_json(const Json& j, const DeductionSystem& sys) {
  std::vector<MonitorVerdictRule> out;
  if (j.is_array()) {
    for (const auto& r : j) out.push_back(rule_from_json(r, sys));
  } else if (j.is_object() && j.contains("result")) {
    const Json& res = j["result"];
    if (res.contains("rule") && !res["rule"].is_null()) out.push_back(rule_from_json(res["rule"], sys));
  } else {
    out.push_back(rule_from_json(j, sys));
  }
  return out;
}

ActiveFrame frame_from_json(const Json& j, const DeductionSystem& sys) {
  if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
    throw Error("expected a frame {\"steps\": [...]}");
  ActiveFrame f;
  for (const auto& s : j["steps"]) {
    std::string kind = field(s, "kind");
    if (kind == "send") {
      f.steps.push_back(FrameStep::send(Context::parse(field(s, "recipe"), sys)));
    } else if (kind == "receive") {
      TestSystem tests;
      if (s.contains("tests"))
        for (const auto& e : s["tests"]) tests.equations.push_back(equation_from_json(e, sys));
      f.steps.push_back(FrameStep::receive(std::move(tests)));
    } else {
      throw Error("unknown step kind '" + kind + "'");
    }
  }
  f.validate();
  return f;
}

}  // namespace pmon
