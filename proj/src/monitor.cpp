#include "pmon/monitor.hpp"

#include <algorithm>

#include "pmon/deduction.hpp"
#include "pmon/errors.hpp"

namespace pmon {

Monitor build_monitor(const Protocol& p, const MonitorSpec& spec) {
  Monitor m{spec.name, p.strands, {}};
  for (const Disclosure& d : spec.shares) {
    if (!p.has_strand(d.role))
      throw Error("monitor " + spec.name + " shares from unknown role " + d.role);
    std::size_t n = input(p.trace(d.role)).size();
    if (d.after > n)
      throw Error("role " + d.role + " has " + std::to_string(n) + " inputs, cannot share after " +
                  std::to_string(d.after));
  }
  for (const auto& s : p.strands) {
    Trace t;
    std::size_t seen = 0;
    auto flush = [&] {
      for (const Disclosure& d : spec.shares)
        if (d.role == s && d.after == seen) t.push_sent(d.term);
    };
    flush();
    for (const auto& msg : p.trace(s)) {
      if (msg.polarity != Polarity::Received) continue;
      t.push_received(msg.payload);
      ++seen;
      flush();
    }
    m.traces.emplace(s, std::move(t));
  }
  return m;
}

Monitor full_disclosure_monitor(const Protocol& p) { return {p.name, p.strands, p.traces}; }

MonitorCheck validate_monitor(const Monitor& m, const Protocol& p, const DeductionSystem& sys) {
  MonitorCheck c;
  auto problem = [&](std::string s) {
    c.ok = false;
    c.problems.push_back(std::move(s));
  };
  std::vector<std::string> ms = m.strands, ps = p.strands;
  std::sort(ms.begin(), ms.end());
  std::sort(ps.begin(), ps.end());
  if (ms != ps) problem("monitor strands differ from protocol strands");
  for (const auto& s : m.strands) {
    auto it = m.traces.find(s);
    if (it == m.traces.end()) {
      problem("no monitor trace for " + s);
      continue;
    }
    if (p.has_strand(s)) {
      Trace a = input(it->second), b = input(p.trace(s));
      bool same = a.size() == b.size();
      for (std::size_t i = 0; same && i < a.size(); ++i)
        same = eq_mod_e(a[i].payload, b[i].payload, sys);
      if (!same) problem("inputs of " + s + " differ from the protocol");
    }
    try {
      compile(it->second, sys, false);
    } catch (const NotExecutable& e) {
      problem(e.with_strand(s).what());
    }
  }
  return c;
}

ProtocolImplementation compile_monitor(const Monitor& m, const DeductionSystem& sys) {
  Protocol p{m.name, m.strands, m.traces};
  return compile_protocol(p, sys, false);
}

std::vector<std::string> default_order(const ProtocolExecution& e) {
  std::vector<std::string> out = e.honest();
  std::sort(out.begin(), out.end());
  return out;
}

ExecutionLog execution_log(const ProtocolImplementation& monitor_frames,
                           const ProtocolExecution& e, const DeductionSystem& sys,
                           std::optional<std::vector<std::string>> order) {
  ExecutionLog log;
  log.order = order ? *order : default_order(e);
  std::vector<std::string> a = log.order, b = default_order(e);
  std::sort(a.begin(), a.end());
  if (a != b) throw Error("participant order must list each honest participant once");

  for (const auto& p : log.order) {
    const std::string& role = e.role_map.at(p);
    auto tr = e.traces.find(p);
    Trace in = tr == e.traces.end() ? Trace{} : input(tr->second);
    EvalResult r = evaluate(monitor_frames.frame(role), in, sys);
    if (!r.accepted) throw Rejected(p, r.rejection->step, r.rejection->equation.str());
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      if (r.trace[i].polarity != Polarity::Sent) continue;
      log.entries.push_sent(r.trace[i].payload);
      log.provenance.push_back({p, role, i + 1});
    }
  }
  return log;
}

AttackPresentation attack_presentation(const ProtocolImplementation& monitor_frames,
                                       const AttackDefinition& a, const DeductionSystem& sys,
                                       std::optional<std::vector<std::string>> order) {
  return {execution_log(monitor_frames, a.attack(), sys, order),
          execution_log(monitor_frames, a.normal(), sys, order)};
}

bool detectable(const AttackPresentation& pres, const DeductionSystem& sys, Route route) {
  const Trace& a = pres.attack_log.entries;
  const Trace& n = pres.normal_log.entries;
  if (route == Route::Basis) return !equivalent(a, n, sys);
  auto [fa, fn] = reduce_detectability(a, n);
  return !static_equivalence(fa, fn, sys);
}

const char* polarity_name(VerdictPolarity p) {
  return p == VerdictPolarity::BlockIfSatisfied ? "block_if_satisfied" : "block_if_violated";
}

const char* verdict_name(Verdict v) { return v == Verdict::Block ? "block" : "allow"; }

namespace {

/// Smallest pair of `basis` that `other` violates.
std::optional<Equation> first_violated(const Basis& basis, const Trace& other,
                                       const DeductionSystem& sys) {
  for (const Equation& eq : basis.equations)  // sorted by equation_less
    if (!satisfies(other, eq, sys)) return eq;
  return std::nullopt;
}

bool holds(const Equation& eq, const Trace& log, const DeductionSystem& sys) {
  if (eq.arity() > log.size()) return false;
  return satisfies(log, eq, sys);
}

}  // namespace

std::optional<MonitorVerdictRule> synthesize_test(const AttackPresentation& pres,
                                                  const DeductionSystem& sys) {
  const Trace& a = pres.attack_log.entries;
  const Trace& n = pres.normal_log.entries;
  if (a.size() != n.size()) {
    std::size_t m = std::max(a.size(), n.size());
    Equation eq{Context::position(m), Context::position(m)};
    return MonitorVerdictRule{eq, n.size() > a.size() ? VerdictPolarity::BlockIfViolated
                                                      : VerdictPolarity::BlockIfSatisfied};
  }
  if (auto eq = first_violated(finite_basis(n, sys), a, sys))
    return MonitorVerdictRule{*eq, VerdictPolarity::BlockIfViolated};
  if (auto eq = first_violated(finite_basis(a, sys), n, sys))
    return MonitorVerdictRule{*eq, VerdictPolarity::BlockIfSatisfied};
  return std::nullopt;
}

Verdict apply_verdict(const MonitorVerdictRule& rule, const Trace& log, const DeductionSystem& sys) {
  bool sat = holds(rule.equation, log, sys);
  bool block = rule.polarity == VerdictPolarity::BlockIfSatisfied ? sat : !sat;
  return block ? Verdict::Block : Verdict::Allow;
}

Verdict apply_verdicts(const std::vector<MonitorVerdictRule>& rules, const Trace& log,
                       const DeductionSystem& sys) {
  for (const auto& r : rules)
    if (apply_verdict(r, log, sys) == Verdict::Block) return Verdict::Block;
  return Verdict::Allow;
}

Simulation simulate(const ProtocolImplementation& impl, const ProtocolExecution& e,
                    const DeductionSystem& sys, const ProtocolImplementation* monitor_frames,
                    const std::vector<MonitorVerdictRule>& rules,
                    std::optional<std::vector<std::string>> order) {
  Simulation sim;
  for (const auto& p : default_order(e)) {
    ParticipantRun run{p, e.role_map.at(p), false, "", {}};
    auto tr = e.traces.find(p);
    Trace t = tr == e.traces.end() ? Trace{} : tr->second;
    const ActiveFrame& frame = impl.frame(run.role);
    try {
      run.result = evaluate(frame, input(t), sys);
      if (!run.result.accepted) {
        run.problem = "test " + run.result.rejection->equation.str() + " fails at step " +
                      std::to_string(run.result.rejection->step);
      } else if (!is_implementation(frame, t, sys)) {
        run.problem = "sent messages differ from the role's";
      } else {
        run.accepted = true;
      }
    } catch (const LengthMismatch& err) {
      run.problem = err.what();
    }
    sim.runs.push_back(std::move(run));
  }
  if (monitor_frames) {
    sim.log = execution_log(*monitor_frames, e, sys, order);
    sim.verdict = apply_verdicts(rules, sim.log->entries, sys);
  }
  return sim;
}

}  // namespace pmon
