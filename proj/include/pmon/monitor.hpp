#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmon/compiler.hpp"
#include "pmon/context.hpp"
#include "pmon/narration.hpp"
#include "pmon/theory.hpp"
#include "pmon/trace.hpp"

namespace pmon {

/// Same strands and inputs as the protocol; the outputs are what each role
/// discloses to the monitoring authority.
struct Monitor {
  std::string name;
  std::vector<std::string> strands;
  std::map<std::string, Trace> traces;
};

/// Inputs of every protocol strand, with each `share` inserted as a sent
/// message after the given number of inputs.
Monitor build_monitor(const Protocol& p, const MonitorSpec& spec);

/// Monitor disclosing everything: each strand's own trace.
Monitor full_disclosure_monitor(const Protocol& p);

struct MonitorCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Same strands, E-equal inputs, and every disclosure trace executable.
MonitorCheck validate_monitor(const Monitor& m, const Protocol& p, const DeductionSystem& sys);

/// Non-prudent frames for the disclosure traces.
ProtocolImplementation compile_monitor(const Monitor& m, const DeductionSystem& sys);

struct LogEntry {
  std::string participant;
  std::string role;
  std::size_t step;  // step of the participant's monitor frame, 1-based
};

struct ExecutionLog {
  Trace entries;  // positive
  std::vector<std::string> order;
  std::vector<LogEntry> provenance;  // parallel to entries
};

/// Honest participants sorted by name.
std::vector<std::string> default_order(const ProtocolExecution& e);

/// Disclosures of every honest participant, concatenated in `order` (default:
/// by name). Throws Rejected when a monitor frame refuses its inputs and
/// LengthMismatch when a participant's inputs do not fit its role.
ExecutionLog execution_log(const ProtocolImplementation& monitor_frames,
                           const ProtocolExecution& e, const DeductionSystem& sys,
                           std::optional<std::vector<std::string>> order = std::nullopt);

struct AttackPresentation {
  ExecutionLog attack_log;
  ExecutionLog normal_log;
};

AttackPresentation attack_presentation(const ProtocolImplementation& monitor_frames,
                                       const AttackDefinition& a, const DeductionSystem& sys,
                                       std::optional<std::vector<std::string>> order = std::nullopt);

enum class Route { Basis, StaticEquivalence };

bool detectable(const AttackPresentation& pres, const DeductionSystem& sys,
                Route route = Route::Basis);

enum class VerdictPolarity { BlockIfSatisfied, BlockIfViolated };

const char* polarity_name(VerdictPolarity p);

struct MonitorVerdictRule {
  Equation equation;
  VerdictPolarity polarity;
  friend bool operator==(const MonitorVerdictRule&, const MonitorVerdictRule&) = default;
};

/// Smallest equality of the normal log that the attack log violates (block if
/// violated), else the smallest of the attack log that the normal log
/// violates (block if satisfied). Logs of different length give vN = vN on
/// the longer length. nullopt when the attack is undetectable.
std::optional<MonitorVerdictRule> synthesize_test(const AttackPresentation& pres,
                                                  const DeductionSystem& sys);

enum class Verdict { Allow, Block };

const char* verdict_name(Verdict v);

/// Equations reading past the end of the log count as violated.
Verdict apply_verdict(const MonitorVerdictRule& rule, const Trace& log, const DeductionSystem& sys);
Verdict apply_verdicts(const std::vector<MonitorVerdictRule>& rules, const Trace& log,
                       const DeductionSystem& sys);

struct ParticipantRun {
  std::string participant;
  std::string role;
  bool accepted = false;  // the frame accepts and reproduces the trace
  std::string problem;    // why not, when not accepted
  EvalResult result;
};

struct Simulation {
  std::vector<ParticipantRun> runs;
  std::optional<ExecutionLog> log;
  std::optional<Verdict> verdict;
};

/// Replays each honest participant through its role's frame. With monitor
/// frames, also builds the log and applies `rules` to it.
Simulation simulate(const ProtocolImplementation& impl, const ProtocolExecution& e,
                    const DeductionSystem& sys,
                    const ProtocolImplementation* monitor_frames = nullptr,
                    const std::vector<MonitorVerdictRule>& rules = {},
                    std::optional<std::vector<std::string>> order = std::nullopt);

}  // namespace pmon
