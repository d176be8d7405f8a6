#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmon/theory.hpp"
#include "pmon/trace.hpp"

namespace pmon {

/// Strand names with one trace each.
struct Protocol {
  std::string name;
  std::vector<std::string> strands;  // declaration order
  std::map<std::string, Trace> traces;

  const Trace& trace(const std::string& strand) const;
  bool has_strand(const std::string& strand) const;
  /// Strand whose trace only sends.
  bool is_positive_strand(const std::string& strand) const;
  friend bool operator==(const Protocol&, const Protocol&) = default;
};

/// One `share ROLE after N : term` line: after its N-th input the role
/// discloses `term` to the monitor.
struct Disclosure {
  std::string role;
  std::size_t after = 0;
  Term term;
  friend bool operator==(const Disclosure&, const Disclosure&) = default;
};

struct MonitorSpec {
  std::string name;
  std::string protocol;  // empty when the file names none
  std::vector<Disclosure> shares;
  friend bool operator==(const MonitorSpec&, const MonitorSpec&) = default;
};

inline constexpr std::string_view kIntruder = "intruder";

struct ProtocolExecution {
  std::string name;
  std::string protocol;
  std::vector<std::string> participants;
  std::map<std::string, Trace> traces;
  std::map<std::string, std::string> role_map;  // participant -> strand or kIntruder

  bool is_intruder(const std::string& participant) const;
  std::vector<std::string> honest() const;
  friend bool operator==(const ProtocolExecution&, const ProtocolExecution&) = default;
};

struct AttackDefinition {
  std::string name;
  std::string protocol;
  std::vector<std::string> participants;
  std::map<std::string, std::string> role_map;
  std::map<std::string, Trace> attack_traces;
  std::map<std::string, Trace> normal_traces;  // honest participants only

  ProtocolExecution attack() const;
  ProtocolExecution normal() const;
  bool is_intruder(const std::string& participant) const;
  std::vector<std::string> honest() const;
  friend bool operator==(const AttackDefinition&, const AttackDefinition&) = default;
};

using Document = std::variant<Protocol, MonitorSpec, AttackDefinition, ProtocolExecution>;

/// Parses any narration file. An empty file is an empty protocol.
Document parse_document(std::string_view text, const DeductionSystem& sys);

Protocol parse_protocol(std::string_view text, const DeductionSystem& sys);
MonitorSpec parse_monitor(std::string_view text, const DeductionSystem& sys);
AttackDefinition parse_attack(std::string_view text, const DeductionSystem& sys);
ProtocolExecution parse_execution(std::string_view text, const DeductionSystem& sys);

std::string read_file(const std::string& path);

/// Canonical text: every trace written out as a `trace` line.
std::string to_text(const Document& doc);

/// Checks that an execution fits a protocol: participants disjoint from
/// strands, every role known. Returns one message per problem.
std::vector<std::string> check_execution(const ProtocolExecution& e, const Protocol& p);

/// Honest participants whose leading received messages (initial knowledge)
/// differ between the attack and the normal run.
std::vector<std::string> knowledge_warnings(const AttackDefinition& a);

}  // namespace pmon
