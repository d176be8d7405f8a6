#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pmon/context.hpp"
#include "pmon/term.hpp"
#include "pmon/theory.hpp"
#include "pmon/trace.hpp"

namespace pmon {

/// A finite set of context pairs presenting every equality a positive trace
/// satisfies. Same shape as a test system.
using Basis = TestSystem;

/// Facts derivable from a positive trace, each with the recipes found for it.
///
/// Seeded with (nf(m_i), v_i) for every trace message, then closed under rule
/// instances: for each rule whose head is public, every way of building its
/// left-hand side where each non-variable pattern is either matched against a
/// known fact or composed with its public head symbol, and each remaining
/// variable is derivable. Instances that match no known fact hold in every
/// trace and are skipped. The normalized right-hand side becomes a new fact, or
/// an alternative recipe for an existing one.
///
/// The deduction system must outlive the knowledge base.
class KnowledgeBase {
 public:
  struct Entry {
    Term fact;
    Term canonical;  // smallest recipe (node count, then printed form)
    std::vector<Term> recipes;
  };

  KnowledgeBase(const Trace& positive, const DeductionSystem& sys, std::size_t entry_limit = 4096);

  /// Recipe for a term in normal form: a known fact, or a public symbol over
  /// derivable arguments.
  std::optional<Term> derive(const Term& normal) const;
  std::optional<std::size_t> find(const Term& fact) const;

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t source_length() const { return source_length_; }

 private:
  struct Instance {
    std::string key;
    Term recipe;
    Term value;
  };

  void add(const Term& fact, const Term& recipe);
  void saturate();
  void enumerate(std::size_t rule_index, std::vector<Instance>& out) const;

  const DeductionSystem* sys_;
  std::size_t source_length_;
  std::size_t entry_limit_;
  std::vector<Entry> entries_;
  std::unordered_map<Term, std::size_t, TermHash> index_;
  std::set<std::string> seen_;
};

/// Recipe C with C applied to `positive` equal to `target` modulo E, or
/// nullopt when none exists.
std::optional<Context> synthesize(const Trace& positive, const Term& target,
                                  const DeductionSystem& sys);

Basis finite_basis(const Trace& positive, const DeductionSystem& sys);

/// True when every equality holding on `reference` holds on `refined`.
/// Traces of different length never refine each other.
bool refines(const Trace& refined, const Trace& reference, const DeductionSystem& sys);

/// Smallest basis equation of `reference` that `refined` violates.
std::optional<Equation> refinement_witness(const Trace& refined, const Trace& reference,
                                           const DeductionSystem& sys);

bool equivalent(const Trace& a, const Trace& b, const DeductionSystem& sys);

/// A positive trace with a set of hidden constants (free or nonce).
struct EqFrame {
  std::vector<Term> hidden;
  Trace body;

  friend bool operator==(const EqFrame&, const EqFrame&) = default;
};

/// Frames of equal length that no pair of public contexts distinguishes, where
/// context variables may also stand for constants outside both hidden sets.
///
/// Non-hidden constants of the bodies and max(length) + 2 fresh constants are
/// appended to both bodies, then the extended traces are compared with
/// `equivalent`.
bool static_equivalence(const EqFrame& a, const EqFrame& b, const DeductionSystem& sys);

/// Each trace becomes a frame hiding all of its constants.
std::pair<EqFrame, EqFrame> reduce_detectability(const Trace& a, const Trace& b);

}  // namespace pmon
