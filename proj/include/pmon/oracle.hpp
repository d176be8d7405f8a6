#pragma once

#include <cstddef>
#include <optional>

#include "pmon/context.hpp"
#include "pmon/deduction.hpp"

namespace pmon {

struct OracleLimits {
  std::size_t depth = 3;
  std::size_t budget = 1'000'000;  // candidate contexts examined
};

/// Enumerates every public context of depth <= limits.depth over v1..vn and
/// keeps the equalities that hold on `positive`. Contexts are grouped by their
/// value on the trace; the result holds one pair (representative, f(args))
/// per enumerated application, whose arguments are themselves
/// representatives. Those pairs generate, by congruence, every equality
/// between contexts of bounded depth, so a trace satisfies them all exactly
/// when it satisfies every such equality.
///
/// Symbols that occur in no rule are only applied when the result is a
/// subterm of the trace. Throws ResourceLimit past the budget.
///
/// Independent of the saturation in KnowledgeBase; meant for cross-checks.
Basis brute_force_basis(const Trace& positive, const DeductionSystem& sys,
                        OracleLimits limits = {});

/// True when `refined` satisfies every pair of brute_force_basis(reference).
bool oracle_refines(const Trace& refined, const Trace& reference, const DeductionSystem& sys,
                    OracleLimits limits = {});

/// Smallest-depth recipe for `target` found by enumerating contexts whose
/// intermediate values are subterms of the trace or of the target.
std::optional<Context> brute_force_recipe(const Trace& positive, const Term& target,
                                          const DeductionSystem& sys, OracleLimits limits = {4});

}  // namespace pmon
