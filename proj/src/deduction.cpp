#include "pmon/deduction.hpp"

#include <algorithm>

namespace pmon {

std::optional<Context> synthesize(const Trace& positive, const Term& target,
                                  const DeductionSystem& sys) {
  KnowledgeBase kb(positive, sys);
  if (auto r = kb.derive(sys.normalize(target))) return Context(*r);
  return std::nullopt;
}

Basis finite_basis(const Trace& positive, const DeductionSystem& sys) {
  KnowledgeBase kb(positive, sys);
  std::vector<Equation> pairs;
  auto emit = [&](const Term& a, const Term& b) {
    Equation eq{Context(a), Context(b)};
    if (std::find(pairs.begin(), pairs.end(), eq) == pairs.end()) pairs.push_back(std::move(eq));
  };
  for (const auto& e : kb.entries())
    for (const Term& r : e.recipes)
      if (!(r == e.canonical)) emit(e.canonical, r);
  // Facts that can also be rebuilt from their derivable components.
  for (const auto& e : kb.entries()) {
    if (!e.fact.is_app() || !sys.is_public(e.fact.name())) continue;
    std::vector<Term> args;
    bool ok = true;
    for (const Term& a : e.fact.args()) {
      auto r = kb.derive(a);
      if (!r) {
        ok = false;
        break;
      }
      args.push_back(*r);
    }
    if (!ok) continue;
    Term composed = Term::app(e.fact.name(), std::move(args));
    if (!(composed == e.canonical)) emit(e.canonical, composed);
  }
  std::sort(pairs.begin(), pairs.end(), equation_less);
  return Basis{std::move(pairs)};
}

std::optional<Equation> refinement_witness(const Trace& refined, const Trace& reference,
                                           const DeductionSystem& sys) {
  Basis basis = finite_basis(reference, sys);
  std::vector<Term> values = refined.payloads();
  std::optional<Equation> best;
  for (const Equation& eq : basis.equations) {
    if (satisfies(std::span<const Term>(values), eq, sys)) continue;
    // Larger side on the left: the recipe being checked against its canonical form.
    Equation e = canonical_less(eq.lhs.body(), eq.rhs.body()) ? Equation{eq.rhs, eq.lhs} : eq;
    if (!best || equation_less(e, *best)) best = e;
  }
  return best;
}

bool refines(const Trace& refined, const Trace& reference, const DeductionSystem& sys) {
  if (refined.size() != reference.size()) return false;
  return !refinement_witness(refined, reference, sys);
}

bool equivalent(const Trace& a, const Trace& b, const DeductionSystem& sys) {
  return refines(a, b, sys) && refines(b, a, sys);
}

namespace {

std::vector<Term> constants_of(const Trace& t) {
  std::vector<Term> out;
  for (const auto& m : t) collect_constants(m.payload, out);
  return out;
}

bool contains(const std::vector<Term>& xs, const Term& t) {
  return std::find(xs.begin(), xs.end(), t) != xs.end();
}

}  // namespace

bool static_equivalence(const EqFrame& a, const EqFrame& b, const DeductionSystem& sys) {
  if (a.body.size() != b.body.size()) return false;
  std::vector<Term> hidden = a.hidden;
  for (const Term& h : b.hidden)
    if (!contains(hidden, h)) hidden.push_back(h);

  std::vector<Term> used = constants_of(a.body);
  for (const Term& c : constants_of(b.body))
    if (!contains(used, c)) used.push_back(c);

  // Constants visible to contexts: those of the bodies that are not hidden,
  // plus fresh names standing for the rest of the constant supply.
  std::vector<Term> visible;
  for (const Term& c : used)
    if (!contains(hidden, c)) visible.push_back(c);
  std::sort(visible.begin(), visible.end(), canonical_less);

  std::size_t fresh = std::max(a.body.size(), b.body.size()) + 2;
  for (std::size_t k = 1; fresh > 0; ++k) {
    Term c = Term::free_const("_fresh" + std::to_string(k));
    if (contains(used, c) || contains(hidden, c)) continue;
    visible.push_back(c);
    --fresh;
  }

  Trace ea = a.body, eb = b.body;
  for (const Term& c : visible) {
    ea.push_sent(c);
    eb.push_sent(c);
  }
  return equivalent(ea, eb, sys);
}

std::pair<EqFrame, EqFrame> reduce_detectability(const Trace& a, const Trace& b) {
  auto frame = [](const Trace& t) {
    EqFrame f{constants_of(t), t};
    std::sort(f.hidden.begin(), f.hidden.end(), canonical_less);
    return f;
  };
  return {frame(a), frame(b)};
}

}  // namespace pmon
