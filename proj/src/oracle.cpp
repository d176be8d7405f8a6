#include "pmon/oracle.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "pmon/errors.hpp"

namespace pmon {

namespace {

struct Rep {
  Term value;
  Term context;
  std::size_t level;
};

/// Bottom-up enumeration of contexts, one representative per value.
class Enumerator {
 public:
  Enumerator(const DeductionSystem& sys, OracleLimits limits) : sys_(sys), limits_(limits) {}

  std::vector<Rep> reps;
  std::unordered_map<Term, std::size_t, TermHash> by_value;

  /// Returns false when `value` already has a representative.
  bool offer(const Term& context, const Term& value, std::size_t level) {
    if (++examined_ > limits_.budget)
      throw ResourceLimit("oracle budget of " + std::to_string(limits_.budget) +
                          " contexts exceeded");
    if (by_value.count(value)) return false;
    by_value.emplace(value, reps.size());
    reps.push_back({value, context, level});
    return true;
  }

  const Rep* rep_of(const Term& value) const {
    auto it = by_value.find(value);
    return it == by_value.end() ? nullptr : &reps[it->second];
  }

  /// Calls `visit(args)` for every k-tuple of representatives drawn from
  /// [0, end) with at least one index in [begin, end).
  template <typename Visit>
  void tuples(std::size_t k, std::size_t begin, std::size_t end, Visit&& visit) {
    std::vector<std::size_t> idx(k, 0);
    if (end == 0) return;
    while (true) {
      bool fresh = std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i >= begin; });
      if (fresh) visit(idx);
      std::size_t pos = k;
      while (pos > 0) {
        --pos;
        if (++idx[pos] < end) break;
        idx[pos] = 0;
        if (pos == 0) return;
      }
      if (k == 0) return;
    }
  }

  /// Representatives for each argument of `s`, all below `end` and at least
  /// one at `level - 1`.
  std::optional<std::vector<Term>> arg_contexts(const Term& s, std::size_t end, std::size_t level) {
    std::vector<Term> args;
    std::size_t top = 0;
    for (const Term& a : s.args()) {
      auto it = by_value.find(a);
      if (it == by_value.end() || it->second >= end) return std::nullopt;
      args.push_back(reps[it->second].context);
      top = std::max(top, reps[it->second].level);
    }
    if (top + 1 != level) return std::nullopt;
    return args;
  }

 private:
  const DeductionSystem& sys_;
  OracleLimits limits_;
  std::size_t examined_ = 0;
};

std::vector<Term> sorted_subterms(const std::vector<Term>& roots) {
  std::unordered_set<Term, TermHash> seen;
  std::vector<Term> out;
  for (const Term& r : roots)
    for_each_subterm(r, [&](const Term& s) {
      if (seen.insert(s).second) out.push_back(s);
    });
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

}  // namespace

Basis brute_force_basis(const Trace& positive, const DeductionSystem& sys, OracleLimits limits) {
  if (limits.depth == 0) throw Error("oracle depth must be at least 1");
  Enumerator en(sys, limits);
  std::vector<Equation> pairs;
  auto consider = [&](const Term& context, const Term& value, std::size_t level) {
    if (!en.offer(context, value, level))
      pairs.push_back({Context(en.rep_of(value)->context), Context(context)});
  };

  std::vector<Term> values;
  for (const auto& m : positive) values.push_back(sys.normalize(m.payload));
  std::vector<Term> subterms = sorted_subterms(values);

  for (std::size_t i = 0; i < values.size(); ++i) consider(Term::position(i + 1), values[i], 1);
  for (const Symbol& s : sys.symbols())
    if (s.is_public && s.arity == 0) consider(Term::app(s.name), sys.normalize(Term::app(s.name)), 1);

  std::size_t begin = 0;
  for (std::size_t level = 2; level <= limits.depth; ++level) {
    std::size_t end = en.reps.size();
    for (const Symbol& f : sys.symbols()) {
      if (!f.is_public || f.arity == 0) continue;
      if (sys.is_inert(f.name)) {
        for (const Term& s : subterms) {
          if (!s.is_app() || s.name() != f.name) continue;
          if (auto args = en.arg_contexts(s, end, level))
            consider(Term::app(f.name, std::move(*args)), s, level);
        }
        continue;
      }
      en.tuples(f.arity, begin, end, [&](const std::vector<std::size_t>& idx) {
        std::vector<Term> ctx, val;
        for (std::size_t i : idx) {
          ctx.push_back(en.reps[i].context);
          val.push_back(en.reps[i].value);
        }
        consider(Term::app(f.name, std::move(ctx)), sys.normalize_app(f.name, std::move(val)),
                 level);
      });
    }
    begin = end;
  }
  return Basis{std::move(pairs)};
}

bool oracle_refines(const Trace& refined, const Trace& reference, const DeductionSystem& sys,
                    OracleLimits limits) {
  if (refined.size() != reference.size()) return false;
  Basis basis = brute_force_basis(reference, sys, limits);
  std::vector<Term> values = refined.payloads();
  return std::all_of(basis.equations.begin(), basis.equations.end(), [&](const Equation& eq) {
    return satisfies(std::span<const Term>(values), eq, sys);
  });
}

std::optional<Context> brute_force_recipe(const Trace& positive, const Term& target,
                                          const DeductionSystem& sys, OracleLimits limits) {
  if (limits.depth == 0) throw Error("oracle depth must be at least 1");
  Enumerator en(sys, limits);
  Term goal = sys.normalize(target);

  std::vector<Term> roots;
  for (const auto& m : positive) roots.push_back(sys.normalize(m.payload));
  std::vector<Term> values = roots;
  roots.push_back(goal);
  std::vector<Term> local = sorted_subterms(roots);
  std::unordered_set<Term, TermHash> local_set(local.begin(), local.end());

  auto found = [&]() -> std::optional<Context> {
    if (const Rep* r = en.rep_of(goal)) return Context(r->context);
    return std::nullopt;
  };

  for (std::size_t i = 0; i < values.size(); ++i) en.offer(Term::position(i + 1), values[i], 1);
  for (const Symbol& s : sys.symbols()) {
    if (!s.is_public || s.arity != 0) continue;
    Term v = sys.normalize(Term::app(s.name));
    if (local_set.count(v)) en.offer(Term::app(s.name), v, 1);
  }
  if (auto r = found()) return r;

  std::size_t begin = 0;
  for (std::size_t level = 2; level <= limits.depth; ++level) {
    std::size_t end = en.reps.size();
    for (const Symbol& f : sys.symbols()) {
      if (!f.is_public || f.arity == 0) continue;
      if (!sys.is_destructor(f.name)) {
        // No rule applies at the root, so f(args) is its own normal form.
        for (const Term& s : local) {
          if (!s.is_app() || s.name() != f.name) continue;
          if (auto args = en.arg_contexts(s, end, level))
            en.offer(Term::app(f.name, std::move(*args)), s, level);
        }
        continue;
      }
      en.tuples(f.arity, begin, end, [&](const std::vector<std::size_t>& idx) {
        std::vector<Term> ctx, val;
        for (std::size_t i : idx) {
          ctx.push_back(en.reps[i].context);
          val.push_back(en.reps[i].value);
        }
        Term v = sys.normalize_app(f.name, std::move(val));
        if (local_set.count(v)) en.offer(Term::app(f.name, std::move(ctx)), v, level);
      });
    }
    if (auto r = found()) return r;
    begin = end;
  }
  return std::nullopt;
}

}  // namespace pmon
