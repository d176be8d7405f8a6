#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmon/term.hpp"

namespace pmon {

struct Symbol {
  std::string name;
  std::size_t arity = 0;
  bool is_public = true;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct RewriteRule {
  Term lhs;
  Term rhs;
};

/// A signature, its public subset and a subterm-convergent rewrite system
/// presenting the equational theory.
///
/// Construction validates the rules: every symbol is declared with the right
/// arity, vars(rhs) is included in vars(lhs), and the right-hand side is either
/// a proper subterm of the left-hand side or a ground term over public
/// symbols. Confluence is not checked.
class DeductionSystem {
 public:
  DeductionSystem(std::string name, std::vector<Symbol> symbols, std::vector<RewriteRule> rules);

  const std::string& name() const { return name_; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }

  const Symbol* find(std::string_view name) const;
  bool is_public(std::string_view name) const;

  /// True when `name` is the head symbol of some rule's left-hand side.
  bool is_destructor(std::string_view name) const;
  /// True when `name` occurs nowhere in any rule.
  bool is_inert(std::string_view name) const;

  /// Normal form under innermost, leftmost-redex rewriting.
  Term normalize(const Term& t) const;
  /// Normal form under outermost, leftmost-redex rewriting. Used to cross-check
  /// strategy independence.
  Term normalize_outermost(const Term& t) const;
  /// Normal form of f(args) when every argument is already in normal form.
  Term normalize_app(const std::string& symbol, std::vector<Term> args) const;

  bool equal(const Term& a, const Term& b) const { return normalize(a) == normalize(b); }

  /// Throws UnknownSymbol / ArityError when `t` is not well formed over this
  /// signature.
  void check_well_formed(const Term& t) const;

  /// Declarative text form, accepted by load_theory().
  std::string to_text() const;

 private:
  std::optional<Term> rewrite_at_root(const Term& t) const;
  bool rewrite_outermost_once(const Term& t, Term& out) const;

  std::string name_;
  std::vector<Symbol> symbols_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<RewriteRule> rules_;
  std::map<std::string, bool, std::less<>> destructor_;
  std::map<std::string, bool, std::less<>> inert_;
};

Term normalize(const Term& t, const DeductionSystem& sys);
bool eq_mod_e(const Term& a, const Term& b, const DeductionSystem& sys);

/// Parses the declarative theory format:
///   theory NAME
///   fun NAME/ARITY [private]
///   rule LHS -> RHS
/// Identifiers in rules that are not declared symbols are variables.
DeductionSystem load_theory(std::string_view text);
DeductionSystem load_theory_file(const std::string& path);

/// pair, pi1, pi2, enc, dec, inv (private), senc, sdec, h/4.
const DeductionSystem& classic_theory();
std::string_view classic_theory_text();

/// Built-in preset by name, or a theory file path.
DeductionSystem resolve_theory(const std::string& name_or_path);

}  // namespace pmon
