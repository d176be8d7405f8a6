#include "pmon/theory.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "pmon/errors.hpp"
#include "pmon/syntax.hpp"

namespace pmon {

namespace {

void collect_vars(const Term& t, std::vector<std::string>& out) {
  if (t.kind() == TermKind::Var) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

bool is_proper_subterm(const Term& sub, const Term& t) {
  for (const Term& a : t.args())
    if (a == sub || is_proper_subterm(sub, a)) return true;
  return false;
}

bool only_public_symbols(const Term& t, const DeductionSystem& sys) {
  if (t.is_app() && !sys.is_public(t.name())) return false;
  return std::all_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return only_public_symbols(a, sys); });
}

void mark_symbols(const Term& t, std::map<std::string, bool, std::less<>>& seen) {
  if (t.is_app()) seen[t.name()] = true;
  for (const Term& a : t.args()) mark_symbols(a, seen);
}

}  // namespace

DeductionSystem::DeductionSystem(std::string name, std::vector<Symbol> symbols,
                                 std::vector<RewriteRule> rules)
    : name_(std::move(name)), symbols_(std::move(symbols)), rules_(std::move(rules)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i].name, i).second)
      throw TheoryError("duplicate symbol " + symbols_[i].name);
    std::size_t unused;
    if (is_position_name(symbols_[i].name, &unused))
      throw TheoryError(symbols_[i].name + " is reserved for context positions");
  }
  std::map<std::string, bool, std::less<>> occurs;
  for (const RewriteRule& r : rules_) {
    std::string where = "rule " + r.lhs.str() + " -> " + r.rhs.str();
    if (!r.lhs.is_app()) throw TheoryError(where + ": left-hand side must be an application");
    check_well_formed(r.lhs);
    check_well_formed(r.rhs);
    for (const Term* side : {&r.lhs, &r.rhs}) {
      bool has_constant = false;
      for_each_subterm(*side, [&](const Term& s) { has_constant |= s.is_constant(); });
      if (has_constant) throw TheoryError(where + ": rules cannot mention free constants");
    }
    std::vector<std::string> lv, rv;
    collect_vars(r.lhs, lv);
    collect_vars(r.rhs, rv);
    for (const std::string& v : rv)
      if (std::find(lv.begin(), lv.end(), v) == lv.end())
        throw TheoryError(where + ": variable " + v + " does not occur on the left");
    bool subterm = is_proper_subterm(r.rhs, r.lhs);
    bool ground_public = rv.empty() && only_public_symbols(r.rhs, *this);
    if (!subterm && !ground_public)
      throw TheoryError(where + ": not subterm-convergent (right-hand side must be a proper "
                                "subterm of the left or a ground public term)");
    destructor_[r.lhs.name()] = true;
    mark_symbols(r.lhs, occurs);
    mark_symbols(r.rhs, occurs);
  }
  for (const Symbol& s : symbols_) inert_[s.name] = !occurs.count(s.name);
}

const Symbol* DeductionSystem::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &symbols_[it->second];
}

bool DeductionSystem::is_public(std::string_view name) const {
  const Symbol* s = find(name);
  return s && s->is_public;
}

bool DeductionSystem::is_destructor(std::string_view name) const {
  auto it = destructor_.find(name);
  return it != destructor_.end() && it->second;
}

bool DeductionSystem::is_inert(std::string_view name) const {
  auto it = inert_.find(name);
  return it != inert_.end() && it->second;
}

void DeductionSystem::check_well_formed(const Term& t) const {
  if (t.is_app()) {
    const Symbol* s = find(t.name());
    if (!s) throw UnknownSymbol("unknown function symbol " + t.name());
    if (s->arity != t.args().size())
      throw ArityError(t.name() + " expects " + std::to_string(s->arity) + " argument(s), got " +
                       std::to_string(t.args().size()));
  }
  for (const Term& a : t.args()) check_well_formed(a);
}

std::optional<Term> DeductionSystem::rewrite_at_root(const Term& t) const {
  if (!t.is_app() || !is_destructor(t.name())) return std::nullopt;
  for (const RewriteRule& r : rules_) {
    if (r.lhs.name() != t.name()) continue;
    Substitution sigma;
    if (match(r.lhs, t, sigma)) return apply_subst(r.rhs, sigma);
  }
  return std::nullopt;
}

Term DeductionSystem::normalize_app(const std::string& symbol, std::vector<Term> args) const {
  Term t = Term::app(symbol, std::move(args));
  if (auto reduct = rewrite_at_root(t)) return normalize(*reduct);
  return t;
}

Term DeductionSystem::normalize(const Term& t) const {
  if (!t.is_app() || t.args().empty()) {
    if (auto reduct = rewrite_at_root(t)) return normalize(*reduct);
    return t;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(normalize(a));
    changed = changed || !(args.back() == a);
  }
  if (!changed) {
    if (auto reduct = rewrite_at_root(t)) return normalize(*reduct);
    return t;
  }
  return normalize_app(t.name(), std::move(args));
}

bool DeductionSystem::rewrite_outermost_once(const Term& t, Term& out) const {
  if (auto reduct = rewrite_at_root(t)) {
    out = *reduct;
    return true;
  }
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    Term sub = t.args()[i];
    if (rewrite_outermost_once(t.args()[i], sub)) {
      std::vector<Term> args = t.args();
      args[i] = sub;
      out = Term::app(t.name(), std::move(args));
      return true;
    }
  }
  return false;
}

Term DeductionSystem::normalize_outermost(const Term& t) const {
  Term cur = t;
  Term next = t;
  while (rewrite_outermost_once(cur, next)) cur = next;
  return cur;
}

std::string DeductionSystem::to_text() const {
  std::ostringstream os;
  os << "theory " << name_ << "\n";
  for (const Symbol& s : symbols_)
    os << "fun " << s.name << "/" << s.arity << (s.is_public ? "" : " private") << "\n";
  for (const RewriteRule& r : rules_) os << "rule " << r.lhs << " -> " << r.rhs << "\n";
  return os.str();
}

Term normalize(const Term& t, const DeductionSystem& sys) { return sys.normalize(t); }

bool eq_mod_e(const Term& a, const Term& b, const DeductionSystem& sys) {
  return sys.equal(a, b);
}

DeductionSystem load_theory(std::string_view text) {
  Lexer lex(text);
  std::string name = "unnamed";
  std::vector<Symbol> symbols;
  std::vector<RewriteRule> rules;
  lex.skip_newlines();
  while (!lex.at(TokenKind::End)) {
    const Token& head = lex.peek();
    if (lex.accept_keyword("theory")) {
      name = lex.expect(TokenKind::Ident, "theory name").text;
    } else if (lex.accept_keyword("fun")) {
      Token id = lex.expect(TokenKind::Ident, "symbol name");
      lex.expect(TokenKind::Slash, "'/'");
      Token ar = lex.expect(TokenKind::Number, "arity");
      Symbol s{id.text, static_cast<std::size_t>(std::stoul(ar.text)), true};
      if (lex.accept_keyword("private")) s.is_public = false;
      else lex.accept_keyword("public");
      for (const Symbol& o : symbols)
        if (o.name == s.name) lex.fail(id, "duplicate symbol " + s.name);
      symbols.push_back(s);
    } else if (lex.accept_keyword("rule")) {
      Term lhs = parse_term(lex, TermMode::Pattern, symbols);
      lex.expect(TokenKind::Arrow, "'->'");
      Term rhs = parse_term(lex, TermMode::Pattern, symbols);
      rules.push_back({lhs, rhs});
    } else {
      lex.fail(head, "expected 'theory', 'fun' or 'rule'");
    }
    if (!lex.at(TokenKind::End)) lex.expect(TokenKind::Newline, "end of line");
    lex.skip_newlines();
  }
  return DeductionSystem(std::move(name), std::move(symbols), std::move(rules));
}

DeductionSystem load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open theory file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_theory(ss.str());
}

std::string_view classic_theory_text() {
  return "theory classic\n"
         "fun pair/2\n"
         "fun pi1/1\n"
         "fun pi2/1\n"
         "fun enc/2\n"
         "fun dec/2\n"
         "fun inv/1 private\n"
         "fun senc/2\n"
         "fun sdec/2\n"
         "fun h/4\n"
         "rule pi1(pair(x,y)) -> x\n"
         "rule pi2(pair(x,y)) -> y\n"
         "rule dec(enc(x,y),inv(y)) -> x\n"
         "rule sdec(senc(x,y),y) -> x\n";
}

const DeductionSystem& classic_theory() {
  static const DeductionSystem sys = load_theory(classic_theory_text());
  return sys;
}

DeductionSystem resolve_theory(const std::string& name_or_path) {
  if (name_or_path.empty() || name_or_path == "classic") return classic_theory();
  return load_theory_file(name_or_path);
}

}  // namespace pmon
