#include "pmon/context.hpp"

#include <algorithm>

#include "pmon/errors.hpp"
#include "pmon/syntax.hpp"

namespace pmon {

namespace {

bool pure(const Term& t) {
  if (t.kind() == TermKind::Position) return true;
  if (!t.is_app()) return false;
  return std::all_of(t.args().begin(), t.args().end(), pure);
}

bool all_public(const Term& t, const DeductionSystem& sys) {
  if (t.is_app() && !sys.is_public(t.name())) return false;
  return std::all_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return all_public(a, sys); });
}

}  // namespace

Context::Context(Term body) : body_(std::move(body)) {
  if (!pure(body_)) throw Error("not a context: " + body_.str());
}

Context Context::checked(Term body, const DeductionSystem& sys) {
  Context c(std::move(body));
  sys.check_well_formed(c.body_);
  if (!all_public(c.body_, sys)) throw Error("context uses a private symbol: " + c.str());
  return c;
}

Context Context::parse(std::string_view text, const DeductionSystem& sys) {
  Lexer lex(text);
  Term t = parse_term(lex, TermMode::Context, sys);
  lex.skip_newlines();
  if (!lex.at(TokenKind::End)) lex.fail(lex.peek(), "trailing input after context");
  return Context(std::move(t));
}

bool Context::mentions(std::size_t position) const {
  bool found = false;
  for_each_subterm(body_, [&](const Term& s) {
    found = found || (s.kind() == TermKind::Position && s.index() == position);
  });
  return found;
}

std::size_t Equation::arity() const { return std::max(lhs.arity(), rhs.arity()); }

bool equation_less(const Equation& a, const Equation& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  std::string sa = a.str(), sb = b.str();
  return sa < sb;
}

std::size_t TestSystem::arity() const {
  std::size_t n = 0;
  for (const Equation& e : equations) n = std::max(n, e.arity());
  return n;
}

Term instantiate(const Term& body, std::span<const Term> values) {
  if (body.kind() == TermKind::Position) {
    if (body.index() == 0 || body.index() > values.size())
      throw PositionOutOfRange(body.index(), values.size());
    return values[body.index() - 1];
  }
  if (!body.is_app() || body.args().empty()) return body;
  std::vector<Term> args;
  args.reserve(body.args().size());
  for (const Term& a : body.args()) args.push_back(instantiate(a, values));
  return Term::app(body.name(), std::move(args));
}

Term apply_context(const Context& c, std::span<const Term> values, const DeductionSystem& sys) {
  return sys.normalize(instantiate(c.body(), values));
}

Term apply_context(const Context& c, const Trace& trace, const DeductionSystem& sys) {
  std::vector<Term> values = trace.payloads();
  return apply_context(c, std::span<const Term>(values), sys);
}

bool satisfies(std::span<const Term> values, const Equation& eq, const DeductionSystem& sys) {
  return apply_context(eq.lhs, values, sys) == apply_context(eq.rhs, values, sys);
}

bool satisfies(const Trace& trace, const Equation& eq, const DeductionSystem& sys) {
  std::vector<Term> values = trace.payloads();
  return satisfies(std::span<const Term>(values), eq, sys);
}

bool satisfies(const Trace& trace, const TestSystem& tests, const DeductionSystem& sys) {
  std::vector<Term> values = trace.payloads();
  for (const Equation& eq : tests.equations)
    if (!satisfies(std::span<const Term>(values), eq, sys)) return false;
  return true;
}

}  // namespace pmon
