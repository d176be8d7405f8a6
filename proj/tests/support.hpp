#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "pmon/context.hpp"
#include "pmon/errors.hpp"
#include "pmon/syntax.hpp"
#include "pmon/theory.hpp"
#include "pmon/trace.hpp"

namespace pmon::testing {

inline std::string corpus(const std::string& file) { return std::string(PMON_CORPUS_DIR) + "/" + file; }

inline const DeductionSystem& classic() { return classic_theory(); }

inline Term msg(const std::string& text) { return parse_message(text, classic()); }

inline Context ctx(const std::string& text) { return Context::parse(text, classic()); }

inline Equation eqn(const std::string& lhs, const std::string& rhs) {
  return {ctx(lhs), ctx(rhs)};
}

/// "!a, ?enc(b,k)" in the classic theory.
inline Trace trace(const std::string& text) {
  Lexer lex(text);
  Trace t;
  lex.skip_newlines();
  while (!lex.at(TokenKind::End) && !lex.at(TokenKind::Newline)) {
    Polarity p = lex.accept(TokenKind::Bang) ? Polarity::Sent
                 : (lex.expect(TokenKind::Query, "'!' or '?'"), Polarity::Received);
    t.push(p, parse_term(lex, TermMode::Message, classic()));
    if (!lex.accept(TokenKind::Comma)) break;
  }
  return t;
}

/// Random terms over the classic signature.
class TermGen {
 public:
  explicit TermGen(unsigned seed, std::vector<std::string> atoms = {"a", "b", "c", "k", "k2"})
      : rng_(seed), atoms_(std::move(atoms)) {}

  std::mt19937& rng() { return rng_; }

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Term atom() { return Term::free_const(atoms_[pick(atoms_.size())]); }

  /// Any term, destructors included.
  Term any(std::size_t depth) {
    if (depth <= 1 || coin(0.3)) return atom();
    static const std::vector<std::pair<std::string, std::size_t>> syms = {
        {"pair", 2}, {"pi1", 1}, {"pi2", 1}, {"enc", 2}, {"dec", 2},
        {"inv", 1},  {"senc", 2}, {"sdec", 2}, {"h", 4}};
    auto [name, arity] = syms[pick(syms.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(any(depth - 1));
    return Term::app(name, std::move(args));
  }

  /// A message built from constructors only (already in normal form).
  Term message(std::size_t depth) {
    if (depth <= 1 || coin(0.35)) return atom();
    switch (pick(5)) {
      case 0: return Term::app("pair", {message(depth - 1), message(depth - 1)});
      case 1: return Term::app("enc", {message(depth - 1), key(depth - 1)});
      case 2: return Term::app("senc", {message(depth - 1), key(depth - 1)});
      case 3: return Term::app("inv", {atom()});
      default:
        if (depth >= 2 && coin(0.3))
          return Term::app("h", {atom(), atom(), atom(), atom()});
        return Term::app("pair", {atom(), message(depth - 1)});
    }
  }

  /// Positive trace of `length` random messages.
  Trace positive(std::size_t length, std::size_t depth) {
    std::vector<Term> ms;
    for (std::size_t i = 0; i < length; ++i) ms.push_back(message(depth));
    return Trace::sent(std::move(ms));
  }

  /// A trace of the same length that sometimes refines `t`: constants renamed
  /// (possibly merging some), one message replaced, or two messages swapped.
  Trace perturb(const Trace& t, std::size_t depth) {
    std::vector<Term> ms = t.payloads();
    switch (pick(4)) {
      case 0: {
        std::map<std::string, std::string> ren;
        for (const auto& a : atoms_) ren[a] = coin(0.7) ? a : atoms_[pick(atoms_.size())];
        for (Term& m : ms) m = rename(m, ren);
        break;
      }
      case 1:
        if (!ms.empty()) ms[pick(ms.size())] = message(depth);
        break;
      case 2:
        if (ms.size() > 1) std::swap(ms[pick(ms.size())], ms[pick(ms.size())]);
        break;
      default: {
        std::map<std::string, std::string> ren;
        std::vector<std::string> shuffled = atoms_;
        std::shuffle(shuffled.begin(), shuffled.end(), rng_);
        for (std::size_t i = 0; i < atoms_.size(); ++i) ren[atoms_[i]] = shuffled[i];
        for (Term& m : ms) m = rename(m, ren);
        break;
      }
    }
    return Trace::sent(std::move(ms));
  }

  static Term rename(const Term& t, const std::map<std::string, std::string>& ren) {
    if (t.kind() == TermKind::Free) {
      auto it = ren.find(t.name());
      return it == ren.end() ? t : Term::free_const(it->second);
    }
    if (!t.is_app()) return t;
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(rename(a, ren));
    return Term::app(t.name(), std::move(args));
  }

  /// Role trace of at most `length` steps, starting with a receive, whose
  /// sent messages are all computable from earlier inputs.
  Trace role(std::size_t length, std::size_t depth) {
    Trace t;
    std::vector<Term> got;
    for (std::size_t i = 0; i < length; ++i) {
      if (got.empty() || coin(0.6)) {
        Term m = message(depth);
        got.push_back(m);
        t.push_received(m);
        continue;
      }
      Term a = got[pick(got.size())];
      switch (pick(4)) {
        case 0: t.push_sent(a); break;
        case 1: t.push_sent(Term::app("pair", {a, got[pick(got.size())]})); break;
        case 2: t.push_sent(Term::app("senc", {a, got[pick(got.size())]})); break;
        default:
          // A component of an input, when it is a pair.
          t.push_sent(a.is_app() && a.name() == "pair" ? a.args()[pick(2)] : a);
      }
    }
    return t;
  }

  Term key(std::size_t depth) {
    if (depth <= 1 || coin(0.8)) return atom();
    return message(depth);
  }

 private:
  std::mt19937 rng_;
  std::vector<std::string> atoms_;
};

}  // namespace pmon::testing
