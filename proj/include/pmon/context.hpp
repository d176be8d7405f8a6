#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pmon/term.hpp"
#include "pmon/theory.hpp"
#include "pmon/trace.hpp"

namespace pmon {

/// A public term over position variables v1..vn. Holds no free constants,
/// nonce constants or rule variables; public-ness of symbols is checked
/// against a DeductionSystem by `checked` and `parse`.
class Context {
 public:
  explicit Context(Term body);

  static Context checked(Term body, const DeductionSystem& sys);
  static Context parse(std::string_view text, const DeductionSystem& sys);
  static Context position(std::size_t index) { return Context(Term::position(index)); }

  const Term& body() const { return body_; }
  /// Largest position index used, 0 for closed contexts.
  std::size_t arity() const { return max_position(body_); }
  bool mentions(std::size_t position) const;
  std::string str() const { return body_.str(); }

  friend bool operator==(const Context&, const Context&) = default;

 private:
  Term body_;
};

struct Equation {
  Context lhs;
  Context rhs;

  std::size_t size() const { return lhs.body().size() + rhs.body().size(); }
  std::size_t arity() const;
  std::string str() const { return lhs.str() + " = " + rhs.str(); }

  friend bool operator==(const Equation&, const Equation&) = default;
};

/// Size first, then printed form.
bool equation_less(const Equation& a, const Equation& b);

struct TestSystem {
  std::vector<Equation> equations;

  std::size_t arity() const;
  bool empty() const { return equations.empty(); }
  std::size_t size() const { return equations.size(); }

  friend bool operator==(const TestSystem&, const TestSystem&) = default;
};

/// Substitutes position i by values[i-1] without normalizing.
Term instantiate(const Term& body, std::span<const Term> values);

/// Normal form of C with each vi replaced by the i-th message of `trace`.
/// Throws PositionOutOfRange.
Term apply_context(const Context& c, const Trace& trace, const DeductionSystem& sys);
Term apply_context(const Context& c, std::span<const Term> values, const DeductionSystem& sys);

bool satisfies(const Trace& trace, const Equation& eq, const DeductionSystem& sys);
bool satisfies(const Trace& trace, const TestSystem& tests, const DeductionSystem& sys);
bool satisfies(std::span<const Term> values, const Equation& eq, const DeductionSystem& sys);

}  // namespace pmon
