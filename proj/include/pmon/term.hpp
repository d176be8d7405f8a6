#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pmon {

enum class TermKind {
  Free,      // free constant: a, KA
  Nonce,     // nonce constant: ~NA
  Var,       // rule variable: x
  Position,  // context position variable: v1, v2, ...
  App,       // f(t1, ..., tk); arity-0 symbols are non-free constants
};

/// Immutable symbolic message. Copies share structure.
class Term {
 public:
  static Term free_const(std::string name);
  static Term nonce(std::string name);
  static Term var(std::string name);
  static Term position(std::size_t index);
  static Term app(std::string symbol, std::vector<Term> args = {});

  TermKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  /// 1-based index of a position variable.
  std::size_t index() const { return node_->index; }
  const std::vector<Term>& args() const { return node_->args; }

  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }
  std::size_t depth() const { return node_->depth; }

  bool is_constant() const { return kind() == TermKind::Free || kind() == TermKind::Nonce; }
  bool is_app() const { return kind() == TermKind::App; }
  /// No rule variables and no position variables.
  bool is_ground() const { return node_->ground; }

  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind = TermKind::Free;
    std::string name;
    std::size_t index = 0;
    std::vector<Term> args;
    std::size_t hash = 0;
    std::size_t size = 1;
    std::size_t depth = 1;
    bool ground = true;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(Node node);

  std::shared_ptr<const Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Term& t);

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Node count first, printed form second. This is the order used to pick
/// canonical recipes.
bool canonical_less(const Term& a, const Term& b);

struct CanonicalLess {
  bool operator()(const Term& a, const Term& b) const { return canonical_less(a, b); }
};

/// Idempotent substitution of rule variables.
using Substitution = std::map<std::string, Term>;

Term apply_subst(const Term& t, const Substitution& sigma);

/// Syntactic matching of `pattern` (rule variables) against `subject`,
/// extending `sigma`. On failure `sigma` may hold partial bindings.
bool match(const Term& pattern, const Term& subject, Substitution& sigma);

/// Calls `visit` on every subterm, root included, in pre-order.
void for_each_subterm(const Term& t, const std::function<void(const Term&)>& visit);

/// Free and nonce constants occurring in `t`.
void collect_constants(const Term& t, std::vector<Term>& out);

/// Largest position index in `t`, 0 if none.
std::size_t max_position(const Term& t);

}  // namespace pmon

template <>
struct std::hash<pmon::Term> {
  std::size_t operator()(const pmon::Term& t) const { return t.hash(); }
};
