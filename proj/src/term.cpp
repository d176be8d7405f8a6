#include "pmon/term.hpp"

#include <algorithm>
#include <ostream>

namespace pmon {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

void print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Free:
    case TermKind::Var:
      out += t.name();
      return;
    case TermKind::Nonce:
      out += '~';
      out += t.name();
      return;
    case TermKind::Position:
      out += 'v';
      out += std::to_string(t.index());
      return;
    case TermKind::App:
      out += t.name();
      if (t.args().empty()) return;
      out += '(';
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ',';
        print(t.args()[i], out);
      }
      out += ')';
      return;
  }
}

}  // namespace

Term Term::make(Node node) {
  std::size_t h = mix(static_cast<std::size_t>(node.kind), std::hash<std::string>{}(node.name));
  h = mix(h, node.index);
  node.ground = node.kind != TermKind::Var && node.kind != TermKind::Position;
  for (const Term& a : node.args) {
    h = mix(h, a.hash());
    node.size += a.size();
    node.depth = std::max(node.depth, a.depth() + 1);
    node.ground = node.ground && a.is_ground();
  }
  node.hash = h;
  return Term(std::make_shared<const Node>(std::move(node)));
}

Term Term::free_const(std::string name) {
  Node n;
  n.kind = TermKind::Free;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::nonce(std::string name) {
  Node n;
  n.kind = TermKind::Nonce;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::var(std::string name) {
  Node n;
  n.kind = TermKind::Var;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::position(std::size_t index) {
  Node n;
  n.kind = TermKind::Position;
  n.index = index;
  return make(std::move(n));
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  Node n;
  n.kind = TermKind::App;
  n.name = std::move(symbol);
  n.args = std::move(args);
  return make(std::move(n));
}

std::string Term::str() const {
  std::string out;
  print(*this, out);
  return out;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size()) return false;
  if (a.name() != b.name() || a.index() != b.index()) return false;
  const auto& xs = a.args();
  const auto& ys = b.args();
  return std::equal(xs.begin(), xs.end(), ys.begin(), ys.end());
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.str(); }

bool canonical_less(const Term& a, const Term& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  if (a == b) return false;
  return a.str() < b.str();
}

Term apply_subst(const Term& t, const Substitution& sigma) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = sigma.find(t.name());
      return it == sigma.end() ? t : it->second;
    }
    case TermKind::App: {
      if (t.is_ground()) return t;
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const Term& a : t.args()) args.push_back(apply_subst(a, sigma));
      return Term::app(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

bool match(const Term& pattern, const Term& subject, Substitution& sigma) {
  switch (pattern.kind()) {
    case TermKind::Var: {
      auto [it, inserted] = sigma.try_emplace(pattern.name(), subject);
      return inserted || it->second == subject;
    }
    case TermKind::App: {
      if (!subject.is_app() || subject.name() != pattern.name() ||
          subject.args().size() != pattern.args().size())
        return false;
      for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!match(pattern.args()[i], subject.args()[i], sigma)) return false;
      return true;
    }
    default:
      return pattern == subject;
  }
}

void for_each_subterm(const Term& t, const std::function<void(const Term&)>& visit) {
  visit(t);
  for (const Term& a : t.args()) for_each_subterm(a, visit);
}

void collect_constants(const Term& t, std::vector<Term>& out) {
  if (t.is_constant()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const Term& a : t.args()) collect_constants(a, out);
}

std::size_t max_position(const Term& t) {
  if (t.kind() == TermKind::Position) return t.index();
  std::size_t m = 0;
  for (const Term& a : t.args()) m = std::max(m, max_position(a));
  return m;
}

}  // namespace pmon
