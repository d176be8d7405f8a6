#include <functional>

#include "pmon/deduction.hpp"
#include "pmon/errors.hpp"

namespace pmon {

namespace {

enum class NodeState { Open, Matched, Composed, Var };

struct PatternNode {
  Term pattern;
  NodeState state;
  std::size_t entry = 0;
  std::vector<std::size_t> kids;
};

struct Partial {
  std::vector<PatternNode> nodes;
  Substitution sigma;
  bool uses_knowledge = false;
};

void spawn_children(Partial& p, std::size_t parent) {
  Term pattern = p.nodes[parent].pattern;
  for (const Term& arg : pattern.args()) {
    NodeState s = arg.kind() == TermKind::Var ? NodeState::Var : NodeState::Open;
    p.nodes[parent].kids.push_back(p.nodes.size());
    p.nodes.push_back({arg, s, 0, {}});
  }
}

}  // namespace

KnowledgeBase::KnowledgeBase(const Trace& positive, const DeductionSystem& sys,
                             std::size_t entry_limit)
    : sys_(&sys), source_length_(positive.size()), entry_limit_(entry_limit) {
  for (std::size_t i = 0; i < positive.size(); ++i)
    add(sys.normalize(positive[i].payload), Term::position(i + 1));
  saturate();
}

void KnowledgeBase::add(const Term& fact, const Term& recipe) {
  auto it = index_.find(fact);
  if (it == index_.end()) {
    if (entries_.size() >= entry_limit_)
      throw ResourceLimit("knowledge base exceeds " + std::to_string(entry_limit_) + " facts");
    index_.emplace(fact, entries_.size());
    entries_.push_back({fact, recipe, {recipe}});
    return;
  }
  Entry& e = entries_[it->second];
  for (const Term& r : e.recipes)
    if (r == recipe) return;
  e.recipes.push_back(recipe);
  if (canonical_less(recipe, e.canonical)) e.canonical = recipe;
}

std::optional<std::size_t> KnowledgeBase::find(const Term& fact) const {
  auto it = index_.find(fact);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Term> KnowledgeBase::derive(const Term& normal) const {
  if (auto e = find(normal)) return entries_[*e].canonical;
  if (!normal.is_app() || !sys_->is_public(normal.name())) return std::nullopt;
  std::vector<Term> args;
  args.reserve(normal.args().size());
  for (const Term& a : normal.args()) {
    auto r = derive(a);
    if (!r) return std::nullopt;
    args.push_back(*r);
  }
  return Term::app(normal.name(), std::move(args));
}

void KnowledgeBase::enumerate(std::size_t rule_index, std::vector<Instance>& out) const {
  const RewriteRule& rule = sys_->rules()[rule_index];
  if (!sys_->is_public(rule.lhs.name())) return;

  std::function<void(Partial)> search;

  auto finish = [&](Partial p) {
    if (!p.uses_knowledge || entries_.empty()) return;
    // Variables reached only through composed patterns are unconstrained;
    // the first known fact stands in for them.
    for (const PatternNode& n : p.nodes)
      if (n.state == NodeState::Var) p.sigma.try_emplace(n.pattern.name(), entries_.front().fact);
    std::vector<std::optional<Term>> recipes(p.nodes.size());
    std::vector<std::string> keys(p.nodes.size());
    for (std::size_t i = p.nodes.size(); i-- > 0;) {
      const PatternNode& n = p.nodes[i];
      switch (n.state) {
        case NodeState::Matched:
          recipes[i] = entries_[n.entry].canonical;
          keys[i] = "#" + std::to_string(n.entry);
          break;
        case NodeState::Var: {
          const Term& value = p.sigma.at(n.pattern.name());
          recipes[i] = derive(value);
          if (!recipes[i]) return;
          keys[i] = "$" + value.str();
          break;
        }
        case NodeState::Composed: {
          std::vector<Term> args;
          std::string key = n.pattern.name() + "(";
          for (std::size_t k : n.kids) {
            args.push_back(*recipes[k]);
            key += keys[k] + ",";
          }
          recipes[i] = Term::app(n.pattern.name(), std::move(args));
          keys[i] = key + ")";
          break;
        }
        case NodeState::Open:
          return;
      }
    }
    Term value = sys_->normalize(apply_subst(rule.rhs, p.sigma));
    out.push_back({std::to_string(rule_index) + ":" + keys[0], *recipes[0], value});
  };

  search = [&](Partial p) {
    std::size_t open = p.nodes.size();
    for (std::size_t i = 0; i < p.nodes.size(); ++i)
      if (p.nodes[i].state == NodeState::Open) {
        open = i;
        break;
      }
    if (open == p.nodes.size()) {
      finish(std::move(p));
      return;
    }
    const Term pattern = p.nodes[open].pattern;
    for (std::size_t e = 0; e < entries_.size(); ++e) {
      Substitution s = p.sigma;
      if (!match(pattern, entries_[e].fact, s)) continue;
      Partial q = p;
      q.sigma = std::move(s);
      q.nodes[open].state = NodeState::Matched;
      q.nodes[open].entry = e;
      q.uses_knowledge = true;
      search(std::move(q));
    }
    if (pattern.is_app() && sys_->is_public(pattern.name())) {
      Partial q = std::move(p);
      q.nodes[open].state = NodeState::Composed;
      spawn_children(q, open);
      search(std::move(q));
    }
  };

  Partial root;
  root.nodes.push_back({rule.lhs, NodeState::Composed, 0, {}});
  spawn_children(root, 0);
  search(std::move(root));
}

void KnowledgeBase::saturate() {
  bool grew = true;
  while (grew) {
    std::size_t before = entries_.size();
    for (std::size_t r = 0; r < sys_->rules().size(); ++r) {
      std::vector<Instance> found;
      enumerate(r, found);
      for (Instance& inst : found) {
        if (!seen_.insert(inst.key).second) continue;
        add(inst.value, inst.recipe);
      }
    }
    grew = entries_.size() != before;
  }
}

}  // namespace pmon
