#include "latlab/taxonomy/closure.hpp"

#include <algorithm>
#include <functional>

namespace latlab::tax {

namespace {

std::string premise_key(const std::vector<Fact>& premises) {
  std::vector<std::string> keys;
  keys.reserve(premises.size());
  for (const auto& p : premises) keys.push_back(p.key());
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& k : keys) {
    out += k;
    out += '\x1e';
  }
  return out;
}

struct Entry {
  Proposition prop;
  std::string tiebreak;  // sorted premise keys
};

// Candidate beats incumbent on (hop, premise key) order.
bool better(int hop, const std::string& key, const Entry& incumbent) {
  if (hop != incumbent.prop.hop_depth) return hop < incumbent.prop.hop_depth;
  return key < incumbent.tiebreak;
}

void check_acyclic(const std::vector<Proposition>& stated) {
  std::unordered_map<std::string, std::vector<std::string>> children;
  std::unordered_set<std::string> nodes;
  for (const auto& p : stated) {
    if (p.fact.rel != Relation::is_a) continue;
    children[p.fact.subject].push_back(p.fact.object);
    nodes.insert(p.fact.subject);
    nodes.insert(p.fact.object);
  }
  std::unordered_map<std::string, int> state;  // 0 unseen, 1 active, 2 done
  std::function<void(const std::string&)> dfs = [&](const std::string& n) {
    state[n] = 1;
    auto it = children.find(n);
    if (it != children.end()) {
      for (const auto& m : it->second) {
        int s = state.count(m) ? state[m] : 0;
        if (s == 1) throw StructuralError("is_a cycle through " + m);
        if (s == 0) dfs(m);
      }
    }
    state[n] = 2;
  };
  for (const auto& n : nodes)
    if (!state.count(n)) dfs(n);
}

}  // namespace

Closure::Closure(std::vector<Proposition> props) : props_(std::move(props)) {
  std::sort(props_.begin(), props_.end(),
            [](const Proposition& a, const Proposition& b) { return a.fact < b.fact; });
  for (std::size_t i = 0; i < props_.size(); ++i) index_[props_[i].fact] = i;
}

const Proposition* Closure::find(const Fact& f) const {
  auto it = index_.find(f);
  return it == index_.end() ? nullptr : &props_[it->second];
}

Closure deductive_closure(const std::vector<Proposition>& stated, const RuleSet& rules) {
  check_acyclic(stated);

  std::unordered_map<Fact, Entry, FactHash> best;
  for (const auto& p : stated) {
    Proposition axiom{p.fact, Derivation::direct, {}, 0};
    best[p.fact] = Entry{std::move(axiom), ""};
  }

  // Adjacency indexes, rebuilt lazily each sweep. Fact sets are unit-local and
  // small, so Bellman-Ford style relaxation to fixpoint is plenty fast and in
  // particular makes minimal-hop witnesses easy to prove: a candidate only
  // replaces an incumbent when (hop, premise key) strictly improves.
  bool changed = true;
  auto offer = [&](const Fact& f, Derivation d, std::vector<Fact> premises, int hop) {
    std::string key = premise_key(premises);
    auto it = best.find(f);
    if (it != best.end()) {
      // Stated facts keep their axiom witness.
      if (it->second.prop.hop_depth == 0) return;
      if (!better(hop, key, it->second)) return;
    }
    best[f] = Entry{Proposition{f, d, std::move(premises), hop}, std::move(key)};
    changed = true;
  };

  while (changed) {
    changed = false;
    std::unordered_map<std::string, std::vector<const Entry*>> isa_by_subject;
    std::unordered_map<std::string, std::vector<const Entry*>> prop_by_subject;
    std::vector<const Entry*> isa_all;
    for (const auto& [f, e] : best) {
      if (f.rel == Relation::is_a) {
        isa_by_subject[f.subject].push_back(&e);
        isa_all.push_back(&e);
      } else if (f.rel == Relation::has_property) {
        prop_by_subject[f.subject].push_back(&e);
      }
    }
    for (const Entry* pe : isa_all) {
      const Fact& xy = pe->prop.fact;
      if (rules.inversion)
        offer(includes(xy.object, xy.subject), Derivation::inverted, {xy},
              pe->prop.hop_depth + 1);
      if (rules.transitivity) {
        auto it = isa_by_subject.find(xy.object);
        if (it != isa_by_subject.end()) {
          for (const Entry* qe : it->second) {
            const Fact& yz = qe->prop.fact;
            if (yz.object == xy.subject) continue;  // acyclicity guard
            offer(is_a(xy.subject, yz.object), Derivation::composed, {xy, yz},
                  pe->prop.hop_depth + qe->prop.hop_depth + 1);
          }
        }
      }
      if (rules.inheritance) {
        auto it = prop_by_subject.find(xy.object);
        if (it != prop_by_subject.end()) {
          for (const Entry* qe : it->second) {
            const Fact& yv = qe->prop.fact;
            offer(has_prop(xy.subject, yv.object), Derivation::composed, {xy, yv},
                  pe->prop.hop_depth + qe->prop.hop_depth + 1);
          }
        }
      }
    }
  }

  std::vector<Proposition> out;
  out.reserve(best.size());
  for (auto& [f, e] : best) {
    e.prop.validate();
    out.push_back(std::move(e.prop));
  }
  return Closure(std::move(out));
}

FactIndex::FactIndex(const std::vector<Proposition>& props) {
  for (const auto& p : props) insert(p.fact);
}

FactIndex::FactIndex(const std::vector<Fact>& facts) {
  for (const auto& f : facts) insert(f);
}

void FactIndex::insert(const Fact& f) {
  if (!set_.insert(f).second) return;
  ordered_.push_back(f);
  if (f.rel == Relation::is_a) by_subject_isa_[f.subject].push_back(f.object);
  if (f.rel == Relation::has_property) by_subject_prop_[f.subject].push_back(f.object);
}

const std::vector<std::string>& FactIndex::objects_of(const std::string& subject,
                                                      Relation rel) const {
  static const std::vector<std::string> empty;
  const auto& map = rel == Relation::is_a ? by_subject_isa_ : by_subject_prop_;
  if (rel == Relation::includes) throw Error("objects_of does not index includes");
  auto it = map.find(subject);
  return it == map.end() ? empty : it->second;
}

Strictness classify_strictness(const Fact& fact, const FactIndex& train,
                               const Closure& train_closure) {
  if (train.has(fact)) throw StructuralError("fact is trained, not held out: " + fact.key());
  if (!train_closure.has(fact))
    throw StructuralError("fact is not derivable from the train set: " + fact.key());
  if (fact.rel != Relation::includes) return Strictness::nonstrict;

  // includes(y, x) only ever arises by inverting is_a(x, y). The inversion is
  // "single" exactly when that edge is itself trained; any way of composing
  // the edge out of trained facts is a second, multi-hop derivation.
  Fact edge = is_a(fact.object, fact.subject);
  if (!train.has(edge)) return Strictness::nonstrict;
  for (const auto& p : train_closure.props()) {
    if (p.fact.rel != Relation::is_a || p.fact.subject != edge.subject) continue;
    const std::string& mid = p.fact.object;
    if (mid == edge.object) continue;
    if (train_closure.has(is_a(mid, edge.object))) return Strictness::nonstrict;
  }
  return Strictness::strict;
}

}  // namespace latlab::tax
