#pragma once

// Reference implementations used only by tests. Everything here is written in
// the dumbest form that is obviously correct — path enumeration and explicit
// counting — so it shares no machinery with the library's fixpoint engine.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "latlab/core/rng.hpp"
#include "latlab/taxonomy/types.hpp"

namespace oracle {

using latlab::tax::Fact;
using latlab::tax::Relation;

struct Graph {
  std::map<std::string, std::set<std::string>> isa;          // x -> parents
  std::map<std::string, std::set<std::string>> props;        // x -> stated values
  std::set<std::pair<std::string, std::string>> includes_ax; // stated includes
  std::set<std::string> nodes;

  explicit Graph(const std::vector<Fact>& axioms) {
    for (const auto& f : axioms) {
      nodes.insert(f.subject);
      nodes.insert(f.object);
      if (f.rel == Relation::is_a) isa[f.subject].insert(f.object);
      if (f.rel == Relation::has_property) props[f.subject].insert(f.object);
      if (f.rel == Relation::includes) includes_ax.insert({f.subject, f.object});
    }
  }

  // BFS over stated is_a edges; dist counts edges, 0 = the node itself.
  std::map<std::string, int> reach(const std::string& from) const {
    std::map<std::string, int> dist{{from, 0}};
    std::vector<std::string> frontier{from};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& n : frontier) {
        auto it = isa.find(n);
        if (it == isa.end()) continue;
        for (const auto& up : it->second)
          if (!dist.count(up)) {
            dist[up] = dist[n] + 1;
            next.push_back(up);
          }
      }
      frontier = std::move(next);
    }
    return dist;
  }

  bool path(const std::string& x, const std::string& y) const {
    auto d = reach(x);
    return d.count(y) && d[y] >= 1;
  }
};

// Every derivable fact, by path semantics:
//   is_a(x, y)        iff  some is_a path x -> y
//   has_property(x,v) iff  some ancestor-or-self of x states v
//   includes(y, x)    iff  stated, or is_a(x, y) derivable as above
inline std::set<Fact> derivable(const std::vector<Fact>& axioms) {
  Graph g(axioms);
  std::set<Fact> out(axioms.begin(), axioms.end());
  for (const auto& x : g.nodes) {
    auto d = g.reach(x);
    for (const auto& [y, dist] : d) {
      if (dist >= 1) {
        out.insert(latlab::tax::is_a(x, y));
        out.insert(latlab::tax::includes(y, x));
      }
      auto it = g.props.find(y);
      if (it != g.props.end())
        for (const auto& v : it->second) out.insert(latlab::tax::has_prop(x, v));
    }
  }
  return out;
}

// Minimal witness depth by shortest-path arithmetic: a k-edge is_a chain
// needs k-1 compositions, carrying a property across it needs k, inverting
// it needs (k-1)+1. Facts absent from the closure map to -1.
inline int min_hops(const Fact& f, const std::vector<Fact>& axioms) {
  Graph g(axioms);
  std::set<Fact> ax(axioms.begin(), axioms.end());
  int best = ax.count(f) ? 0 : -1;
  auto consider = [&best](int h) {
    if (h >= 0 && (best < 0 || h < best)) best = h;
  };
  if (f.rel == Relation::is_a) {
    auto d = g.reach(f.subject);
    if (d.count(f.object) && d[f.object] >= 1) consider(d[f.object] - 1);
  } else if (f.rel == Relation::includes) {
    auto d = g.reach(f.object);
    if (d.count(f.subject) && d[f.subject] >= 1) consider(d[f.subject] - 1 + 1);
  } else {
    auto d = g.reach(f.subject);
    for (const auto& [a, dist] : d) {
      auto it = g.props.find(a);
      if (it != g.props.end() && it->second.count(f.object) && dist >= 1) consider(dist);
    }
  }
  return best;
}

// Number of distinct is_a derivation paths x -> y over a fact set, where
// every is_a fact in the set is usable as an axiom edge. First-edge
// decomposition recurses strictly upward, so acyclicity guarantees
// termination. A held-out includes(y, x) has a single derivation — the
// inversion of one trained edge — exactly when count(x, y) == 1 and the
// edge itself is trained.
class IsaPathCounter {
 public:
  explicit IsaPathCounter(const std::vector<Fact>& facts) {
    for (const auto& f : facts)
      if (f.rel == Relation::is_a) out_[f.subject].insert(f.object);
  }

  std::uint64_t count(const std::string& x, const std::string& y) {
    auto key = std::make_pair(x, y);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::uint64_t n = 0;
    auto edges = out_.find(x);
    if (edges != out_.end())
      for (const auto& m : edges->second) n += m == y ? 1 : count(m, y);
    memo_[key] = n;
    return n;
  }

  // Derivations of includes(y, x): one per stated includes fact plus one per
  // is_a(x, y) derivation (each inverts independently).
  std::uint64_t count_includes(const std::string& y, const std::string& x,
                               const std::vector<Fact>& facts) {
    std::uint64_t n = count(x, y);
    for (const auto& f : facts)
      if (f == latlab::tax::includes(y, x)) n += 1;
    return n;
  }

 private:
  std::map<std::string, std::set<std::string>> out_;
  std::map<std::pair<std::string, std::string>, std::uint64_t> memo_;
};

// Monte-Carlo estimate of pass@n: resample n of the k attempt outcomes
// without replacement, count trials with at least one success.
inline double mc_pass_at_n(int correct, int total, int n, int trials, latlab::Rng& rng) {
  std::vector<int> outcomes(static_cast<std::size_t>(total), 0);
  for (int i = 0; i < correct; ++i) outcomes[static_cast<std::size_t>(i)] = 1;
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    auto idx = rng.sample_without_replacement(static_cast<std::size_t>(total),
                                              static_cast<std::size_t>(n));
    for (auto i : idx)
      if (outcomes[i]) {
        ++hits;
        break;
      }
  }
  return static_cast<double>(hits) / trials;
}

// Monte-Carlo estimate of E[max score over a random n-subset of samples].
inline double mc_best_at_n(const std::vector<double>& scores, int n, int trials,
                           latlab::Rng& rng) {
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto idx = rng.sample_without_replacement(scores.size(), static_cast<std::size_t>(n));
    double best = 0.0;
    for (auto i : idx) best = std::max(best, scores[i]);
    sum += best;
  }
  return sum / trials;
}

}  // namespace oracle
