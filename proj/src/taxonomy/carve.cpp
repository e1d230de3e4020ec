#include "latlab/taxonomy/carve.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "latlab/core/rng.hpp"

namespace latlab::tax {

bool CarveResult::is_heldout(const Fact& f) const {
  for (const auto& p : partitions)
    if (std::binary_search(p.heldout.begin(), p.heldout.end(), f)) return true;
  return false;
}

std::vector<Fact> CarveResult::all_heldout() const {
  std::vector<Fact> out;
  for (const auto& p : partitions) out.insert(out.end(), p.heldout.begin(), p.heldout.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::size_t carve_count(double fraction, std::size_t pool) {
  auto n = static_cast<std::size_t>(fraction * static_cast<double>(pool));
  if (n < 1) n = 1;
  return std::min(n, pool);
}

// Deterministic draw: pool is sorted before indexing so the result depends
// only on (pool contents, fraction, stream seed), not on build order.
template <class T>
std::vector<T> draw(std::vector<T> pool, double fraction, Rng& rng) {
  std::sort(pool.begin(), pool.end());
  auto idx = rng.sample_without_replacement(pool.size(), carve_count(fraction, pool.size()));
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(pool[i]);
  return out;
}

Rng condition_rng(std::uint64_t seed, HoldoutCondition c) {
  return derive_rng(seed, "carve:" + to_string(c));
}

bool requested(const CarveParams& p, HoldoutCondition c) {
  return std::find(p.conditions.begin(), p.conditions.end(), c) != p.conditions.end();
}

}  // namespace

CarveResult carve_holdouts(const SemanticStructure& structure, const CarveParams& params) {
  if (params.fraction <= 0.0 || params.fraction > 1.0)
    throw ConfigError("carve fraction must lie in (0, 1]");
  {
    std::set<HoldoutCondition> seen;
    for (auto c : params.conditions)
      if (!seen.insert(c).second) throw ConfigError("duplicate holdout condition " + to_string(c));
  }

  const Closure closure0 = deductive_closure(structure.direct_facts());

  // Ordered so that iteration — and therefore every draw below — is stable.
  std::map<Fact, Proposition> train;
  for (const auto& p : closure0.props()) train.emplace(p.fact, p);

  CarveResult result;
  std::map<HoldoutCondition, std::vector<Fact>> claimed;  // tentative held-out facts
  std::vector<Fact> maybe_shadowed;  // removed, not claimed by any condition

  // ---- category-level conditions --------------------------------------
  // These prune whole leaf categories down to a single kept parent edge, so
  // they run first: the fact-level pools below are built over what remains.
  std::set<std::string> carved_cats;
  for (HoldoutCondition cond :
       {HoldoutCondition::category_as_subject, HoldoutCondition::category_as_target}) {
    if (!requested(params, cond)) continue;

    std::set<std::string> parents_in_use;
    for (const auto& c : structure.categories)
      for (const auto& p : c.parents) parents_in_use.insert(p);
    std::vector<std::string> pool;
    for (const auto& c : structure.categories)
      if (!parents_in_use.count(c.id) && !c.parents.empty() && !carved_cats.count(c.id))
        pool.push_back(c.id);
    if (pool.empty())
      throw ConfigError("holdout condition " + to_string(cond) + ": candidate pool is empty");

    Rng rng = condition_rng(params.seed, cond);
    for (const auto& cat : draw(pool, params.fraction, rng)) {
      carved_cats.insert(cat);
      result.carved_categories[cond].push_back(cat);
      const Fact kept = is_a(cat, structure.category(cat).parents.front());
      std::vector<Fact> removed;
      for (const auto& [f, prop] : train)
        if (f.mentions(cat) && f != kept) removed.push_back(f);
      for (const auto& f : removed) {
        train.erase(f);
        const bool tested_side = cond == HoldoutCondition::category_as_subject
                                     ? f.subject == cat
                                     : f.object == cat;
        if (tested_side)
          claimed[cond].push_back(f);
        else
          maybe_shadowed.push_back(f);
      }
    }
  }

  // ---- fact-level conditions -------------------------------------------
  // Removing a derived fact never shrinks what is derivable (all surviving
  // stated facts are still present), so one closure over the pruned set
  // serves every pool below.
  std::vector<Proposition> base_axioms;
  base_axioms.reserve(train.size());
  for (const auto& [f, prop] : train) base_axioms.push_back({f, Derivation::direct, {}, 0});
  const Closure base_closure = deductive_closure(base_axioms);

  if (requested(params, HoldoutCondition::syllogism)) {
    std::vector<Fact> pool;
    for (const auto& [f, prop] : train)
      if (f.rel != Relation::includes && prop.hop_depth > 0) pool.push_back(f);
    if (pool.empty())
      throw ConfigError("holdout condition syllogism: candidate pool is empty");
    Rng rng = condition_rng(params.seed, HoldoutCondition::syllogism);
    for (const auto& f : draw(pool, params.fraction, rng)) {
      train.erase(f);
      claimed[HoldoutCondition::syllogism].push_back(f);
    }
  }

  for (HoldoutCondition cond :
       {HoldoutCondition::strict_reversal, HoldoutCondition::nonstrict_reversal}) {
    if (!requested(params, cond)) continue;
    const Strictness want =
        cond == HoldoutCondition::strict_reversal ? Strictness::strict : Strictness::nonstrict;
    // A reversal is strict when the forward edge itself is trained and no
    // trained midpoint offers a second, multi-hop route.
    std::vector<Fact> pool;
    for (const auto& [f, prop] : train) {
      if (f.rel != Relation::includes) continue;
      const Fact edge = is_a(f.object, f.subject);
      bool strict = train.count(edge) > 0;
      if (strict) {
        for (const auto& mid : base_closure.props()) {
          if (mid.fact.rel != Relation::is_a || mid.fact.subject != edge.subject) continue;
          if (mid.fact.object == edge.object) continue;
          if (base_closure.has(is_a(mid.fact.object, edge.object))) {
            strict = false;
            break;
          }
        }
      }
      if ((strict ? Strictness::strict : Strictness::nonstrict) == want) pool.push_back(f);
    }
    if (pool.empty())
      throw ConfigError("holdout condition " + to_string(cond) + ": candidate pool is empty");
    Rng rng = condition_rng(params.seed, cond);
    for (const auto& f : draw(pool, params.fraction, rng)) {
      train.erase(f);
      claimed[cond].push_back(f);
    }
  }

  // ---- finalize and validate -------------------------------------------
  for (const auto& [f, prop] : train) result.train.push_back(prop);

  std::vector<Proposition> final_axioms;
  final_axioms.reserve(result.train.size());
  for (const auto& p : result.train) final_axioms.push_back({p.fact, Derivation::direct, {}, 0});
  const Closure final_closure = deductive_closure(final_axioms);

  for (auto& [cond, facts] : claimed) {
    HoldoutPartition part;
    part.condition = cond;
    for (const auto& f : facts) {
      if (final_closure.has(f))
        part.heldout.push_back(f);
      else
        result.shadowed.push_back(f);
    }
    std::sort(part.heldout.begin(), part.heldout.end());
    if (part.heldout.empty())
      throw ConfigError("holdout condition " + to_string(cond) +
                        ": no carved fact stays derivable");
    result.partitions.push_back(std::move(part));
  }
  for (const auto& f : maybe_shadowed)
    if (!final_closure.has(f)) result.shadowed.push_back(f);
  std::sort(result.shadowed.begin(), result.shadowed.end());

  // Contract checks. These guard the generator itself, so violations are
  // structural bugs rather than configuration mistakes.
  std::unordered_set<Fact, FactHash> seen_held;
  const FactIndex train_index(result.train);
  for (const auto& part : result.partitions) {
    for (const auto& f : part.heldout) {
      if (train_index.has(f))
        throw StructuralError("held-out fact also trained: " + f.key());
      if (!seen_held.insert(f).second)
        throw StructuralError("fact held out under two conditions: " + f.key());
      if (part.condition == HoldoutCondition::strict_reversal ||
          part.condition == HoldoutCondition::nonstrict_reversal) {
        const Strictness got = classify_strictness(f, train_index, final_closure);
        const Strictness want = part.condition == HoldoutCondition::strict_reversal
                                    ? Strictness::strict
                                    : Strictness::nonstrict;
        if (got != want)
          throw StructuralError("reversal fact misclassified after carving: " + f.key());
      }
    }
  }
  for (const auto& [cond, cats] : result.carved_categories) {
    for (const auto& cat : cats) {
      int n = 0;
      for (const auto& p : result.train) n += p.fact.mentions(cat) ? 1 : 0;
      if (n != 1)
        throw StructuralError("carved category " + cat + " appears in " + std::to_string(n) +
                              " train facts, expected exactly 1");
    }
  }
  for (const auto& c : structure.categories) {
    bool mentioned = false;
    for (const auto& p : result.train)
      if (p.fact.mentions(c.id)) { mentioned = true; break; }
    if (!mentioned) throw ConfigError("carving left category " + c.id + " without any train fact");
  }
  return result;
}

}  // namespace latlab::tax
