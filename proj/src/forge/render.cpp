#include "latlab/forge/render.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "latlab/core/rng.hpp"
#include "latlab/core/text.hpp"
#include "latlab/taxonomy/closure.hpp"

namespace latlab::forge {

using tax::CarveResult;
using tax::Fact;
using tax::HoldoutCondition;
using tax::SemanticStructure;

void ForgeConfig::validate() const {
  if (documents_total < 1) throw ConfigError("documents_total must be positive");
  if (rl_prompts < 0 || bootstrap_prompts < 0)
    throw ConfigError("prompt counts must be non-negative");
  if (test_paraphrases < 1 || test_paraphrases > 4)
    throw ConfigError("test_paraphrases must be in [1, 4]");
  if (!(rl_direct_fraction >= 0.0 && rl_direct_fraction <= 1.0))
    throw ConfigError("rl_direct_fraction must be in [0, 1]");
}

std::string to_string(QAPhase p) {
  switch (p) {
    case QAPhase::train_qa: return "train_qa";
    case QAPhase::bootstrap: return "bootstrap";
    case QAPhase::rl: return "rl";
    case QAPhase::test: return "test";
  }
  throw Error("bad QAPhase");
}

std::vector<std::pair<QueryKey, std::string>> fact_queries(const Fact& f) {
  switch (f.rel) {
    case tax::Relation::is_a:
      return {{QueryKey{QueryFamily::subject_isa, f.subject}, f.object}};
    case tax::Relation::includes:
      return {{QueryKey{QueryFamily::target_includes, f.subject}, f.object}};
    case tax::Relation::has_property:
      return {{QueryKey{QueryFamily::subject_prop, f.subject}, f.object},
              {QueryKey{QueryFamily::prop_holders, f.object}, f.subject}};
  }
  throw Error("bad relation");
}

std::vector<Query> enumerate_queries([[maybe_unused]] const SemanticStructure& s,
                                     const CarveResult& carve) {
  const auto closure = tax::deductive_closure(carve.train);
  const tax::FactIndex exposed(carve.train);

  std::map<QueryKey, Query> acc;
  for (const auto& p : closure.props()) {
    const bool is_exposed = exposed.has(p.fact);
    for (const auto& [key, answer] : fact_queries(p.fact)) {
      Query& q = acc[key];
      q.key = key;
      q.a_all.push_back(normalize_answer(answer));
      if (is_exposed) {
        q.a_exposed.push_back(normalize_answer(answer));
      } else {
        q.a_heldout.push_back(normalize_answer(answer));
        q.heldout_facts.push_back(p.fact);
      }
    }
  }

  std::vector<Query> out;
  out.reserve(acc.size());
  for (auto& [key, q] : acc) {
    auto canon = [](std::vector<std::string>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    canon(q.a_all);
    canon(q.a_exposed);
    canon(q.a_heldout);
    std::sort(q.heldout_facts.begin(), q.heldout_facts.end());
    if (!q.a_all.empty()) out.push_back(std::move(q));
  }
  return out;
}

// ---- documents --------------------------------------------------------------

namespace {

std::unordered_map<std::string, tax::PropertyKind> value_kinds(const SemanticStructure& s) {
  std::unordered_map<std::string, tax::PropertyKind> kinds;
  for (const auto& c : s.categories)
    for (const auto& slot : c.properties) kinds.emplace(slot.value, slot.kind);
  return kinds;
}

tax::PropertyKind kind_of(const std::unordered_map<std::string, tax::PropertyKind>& kinds,
                          const Fact& f) {
  if (f.rel != tax::Relation::has_property) return tax::PropertyKind::attribute;
  auto it = kinds.find(f.object);
  if (it == kinds.end())
    throw StructuralError("property value without a declaring slot: " + f.object);
  return it->second;
}

}  // namespace

std::vector<Document> render_documents(const SemanticStructure& s, const CarveResult& carve,
                                       const ForgeConfig& config) {
  config.validate();
  const auto& ts = TemplateSet::standard();
  const auto kinds = value_kinds(s);
  const auto n_facts = carve.train.size();
  if (n_facts == 0) throw StructuralError("cannot render documents: empty train set");
  if (config.documents_total < static_cast<int>(n_facts))
    throw ConfigError("documents_total " + std::to_string(config.documents_total) +
                      " < train facts " + std::to_string(n_facts) + " for realm " + s.realm +
                      "; every train fact must be stated at least once");

  Rng rng = derive_rng(config.seed, "forge:docs:" + s.realm);
  const auto n_prefix = static_cast<std::int64_t>(ts.taxonomy_prefix.size());
  const std::string tag = tax::to_string(s.tag);

  std::vector<Document> docs;
  docs.reserve(static_cast<std::size_t>(config.documents_total));
  for (int i = 0; i < config.documents_total; ++i) {
    const auto& prop = carve.train[static_cast<std::size_t>(i) % n_facts];
    const auto kind = kind_of(kinds, prop.fact);
    const int variants = ts.fact_variants(prop.fact.rel, kind);
    const int variant = (i / static_cast<int>(n_facts)) % variants;
    const auto prefix_variant = rng.uniform_int(0, n_prefix - 1);

    Document d;
    d.doc_id = "doc:" + tag + ":" + std::to_string(i);
    d.task_prefix = ts.taxonomy_prefix[static_cast<std::size_t>(prefix_variant)].render(
        {{"realm", s.realm}});
    d.body = ts.fact_sentence(prop.fact, kind, variant);
    d.source_fact_keys = {prop.fact.key()};
    d.tag = s.tag;
    docs.push_back(std::move(d));
  }
  return docs;
}

// ---- QA ---------------------------------------------------------------------

namespace {

// Attributes a held-out fact to the condition that removed it: partition
// membership first, then — for facts a category carve removed without testing
// directly (they stay derivable, e.g. the includes edges reaching a
// subject-carved category) — the carved category the fact mentions.
class ConditionMap {
 public:
  explicit ConditionMap(const CarveResult& carve) {
    for (const auto& part : carve.partitions)
      for (const auto& f : part.heldout) by_fact_.emplace(f, part.condition);
    for (const auto& [cond, cats] : carve.carved_categories)
      for (const auto& c : cats) by_category_.emplace(c, cond);
  }

  HoldoutCondition of(const Fact& f) const {
    if (auto it = by_fact_.find(f); it != by_fact_.end()) return it->second;
    if (auto it = by_category_.find(f.subject); it != by_category_.end()) return it->second;
    if (auto it = by_category_.find(f.object); it != by_category_.end()) return it->second;
    throw StructuralError("held-out fact with no carve attribution: " + f.key());
  }

 private:
  std::map<Fact, HoldoutCondition> by_fact_;
  std::map<std::string, HoldoutCondition> by_category_;
};

std::string phase_condition(const Query& q, const ConditionMap& cm) {
  if (q.a_heldout.empty()) return condition::direct;
  return tax::to_string(cm.of(q.heldout_facts.front()));
}

QAItem make_item(const SemanticStructure& s, const Query& q, std::string qa_id,
                 std::string cond, std::string primary, bool expose_only, int paraphrase,
                 int prefix_variant) {
  const auto& ts = TemplateSet::standard();
  QAItem item;
  item.qa_id = std::move(qa_id);
  item.prompt = ts.taxonomy_prompt(s.realm, q.key, paraphrase, prefix_variant);
  item.a_all = expose_only ? q.a_exposed : q.a_all;
  item.a_heldout = expose_only ? std::vector<std::string>{} : q.a_heldout;
  item.primary_reference = std::move(primary);
  item.condition = std::move(cond);
  item.tag = s.tag;
  item.validate();
  return item;
}

// Given a latent/direct split of the pool and a requested total, splits the
// total per the configured direct fraction, letting the larger side top up
// when the other is capped, so the total stays exact.
std::pair<int, int> split_counts(int total, double direct_fraction, int latent_cap,
                                 int direct_cap) {
  int want_direct = static_cast<int>(std::llround(total * direct_fraction));
  want_direct = std::min(want_direct, direct_cap);
  const int want_latent = std::min(total - want_direct, latent_cap);
  want_direct = total - want_latent;
  return {want_latent, want_direct};
}

// The bootstrap/RL pool: queries with at least one exposed answer (a prompt
// with nothing rewardable is useless), shuffled per side on streams derived
// from the config seed so every phase sees the same order.
struct PromptPools {
  std::vector<const Query*> latent, direct;
  int paraphrases = 4;
  int boot_latent = 0, boot_direct = 0;  // bootstrap takes these prefixes
};

PromptPools gather_pools(const SemanticStructure& s, const ForgeConfig& config,
                         const std::vector<Query>& queries) {
  PromptPools p;
  const auto& ts = TemplateSet::standard();
  for (const auto& q : queries) {
    if (q.a_exposed.empty()) continue;
    (q.a_heldout.empty() ? p.direct : p.latent).push_back(&q);
  }
  for (const auto& [fam, pool] : ts.queries)
    p.paraphrases = std::min(p.paraphrases, static_cast<int>(pool.size()));

  const int n_queries = static_cast<int>(p.latent.size() + p.direct.size());
  if (config.bootstrap_prompts > n_queries)
    throw ConfigError("prompt pool for realm " + s.realm + " has " +
                      std::to_string(n_queries) + " queries, need " +
                      std::to_string(config.bootstrap_prompts) + " for bootstrap");

  Rng rng_l = derive_rng(config.seed, "forge:prompts:latent:" + s.realm);
  Rng rng_d = derive_rng(config.seed, "forge:prompts:direct:" + s.realm);
  rng_l.shuffle(p.latent);
  rng_d.shuffle(p.direct);

  std::tie(p.boot_latent, p.boot_direct) =
      split_counts(config.bootstrap_prompts, config.rl_direct_fraction,
                   static_cast<int>(p.latent.size()), static_cast<int>(p.direct.size()));
  return p;
}

// Bootstrap and RL prompts come from one pool, mixed between latent and
// direct per rl_direct_fraction. Bootstrap draws distinct queries (reserved:
// they are withdrawn from the RL draw and from the test set); RL then draws
// prompt instances — (query, paraphrase surface) pairs — over the remaining
// queries, covering each one once before any repeats, so the prompt count may
// exceed the distinct-query pool by up to the paraphrase factor. No two
// prompts share a surface string.
std::pair<std::vector<QAItem>, std::vector<QAItem>> select_prompts(
    const SemanticStructure& s, const CarveResult& carve, const ForgeConfig& config,
    const std::vector<Query>& queries) {
  const ConditionMap cm(carve);
  const PromptPools p = gather_pools(s, config, queries);

  const int rl_latent_pool = static_cast<int>(p.latent.size()) - p.boot_latent;
  const int rl_direct_pool = static_cast<int>(p.direct.size()) - p.boot_direct;
  if (config.rl_prompts > p.paraphrases * (rl_latent_pool + rl_direct_pool))
    throw ConfigError("prompt pool for realm " + s.realm + " has " +
                      std::to_string(rl_latent_pool + rl_direct_pool) +
                      " queries after the bootstrap reservation (" +
                      std::to_string(p.paraphrases * (rl_latent_pool + rl_direct_pool)) +
                      " prompt surfaces), need " + std::to_string(config.rl_prompts) +
                      " for rl");

  // (query, paraphrase) instances; bootstrap instances all use paraphrase 0
  // slots but rotate the surface by position below.
  std::vector<std::pair<const Query*, int>> boot_picks, rl_picks;
  for (int i = 0; i < p.boot_latent; ++i) boot_picks.emplace_back(p.latent[i], 0);
  for (int i = 0; i < p.boot_direct; ++i) boot_picks.emplace_back(p.direct[i], 0);

  const auto [rl_latent, rl_direct] =
      split_counts(config.rl_prompts, config.rl_direct_fraction,
                   p.paraphrases * rl_latent_pool, p.paraphrases * rl_direct_pool);
  for (int i = 0; i < rl_latent; ++i)
    rl_picks.emplace_back(p.latent[p.boot_latent + i % rl_latent_pool], i / rl_latent_pool);
  for (int i = 0; i < rl_direct; ++i)
    rl_picks.emplace_back(p.direct[p.boot_direct + i % rl_direct_pool], i / rl_direct_pool);

  Rng rng_m = derive_rng(config.seed, "forge:prompts:mix:" + s.realm);
  rng_m.shuffle(boot_picks);
  rng_m.shuffle(rl_picks);

  const std::string tag = tax::to_string(s.tag);
  auto render = [&](const std::vector<std::pair<const Query*, int>>& picks,
                    const std::string& phase, bool rotate_by_position) {
    std::vector<QAItem> items;
    items.reserve(picks.size());
    for (std::size_t i = 0; i < picks.size(); ++i) {
      const Query& q = *picks[i].first;
      const int paraphrase = rotate_by_position ? static_cast<int>(i) : picks[i].second;
      const std::string cond = phase_condition(q, cm);
      const std::string id = phase + ":" + tag + ":" + cond + ":" + std::to_string(i);
      const std::string primary = q.a_heldout.empty() ? q.a_all.front() : q.a_heldout.front();
      items.push_back(make_item(s, q, id, cond, primary, /*expose_only=*/false, paraphrase,
                                static_cast<int>(i)));
    }
    return items;
  };
  return {render(boot_picks, "bootstrap", true), render(rl_picks, "rl", false)};
}

std::vector<QAItem> make_test_items(const SemanticStructure& s, const CarveResult& carve,
                                    const ForgeConfig& config,
                                    const std::vector<Query>& queries) {
  std::map<QueryKey, const Query*> by_key;
  for (const auto& q : queries) by_key.emplace(q.key, &q);

  // Bootstrap queries are reserved: their golden traces spell out the held-out
  // answers during trace SFT, so testing them would leak.
  const PromptPools p = gather_pools(s, config, queries);
  std::set<QueryKey> reserved;
  for (int i = 0; i < p.boot_latent; ++i) reserved.insert(p.latent[i]->key);
  for (int i = 0; i < p.boot_direct; ++i) reserved.insert(p.direct[i]->key);

  // (condition, query) -> answers that this condition withheld for the query
  std::map<std::pair<int, QueryKey>, std::vector<std::string>> groups;
  for (const auto& part : carve.partitions) {
    for (const auto& f : part.heldout)
      for (const auto& [key, answer] : fact_queries(f)) {
        if (reserved.count(key)) continue;
        groups[{static_cast<int>(part.condition), key}].push_back(normalize_answer(answer));
      }
  }

  const std::string tag = tax::to_string(s.tag);
  std::vector<QAItem> items;
  std::map<int, int> per_condition;
  for (const auto& [group_key, answers] : groups) {
    const auto& [cond_int, qkey] = group_key;
    auto it = by_key.find(qkey);
    if (it == by_key.end())
      throw StructuralError("held-out fact maps to a query with no derivable answers: " +
                            to_string(qkey.family) + " " + qkey.topic);
    const Query& q = *it->second;
    const std::string cond = tax::to_string(static_cast<HoldoutCondition>(cond_int));
    const std::string primary = *std::min_element(answers.begin(), answers.end());
    const int idx = per_condition[cond_int]++;
    for (int k = 0; k < config.test_paraphrases; ++k) {
      const std::string id =
          "test:" + tag + ":" + cond + ":" + std::to_string(idx) + ":p" + std::to_string(k);
      items.push_back(make_item(s, q, id, cond, primary, /*expose_only=*/false, k, k));
    }
  }
  for (const auto& part : carve.partitions)
    if (per_condition.find(static_cast<int>(part.condition)) == per_condition.end())
      throw ConfigError("no test items for condition " + tax::to_string(part.condition));
  return items;
}

}  // namespace

std::vector<QAItem> render_qa(const SemanticStructure& s, const CarveResult& carve,
                              QAPhase phase, const ForgeConfig& config) {
  config.validate();
  const auto queries = enumerate_queries(s, carve);

  if (phase == QAPhase::train_qa) {
    const std::string tag = tax::to_string(s.tag);
    std::vector<QAItem> items;
    int idx = 0;
    for (const auto& q : queries) {
      if (q.a_exposed.empty()) continue;
      const std::string id = "train_qa:" + tag + ":" + condition::direct + ":" +
                             std::to_string(idx);
      items.push_back(make_item(s, q, id, condition::direct, q.a_exposed.front(),
                                /*expose_only=*/true, idx, idx));
      ++idx;
    }
    return items;
  }
  if (phase == QAPhase::test) return make_test_items(s, carve, config, queries);

  auto [bootstrap, rl] = select_prompts(s, carve, config, queries);
  return phase == QAPhase::bootstrap ? std::move(bootstrap) : std::move(rl);
}

}  // namespace latlab::forge
