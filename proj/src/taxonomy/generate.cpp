#include "latlab/taxonomy/generate.hpp"

#include <algorithm>
#include <cctype>

#include "latlab/core/reserved_words.hpp"

namespace latlab::tax {

namespace {
// Disjoint consonant alphabets guarantee that no in-distribution identifier
// can ever equal an out-of-distribution one: every word starts with a
// consonant and each alphabet owns its consonants exclusively.
constexpr const char* kInConsonants = "bdfgklmn";
constexpr const char* kOutConsonants = "prstvzhw";
constexpr const char* kVowels = "aeiou";
}  // namespace

IdentifierGen::IdentifierGen(DistributionTag tag, Rng rng) : tag_(tag), rng_(rng) {}

std::string IdentifierGen::make_word() {
  const char* cons = tag_ == DistributionTag::in_dist ? kInConsonants : kOutConsonants;
  const int n_cons = 8;
  const int syllables = static_cast<int>(rng_.uniform_int(2, 3));
  std::string w;
  for (int i = 0; i < syllables; ++i) {
    w.push_back(cons[rng_.uniform_int(0, n_cons - 1)]);
    w.push_back(kVowels[rng_.uniform_int(0, 4)]);
  }
  return w;
}

std::string IdentifierGen::fresh() {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::string w = make_word();
    if (is_reserved_surface_word(w)) continue;
    if (used_.insert(w).second) return w;
  }
  throw Error("identifier space exhausted");
}

std::string IdentifierGen::fresh_capitalized() {
  std::string w = fresh();
  w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
  return w;
}

std::vector<int> unit_level_sizes(int n, int depth, int branching) {
  if (n < 1 || depth < 1 || branching < 1)
    throw ConfigError("unit shape parameters must be positive");
  if (n < depth + 1)
    throw ConfigError("no tree with " + std::to_string(n) + " categories reaches depth " +
                      std::to_string(depth));
  std::vector<int> sizes(static_cast<std::size_t>(depth) + 1, 1);
  int remaining = n - (depth + 1);
  for (int level = 1; level <= depth && remaining > 0; ++level) {
    int cap = sizes[static_cast<std::size_t>(level - 1)] * branching -
              sizes[static_cast<std::size_t>(level)];
    int take = std::min(cap, remaining);
    sizes[static_cast<std::size_t>(level)] += take;
    remaining -= take;
  }
  if (remaining > 0)
    throw ConfigError("branching " + std::to_string(branching) + " cannot hold " +
                      std::to_string(n) + " categories at depth " + std::to_string(depth));
  return sizes;
}

SemanticStructure generate_structure(const GenerateParams& p) {
  if (p.n_replicas < 1) throw ConfigError("n_replicas must be >= 1");
  if (p.properties_per_category < 1) throw ConfigError("properties_per_category must be >= 1");
  if (p.ood_modified_count < 0 || p.ood_modified_count > p.n_per_unit)
    throw ConfigError("ood_modified_count must lie in [0, n_per_unit]");

  const std::vector<int> sizes = unit_level_sizes(p.n_per_unit, p.depth, p.branching);

  SemanticStructure s;
  s.tag = p.tag;
  s.seed = p.seed;
  s.n_per_unit = p.n_per_unit;
  s.n_replicas = p.n_replicas;
  s.depth = p.depth;
  s.branching = p.branching;
  s.ood_modified_count = p.ood_modified_count;

  IdentifierGen ids(p.tag, derive_rng(p.seed, "taxonomy:identifiers"));
  s.realm = ids.fresh();

  // Property kinds are drawn from a tag-independent stream so the
  // out-of-distribution structure is an exact isomorph of the in-distribution
  // one before its modifications are applied.
  Rng kind_rng = derive_rng(p.seed, "taxonomy:property-kinds");
  std::vector<std::vector<PropertyKind>> base_kinds(
      static_cast<std::size_t>(p.n_per_unit),
      std::vector<PropertyKind>(static_cast<std::size_t>(p.properties_per_category)));
  for (auto& slots : base_kinds)
    for (auto& k : slots)
      k = kind_rng.uniform_int(0, 1) == 0 ? PropertyKind::attribute : PropertyKind::capability;

  Rng mod_rng = derive_rng(p.seed, "taxonomy:ood-modified");
  std::vector<bool> modified(static_cast<std::size_t>(p.n_per_unit), false);
  for (std::size_t i :
       mod_rng.sample_without_replacement(static_cast<std::size_t>(p.n_per_unit),
                                          static_cast<std::size_t>(p.ood_modified_count)))
    modified[i] = true;

  Rng tmpl_rng = derive_rng(p.seed, "taxonomy:slot-templates");
  Rng edge_rng = derive_rng(p.seed, "taxonomy:extra-edges");

  for (int unit = 0; unit < p.n_replicas; ++unit) {
    // Deterministic balanced topology: node j at a level hangs off parent
    // j % |level above|. Randomness lives in identifiers and properties.
    std::vector<std::vector<std::size_t>> level_nodes(sizes.size());
    int local = 0;
    for (std::size_t level = 0; level < sizes.size(); ++level) {
      for (int j = 0; j < sizes[level]; ++j, ++local) {
        Category c;
        c.id = ids.fresh();
        c.unit = unit;
        c.level = static_cast<int>(level);
        if (level > 0) {
          const auto& above = level_nodes[level - 1];
          c.parents.push_back(s.categories[above[static_cast<std::size_t>(j) % above.size()]].id);
        }
        PropertyKind base = PropertyKind::attribute;
        for (int slot = 0; slot < p.properties_per_category; ++slot) {
          base = base_kinds[static_cast<std::size_t>(local)][static_cast<std::size_t>(slot)];
          PropertyKind kind = base;
          if (p.tag == DistributionTag::out_dist && modified[static_cast<std::size_t>(local)])
            kind = kind == PropertyKind::attribute ? PropertyKind::capability
                                                   : PropertyKind::attribute;
          PropertySlot ps;
          ps.kind = kind;
          ps.surface_template = static_cast<int>(tmpl_rng.uniform_int(0, 2));
          ps.value = ids.fresh();
          c.properties.push_back(std::move(ps));
        }
        level_nodes[level].push_back(s.categories.size());
        s.categories.push_back(std::move(c));
      }
    }
    if (p.extra_edge_probability > 0.0) {
      // Optional DAG edges: an extra parent from any strictly higher level
      // keeps the graph acyclic by construction.
      for (std::size_t level = 2; level < level_nodes.size(); ++level) {
        for (std::size_t idx : level_nodes[level]) {
          if (edge_rng.uniform() >= p.extra_edge_probability) continue;
          std::size_t up = static_cast<std::size_t>(edge_rng.uniform_int(
              0, static_cast<std::int64_t>(level) - 1));
          const auto& pool = level_nodes[up];
          const std::string& candidate =
              s.categories[pool[static_cast<std::size_t>(
                  edge_rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))]].id;
          auto& parents = s.categories[idx].parents;
          if (std::find(parents.begin(), parents.end(), candidate) == parents.end())
            parents.push_back(candidate);
        }
      }
    }
  }
  return s;
}

}  // namespace latlab::tax
