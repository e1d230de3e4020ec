#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "latlab/core/rng.hpp"
#include "latlab/taxonomy/types.hpp"

namespace latlab::tax {

// Synthetic identifier source. The two distribution tags draw from disjoint
// consonant alphabets, so an in-distribution string can never equal an
// out-of-distribution one; words listed in reserved_surface_words() are
// skipped. Words are consonant-vowel syllable chains ("beluda", "porvize").
class IdentifierGen {
 public:
  IdentifierGen(DistributionTag tag, Rng rng);
  std::string fresh();              // lowercase, unique within this generator
  std::string fresh_capitalized();  // "Beluda" style, for person names

 private:
  std::string make_word();
  DistributionTag tag_;
  Rng rng_;
  std::set<std::string> used_;
};

struct GenerateParams {
  std::uint64_t seed = 0;
  int n_per_unit = 7;
  int n_replicas = 8;
  int depth = 2;      // edge levels below the unit root
  int branching = 2;  // max children per category
  int properties_per_category = 1;
  int ood_modified_count = 5;  // unit-local categories with flipped property kind
  double extra_edge_probability = 0.0;  // >0 turns trees into DAGs (still acyclic)
  DistributionTag tag = DistributionTag::in_dist;
};

// Builds n_replicas isomorphic units. Topology is a deterministic function of
// (n_per_unit, depth, branching); the seed drives identifiers, property kinds,
// and optional extra DAG edges. With tag = out_dist the same seed yields an
// isomorphic structure over the disjoint alphabet whose property kinds are
// flipped for ood_modified_count unit-local positions (a flip applies to the
// category's own slot and therefore to everything that inherits it).
// Throws ConfigError when no tree with the requested shape exists.
SemanticStructure generate_structure(const GenerateParams& params);

// Level sizes of the canonical unit tree; exposed for tests.
std::vector<int> unit_level_sizes(int n, int depth, int branching);

}  // namespace latlab::tax
