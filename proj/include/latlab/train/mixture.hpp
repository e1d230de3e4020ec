#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/forge/dataset.hpp"
#include "latlab/train/examples.hpp"

namespace latlab::train {

// One sampled-from dataset inside a training mixture. `weight` is relative:
// each epoch draws examples from components in proportion to normalized
// weights. Auxiliary components hold side tasks whose validation loss must
// survive the stage (the forgetting guard), not new knowledge.
struct MixtureComponent {
  std::string name;
  std::vector<TextExample> examples;
  double weight = 1.0;
  bool auxiliary = false;
};

struct TrainingMixture {
  std::vector<MixtureComponent> components;

  // Non-empty, unique non-empty names, positive finite weights, and at least
  // two examples per component (one must be held out for validation).
  void validate() const;
  std::vector<double> normalized_weights() const;
};

// The knowledge-acquisition mixture: every document, every train-direction QA
// item, and aux side tasks sized at `aux_ratio` times the knowledge examples
// (so 1.0 gives a 1:1 aux-to-new-knowledge split). Components are weighted by
// example count — one epoch covers everything about once. aux_ratio <= 0
// drops the auxiliary component.
TrainingMixture knowledge_mixture(const forge::DatasetBundle& bundle, double aux_ratio,
                                  std::uint64_t seed);

// Every string the vocabulary must cover before stage 1: document text, the
// prompts and trained answer surfaces of every QA split (test prompts must be
// encodable at evaluation time), and the full reserved scaffolding word list
// (aux tasks and reasoning traces are composed from it). Thought delimiters
// are reserved token ids and never appear here.
std::vector<std::string> vocabulary_corpora(const forge::DatasetBundle& bundle);

}  // namespace latlab::train
