#pragma once

#include <filesystem>

#include "latlab/model/optim.hpp"
#include "latlab/model/transformer.hpp"
#include "latlab/model/vocab.hpp"

namespace latlab::model {

// On-disk checkpoint layout (versioned, all files required):
//   model.kv   — architecture, optimizer settings, step counter, content hashes
//   params.bin — raw float32 parameter values in visit order (little endian)
//   adam.bin   — step counter + first/second moments in visit order
//   vocab.rec  — the vocabulary the parameters were trained against
// Reloading reproduces bitwise-identical forward outputs.
struct Checkpoint {
  TransformerF model;
  Adam opt;
  Vocabulary vocab;

  long step() const { return opt.steps_done(); }
};

void save_checkpoint(const std::filesystem::path& dir, const TransformerF& model,
                     const Adam& opt, const Vocabulary& vocab);
Checkpoint load_checkpoint(const std::filesystem::path& dir);

// Parameter blob helpers, shared with tests that compare raw weights.
void save_params(const std::filesystem::path& path, const TransformerF& model);
void load_params(const std::filesystem::path& path, TransformerF& model);

}  // namespace latlab::model
