#pragma once

#include <cstdint>
#include <vector>

#include "latlab/model/transformer.hpp"
#include "latlab/model/vocab.hpp"

namespace latlab::model {

struct SampleRequest {
  std::vector<int> prompt;  // token ids; caller includes <bos>
  double temperature = 1.0;
  int max_new_tokens = 64;
  std::uint64_t seed = 0;
  bool argmax = false;  // temperature -> 0 limit: deterministic, seed unused
};

struct SampleResult {
  std::vector<int> tokens;  // generated ids; prompt and terminating <eos> excluded
  SpanSplit spans;          // thought/answer split of `tokens`
  bool truncated = false;   // ran out of budget or context before <eos>
};

// Batched autoregressive decoding with per-layer KV caches, processed in
// waves of `wave_size` position-synchronous requests. Every request draws
// from its own RNG stream derived from its seed, so no randomness leaks
// between requests and the call is deterministic for a fixed request list and
// wave size; callers wanting distinct completions must pass distinct seeds.
std::vector<SampleResult> sample(const TransformerF& model,
                                 const std::vector<SampleRequest>& requests, int wave_size = 64);

}  // namespace latlab::model
