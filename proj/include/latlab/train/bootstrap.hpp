#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/model/sampler.hpp"
#include "latlab/train/sft.hpp"
#include "latlab/train/teacher.hpp"

namespace latlab::train {

struct BootstrapConfig {
  SftConfig sft;           // seq_len must cover the longest trace
  double aux_ratio = 1.0;  // auxiliary examples per verified-trace example; <= 0 disables

  void validate() const;
};

struct BootstrapResult {
  model::Checkpoint checkpoint;
  std::vector<ReasoningTrace> traces;  // every synthesized trace, with verified flags
  TrainReport report;
  int n_verified = 0;
  int n_rejected = 0;  // unverified, plus verified traces outside the vocabulary
};

// Thinking bootstrapping: synthesize one ground-truth-conditioned trace per
// prompt, keep only verified traces whose words the vocabulary covers, and
// fine-tune on them (with auxiliary co-training when configured). Prompts
// must be in-distribution — traces over the out-of-distribution structure
// would put its identifiers into training text (ProtocolError). Zero usable
// traces is a stage failure (TrainingError with counts).
BootstrapResult run_bootstrap(const model::Checkpoint& start,
                              const std::vector<forge::QAItem>& items, const TeacherSpec& teacher,
                              const TraceContext& ctx, const BootstrapConfig& cfg);

// Share of samples that open exactly one thought span, close it, and continue
// — the delimiter-discipline statistic.
double well_formed_fraction(const std::vector<model::SampleResult>& results);

struct FormatCheck {
  int total = 0;
  int well_formed = 0;
  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(well_formed) / total; }
};

// Samples `samples_per_prompt` completions per prompt (temperature 1, seeds
// derived from `seed`) and counts well-formed thought spans.
FormatCheck check_thought_format(const model::Checkpoint& ckpt,
                                 const std::vector<std::string>& prompts, int samples_per_prompt,
                                 int max_new_tokens, std::uint64_t seed);

}  // namespace latlab::train
