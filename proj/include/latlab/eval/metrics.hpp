#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latlab/forge/types.hpp"

namespace latlab::eval {

// Set-based scores for one prediction against one QA item. train_recall is
// measured over the answers whose facts were exposed in training documents or
// RL prompts (a_all minus a_heldout); heldout_recall over a_heldout alone.
// Either is absent when its reference set is empty.
struct SetScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool exact_set = false;          // zero credit for any omission or false inclusion
  bool primary_included = false;   // primary reference present in the prediction
  std::optional<double> train_recall;
  std::optional<double> heldout_recall;
};

// Canonicalize raw model output strings: normalize each, drop empties, sort,
// dedupe. Scoring is therefore order- and duplication-invariant.
std::vector<std::string> canonical_prediction_set(const std::vector<std::string>& raw);

// Splits generated answer text into a canonical prediction set, shaped by the
// reference answers: when any reference contains a space the whole text is one
// prediction (multi-word answers such as person names never co-occur with
// others), otherwise each word is a prediction of its own.
std::vector<std::string> answer_text_to_set(const std::string& text,
                                            const std::vector<std::string>& reference);

// Throws DataError when the item fails its own validation (empty a_all etc.).
SetScore score_set(const std::vector<std::string>& predicted, const forge::QAItem& item);

// Unbiased estimator 1 - C(k-c, n)/C(k, n) for the probability that at least
// one of n samples drawn without replacement from k attempts (c of them
// correct) succeeds. With n = k this is the plain any-success indicator.
double pass_at_n(int correct, int total, int n);

// Expected maximum score over a uniformly random n-subset of the per-sample
// scores. With n = k this is the maximum, with n = 1 the mean.
double best_at_n(std::vector<double> per_sample_scores, int n);

}  // namespace latlab::eval
