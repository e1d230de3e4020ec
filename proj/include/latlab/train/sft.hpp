#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latlab/model/checkpoint.hpp"
#include "latlab/train/mixture.hpp"

namespace latlab::train {

struct EarlyStop {
  double validation_fraction = 0.1;  // per component; at least one example
  int patience = 3;                  // epochs without improvement; <= 0 disables
  int min_epochs = 1;

  void validate() const;
};

// Reference hyperparameters (Adam lr 3e-4, batch 16) are the defaults; desk
// presets override them where a run must fit a CPU budget.
//
// The schedule is part of the contract (tests re-derive it): per component,
// indices are shuffled with derive_rng(seed, "sft:val:" + name) and the first
// max(1, llround(validation_fraction * n)) become validation (kept in corpus
// order); training examples keep corpus order too. Each epoch e (1-based)
// draws max(1, llround(w_norm * budget)) examples per component from a
// per-component stream whose pass p is the training list shuffled with
// derive_rng(seed, "sft:order:" + name + ":" + p), continuing where the
// previous epoch stopped; the combined pool is shuffled with
// derive_rng(seed, "sft:epoch:" + e), packed, and consumed in batches of
// batch_size rows (the final short batch trains too). The budget is
// examples_per_epoch, or the total training-example count when 0.
struct SftConfig {
  model::AdamConfig opt;
  int batch_size = 16;
  int seq_len = 256;
  int max_epochs = 20;
  int examples_per_epoch = 0;
  EarlyStop early;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ComponentCurve {
  std::string name;
  bool auxiliary = false;
  std::vector<double> val_loss;  // index 0 = before any training
};

struct TrainReport {
  std::vector<double> batch_loss;        // one entry per optimizer step
  std::vector<double> epoch_train_loss;  // per-epoch mean of batch losses
  std::vector<double> val_loss;          // weight-combined; index 0 = pre-stage
  std::vector<ComponentCurve> components;
  int best_epoch = 0;  // index into val_loss; 0 means the starting checkpoint
  int epochs_run = 0;
  bool stopped_early = false;
};

struct SftResult {
  model::Checkpoint checkpoint;  // parameters and optimizer state at best_epoch
  TrainReport report;
};

// Supervised fine-tuning over a mixture, with per-component validation curves
// and best-validation restore. A fresh optimizer is built from cfg.opt; the
// starting checkpoint contributes parameters and vocabulary. Throws
// ConfigError when any component cannot hold out validation examples and
// TrainingError when a loss turns non-finite (divergence) — the diagnostic
// names the epoch and batch.
SftResult train_sft(const model::Checkpoint& start, const TrainingMixture& mixture,
                    const SftConfig& cfg);

// Fraction of supervised positions whose argmax prediction equals the target.
// Throws DataError when the batch has no supervised positions.
double token_accuracy(const model::TransformerF& model, const model::TokenBatch& batch);

// Fresh parameters + fresh optimizer around a vocabulary.
model::Checkpoint init_checkpoint(const model::ModelConfig& model_cfg,
                                  const model::AdamConfig& opt_cfg, model::Vocabulary vocab);

}  // namespace latlab::train
