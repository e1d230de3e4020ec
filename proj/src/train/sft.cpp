#include "latlab/train/sft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "latlab/core/rng.hpp"

namespace latlab::train {

void EarlyStop::validate() const {
  if (validation_fraction < 0.0 || validation_fraction >= 1.0)
    throw ConfigError("early stop: validation_fraction must lie in [0, 1)");
  if (min_epochs < 0) throw ConfigError("early stop: min_epochs must be >= 0");
}

void SftConfig::validate() const {
  opt.validate();
  early.validate();
  if (batch_size <= 0) throw ConfigError("sft: batch_size must be positive");
  if (seq_len <= 1) throw ConfigError("sft: seq_len must exceed 1");
  if (max_epochs <= 0) throw ConfigError("sft: max_epochs must be positive");
  if (examples_per_epoch < 0) throw ConfigError("sft: examples_per_epoch must be >= 0");
}

namespace {

std::size_t supervised_count(const model::TokenBatch& b) {
  std::size_t n = 0;
  for (int t : b.targets) n += t >= 0;
  return n;
}

// Mean loss per supervised position over a packed batch, evaluated in
// batch_size-row chunks so the logits buffer stays bounded.
double chunked_loss(const model::TransformerF& m, const model::TokenBatch& packed,
                    int batch_size) {
  double weighted = 0.0;
  std::size_t positions = 0;
  for (int r = 0; r < packed.batch; r += batch_size) {
    const model::TokenBatch chunk =
        slice_rows(packed, r, std::min(packed.batch, r + batch_size));
    const std::size_t sup = supervised_count(chunk);
    if (sup == 0) continue;
    weighted += m.loss(chunk, model::LossNorm::mean_over_weights) * static_cast<double>(sup);
    positions += sup;
  }
  if (positions == 0) throw TrainingError("validation batch has no supervised positions");
  return weighted / static_cast<double>(positions);
}

struct CompState {
  const MixtureComponent* src = nullptr;
  double w_norm = 0.0;
  std::vector<TextExample> train;
  model::TokenBatch val;
  // per-component draw stream: pass p = `train` shuffled with salt
  // "sft:order:<name>:<p>"; `offset` survives across epochs
  std::vector<std::size_t> pass_order;
  long pass = -1;
  std::size_t offset = 0;
};

}  // namespace

SftResult train_sft(const model::Checkpoint& start, const TrainingMixture& mixture,
                    const SftConfig& cfg) {
  cfg.validate();
  mixture.validate();
  const auto weights = mixture.normalized_weights();

  std::vector<CompState> comps(mixture.components.size());
  std::size_t total_train = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& src = mixture.components[c];
    auto& st = comps[c];
    st.src = &src;
    st.w_norm = weights[c];

    const std::size_t n = src.examples.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng = derive_rng(cfg.seed, "sft:val:" + src.name);
    rng.shuffle(idx);
    const auto n_val = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(cfg.early.validation_fraction * n)));
    if (n_val >= n)
      throw ConfigError("sft: component " + src.name + " has no training examples left after " +
                        std::to_string(n_val) + " validation holdouts");
    std::vector<std::size_t> val_idx(idx.begin(), idx.begin() + n_val);
    std::sort(val_idx.begin(), val_idx.end());
    std::vector<TextExample> val_ex;
    std::size_t vi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (vi < val_idx.size() && val_idx[vi] == i) {
        val_ex.push_back(src.examples[i]);
        ++vi;
      } else {
        st.train.push_back(src.examples[i]);
      }
    }
    st.val = pack_examples(start.vocab, val_ex, cfg.seq_len);
    total_train += st.train.size();
  }

  const std::size_t budget =
      cfg.examples_per_epoch > 0 ? static_cast<std::size_t>(cfg.examples_per_epoch) : total_train;

  model::TransformerF model = start.model;
  model::Adam adam(cfg.opt, model);
  model::TransformerF grads = model::TransformerF::zeros_like(model);

  TrainReport report;
  for (const auto& st : comps)
    report.components.push_back({st.src->name, st.src->auxiliary, {}});

  auto measure_val = [&]() {
    double combined = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const double v = chunked_loss(model, comps[c].val, cfg.batch_size);
      if (!std::isfinite(v))
        throw TrainingError("sft diverged: validation loss for component " +
                            comps[c].src->name + " is not finite");
      report.components[c].val_loss.push_back(v);
      combined += comps[c].w_norm * v;
    }
    report.val_loss.push_back(combined);
    return combined;
  };

  double best_val = measure_val();  // pre-stage measurement, index 0
  model::TransformerF best_model = model;
  model::Adam best_adam = adam;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    // assemble this epoch's pool
    std::vector<const TextExample*> pool;
    for (auto& st : comps) {
      const auto want = static_cast<std::size_t>(
          std::max<long long>(1, std::llround(st.w_norm * static_cast<double>(budget))));
      for (std::size_t k = 0; k < want; ++k) {
        if (st.pass < 0 || st.offset == st.pass_order.size()) {
          ++st.pass;
          st.offset = 0;
          st.pass_order.resize(st.train.size());
          std::iota(st.pass_order.begin(), st.pass_order.end(), 0);
          Rng rng = derive_rng(cfg.seed,
                               "sft:order:" + st.src->name + ":" + std::to_string(st.pass));
          rng.shuffle(st.pass_order);
        }
        pool.push_back(&st.train[st.pass_order[st.offset++]]);
      }
    }
    Rng rng = derive_rng(cfg.seed, "sft:epoch:" + std::to_string(epoch));
    rng.shuffle(pool);
    std::vector<TextExample> epoch_examples;
    epoch_examples.reserve(pool.size());
    for (const auto* ex : pool) epoch_examples.push_back(*ex);
    const model::TokenBatch packed = pack_examples(start.vocab, epoch_examples, cfg.seq_len);

    double epoch_sum = 0.0;
    int epoch_batches = 0;
    for (int r = 0; r < packed.batch; r += cfg.batch_size) {
      const model::TokenBatch batch =
          slice_rows(packed, r, std::min(packed.batch, r + cfg.batch_size));
      grads.visit([](const std::string&, model::TransformerF::Mat& w) { w.setZero(); });
      const double loss = model.loss_and_grad(batch, model::LossNorm::mean_over_weights, grads);
      if (!std::isfinite(loss))
        throw TrainingError("sft diverged at epoch " + std::to_string(epoch) + " batch " +
                            std::to_string(epoch_batches) + ": loss is not finite");
      adam.step(model, grads);
      report.batch_loss.push_back(loss);
      epoch_sum += loss;
      ++epoch_batches;
    }
    report.epoch_train_loss.push_back(epoch_sum / std::max(1, epoch_batches));
    report.epochs_run = epoch;

    const double val = measure_val();
    if (val < best_val) {
      best_val = val;
      best_model = model;
      best_adam = adam;
      report.best_epoch = epoch;
    }
    if (cfg.early.patience > 0 && epoch >= cfg.early.min_epochs &&
        epoch - report.best_epoch >= cfg.early.patience) {
      report.stopped_early = true;
      break;
    }
  }

  return {model::Checkpoint{std::move(best_model), std::move(best_adam), start.vocab},
          std::move(report)};
}

double token_accuracy(const model::TransformerF& model, const model::TokenBatch& batch) {
  const auto logits = model.forward_logits(batch);
  std::size_t correct = 0, total = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch.targets[i] < 0) continue;
    Eigen::Index arg = 0;
    logits.row(static_cast<Eigen::Index>(i)).maxCoeff(&arg);
    correct += arg == batch.targets[i];
    ++total;
  }
  if (total == 0) throw DataError("token_accuracy: no supervised positions");
  return static_cast<double>(correct) / static_cast<double>(total);
}

model::Checkpoint init_checkpoint(const model::ModelConfig& model_cfg,
                                  const model::AdamConfig& opt_cfg, model::Vocabulary vocab) {
  model::TransformerF m = model::TransformerF::init(model_cfg, vocab.size());
  model::Adam opt(opt_cfg, m);
  return model::Checkpoint{std::move(m), std::move(opt), std::move(vocab)};
}

}  // namespace latlab::train
