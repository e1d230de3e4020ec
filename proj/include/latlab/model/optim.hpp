#pragma once

#include <filesystem>
#include <vector>

#include "latlab/model/transformer.hpp"

namespace latlab::model {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 0.0;  // global-norm clip threshold; 0 disables

  void validate() const {
    if (lr <= 0) throw ConfigError("adam: lr must be positive");
    if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1)
      throw ConfigError("adam: betas must lie in [0, 1)");
    if (eps <= 0 || clip_norm < 0) throw ConfigError("adam: bad eps or clip_norm");
  }
};

// Adam with bias correction, tracking one first/second-moment tensor per model
// parameter in visit order. Stateful across steps; serialized alongside the
// parameters so optimisation resumes exactly after a checkpoint reload.
class Adam {
 public:
  Adam(const AdamConfig& cfg, const TransformerF& shape);

  // One in-place update; returns the global gradient norm before clipping.
  double step(TransformerF& params, const TransformerF& grads);

  const AdamConfig& config() const { return cfg_; }
  void set_lr(double lr);
  long steps_done() const { return t_; }

  // Raw little-endian blob: step counter, then first and second moments.
  void save(const std::filesystem::path& path) const;
  static Adam load(const std::filesystem::path& path, const AdamConfig& cfg,
                   const TransformerF& shape);

 private:
  AdamConfig cfg_;
  std::vector<TransformerF::Mat> m_, v_;
  long t_ = 0;
};

}  // namespace latlab::model
