#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "latlab/core/errors.hpp"
#include "latlab/core/rng.hpp"

namespace latlab::model {

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

struct ModelConfig {
  int n_layers = 4;
  int n_heads = 4;
  int d_model = 256;
  int max_sequence_length = 512;
  std::uint64_t seed = 0;

  int d_ff() const { return 4 * d_model; }
  int head_dim() const { return d_model / n_heads; }

  void validate() const {
    if (n_layers <= 0 || n_heads <= 0 || d_model <= 0 || max_sequence_length <= 0)
      throw ConfigError("model config: all dimensions must be positive");
    if (d_model % n_heads != 0)
      throw ConfigError("model config: d_model must be divisible by n_heads");
  }
};

// ---------------------------------------------------------------------------
// batches and loss accounting
// ---------------------------------------------------------------------------

// Rectangular token batch. `targets` holds the next-token id per position or
// -1 for unsupervised positions (prompt tokens, padding). `weights` scales the
// per-position loss; empty means all ones. Positions with target -1 never
// contribute to loss or gradients regardless of weight.
struct TokenBatch {
  int batch = 0;
  int seq = 0;
  std::vector<int> tokens;
  std::vector<int> targets;
  std::vector<double> weights;

  std::size_t size() const { return static_cast<std::size_t>(batch) * seq; }
  double weight_at(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
};

// mean_over_weights: loss = sum(w_i * nll_i) / sum(w_i) — plain SFT mean when
// all weights are 1. weighted_sum: loss = sum(w_i * nll_i) with no division,
// so all-zero weights give exactly zero loss and zero gradient (the policy
// update degenerates to a no-op when every advantage is zero).
enum class LossNorm { mean_over_weights, weighted_sum };

// ---------------------------------------------------------------------------
// model
// ---------------------------------------------------------------------------

// Decoder-only transformer: learned token + position embeddings, pre-norm
// blocks (RMSNorm -> causal multi-head attention -> residual, RMSNorm -> ReLU
// MLP -> residual), final RMSNorm, untied language-model head. The head is
// zero-initialised so a fresh model predicts the uniform distribution and its
// initial loss is exactly ln(vocab size).
//
// Templated on the scalar so training runs in 32-bit while gradient checks
// instantiate the same code in 64-bit.
template <typename Scalar>
struct TransformerT {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  static constexpr Scalar norm_eps = Scalar(1e-6);

  struct Layer {
    Mat ln1_g;  // 1 x d
    Mat wq, wk, wv, wo;  // d x d
    Mat ln2_g;  // 1 x d
    Mat w1;  // d x d_ff
    Mat b1;  // 1 x d_ff
    Mat w2;  // d_ff x d
    Mat b2;  // 1 x d
  };

  ModelConfig cfg;
  int vocab_size = 0;
  Mat tok_emb;  // V x d
  Mat pos_emb;  // max_seq x d
  std::vector<Layer> layers;
  Mat lnf_g;    // 1 x d
  Mat lm_head;  // d x V

  static TransformerT init(const ModelConfig& cfg, int vocab_size) {
    cfg.validate();
    if (vocab_size <= 0) throw ConfigError("model init: vocab size must be positive");
    TransformerT m;
    m.cfg = cfg;
    m.vocab_size = vocab_size;
    Rng rng = derive_rng(cfg.seed, "model:init");
    auto randn = [&](int r, int c) {
      Mat w(r, c);
      for (Eigen::Index i = 0; i < w.size(); ++i)
        w.data()[i] = static_cast<Scalar>(rng.normal() * 0.02);
      return w;
    };
    const int d = cfg.d_model, ff = cfg.d_ff();
    m.tok_emb = randn(vocab_size, d);
    m.pos_emb = randn(cfg.max_sequence_length, d);
    m.layers.resize(static_cast<std::size_t>(cfg.n_layers));
    for (auto& l : m.layers) {
      l.ln1_g = Mat::Ones(1, d);
      l.wq = randn(d, d);
      l.wk = randn(d, d);
      l.wv = randn(d, d);
      l.wo = randn(d, d);
      l.ln2_g = Mat::Ones(1, d);
      l.w1 = randn(d, ff);
      l.b1 = Mat::Zero(1, ff);
      l.w2 = randn(ff, d);
      l.b2 = Mat::Zero(1, d);
    }
    m.lnf_g = Mat::Ones(1, d);
    m.lm_head = Mat::Zero(d, vocab_size);
    return m;
  }

  static TransformerT zeros_like(const TransformerT& other) {
    TransformerT z = other;
    z.visit([](const std::string&, Mat& w) { w.setZero(); });
    return z;
  }

  // Deterministic iteration over every named parameter tensor; optimizer
  // state, checkpoints and gradient checks all rely on this order.
  template <typename F>
  void visit(F&& f) {
    f(std::string("tok_emb"), tok_emb);
    f(std::string("pos_emb"), pos_emb);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string p = "layer" + std::to_string(l) + ".";
      f(p + "ln1_g", layers[l].ln1_g);
      f(p + "wq", layers[l].wq);
      f(p + "wk", layers[l].wk);
      f(p + "wv", layers[l].wv);
      f(p + "wo", layers[l].wo);
      f(p + "ln2_g", layers[l].ln2_g);
      f(p + "w1", layers[l].w1);
      f(p + "b1", layers[l].b1);
      f(p + "w2", layers[l].w2);
      f(p + "b2", layers[l].b2);
    }
    f(std::string("lnf_g"), lnf_g);
    f(std::string("lm_head"), lm_head);
  }
  template <typename F>
  void visit(F&& f) const {
    const_cast<TransformerT*>(this)->visit(
        [&](const std::string& n, Mat& w) { f(n, static_cast<const Mat&>(w)); });
  }

  std::size_t n_params() const {
    std::size_t n = 0;
    visit([&](const std::string&, const Mat& w) { n += static_cast<std::size_t>(w.size()); });
    return n;
  }

  // -------------------------------------------------------------------------
  // forward / backward
  // -------------------------------------------------------------------------

  struct Cache {
    struct LayerCache {
      Mat x_in, xn1, q, k, v, attn_o, x_mid, xn2, hr;
      Arr inv_r1, inv_r2;
      std::vector<Mat> p;  // one (T x T) attention-probability block per (batch row, head)
    };
    std::vector<LayerCache> layers;
    Mat x_final, xf;
    Arr inv_rf;
  };

  Mat forward_logits(const TokenBatch& b) const { return run_forward(b, nullptr); }

  double loss(const TokenBatch& b, LossNorm norm) const {
    Mat logits = run_forward(b, nullptr);
    return loss_from_logits(logits, b, norm, false);
  }

  // Per-position next-token negative log-likelihood; 0 where target is -1.
  std::vector<double> position_nll(const TokenBatch& b) const {
    Mat logits = run_forward(b, nullptr);
    std::vector<double> out(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b.targets[i] < 0) continue;
      out[i] = row_nll(logits, static_cast<Eigen::Index>(i), b.targets[i]);
    }
    return out;
  }

  double loss_and_grad(const TokenBatch& b, LossNorm norm, TransformerT& grads) const {
    Cache cache;
    Mat logits = run_forward(b, &cache);
    const double total = loss_from_logits(logits, b, norm, true);  // logits become dlogits
    backward(b, cache, logits, grads);
    return total;
  }

 private:
  void check_batch(const TokenBatch& b) const {
    if (b.batch <= 0 || b.seq <= 0) throw DataError("token batch: empty");
    if (b.seq > cfg.max_sequence_length)
      throw DataError("token batch: sequence length " + std::to_string(b.seq) +
                      " exceeds context " + std::to_string(cfg.max_sequence_length));
    if (b.tokens.size() != b.size() || b.targets.size() != b.size())
      throw DataError("token batch: tokens/targets size mismatch");
    if (!b.weights.empty() && b.weights.size() != b.size())
      throw DataError("token batch: weights size mismatch");
    for (int t : b.tokens)
      if (t < 0 || t >= vocab_size) throw DataError("token batch: token id out of range");
    for (int t : b.targets)
      if (t >= vocab_size) throw DataError("token batch: target id out of range");
  }

  static void rmsnorm(const Mat& x, const Mat& g, Mat& out, Arr& inv_r) {
    const auto d = x.cols();
    out.resizeLike(x);
    inv_r.resize(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Scalar ms = x.row(i).squaredNorm() / static_cast<Scalar>(d) + norm_eps;
      const Scalar ir = Scalar(1) / std::sqrt(ms);
      inv_r(i) = ir;
      out.row(i) = x.row(i).cwiseProduct(g.row(0)) * ir;
    }
  }

  static void rmsnorm_backward(const Mat& x, const Mat& g, const Arr& inv_r, const Mat& dy,
                               Mat& dg, Mat& dx) {
    const auto d = x.cols();
    dx.resizeLike(x);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const Scalar ir = inv_r(i);
      dg.row(0) += dy.row(i).cwiseProduct(x.row(i)) * ir;
      const Scalar dot = dy.row(i).cwiseProduct(g.row(0)).cwiseProduct(x.row(i)).sum();
      dx.row(i) = dy.row(i).cwiseProduct(g.row(0)) * ir -
                  x.row(i) * (dot * ir * ir * ir / static_cast<Scalar>(d));
    }
  }

  Mat run_forward(const TokenBatch& b, Cache* cache) const {
    check_batch(b);
    const int B = b.batch, T = b.seq, d = cfg.d_model, H = cfg.n_heads, hd = cfg.head_dim();
    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(hd));

    Mat x(n, d);
    for (int r = 0; r < B; ++r)
      for (int t = 0; t < T; ++t)
        x.row(r * T + t) =
            tok_emb.row(b.tokens[static_cast<std::size_t>(r) * T + t]) + pos_emb.row(t);

    if (cache) cache->layers.resize(layers.size());
    Mat xn, q, k, v, attn_o, hr;
    Arr inv_r;
    for (std::size_t li = 0; li < layers.size(); ++li) {
      const Layer& l = layers[li];
      typename Cache::LayerCache* lc = cache ? &cache->layers[li] : nullptr;
      if (lc) lc->x_in = x;

      rmsnorm(x, l.ln1_g, xn, inv_r);
      if (lc) {
        lc->xn1 = xn;
        lc->inv_r1 = inv_r;
        lc->p.resize(static_cast<std::size_t>(B) * H);
      }
      q.noalias() = xn * l.wq;
      k.noalias() = xn * l.wk;
      v.noalias() = xn * l.wv;
      attn_o.resize(n, d);
      for (int r = 0; r < B; ++r) {
        for (int h = 0; h < H; ++h) {
          auto qb = q.block(r * T, h * hd, T, hd);
          auto kb = k.block(r * T, h * hd, T, hd);
          auto vb = v.block(r * T, h * hd, T, hd);
          Mat s(T, T);
          s.noalias() = qb * kb.transpose();
          s *= scale;
          for (int i = 0; i < T; ++i) {
            auto row = s.row(i).head(i + 1);
            const Scalar m = row.maxCoeff();
            row.array() = (row.array() - m).exp();
            row /= row.sum();
            if (i + 1 < T) s.row(i).tail(T - i - 1).setZero();
          }
          attn_o.block(r * T, h * hd, T, hd).noalias() = s * vb;
          if (lc) lc->p[static_cast<std::size_t>(r) * H + h] = std::move(s);
        }
      }
      if (lc) {
        lc->q = q;
        lc->k = k;
        lc->v = v;
        lc->attn_o = attn_o;
      }
      x.noalias() += attn_o * l.wo;
      if (lc) lc->x_mid = x;

      rmsnorm(x, l.ln2_g, xn, inv_r);
      if (lc) {
        lc->xn2 = xn;
        lc->inv_r2 = inv_r;
      }
      hr.noalias() = xn * l.w1;
      hr.rowwise() += l.b1.row(0);
      hr = hr.cwiseMax(Scalar(0));
      if (lc) lc->hr = hr;
      x.noalias() += hr * l.w2;
      x.rowwise() += l.b2.row(0);
    }

    if (cache) cache->x_final = x;
    rmsnorm(x, lnf_g, xn, inv_r);
    if (cache) {
      cache->xf = xn;
      cache->inv_rf = inv_r;
    }
    Mat logits(n, vocab_size);
    logits.noalias() = xn * lm_head;
    return logits;
  }

  static double row_nll(const Mat& logits, Eigen::Index i, int target) {
    const auto row = logits.row(i);
    const Scalar m = row.maxCoeff();
    const double lse =
        static_cast<double>(m) + std::log(static_cast<double>((row.array() - m).exp().sum()));
    return lse - static_cast<double>(row(target));
  }

  // Accumulates the scalar loss; when `to_grad` is set, overwrites `logits`
  // in place with d(loss)/d(logits).
  double loss_from_logits(Mat& logits, const TokenBatch& b, LossNorm norm, bool to_grad) const {
    double total = 0.0, weight_sum = 0.0;
    std::vector<double> nll(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b.targets[i] < 0) continue;
      nll[i] = row_nll(logits, static_cast<Eigen::Index>(i), b.targets[i]);
      total += b.weight_at(i) * nll[i];
      weight_sum += b.weight_at(i);
    }
    double denom = 1.0;
    if (norm == LossNorm::mean_over_weights) {
      if (weight_sum <= 0.0)
        throw DataError("loss: mean_over_weights needs positive total weight");
      denom = weight_sum;
    }
    if (!to_grad) return total / denom;

    for (std::size_t i = 0; i < b.size(); ++i) {
      auto row = logits.row(static_cast<Eigen::Index>(i));
      if (b.targets[i] < 0) {
        row.setZero();
        continue;
      }
      const Scalar m = row.maxCoeff();
      row.array() = (row.array() - m).exp();
      row /= row.sum();
      row(b.targets[i]) -= Scalar(1);
      row *= static_cast<Scalar>(b.weight_at(i) / denom);
    }
    return total / denom;
  }

  void backward(const TokenBatch& b, const Cache& cache, const Mat& dlogits,
                TransformerT& grads) const {
    const int B = b.batch, T = b.seq, d = cfg.d_model, H = cfg.n_heads, hd = cfg.head_dim();
    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(hd));

    grads.lm_head.noalias() += cache.xf.transpose() * dlogits;
    Mat dy;
    dy.noalias() = dlogits * lm_head.transpose();
    Mat dx;
    rmsnorm_backward(cache.x_final, lnf_g, cache.inv_rf, dy, grads.lnf_g, dx);

    Mat dm, dhr, dxn, dq, dk, dv, dbranch;
    for (std::size_t li = layers.size(); li-- > 0;) {
      const Layer& l = layers[li];
      const auto& lc = cache.layers[li];
      Layer& gl = grads.layers[li];

      // MLP block (dx holds the gradient w.r.t. this layer's output)
      gl.b2.row(0) += dx.colwise().sum();
      gl.w2.noalias() += lc.hr.transpose() * dx;
      dhr.noalias() = dx * l.w2.transpose();
      dhr.array() *= (lc.hr.array() > Scalar(0)).template cast<Scalar>();
      gl.b1.row(0) += dhr.colwise().sum();
      gl.w1.noalias() += lc.xn2.transpose() * dhr;
      dxn.noalias() = dhr * l.w1.transpose();
      rmsnorm_backward(lc.x_mid, l.ln2_g, lc.inv_r2, dxn, gl.ln2_g, dbranch);
      dx += dbranch;

      // attention block
      gl.wo.noalias() += lc.attn_o.transpose() * dx;
      dm.noalias() = dx * l.wo.transpose();  // gradient w.r.t. concatenated head outputs
      dq.setZero(n, d);
      dk.setZero(n, d);
      dv.setZero(n, d);
      for (int r = 0; r < B; ++r) {
        for (int h = 0; h < H; ++h) {
          const Mat& p = lc.p[static_cast<std::size_t>(r) * H + h];
          auto dob = dm.block(r * T, h * hd, T, hd);
          auto qb = lc.q.block(r * T, h * hd, T, hd);
          auto kb = lc.k.block(r * T, h * hd, T, hd);
          auto vb = lc.v.block(r * T, h * hd, T, hd);
          dv.block(r * T, h * hd, T, hd).noalias() += p.transpose() * dob;
          Mat dp(T, T);
          dp.noalias() = dob * vb.transpose();
          Mat ds = Mat::Zero(T, T);
          for (int i = 0; i < T; ++i) {
            auto pr = p.row(i).head(i + 1);
            auto dpr = dp.row(i).head(i + 1);
            const Scalar dot = pr.cwiseProduct(dpr).sum();
            ds.row(i).head(i + 1).array() = pr.array() * (dpr.array() - dot);
          }
          ds *= scale;
          dq.block(r * T, h * hd, T, hd).noalias() += ds * kb;
          dk.block(r * T, h * hd, T, hd).noalias() += ds.transpose() * qb;
        }
      }
      gl.wq.noalias() += lc.xn1.transpose() * dq;
      gl.wk.noalias() += lc.xn1.transpose() * dk;
      gl.wv.noalias() += lc.xn1.transpose() * dv;
      dxn.noalias() = dq * l.wq.transpose();
      dxn.noalias() += dk * l.wk.transpose();
      dxn.noalias() += dv * l.wv.transpose();
      rmsnorm_backward(lc.x_in, l.ln1_g, lc.inv_r1, dxn, gl.ln1_g, dbranch);
      dx += dbranch;
    }

    for (int r = 0; r < B; ++r)
      for (int t = 0; t < T; ++t) {
        grads.tok_emb.row(b.tokens[static_cast<std::size_t>(r) * T + t]) += dx.row(r * T + t);
        grads.pos_emb.row(t) += dx.row(r * T + t);
      }
  }
};

using TransformerF = TransformerT<float>;
using TransformerD = TransformerT<double>;

}  // namespace latlab::model
