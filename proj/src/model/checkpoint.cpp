#include "latlab/model/checkpoint.hpp"

#include <fstream>

#include "latlab/core/hashing.hpp"
#include "latlab/core/kv_config.hpp"

namespace latlab::model {

namespace {
constexpr int kFormat = 1;
}

void save_params(const std::filesystem::path& path, const TransformerF& model) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  model.visit([&](const std::string&, const TransformerF::Mat& w) {
    f.write(reinterpret_cast<const char*>(w.data()),
            static_cast<std::streamsize>(sizeof(float) * w.size()));
  });
  if (!f) throw DataError("short write to " + path.string());
}

void load_params(const std::filesystem::path& path, TransformerF& model) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read " + path.string());
  model.visit([&](const std::string& name, TransformerF::Mat& w) {
    f.read(reinterpret_cast<char*>(w.data()),
           static_cast<std::streamsize>(sizeof(float) * w.size()));
    if (!f) throw DataError(path.string() + ": truncated while reading " + name);
  });
  f.peek();
  if (!f.eof()) throw DataError(path.string() + ": trailing bytes in parameter blob");
}

void save_checkpoint(const std::filesystem::path& dir, const TransformerF& model,
                     const Adam& opt, const Vocabulary& vocab) {
  if (model.vocab_size != vocab.size())
    throw DataError("checkpoint: model vocab size disagrees with vocabulary");
  std::filesystem::create_directories(dir);
  save_params(dir / "params.bin", model);
  opt.save(dir / "adam.bin");
  vocab.save(dir / "vocab.rec");

  KvConfig kv;
  kv.set_int("format", kFormat);
  kv.set_int("n_layers", model.cfg.n_layers);
  kv.set_int("n_heads", model.cfg.n_heads);
  kv.set_int("d_model", model.cfg.d_model);
  kv.set_int("max_sequence_length", model.cfg.max_sequence_length);
  kv.set("seed", std::to_string(model.cfg.seed));
  kv.set_int("vocab_size", model.vocab_size);
  kv.set_int("step", opt.steps_done());
  kv.set_double("adam.lr", opt.config().lr);
  kv.set_double("adam.beta1", opt.config().beta1);
  kv.set_double("adam.beta2", opt.config().beta2);
  kv.set_double("adam.eps", opt.config().eps);
  kv.set_double("adam.clip_norm", opt.config().clip_norm);
  kv.set("params_hash", hash_file_hex(dir / "params.bin"));
  kv.set("adam_hash", hash_file_hex(dir / "adam.bin"));
  kv.set("vocab_hash", hash_hex(vocab.content_hash()));
  kv.save(dir / "model.kv");
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
  const KvConfig kv = KvConfig::load(dir / "model.kv");
  if (kv.get_int("format") != kFormat)
    throw DataError(dir.string() + ": unsupported checkpoint format " +
                    std::to_string(kv.get_int("format")));

  ModelConfig cfg;
  cfg.n_layers = static_cast<int>(kv.get_int("n_layers"));
  cfg.n_heads = static_cast<int>(kv.get_int("n_heads"));
  cfg.d_model = static_cast<int>(kv.get_int("d_model"));
  cfg.max_sequence_length = static_cast<int>(kv.get_int("max_sequence_length"));
  cfg.seed = std::stoull(kv.get_str("seed"));
  const int vocab_size = static_cast<int>(kv.get_int("vocab_size"));

  if (kv.get_str("params_hash") != hash_file_hex(dir / "params.bin"))
    throw DataError(dir.string() + ": params.bin does not match recorded hash");
  if (kv.get_str("adam_hash") != hash_file_hex(dir / "adam.bin"))
    throw DataError(dir.string() + ": adam.bin does not match recorded hash");

  Vocabulary vocab = Vocabulary::load(dir / "vocab.rec");
  if (kv.get_str("vocab_hash") != hash_hex(vocab.content_hash()))
    throw DataError(dir.string() + ": vocab.rec does not match recorded hash");
  if (vocab.size() != vocab_size)
    throw DataError(dir.string() + ": vocabulary size disagrees with config");

  TransformerF model = TransformerF::init(cfg, vocab_size);
  load_params(dir / "params.bin", model);

  AdamConfig acfg;
  acfg.lr = kv.get_double("adam.lr");
  acfg.beta1 = kv.get_double("adam.beta1");
  acfg.beta2 = kv.get_double("adam.beta2");
  acfg.eps = kv.get_double("adam.eps");
  acfg.clip_norm = kv.get_double("adam.clip_norm");
  Adam opt = Adam::load(dir / "adam.bin", acfg, model);
  if (opt.steps_done() != kv.get_int("step"))
    throw DataError(dir.string() + ": step counter disagrees between model.kv and adam.bin");

  return Checkpoint{std::move(model), std::move(opt), std::move(vocab)};
}

}  // namespace latlab::model
