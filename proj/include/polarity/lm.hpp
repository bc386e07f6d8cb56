#ifndef POLARITY_LM_HPP
#define POLARITY_LM_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "polarity/corpus.hpp"
#include "polarity/lstm.hpp"
#include "polarity/vocab.hpp"

namespace polarity {

struct LMConfig {
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 64;
  std::size_t layers = 2;
  double dropout = 0.1;
  std::size_t batch_size = 16;
  std::size_t bptt_len = 20;
  double base_lr = 1.0;
  double lr_decay_factor = 4.0;
  std::size_t epochs = 20;
  std::size_t checkpoint_every_batches = 50;
  std::size_t min_count = 1;
  double clip_norm = 0.25;
  std::uint64_t seed = 0;

  // mirrors the reference full-scale training setup
  static LMConfig paper_profile();
  // small enough to train in minutes on a laptop core
  static LMConfig desk_profile();
  static LMConfig profile(const std::string& name);

  void validate() const;
};

// Anything that can score a phrase given a prefix. Implemented by the LSTM
// checkpoints, the bigram baseline, and lookup-table fakes in tests.
class PhraseScorer {
 public:
  virtual ~PhraseScorer() = default;

  // Sum over phrase positions of log P(token | prefix + previous phrase
  // tokens), dropout disabled, no state mutation.
  virtual double phrase_logprob(std::span<const std::string> prefix,
                                std::span<const std::string> phrase) const = 0;
};

// Immutable parameter snapshot with step metadata.
class CheckpointedModel : public PhraseScorer {
 public:
  CheckpointedModel() = default;
  CheckpointedModel(LMConfig config, std::shared_ptr<const Vocab> vocab, LstmParams<float> params);

  double phrase_logprob(std::span<const std::string> prefix,
                        std::span<const std::string> phrase) const override;

  // Distribution over the next token after `prefix` (natural log).
  std::vector<double> next_logprobs(std::span<const std::string> prefix) const;

  const LMConfig& config() const { return config_; }
  const Vocab& vocab() const { return *vocab_; }
  std::shared_ptr<const Vocab> vocab_ptr() const { return vocab_; }
  const LstmParams<float>& params() const { return params_; }

  std::size_t step = 0;
  std::size_t tokens_seen = 0;
  std::size_t epoch = 0;         // completed epochs before this checkpoint
  std::size_t pos_in_epoch = 0;  // per-lane input positions consumed this epoch
  double train_loss = 0.0;       // mean CE since previous checkpoint
  double val_loss = -1.0;        // -1 until first validation pass
  double lr = 0.0;

 private:
  LMConfig config_;
  std::shared_ptr<const Vocab> vocab_;
  LstmParams<float> params_;
};

struct TrainOptions {
  // Called for every emitted checkpoint, in step order.
  std::function<void(const CheckpointedModel&)> on_checkpoint;
  bool collect = true;  // keep checkpoints in the result vector
};

struct TrainResult {
  std::vector<CheckpointedModel> checkpoints;
  Vocab vocab;
  std::size_t total_batches = 0;
  double final_train_loss = 0.0;
  double final_perplexity = 0.0;
  double final_val_loss = -1.0;
};

// Truncated-BPTT training with SGD, global-norm clipping, and lr decay on
// non-improving validation loss. When `valid` is null the last 5% of
// sentences (at least one) are held out for validation. Deterministic for a
// fixed seed; emits a checkpoint at step 0, every checkpoint_every_batches,
// and at the final step.
TrainResult train_lm(const Corpus& train, const Corpus* valid, const LMConfig& config,
                     const TrainOptions& options = {});

// Perplexity of a trained model over a corpus (eval mode, same batch layout).
double corpus_perplexity(const CheckpointedModel& model, const Corpus& corpus);

}  // namespace polarity

#endif  // POLARITY_LM_HPP
