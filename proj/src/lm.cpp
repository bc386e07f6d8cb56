#include "polarity/lm.hpp"

#include <cmath>

#include "polarity/error.hpp"
#include "polarity/rng.hpp"

namespace polarity {

LMConfig LMConfig::paper_profile() {
  LMConfig c;
  c.embed_dim = 650;
  c.hidden_dim = 650;
  c.layers = 2;
  c.dropout = 0.1;
  c.batch_size = 64;
  c.bptt_len = 35;
  c.base_lr = 20.0;
  c.lr_decay_factor = 4.0;
  c.epochs = 40;
  c.checkpoint_every_batches = 100;
  c.min_count = 1;
  return c;
}

LMConfig LMConfig::desk_profile() {
  LMConfig c;
  c.embed_dim = 32;
  c.hidden_dim = 64;
  c.layers = 2;
  c.dropout = 0.1;
  c.batch_size = 16;
  c.bptt_len = 20;
  c.base_lr = 1.0;
  c.lr_decay_factor = 4.0;
  c.epochs = 20;
  c.checkpoint_every_batches = 50;
  c.min_count = 1;
  return c;
}

LMConfig LMConfig::profile(const std::string& name) {
  if (name == "paper") return paper_profile();
  if (name == "desk") return desk_profile();
  throw ConfigError("unknown LM profile '" + name + "' (expected paper or desk)");
}

void LMConfig::validate() const {
  if (embed_dim < 1 || hidden_dim < 1 || layers < 1 || batch_size < 1 || bptt_len < 1 ||
      epochs < 1 || checkpoint_every_batches < 1) {
    throw ConfigError("LMConfig: all dimensions and schedule counts must be >= 1");
  }
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("LMConfig: dropout must be in [0, 1)");
  if (base_lr <= 0.0) throw ConfigError("LMConfig: base_lr must be positive");
  if (lr_decay_factor <= 1.0) throw ConfigError("LMConfig: lr_decay_factor must be > 1");
  if (clip_norm <= 0.0) throw ConfigError("LMConfig: clip_norm must be positive");
}

CheckpointedModel::CheckpointedModel(LMConfig config, std::shared_ptr<const Vocab> vocab,
                                     LstmParams<float> params)
    : config_(std::move(config)), vocab_(std::move(vocab)), params_(std::move(params)) {}

double CheckpointedModel::phrase_logprob(std::span<const std::string> prefix,
                                         std::span<const std::string> phrase) const {
  if (phrase.empty()) throw ArgumentError("phrase_logprob: empty phrase");
  LstmState<float> state(config_.layers, 1, config_.hidden_dim);
  // prefixes are sentence-initial: anchor the state at a sentence boundary,
  // the same convention the <eos>-delimited training stream establishes
  lstm_step_eval(params_, vocab_->eos_id(), state);
  for (const std::string& tok : prefix) {
    lstm_step_eval(params_, vocab_->id_of(tok), state);
  }
  double total = 0.0;
  for (const std::string& tok : phrase) {
    const auto lp = lstm_logprobs(params_, state);
    const int id = vocab_->id_of(tok);
    total += lp[static_cast<std::size_t>(id)];
    lstm_step_eval(params_, id, state);
  }
  return total;
}

std::vector<double> CheckpointedModel::next_logprobs(std::span<const std::string> prefix) const {
  LstmState<float> state(config_.layers, 1, config_.hidden_dim);
  lstm_step_eval(params_, vocab_->eos_id(), state);
  for (const std::string& tok : prefix) {
    lstm_step_eval(params_, vocab_->id_of(tok), state);
  }
  return lstm_logprobs(params_, state);
}

namespace {

// Mean eval-mode cross entropy over a flattened stream, contiguous lanes.
double eval_stream_loss(const LstmParams<float>& params, const std::vector<int>& ids,
                        std::size_t batch_size, std::size_t bptt) {
  std::size_t lanes = std::min<std::size_t>(batch_size, ids.size() / 2);
  if (lanes == 0) lanes = 1;
  const std::size_t nbatch = ids.size() / lanes;
  if (nbatch < 2) throw ArgumentError("evaluation stream too small");

  LstmState<float> state(params.layers, lanes, params.hidden);
  LstmCache<float> cache;
  double loss_sum = 0.0;
  std::size_t positions = 0;
  std::size_t pos = 0;
  while (pos + 1 < nbatch) {
    const std::size_t seq = std::min(bptt, nbatch - 1 - pos);
    Window w;
    w.batch = lanes;
    w.steps = seq;
    w.inputs.resize(lanes * seq);
    w.targets.resize(lanes * seq);
    for (std::size_t t = 0; t < seq; ++t) {
      for (std::size_t b = 0; b < lanes; ++b) {
        w.inputs[t * lanes + b] = ids[b * nbatch + pos + t];
        w.targets[t * lanes + b] = ids[b * nbatch + pos + t + 1];
      }
    }
    const float loss = lstm_forward<float>(params, w, state, cache, 0.0f, nullptr);
    loss_sum += double(loss) * double(lanes * seq);
    positions += lanes * seq;
    pos += seq;
  }
  return loss_sum / double(positions);
}

}  // namespace

TrainResult train_lm(const Corpus& train, const Corpus* valid, const LMConfig& config,
                     const TrainOptions& options) {
  config.validate();
  if (train.sentences.empty()) throw ArgumentError("train_lm: empty corpus");

  // Implicit 5% holdout when no validation corpus is supplied.
  Corpus train_part;
  Corpus valid_part;
  const Corpus* train_ptr = &train;
  const Corpus* valid_ptr = valid;
  if (valid == nullptr) {
    const std::size_t n = train.sentences.size();
    const std::size_t hold = std::max<std::size_t>(1, n / 20);
    if (hold >= n) {
      valid_ptr = &train;  // degenerate tiny corpus: validate on itself
    } else {
      train_part.parsed = train.parsed;
      valid_part.parsed = train.parsed;
      for (std::size_t i = 0; i < n - hold; ++i) {
        train_part.sentences.push_back(train.sentences[i]);
        train_part.token_count += train.sentences[i].size();
      }
      for (std::size_t i = n - hold; i < n; ++i) {
        valid_part.sentences.push_back(train.sentences[i]);
        valid_part.token_count += train.sentences[i].size();
      }
      train_ptr = &train_part;
      valid_ptr = &valid_part;
    }
  }

  auto vocab = std::make_shared<const Vocab>(build_vocab(*train_ptr, config.min_count));
  const TokenStream stream = flatten_corpus(*train_ptr, *vocab);
  const TokenStream valid_stream = flatten_corpus(*valid_ptr, *vocab);

  const std::size_t B = config.batch_size;
  const std::size_t nbatch = stream.ids.size() / B;
  if (nbatch < 2) {
    throw ArgumentError("train_lm: corpus too small for batch size " + std::to_string(B));
  }
  const std::size_t windows_per_epoch = (nbatch - 2) / config.bptt_len + 1;  // ceil((nbatch-1)/bptt)
  const std::size_t total_batches = windows_per_epoch * config.epochs;

  LstmParams<float> params(vocab->size(), config.embed_dim, config.hidden_dim, config.layers);
  Rng init_rng(stream_seed(config.seed, "lm.init"));
  params.init_uniform(init_rng, params.default_init_range());
  Rng dropout_rng(stream_seed(config.seed, "lm.dropout"));

  LstmParams<float> grads(vocab->size(), config.embed_dim, config.hidden_dim, config.layers);

  TrainResult result;
  result.vocab = *vocab;
  result.total_batches = total_batches;

  double lr = config.base_lr;
  double best_val = -1.0;
  double last_val = -1.0;
  std::size_t global_step = 0;
  std::size_t tokens_seen = 0;
  double ce_sum = 0.0;
  std::size_t ce_count = 0;
  std::size_t last_emitted = SIZE_MAX;

  auto emit = [&](std::size_t epoch, std::size_t pos_in_epoch) {
    CheckpointedModel ckpt(config, vocab, params);
    ckpt.step = global_step;
    ckpt.tokens_seen = tokens_seen;
    ckpt.epoch = epoch;
    ckpt.pos_in_epoch = pos_in_epoch;
    ckpt.train_loss = ce_count ? ce_sum / double(ce_count) : -1.0;
    ckpt.val_loss = last_val;
    ckpt.lr = lr;
    if (options.on_checkpoint) options.on_checkpoint(ckpt);
    if (options.collect) result.checkpoints.push_back(std::move(ckpt));
    ce_sum = 0.0;
    ce_count = 0;
    last_emitted = global_step;
  };

  emit(0, 0);  // untrained snapshot anchors learning curves at step 0

  LstmState<float> state(config.layers, B, config.hidden_dim);
  LstmCache<float> cache;
  Window w;
  w.batch = B;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    state.zero();
    std::size_t pos = 0;
    while (pos + 1 < nbatch) {
      const std::size_t seq = std::min(config.bptt_len, nbatch - 1 - pos);
      w.steps = seq;
      w.inputs.resize(B * seq);
      w.targets.resize(B * seq);
      for (std::size_t t = 0; t < seq; ++t) {
        for (std::size_t b = 0; b < B; ++b) {
          w.inputs[t * B + b] = stream.ids[b * nbatch + pos + t];
          w.targets[t * B + b] = stream.ids[b * nbatch + pos + t + 1];
        }
      }

      const float loss =
          lstm_forward<float>(params, w, state, cache, float(config.dropout), &dropout_rng);
      if (!std::isfinite(loss)) {
        throw NumericError("train_lm: non-finite loss at step " + std::to_string(global_step + 1));
      }
      grads.embedding.zero();
      for (auto& l : grads.lstm) {
        l.w_ih.zero();
        l.w_hh.zero();
        std::fill(l.bias.begin(), l.bias.end(), 0.0f);
      }
      grads.w_out.zero();
      std::fill(grads.b_out.begin(), grads.b_out.end(), 0.0f);
      lstm_backward<float>(params, w, cache, grads);
      clip_gradients(grads, config.clip_norm);
      sgd_step(params, grads, float(lr));

      pos += seq;
      ++global_step;
      tokens_seen += B * seq;
      ce_sum += double(loss);
      ++ce_count;

      if (global_step % config.checkpoint_every_batches == 0) {
        emit(epoch, pos);
      }
    }

    // "adaptive SGD": shrink lr when end-of-epoch validation stops
    // improving. The convention comes from a regime where an epoch is tens
    // of thousands of updates; on desk corpora an epoch can be a couple of
    // batches and the trigger would fire on noise and collapse lr, so
    // annealing needs a minimally informative epoch and a real worsening.
    last_val = eval_stream_loss(params, valid_stream.ids, B, config.bptt_len);
    if (best_val < 0.0 || last_val < best_val) {
      best_val = last_val;
    } else if (windows_per_epoch >= 100 && last_val > best_val * 1.001) {
      lr /= config.lr_decay_factor;
    }
  }

  if (last_emitted != global_step) {
    emit(config.epochs, 0);
  }

  result.final_train_loss = eval_stream_loss(params, stream.ids, B, config.bptt_len);
  result.final_perplexity = std::exp(result.final_train_loss);
  result.final_val_loss = last_val;
  return result;
}

double corpus_perplexity(const CheckpointedModel& model, const Corpus& corpus) {
  const TokenStream stream = flatten_corpus(corpus, model.vocab());
  return std::exp(
      eval_stream_loss(model.params(), stream.ids, model.config().batch_size, model.config().bptt_len));
}

}  // namespace polarity
