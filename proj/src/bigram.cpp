#include "polarity/bigram.hpp"

#include <cmath>

#include "polarity/error.hpp"

namespace polarity {

namespace {
inline std::uint64_t key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}
}  // namespace

BigramModel BigramModel::train(const Corpus& corpus, double alpha) {
  if (alpha <= 0.0) throw ArgumentError("BigramModel: alpha must be > 0");
  BigramModel m;
  m.alpha_ = alpha;
  m.vocab_ = build_vocab(corpus, 1);
  m.unigram_.assign(m.vocab_.size(), 0);

  // <eos> doubles as the start-of-sentence history
  const TokenStream stream = flatten_corpus(corpus, m.vocab_);
  int prev = m.vocab_.eos_id();
  for (int id : stream.ids) {
    m.unigram_[static_cast<std::size_t>(prev)] += 1;
    m.bigram_[key(prev, id)] += 1;
    prev = id;
  }
  return m;
}

double BigramModel::cond_logprob(int prev_id, int next_id) const {
  const double v = static_cast<double>(vocab_.size());
  auto it = bigram_.find(key(prev_id, next_id));
  const double joint = it == bigram_.end() ? 0.0 : static_cast<double>(it->second);
  const double hist = static_cast<double>(unigram_[static_cast<std::size_t>(prev_id)]);
  return std::log((joint + alpha_) / (hist + alpha_ * v));
}

double BigramModel::phrase_logprob(std::span<const std::string> prefix,
                                   std::span<const std::string> phrase) const {
  if (phrase.empty()) throw ArgumentError("phrase_logprob: empty phrase");
  int prev = prefix.empty() ? vocab_.eos_id() : vocab_.id_of(prefix.back());
  double total = 0.0;
  for (const std::string& tok : phrase) {
    const int id = vocab_.id_of(tok);
    total += cond_logprob(prev, id);
    prev = id;
  }
  return total;
}

}  // namespace polarity
