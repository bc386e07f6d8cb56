#ifndef POLARITY_BIGRAM_HPP
#define POLARITY_BIGRAM_HPP

#include <unordered_map>
#include <vector>

#include "polarity/lm.hpp"

namespace polarity {

// Add-alpha smoothed bigram LM. Cheap oracle backend for pipeline tests:
// exposes the same phrase_logprob contract as the LSTM checkpoints.
class BigramModel : public PhraseScorer {
 public:
  // P(w | v) = (count(v,w) + alpha) / (count(v) + alpha * |V|)
  static BigramModel train(const Corpus& corpus, double alpha);

  double phrase_logprob(std::span<const std::string> prefix,
                        std::span<const std::string> phrase) const override;

  double cond_logprob(int prev_id, int next_id) const;
  const Vocab& vocab() const { return vocab_; }

 private:
  Vocab vocab_;
  double alpha_ = 1.0;
  std::vector<std::size_t> unigram_;                          // count(v) as history
  std::unordered_map<std::uint64_t, std::size_t> bigram_;     // (v<<32|w) -> count
};

}  // namespace polarity

#endif  // POLARITY_BIGRAM_HPP
