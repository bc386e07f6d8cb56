#ifndef POLARITY_VOCAB_HPP
#define POLARITY_VOCAB_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "polarity/corpus.hpp"

namespace polarity {

// Token <-> dense id bijection with an <unk> fallback and an <eos> sentence
// separator. Ids are assigned by descending corpus count, ties by first
// occurrence, so vocabularies are deterministic.
class Vocab {
 public:
  static constexpr const char* kUnk = "<unk>";
  static constexpr const char* kEos = "<eos>";

  Vocab();

  int unk_id() const { return 0; }
  int eos_id() const { return 1; }
  std::size_t size() const { return id_to_token_.size(); }

  int id_of(const std::string& token) const;  // unk fallback
  const std::string& token_of(int id) const { return id_to_token_[static_cast<std::size_t>(id)]; }
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  // Rebuilds from an explicit id-ordered token list (checkpoint loading).
  static Vocab from_tokens(const std::vector<std::string>& tokens);

 private:
  friend Vocab build_vocab(const Corpus&, std::size_t);
  void append(const std::string& token);

  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, int> token_to_id_;
};

// Tokens with count >= min_count get ids; everything else maps to <unk>.
Vocab build_vocab(const Corpus& corpus, std::size_t min_count);

// Corpus flattened to ids with <eos> after every sentence; offsets locate
// each sentence in the stream (used for example-count bookkeeping).
struct TokenStream {
  std::vector<int> ids;
  std::vector<std::size_t> sentence_offset;
};

TokenStream flatten_corpus(const Corpus& corpus, const Vocab& vocab);

}  // namespace polarity

#endif  // POLARITY_VOCAB_HPP
