#include "polarity/vocab.hpp"

#include <algorithm>

#include "polarity/error.hpp"

namespace polarity {

Vocab::Vocab() {
  append(kUnk);
  append(kEos);
}

void Vocab::append(const std::string& token) {
  token_to_id_[token] = static_cast<int>(id_to_token_.size());
  id_to_token_.push_back(token);
}

int Vocab::id_of(const std::string& token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? unk_id() : it->second;
}

Vocab Vocab::from_tokens(const std::vector<std::string>& tokens) {
  if (tokens.size() < 2 || tokens[0] != kUnk || tokens[1] != kEos) {
    throw FormatError("vocab token list must start with <unk>, <eos>");
  }
  Vocab v;
  for (std::size_t i = 2; i < tokens.size(); ++i) v.append(tokens[i]);
  return v;
}

Vocab build_vocab(const Corpus& corpus, std::size_t min_count) {
  if (corpus.sentences.empty()) {
    throw ArgumentError("build_vocab: empty corpus");
  }
  struct Entry {
    std::size_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Entry> counts;
  std::size_t pos = 0;
  for (const Sentence& s : corpus.sentences) {
    for (const Token& t : s.tokens) {
      auto [it, inserted] = counts.try_emplace(t.form);
      if (inserted) it->second.first_seen = pos;
      it->second.count += 1;
      ++pos;
    }
  }

  std::vector<std::pair<std::string, Entry>> order(counts.begin(), counts.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second.count != b.second.count) return a.second.count > b.second.count;
    return a.second.first_seen < b.second.first_seen;
  });

  Vocab v;
  for (const auto& [token, entry] : order) {
    if (entry.count >= min_count && token != Vocab::kUnk && token != Vocab::kEos) {
      v.append(token);
    }
  }
  return v;
}

TokenStream flatten_corpus(const Corpus& corpus, const Vocab& vocab) {
  TokenStream stream;
  stream.ids.reserve(corpus.token_count + corpus.sentences.size());
  for (const Sentence& s : corpus.sentences) {
    stream.sentence_offset.push_back(stream.ids.size());
    for (const Token& t : s.tokens) stream.ids.push_back(vocab.id_of(t.form));
    stream.ids.push_back(vocab.eos_id());
  }
  return stream;
}

}  // namespace polarity
