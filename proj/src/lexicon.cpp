#include "polarity/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "polarity/error.hpp"

namespace polarity {

std::string LexiconEntry::joined() const {
  std::string out;
  for (std::size_t i = 0; i < phrase.size(); ++i) {
    if (i) out.push_back(' ');
    out += phrase[i];
  }
  return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

}  // namespace

void Lexicon::add(LexiconEntry entry) {
  if (entry.phrase.empty()) {
    throw FormatError("lexicon entry with empty phrase");
  }
  const std::string key = entry.joined();
  for (const LexiconEntry& existing : entries_) {
    if (existing.joined() != key) continue;
    if (existing.kind != entry.kind) {
      throw FormatError("lexicon conflict: phrase '" + key + "' listed as both npi and licensor");
    }
    if (entry.kind == EntryKind::Licensor && existing.context != entry.context) {
      throw FormatError("lexicon conflict: licensor '" + key + "' mapped to two contexts");
    }
    return;  // exact duplicate, ignore
  }
  const std::size_t idx = entries_.size();
  entries_.push_back(std::move(entry));
  auto& bucket = by_first_token_[entries_[idx].phrase.front()];
  bucket.push_back(idx);
  std::sort(bucket.begin(), bucket.end(), [this](std::size_t a, std::size_t b) {
    if (entries_[a].phrase.size() != entries_[b].phrase.size()) {
      return entries_[a].phrase.size() > entries_[b].phrase.size();
    }
    return a < b;
  });
}

Lexicon Lexicon::load(std::istream& in) {
  Lexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      std::size_t pos = line.find('\t', start);
      if (pos == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (cols.size() < 2) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": expected phrase<TAB>kind");
    }

    LexiconEntry entry;
    for (std::string& tok : split_ws(cols[0])) {
      entry.phrase.push_back(case_fold(tok));
    }
    if (entry.phrase.empty()) {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": empty phrase");
    }

    const std::string& kind = cols[1];
    if (kind == "npi") {
      entry.kind = EntryKind::Npi;
    } else if (kind == "licensor") {
      entry.kind = EntryKind::Licensor;
      if (cols.size() < 3 || cols[2].empty()) {
        throw FormatError("lexicon line " + std::to_string(line_no) +
                          ": licensor entry requires a context label");
      }
      auto ctx = context_from_string(cols[2]);
      if (!ctx) {
        throw FormatError("lexicon line " + std::to_string(line_no) + ": unknown context label '" +
                          cols[2] + "'");
      }
      entry.context = *ctx;
    } else {
      throw FormatError("lexicon line " + std::to_string(line_no) + ": unknown kind '" + kind + "'");
    }
    lex.add(std::move(entry));
  }
  return lex;
}

Lexicon Lexicon::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon file: " + path);
  return load(in);
}

Lexicon Lexicon::load_files(const std::string& npi_path, const std::string& licensor_path) {
  Lexicon lex = load_file(npi_path);
  std::ifstream in(licensor_path);
  if (!in) throw InputError("cannot open lexicon file: " + licensor_path);
  Lexicon lic = load(in);
  for (const LexiconEntry& e : lic.entries()) lex.add(e);
  return lex;
}

const LexiconEntry* Lexicon::longest_at(const Sentence& s, std::size_t start, EntryKind kind) const {
  if (start >= s.tokens.size()) return nullptr;
  auto it = by_first_token_.find(s.tokens[start].lower);
  if (it == by_first_token_.end()) return nullptr;
  for (std::size_t idx : it->second) {
    const LexiconEntry& e = entries_[idx];
    if (e.kind != kind) continue;
    if (start + e.phrase.size() > s.tokens.size()) continue;
    bool ok = true;
    for (std::size_t k = 1; k < e.phrase.size(); ++k) {
      if (s.tokens[start + k].lower != e.phrase[k]) {
        ok = false;
        break;
      }
    }
    if (ok) return &e;  // bucket is sorted longest-first
  }
  return nullptr;
}

std::vector<Match> find_matches(const Sentence& s, const Lexicon& lexicon) {
  std::vector<Match> out;
  std::size_t next_start[2] = {0, 0};  // per kind: first position not suppressed
  for (std::size_t pos = 0; pos < s.tokens.size(); ++pos) {
    for (EntryKind kind : {EntryKind::Npi, EntryKind::Licensor}) {
      const auto k = static_cast<std::size_t>(kind);
      if (pos < next_start[k]) continue;
      const LexiconEntry* e = lexicon.longest_at(s, pos, kind);
      if (!e) continue;
      out.push_back(Match{s.id, pos, pos + e->phrase.size(), e});
      next_start[k] = pos + e->phrase.size();
    }
  }
  // already in left-to-right order; at equal starts NPI precedes licensor
  return out;
}

}  // namespace polarity
