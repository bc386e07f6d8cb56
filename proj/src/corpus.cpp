#include "polarity/corpus.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polarity/error.hpp"

namespace polarity {

std::string case_fold(std::string_view form) {
  std::string out;
  out.reserve(form.size());
  for (unsigned char c : form) {
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

void validate_sentence(const Sentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) {
    throw StructureError("sentence " + std::to_string(s.id) + ": empty sentence");
  }
  for (int i = 0; i < n; ++i) {
    const int head = s.tokens[static_cast<std::size_t>(i)].head;
    if (head < 0 || head > n) {
      throw StructureError("sentence " + std::to_string(s.id) + ": head " +
                           std::to_string(head) + " out of range for token " +
                           std::to_string(i + 1));
    }
    if (head == i + 1) {
      throw StructureError("sentence " + std::to_string(s.id) +
                           ": token " + std::to_string(i + 1) + " is its own head");
    }
  }
  // Every token must reach a root in at most n steps.
  for (int i = 0; i < n; ++i) {
    int cur = i + 1;
    int steps = 0;
    while (cur != 0) {
      cur = s.tokens[static_cast<std::size_t>(cur - 1)].head;
      if (++steps > n) {
        throw StructureError("sentence " + std::to_string(s.id) +
                             ": cycle in head links reachable from token " +
                             std::to_string(i + 1));
      }
    }
  }
}

namespace {

bool parse_int(std::string_view s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cols;
}

// A token line is kept only if its first column is a plain integer id;
// ranges ("3-4") and empty nodes ("3.1") are skipped.
bool plain_integer_id(std::string_view col, int& id) {
  if (col.empty()) return false;
  for (char c : col) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return parse_int(col, id);
}

void finish_sentence(Corpus& corpus, Sentence& sent, std::size_t& multi_root) {
  if (sent.tokens.empty()) return;
  sent.id = corpus.sentences.size();
  validate_sentence(sent);
  std::size_t roots = 0;
  for (const Token& t : sent.tokens) roots += (t.head == 0);
  if (roots > 1) ++multi_root;
  corpus.token_count += sent.tokens.size();
  corpus.sentences.push_back(std::move(sent));
  sent = Sentence{};
}

}  // namespace

Corpus parse_conllu(std::istream& in) {
  Corpus corpus;
  Sentence sent;
  std::string line;
  std::size_t line_no = 0;
  std::size_t multi_root = 0;
  int expected_id = 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish_sentence(corpus, sent, multi_root);
      expected_id = 1;
      continue;
    }
    if (line[0] == '#') continue;

    auto cols = split_tabs(line);
    if (cols.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 10 columns, got " +
                       std::to_string(cols.size()));
    }
    int id = 0;
    if (!plain_integer_id(cols[0], id)) {
      // multiword-token range or empty node: keep syntactic words only
      continue;
    }
    if (id != expected_id) {
      throw ParseError("line " + std::to_string(line_no) + ": token id " +
                       std::to_string(id) + " out of sequence (expected " +
                       std::to_string(expected_id) + ")");
    }
    ++expected_id;

    Token tok;
    tok.form = std::string(cols[1]);
    tok.lower = case_fold(tok.form);
    if (!parse_int(cols[6], tok.head)) {
      throw ParseError("line " + std::to_string(line_no) + ": head column '" +
                       std::string(cols[6]) + "' is not an integer");
    }
    tok.deprel = std::string(cols[7]);
    sent.tokens.push_back(std::move(tok));
  }
  finish_sentence(corpus, sent, multi_root);
  if (multi_root > 0) {
    std::cerr << "warning: " << multi_root
              << " sentence(s) with multiple roots, treated as forests\n";
  }
  corpus.parsed = true;
  return corpus;
}

Corpus parse_conllu_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open CoNLL-U file: " + path);
  return parse_conllu(in);
}

void write_conllu(const Corpus& c, std::ostream& out) {
  for (const Sentence& sent : c.sentences) {
    for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
      const Token& t = sent.tokens[i];
      out << (i + 1) << '\t' << t.form << "\t_\t_\t_\t_\t" << t.head << '\t'
          << t.deprel << "\t_\t_\n";
    }
    out << '\n';
  }
}

std::string write_conllu(const Corpus& c) {
  std::ostringstream os;
  write_conllu(c, os);
  return os.str();
}

void write_conllu_file(const Corpus& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write CoNLL-U file: " + path);
  write_conllu(c, out);
}

Corpus tokenize_plain(std::istream& in) {
  Corpus corpus;
  corpus.parsed = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream words(line);
    Sentence sent;
    std::string w;
    while (words >> w) {
      Token tok;
      tok.form = w;
      tok.lower = case_fold(w);
      tok.head = 0;
      tok.deprel = "_";
      sent.tokens.push_back(std::move(tok));
    }
    if (sent.tokens.empty()) continue;  // blank lines are not sentences
    sent.id = corpus.sentences.size();
    corpus.token_count += sent.tokens.size();
    corpus.sentences.push_back(std::move(sent));
  }
  return corpus;
}

}  // namespace polarity
