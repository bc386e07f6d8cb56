#include "polarity/synth.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "polarity/error.hpp"
#include "polarity/rng.hpp"

namespace polarity {

void SynthFrame::validate() const {
  const int n = static_cast<int>(slots.size());
  if (n == 0) throw FormatError("synth frame: empty frame");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int head = slots[static_cast<std::size_t>(i)].head;
    if (head < 0 || head > n) throw FormatError("synth frame: head index out of range");
    if (head == i + 1) throw FormatError("synth frame: token is its own head");
    roots += (head == 0);
  }
  if (roots != 1) throw FormatError("synth frame: frames must have exactly one root");
  for (int i = 0; i < n; ++i) {
    int cur = i + 1, steps = 0;
    while (cur != 0) {
      cur = slots[static_cast<std::size_t>(cur - 1)].head;
      if (++steps > n) throw FormatError("synth frame: cycle in head links");
    }
  }
}

namespace {

using Slot = SynthFrame::Slot;

// Distance between placeholder positions in a frame (BFS over the
// undirected head graph). Kept local so gold distances do not depend on the
// scope module under test.
std::optional<std::size_t> frame_distance(const std::vector<int>& heads, std::size_t a,
                                          std::size_t b) {
  const std::size_t n = heads.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (heads[i] > 0) {
      adj[i].push_back(static_cast<std::size_t>(heads[i] - 1));
      adj[static_cast<std::size_t>(heads[i] - 1)].push_back(i);
    }
  }
  std::vector<std::size_t> dist(n, SIZE_MAX);
  std::deque<std::size_t> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop_front();
    if (cur == b) return dist[cur];
    for (std::size_t next : adj[cur]) {
      if (dist[next] == SIZE_MAX) {
        dist[next] = dist[cur] + 1;
        queue.push_back(next);
      }
    }
  }
  return std::nullopt;
}

std::vector<std::string> split_ws(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

Slot parse_frame_token(const std::string& tok, std::size_t line_no) {
  auto fail = [&](const std::string& msg) {
    throw FormatError("grammar line " + std::to_string(line_no) + ": " + msg + " in '" + tok + "'");
  };
  const auto second = tok.rfind('/');
  if (second == std::string::npos) fail("expected form/head/deprel");
  const auto first = tok.rfind('/', second - 1);
  if (first == std::string::npos) fail("expected form/head/deprel");

  Slot slot;
  const std::string form = tok.substr(0, first);
  const std::string head_str = tok.substr(first + 1, second - first - 1);
  slot.deprel = tok.substr(second + 1);
  if (form.empty() || slot.deprel.empty()) fail("empty field");
  try {
    slot.head = std::stoi(head_str);
  } catch (const std::exception&) {
    fail("bad head index");
  }

  if (form.size() >= 2 && form.front() == '{' && form.back() == '}') {
    const std::string name = form.substr(1, form.size() - 2);
    if (name == "lic") {
      slot.kind = Slot::Kind::Licensor;
    } else if (name == "npi") {
      slot.kind = Slot::Kind::Npi;
    } else if (name.rfind("lic1=", 0) == 0 || name.rfind("lic2=", 0) == 0) {
      slot.kind = name[3] == '1' ? Slot::Kind::Licensor1 : Slot::Kind::Licensor2;
      auto ctx = context_from_string(name.substr(5));
      if (!ctx) fail("unknown context in licensor slot");
      slot.multi_context = *ctx;
    } else {
      slot.kind = Slot::Kind::Filler;
      slot.text = name;
    }
  } else {
    slot.kind = Slot::Kind::Literal;
    slot.text = form;
  }
  return slot;
}

std::size_t count_kind(const SynthFrame& f, Slot::Kind kind) {
  std::size_t n = 0;
  for (const Slot& s : f.slots) n += (s.kind == kind);
  return n;
}

std::size_t find_kind(const SynthFrame& f, Slot::Kind kind) {
  for (std::size_t i = 0; i < f.slots.size(); ++i) {
    if (f.slots[i].kind == kind) return i;
  }
  throw ArgumentError("synth frame: missing slot");
}

}  // namespace

GrammarSpec GrammarSpec::load(std::istream& in) {
  GrammarSpec spec;
  enum class Section { None, Fillers, Neutral, Context, Multi };
  Section section = Section::None;
  ContextType current_context = ContextType::SimpleQuestions;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& msg) {
    throw FormatError("grammar line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const std::string body = line.substr(first);

    if (body.front() == '[') {
      const auto close = body.find(']');
      if (close == std::string::npos) fail("unterminated section header");
      const std::string name = body.substr(1, close - 1);
      if (name == "fillers") {
        section = Section::Fillers;
      } else if (name == "neutral") {
        section = Section::Neutral;
      } else if (name == "multi") {
        section = Section::Multi;
      } else if (name.rfind("context ", 0) == 0) {
        auto ctx = context_from_string(name.substr(8));
        if (!ctx) fail("unknown context '" + name.substr(8) + "'");
        current_context = *ctx;
        spec.contexts[current_context];  // create
        section = Section::Context;
      } else {
        fail("unknown section [" + name + "]");
      }
      continue;
    }

    std::istringstream is(body);
    std::string keyword;
    is >> keyword;
    std::string rest;
    std::getline(is, rest);

    if (section == Section::None) {
      if (keyword == "seed") {
        try {
          spec.seed = std::stoull(rest);
        } catch (const std::exception&) {
          fail("bad seed value");
        }
      } else {
        fail("'" + keyword + "' outside any section");
      }
      continue;
    }

    if (keyword == "frame") {
      SynthFrame frame;
      for (const std::string& tok : split_ws(rest)) {
        frame.slots.push_back(parse_frame_token(tok, line_no));
      }
      frame.validate();
      if (section == Section::Neutral) {
        spec.neutral_frames.push_back(std::move(frame));
      } else if (section == Section::Context) {
        spec.contexts[current_context].frames.push_back(std::move(frame));
      } else if (section == Section::Multi) {
        spec.multi_frames.push_back(std::move(frame));
      } else {
        fail("frame line in [fillers]");
      }
    } else if (keyword == "freq" && section == Section::Context) {
      try {
        spec.contexts[current_context].freq_per_100k = std::stod(rest);
      } catch (const std::exception&) {
        fail("bad frequency");
      }
    } else if (keyword == "licensor" && section == Section::Context) {
      auto words = split_ws(rest);
      if (words.empty()) fail("empty licensor");
      spec.contexts[current_context].licensors.push_back(std::move(words));
    } else if (keyword == "npi" && (section == Section::Context || section == Section::Multi)) {
      auto words = split_ws(rest);
      if (words.empty()) fail("empty npi");
      if (section == Section::Context) {
        spec.contexts[current_context].npis.push_back(std::move(words));
      } else {
        spec.multi_npis.push_back(std::move(words));
      }
    } else if (section == Section::Fillers) {
      auto words = split_ws(rest);
      if (words.empty()) fail("filler '" + keyword + "' has no words");
      auto& list = spec.fillers[keyword];
      list.insert(list.end(), words.begin(), words.end());
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  spec.validate();
  return spec;
}

GrammarSpec GrammarSpec::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open grammar spec: " + path);
  return load(in);
}

void GrammarSpec::validate() const {
  double total_freq = 0.0;
  for (const auto& [context, grammar] : contexts) {
    total_freq += grammar.freq_per_100k;
    if (grammar.freq_per_100k < 0.0) {
      throw FormatError("grammar: negative frequency for " + std::string(to_string(context)));
    }
    if (grammar.freq_per_100k > 0.0 &&
        (grammar.frames.empty() || grammar.licensors.empty() || grammar.npis.empty())) {
      throw FormatError("grammar: context " + std::string(to_string(context)) +
                        " has a frequency but lacks frames, licensors or npis");
    }
    for (const SynthFrame& f : grammar.frames) {
      f.validate();
      if (count_kind(f, Slot::Kind::Licensor) != 1 || count_kind(f, Slot::Kind::Npi) != 1 ||
          count_kind(f, Slot::Kind::Licensor1) != 0 || count_kind(f, Slot::Kind::Licensor2) != 0) {
        throw FormatError("grammar: context frames need exactly one {lic} and one {npi}");
      }
      const std::size_t lic = find_kind(f, Slot::Kind::Licensor);
      const std::size_t npi = find_kind(f, Slot::Kind::Npi);
      if (lic >= npi) throw FormatError("grammar: {lic} must precede {npi}");
      std::vector<int> heads;
      for (const Slot& s : f.slots) heads.push_back(s.head);
      if (!frame_distance(heads, lic, npi)) {
        throw FormatError("grammar: {lic} and {npi} are not connected in the frame tree");
      }
      for (const Slot& s : f.slots) {
        if (s.kind == Slot::Kind::Filler && !fillers.count(s.text)) {
          throw FormatError("grammar: unknown filler '" + s.text + "'");
        }
      }
    }
  }
  if (total_freq >= 100000.0) {
    throw FormatError("grammar: context frequencies must sum to < 100000 per 100k");
  }
  for (const SynthFrame& f : neutral_frames) {
    f.validate();
    for (const Slot& s : f.slots) {
      if (s.kind == Slot::Kind::Filler && !fillers.count(s.text)) {
        throw FormatError("grammar: unknown filler '" + s.text + "'");
      }
      if (s.kind != Slot::Kind::Filler && s.kind != Slot::Kind::Literal) {
        throw FormatError("grammar: neutral frames may only hold literals and fillers");
      }
    }
  }
  for (const SynthFrame& f : multi_frames) {
    f.validate();
    if (count_kind(f, Slot::Kind::Licensor1) != 1 || count_kind(f, Slot::Kind::Licensor2) != 1 ||
        count_kind(f, Slot::Kind::Npi) != 1 || count_kind(f, Slot::Kind::Licensor) != 0) {
      throw FormatError("grammar: multi frames need {lic1=..}, {lic2=..} and {npi}");
    }
    const std::size_t lic1 = find_kind(f, Slot::Kind::Licensor1);
    const std::size_t lic2 = find_kind(f, Slot::Kind::Licensor2);
    const std::size_t npi = find_kind(f, Slot::Kind::Npi);
    if (lic1 >= npi || lic2 >= npi) {
      throw FormatError("grammar: multi-frame licensors must precede {npi}");
    }
    for (const Slot& s : f.slots) {
      if ((s.kind == Slot::Kind::Licensor1 || s.kind == Slot::Kind::Licensor2) &&
          !contexts.count(s.multi_context)) {
        throw FormatError("grammar: multi frame references undefined context " +
                          std::string(to_string(s.multi_context)));
      }
      if (s.kind == Slot::Kind::Filler && !fillers.count(s.text)) {
        throw FormatError("grammar: unknown filler '" + s.text + "'");
      }
    }
    std::vector<int> heads;
    for (const Slot& s : f.slots) heads.push_back(s.head);
    const auto d1 = frame_distance(heads, lic1, npi);
    const auto d2 = frame_distance(heads, lic2, npi);
    if (!d1 || !d2) throw FormatError("grammar: multi-frame licensors must reach the npi");
    if (*d1 == *d2) {
      throw FormatError("grammar: multi frame has equal licensor distances, gold is ambiguous");
    }
    if (multi_npis.empty()) throw FormatError("grammar: [multi] section needs npi lines");
  }
  for (const auto& [name, words] : fillers) {
    if (words.empty()) throw FormatError("grammar: filler '" + name + "' is empty");
  }
}

std::size_t GrammarSpec::vocab_size() const {
  std::set<std::string> types;
  auto add_frame = [&](const SynthFrame& f) {
    for (const Slot& s : f.slots) {
      if (s.kind == Slot::Kind::Literal) types.insert(s.text);
    }
  };
  for (const SynthFrame& f : neutral_frames) add_frame(f);
  for (const SynthFrame& f : multi_frames) add_frame(f);
  for (const auto& [name, words] : fillers) types.insert(words.begin(), words.end());
  for (const auto& [context, grammar] : contexts) {
    for (const SynthFrame& f : grammar.frames) add_frame(f);
    for (const auto& phrase : grammar.licensors) types.insert(phrase.begin(), phrase.end());
    for (const auto& phrase : grammar.npis) types.insert(phrase.begin(), phrase.end());
  }
  for (const auto& phrase : multi_npis) types.insert(phrase.begin(), phrase.end());
  return types.size();
}

namespace {

struct SpanOut {
  std::size_t lic_start = 0, lic_end = 0;     // {lic} or {lic1}
  std::size_t lic2_start = 0, lic2_end = 0;   // {lic2}
  std::size_t npi_start = 0, npi_end = 0;
};

// Expands a frame given one option index per slot. Multiword expansions
// attach their non-initial tokens under the first token with deprel
// "fixed"; head indices are remapped from placeholder positions.
Sentence expand_frame(const SynthFrame& frame, const GrammarSpec& spec,
                      const ContextGrammar* context_grammar,
                      const std::vector<std::size_t>& choice, SpanOut* spans) {
  const std::size_t n = frame.slots.size();
  std::vector<const std::vector<std::string>*> expansion(n, nullptr);
  std::vector<std::string> singles(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Slot& s = frame.slots[i];
    switch (s.kind) {
      case Slot::Kind::Literal:
        singles[i] = s.text;
        break;
      case Slot::Kind::Filler:
        singles[i] = spec.fillers.at(s.text)[choice[i]];
        break;
      case Slot::Kind::Licensor:
        expansion[i] = &context_grammar->licensors[choice[i]];
        break;
      case Slot::Kind::Licensor1:
      case Slot::Kind::Licensor2:
        expansion[i] = &spec.contexts.at(s.multi_context).licensors[choice[i]];
        break;
      case Slot::Kind::Npi:
        expansion[i] = context_grammar ? &context_grammar->npis[choice[i]]
                                       : &spec.multi_npis[choice[i]];
        break;
    }
  }

  std::vector<std::size_t> offset(n, 0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    offset[i] = pos;
    pos += expansion[i] ? expansion[i]->size() : 1;
  }

  Sentence sent;
  for (std::size_t i = 0; i < n; ++i) {
    const Slot& s = frame.slots[i];
    const int head1 = s.head == 0 ? 0 : static_cast<int>(offset[static_cast<std::size_t>(s.head - 1)] + 1);
    const auto width = expansion[i] ? expansion[i]->size() : 1;
    for (std::size_t k = 0; k < width; ++k) {
      Token tok;
      tok.form = expansion[i] ? (*expansion[i])[k] : singles[i];
      tok.lower = case_fold(tok.form);
      if (k == 0) {
        tok.head = head1;
        tok.deprel = s.deprel;
      } else {
        tok.head = static_cast<int>(offset[i] + 1);
        tok.deprel = "fixed";
      }
      sent.tokens.push_back(std::move(tok));
    }
    if (spans) {
      if (s.kind == Slot::Kind::Licensor || s.kind == Slot::Kind::Licensor1) {
        spans->lic_start = offset[i];
        spans->lic_end = offset[i] + width;
      } else if (s.kind == Slot::Kind::Licensor2) {
        spans->lic2_start = offset[i];
        spans->lic2_end = offset[i] + width;
      } else if (s.kind == Slot::Kind::Npi) {
        spans->npi_start = offset[i];
        spans->npi_end = offset[i] + width;
      }
    }
  }
  return sent;
}

std::size_t slot_option_count(const SynthFrame& frame, std::size_t i, const GrammarSpec& spec,
                              const ContextGrammar* context_grammar) {
  const Slot& s = frame.slots[i];
  switch (s.kind) {
    case Slot::Kind::Literal:
      return 1;
    case Slot::Kind::Filler:
      return spec.fillers.at(s.text).size();
    case Slot::Kind::Licensor:
      return context_grammar->licensors.size();
    case Slot::Kind::Licensor1:
    case Slot::Kind::Licensor2:
      return spec.contexts.at(s.multi_context).licensors.size();
    case Slot::Kind::Npi:
      return context_grammar ? context_grammar->npis.size() : spec.multi_npis.size();
  }
  return 1;
}

std::vector<std::size_t> draw_choice(const SynthFrame& frame, const GrammarSpec& spec,
                                     const ContextGrammar* context_grammar, Rng& rng) {
  std::vector<std::size_t> choice(frame.slots.size(), 0);
  for (std::size_t i = 0; i < frame.slots.size(); ++i) {
    const std::size_t options = slot_option_count(frame, i, spec, context_grammar);
    choice[i] = options > 1 ? rng.uniform_index(options) : 0;
  }
  return choice;
}

std::optional<std::size_t> sentence_distance(const Sentence& sent, std::size_t a, std::size_t b) {
  std::vector<int> heads;
  for (const Token& t : sent.tokens) heads.push_back(t.head);
  if (a == b) return 0;
  return frame_distance(heads, a, b);
}

std::string span_text(const Sentence& sent, std::size_t start, std::size_t end) {
  std::string out;
  for (std::size_t k = start; k < end; ++k) {
    if (k > start) out.push_back(' ');
    out += sent.tokens[k].lower;
  }
  return out;
}

}  // namespace

SynthResult generate_corpus(const GrammarSpec& spec, std::size_t n_sentences, std::uint64_t seed) {
  spec.validate();
  if (n_sentences < 1) throw ArgumentError("generate_corpus: n_sentences must be >= 1");

  // planned schedule: round(freq * n / 100k) sentences per context
  std::vector<std::pair<ContextType, std::size_t>> quota;
  std::size_t total_scheduled = 0;
  for (const auto& [context, grammar] : spec.contexts) {
    const auto k = static_cast<std::size_t>(
        std::llround(grammar.freq_per_100k * static_cast<double>(n_sentences) / 100000.0));
    if (k > 0) quota.emplace_back(context, k);
    total_scheduled += k;
  }
  if (total_scheduled > n_sentences) {
    throw FormatError("generate_corpus: scheduled occurrences exceed corpus size");
  }
  if (total_scheduled < n_sentences && spec.neutral_frames.empty()) {
    throw FormatError("generate_corpus: neutral frames required to fill the corpus");
  }

  Rng rng(stream_seed(seed, "synth.corpus"));

  // seeded positions for the scheduled sentences (partial Fisher-Yates)
  std::vector<std::size_t> order(n_sentences);
  for (std::size_t i = 0; i < n_sentences; ++i) order[i] = i;
  for (std::size_t i = 0; i < total_scheduled; ++i) {
    const std::size_t j = i + rng.uniform_index(n_sentences - i);
    std::swap(order[i], order[j]);
  }
  // 255 = neutral, otherwise context index
  std::vector<unsigned char> assignment(n_sentences, 255);
  std::size_t cursor = 0;
  SynthResult result;
  for (const auto& [context, k] : quota) {
    result.scheduled[context_index(context)] = k;
    for (std::size_t i = 0; i < k; ++i) assignment[order[cursor++]] =
        static_cast<unsigned char>(context_index(context));
  }

  result.corpus.parsed = true;
  result.corpus.sentences.reserve(n_sentences);
  for (std::size_t sid = 0; sid < n_sentences; ++sid) {
    Sentence sent;
    if (assignment[sid] == 255) {
      const SynthFrame& frame =
          spec.neutral_frames[spec.neutral_frames.size() > 1
                                  ? rng.uniform_index(spec.neutral_frames.size())
                                  : 0];
      sent = expand_frame(frame, spec, nullptr, draw_choice(frame, spec, nullptr, rng), nullptr);
    } else {
      const ContextType context = all_contexts()[assignment[sid]];
      const ContextGrammar& grammar = spec.contexts.at(context);
      const SynthFrame& frame =
          grammar.frames[grammar.frames.size() > 1 ? rng.uniform_index(grammar.frames.size()) : 0];
      SpanOut spans;
      sent = expand_frame(frame, spec, &grammar, draw_choice(frame, spec, &grammar, rng), &spans);

      LicensedOccurrence occ;
      occ.sentence_id = sid;
      occ.context = context;
      occ.npi = OccurrenceSpan{spans.npi_start, spans.npi_end,
                               span_text(sent, spans.npi_start, spans.npi_end)};
      occ.licensor = OccurrenceSpan{spans.lic_start, spans.lic_end,
                                    span_text(sent, spans.lic_start, spans.lic_end)};
      const auto dist = sentence_distance(sent, spans.lic_start, spans.npi_start);
      if (!dist || *dist == 0) {
        throw StructureError("generate_corpus: licensor does not reach npi in expansion");
      }
      occ.tree_distance = *dist;
      result.gold.push_back(std::move(occ));
    }
    sent.id = sid;
    result.corpus.token_count += sent.tokens.size();
    result.corpus.sentences.push_back(std::move(sent));
  }
  return result;
}

SynthResult multi_licensor_suite(const GrammarSpec& spec, std::size_t n_sentences,
                                 std::uint64_t seed) {
  spec.validate();
  if (spec.multi_frames.empty()) {
    throw FormatError("multi_licensor_suite: grammar has no [multi] frames");
  }
  if (n_sentences < 1) throw ArgumentError("multi_licensor_suite: n_sentences must be >= 1");

  Rng rng(stream_seed(seed, "synth.multi"));
  SynthResult result;
  result.corpus.parsed = true;
  for (std::size_t sid = 0; sid < n_sentences; ++sid) {
    const SynthFrame& frame =
        spec.multi_frames[spec.multi_frames.size() > 1 ? rng.uniform_index(spec.multi_frames.size())
                                                       : 0];
    SpanOut spans;
    Sentence sent = expand_frame(frame, spec, nullptr, draw_choice(frame, spec, nullptr, rng), &spans);

    const auto d1 = sentence_distance(sent, spans.lic_start, spans.npi_start);
    const auto d2 = sentence_distance(sent, spans.lic2_start, spans.npi_start);
    if (!d1 || !d2 || *d1 == *d2) {
      throw StructureError("multi_licensor_suite: ambiguous or unreachable licensors");
    }
    const bool first_nearer = *d1 < *d2;
    const std::size_t lic_start = first_nearer ? spans.lic_start : spans.lic2_start;
    const std::size_t lic_end = first_nearer ? spans.lic_end : spans.lic2_end;
    ContextType context = ContextType::SimpleQuestions;
    for (const Slot& s : frame.slots) {
      if ((first_nearer && s.kind == Slot::Kind::Licensor1) ||
          (!first_nearer && s.kind == Slot::Kind::Licensor2)) {
        context = s.multi_context;
      }
    }

    LicensedOccurrence occ;
    occ.sentence_id = sid;
    occ.context = context;
    occ.npi = OccurrenceSpan{spans.npi_start, spans.npi_end,
                             span_text(sent, spans.npi_start, spans.npi_end)};
    occ.licensor = OccurrenceSpan{lic_start, lic_end, span_text(sent, lic_start, lic_end)};
    occ.tree_distance = std::min(*d1, *d2);
    result.gold.push_back(std::move(occ));

    sent.id = sid;
    result.corpus.token_count += sent.tokens.size();
    result.corpus.sentences.push_back(std::move(sent));
  }
  return result;
}

namespace {

// Window matcher independent of lexicon.cpp: joined-string lookups plus the
// same per-kind greedy longest-match sweep.
struct NaiveMatch {
  std::size_t start, end;
  EntryKind kind;
};

std::vector<NaiveMatch> naive_matches(const Sentence& sent, const Lexicon& lexicon) {
  std::set<std::string> npi_phrases, lic_phrases;
  std::size_t max_len = 1;
  for (const LexiconEntry& e : lexicon.entries()) {
    (e.kind == EntryKind::Npi ? npi_phrases : lic_phrases).insert(e.joined());
    max_len = std::max(max_len, e.phrase.size());
  }
  std::vector<NaiveMatch> out;
  for (EntryKind kind : {EntryKind::Npi, EntryKind::Licensor}) {
    const auto& phrases = kind == EntryKind::Npi ? npi_phrases : lic_phrases;
    std::size_t next = 0;
    for (std::size_t start = 0; start < sent.tokens.size(); ++start) {
      if (start < next) continue;
      std::size_t best = 0;
      for (std::size_t len = 1; len <= max_len && start + len <= sent.tokens.size(); ++len) {
        if (phrases.count(span_text(sent, start, start + len))) best = len;
      }
      if (best > 0) {
        out.push_back(NaiveMatch{start, start + best, kind});
        next = start + best;
      }
    }
  }
  return out;
}

// Gold exactness needs: the NPI matches must be exactly the intended spans,
// and no licensor match other than the intended ones may *precede* an NPI
// (later licensors can never be linked). Neutral frames must be NPI-free;
// a licensor with no NPI yields no occurrence and is harmless.
void check_expansion(const Sentence& sent, const Lexicon& lexicon,
                     const std::vector<std::pair<std::size_t, std::size_t>>& expected_lic,
                     const std::vector<std::pair<std::size_t, std::size_t>>& expected_npi,
                     const std::string& what) {
  std::vector<std::pair<std::size_t, std::size_t>> got_lic, got_npi;
  for (const NaiveMatch& m : naive_matches(sent, lexicon)) {
    (m.kind == EntryKind::Npi ? got_npi : got_lic).emplace_back(m.start, m.end);
  }
  auto fail = [&]() {
    std::string text;
    for (const Token& t : sent.tokens) {
      if (!text.empty()) text.push_back(' ');
      text += t.form;
    }
    throw FormatError("grammar/lexicon mismatch in " + what + ": stray or missing match in \"" +
                      text + "\"");
  };
  auto sorted = [](std::vector<std::pair<std::size_t, std::size_t>> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(got_npi) != sorted(expected_npi)) fail();
  if (expected_npi.empty()) return;
  std::size_t npi_start = expected_npi.front().first;
  for (const auto& span : expected_npi) npi_start = std::min(npi_start, span.first);
  std::vector<std::pair<std::size_t, std::size_t>> preceding;
  for (const auto& span : got_lic) {
    if (span.first < npi_start) preceding.push_back(span);
  }
  if (sorted(preceding) != sorted(expected_lic)) fail();
}

void check_frame_expansions(const SynthFrame& frame, const GrammarSpec& spec,
                            const ContextGrammar* grammar, bool is_multi, const Lexicon& lexicon,
                            const std::string& what) {
  std::vector<std::size_t> options(frame.slots.size());
  std::size_t total = 1;
  for (std::size_t i = 0; i < frame.slots.size(); ++i) {
    options[i] = slot_option_count(frame, i, spec, grammar);
    total *= options[i];
  }
  if (total > 200000) {
    throw FormatError("validate_against_lexicon: frame expansion space too large to check (" +
                      std::to_string(total) + ")");
  }
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<std::size_t> choice(frame.slots.size());
    std::size_t rest = flat;
    for (std::size_t i = 0; i < frame.slots.size(); ++i) {
      choice[i] = rest % options[i];
      rest /= options[i];
    }
    SpanOut spans;
    Sentence sent = expand_frame(frame, spec, grammar, choice, &spans);
    std::vector<std::pair<std::size_t, std::size_t>> lic, npi;
    if (grammar != nullptr) {
      lic.emplace_back(spans.lic_start, spans.lic_end);
      npi.emplace_back(spans.npi_start, spans.npi_end);
    } else if (is_multi) {
      lic.emplace_back(spans.lic_start, spans.lic_end);
      lic.emplace_back(spans.lic2_start, spans.lic2_end);
      npi.emplace_back(spans.npi_start, spans.npi_end);
    }
    check_expansion(sent, lexicon, lic, npi, what);
  }
}

}  // namespace

void validate_against_lexicon(const GrammarSpec& spec, const Lexicon& lexicon) {
  spec.validate();
  for (std::size_t i = 0; i < spec.neutral_frames.size(); ++i) {
    check_frame_expansions(spec.neutral_frames[i], spec, nullptr, false, lexicon,
                           "neutral frame " + std::to_string(i));
  }
  for (const auto& [context, grammar] : spec.contexts) {
    for (std::size_t i = 0; i < grammar.frames.size(); ++i) {
      check_frame_expansions(grammar.frames[i], spec, &grammar, false, lexicon,
                             std::string(to_string(context)) + " frame " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < spec.multi_frames.size(); ++i) {
    check_frame_expansions(spec.multi_frames[i], spec, nullptr, true, lexicon,
                           "multi frame " + std::to_string(i));
  }
}

}  // namespace polarity
