#include "polarity/scope.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "polarity/error.hpp"

namespace polarity {

using nlohmann::json;

std::size_t FrequencyTable::per_100k(ContextType c) const {
  if (sentence_count == 0) return 0;
  const double rate = static_cast<double>(counts[context_index(c)]) * 100000.0 /
                      static_cast<double>(sentence_count);
  return static_cast<std::size_t>(std::llround(rate));
}

std::optional<std::size_t> tree_distance(const Sentence& s, std::size_t i, std::size_t j) {
  const std::size_t n = s.tokens.size();
  if (i >= n || j >= n) {
    throw ArgumentError("tree_distance: token index out of range");
  }
  if (i == j) {
    throw ArgumentError("tree_distance: identical token indices");
  }
  // Climb from i to its root, recording depth of every node on the chain,
  // then climb from j until the chains meet.
  std::vector<int> depth_on_chain(n, -1);
  int cur = static_cast<int>(i) + 1;  // 1-based
  int depth = 0;
  while (cur != 0) {
    depth_on_chain[static_cast<std::size_t>(cur - 1)] = depth++;
    cur = s.tokens[static_cast<std::size_t>(cur - 1)].head;
  }
  cur = static_cast<int>(j) + 1;
  int steps = 0;
  while (cur != 0) {
    const int d = depth_on_chain[static_cast<std::size_t>(cur - 1)];
    if (d >= 0) return static_cast<std::size_t>(d + steps);
    cur = s.tokens[static_cast<std::size_t>(cur - 1)].head;
    ++steps;
  }
  return std::nullopt;  // different components of the forest
}

std::size_t span_anchor(const Sentence& s, std::size_t start, std::size_t end) {
  for (std::size_t k = start; k < end; ++k) {
    const int head = s.tokens[k].head;  // 1-based
    const bool head_inside =
        head != 0 && static_cast<std::size_t>(head - 1) >= start && static_cast<std::size_t>(head - 1) < end;
    if (!head_inside) return k;
  }
  return start;  // unreachable for acyclic spans; defined for completeness
}

namespace {

OccurrenceSpan to_span(const Sentence& s, const Match& m) {
  OccurrenceSpan span;
  span.start = m.start;
  span.end = m.end;
  for (std::size_t k = m.start; k < m.end; ++k) {
    if (k > m.start) span.text.push_back(' ');
    span.text += s.tokens[k].lower;
  }
  return span;
}

}  // namespace

std::vector<LicensedOccurrence> link_licensors(const Sentence& s, const std::vector<Match>& matches) {
  std::vector<LicensedOccurrence> out;
  for (const Match& npi : matches) {
    if (npi.entry->kind != EntryKind::Npi) continue;
    const std::size_t npi_anchor = span_anchor(s, npi.start, npi.end);

    const Match* best = nullptr;
    std::size_t best_tree = 0;
    std::size_t best_linear = 0;
    for (const Match& lic : matches) {
      if (lic.entry->kind != EntryKind::Licensor) continue;
      if (lic.start >= npi.start) continue;  // licensor precedes NPI linearly
      const std::size_t lic_anchor = span_anchor(s, lic.start, lic.end);
      const auto dist = tree_distance(s, lic_anchor, npi_anchor);
      if (!dist) continue;  // different tree component
      const std::size_t linear = npi.start - lic.start;
      const bool better = !best || *dist < best_tree ||
                          (*dist == best_tree && linear < best_linear) ||
                          (*dist == best_tree && linear == best_linear && lic.start < best->start);
      if (better) {
        best = &lic;
        best_tree = *dist;
        best_linear = linear;
      }
    }
    if (!best) continue;  // unlicensed NPI yields no occurrence

    LicensedOccurrence occ;
    occ.sentence_id = s.id;
    occ.npi = to_span(s, npi);
    occ.licensor = to_span(s, *best);
    occ.context = best->entry->context;
    occ.tree_distance = best_tree;
    out.push_back(std::move(occ));
  }
  return out;
}

ScanResult scan_corpus(const Corpus& corpus, const Lexicon& lexicon) {
  if (!corpus.parsed) {
    throw CapabilityError(
        "scan_corpus requires a parsed corpus; provide CoNLL-U input with dependency heads");
  }
  ScanResult result;
  result.table.sentence_count = corpus.sentences.size();
  for (const Sentence& s : corpus.sentences) {
    auto matches = find_matches(s, lexicon);
    for (LicensedOccurrence& occ : link_licensors(s, matches)) {
      result.table.counts[context_index(occ.context)] += 1;
      result.occurrences.push_back(std::move(occ));
    }
  }
  return result;
}

double licensor_selection_precision(const Corpus& corpus, const Lexicon& lexicon,
                                    const std::vector<LicensedOccurrence>& gold) {
  if (gold.empty()) {
    throw ArgumentError("licensor_selection_precision: empty gold set, rate undefined");
  }
  ScanResult scan = scan_corpus(corpus, lexicon);
  std::size_t correct = 0;
  for (const LicensedOccurrence& g : gold) {
    for (const LicensedOccurrence& p : scan.occurrences) {
      if (p.sentence_id == g.sentence_id && p.npi.start == g.npi.start && p.npi.end == g.npi.end) {
        correct += (p.licensor.start == g.licensor.start && p.licensor.end == g.licensor.end);
        break;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

namespace {

json span_to_json(const OccurrenceSpan& s) {
  return json{{"start", s.start}, {"end", s.end}, {"text", s.text}};
}

OccurrenceSpan span_from_json(const json& j) {
  OccurrenceSpan s;
  s.start = j.at("start").get<std::size_t>();
  s.end = j.at("end").get<std::size_t>();
  s.text = j.at("text").get<std::string>();
  return s;
}

}  // namespace

void write_occurrences_jsonl(const std::vector<LicensedOccurrence>& occ, std::ostream& out,
                             bool gold) {
  for (const LicensedOccurrence& o : occ) {
    json j{{"sentence_id", o.sentence_id},
           {"npi", span_to_json(o.npi)},
           {"licensor", span_to_json(o.licensor)},
           {"context", to_string(o.context)},
           {"tree_distance", o.tree_distance}};
    if (gold) j["gold"] = true;
    out << j.dump() << '\n';
  }
}

std::vector<LicensedOccurrence> read_occurrences_jsonl(std::istream& in) {
  std::vector<LicensedOccurrence> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("occurrences line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("provenance")) continue;  // header record
    LicensedOccurrence o;
    o.sentence_id = j.at("sentence_id").get<std::size_t>();
    o.npi = span_from_json(j.at("npi"));
    o.licensor = span_from_json(j.at("licensor"));
    auto ctx = context_from_string(j.at("context").get<std::string>());
    if (!ctx) throw ParseError("occurrences line " + std::to_string(line_no) + ": bad context");
    o.context = *ctx;
    o.tree_distance = j.at("tree_distance").get<std::size_t>();
    out.push_back(std::move(o));
  }
  return out;
}

void write_frequency_csv(const FrequencyTable& table, std::ostream& out) {
  out << "context,count,per_100k\n";
  for (ContextType c : all_contexts()) {
    out << to_string(c) << ',' << table.counts[context_index(c)] << ',' << table.per_100k(c)
        << '\n';
  }
}

FrequencyTable read_frequency_csv(std::istream& in) {
  FrequencyTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  bool have_counts = false;
  std::size_t max_count = 0;
  std::array<std::size_t, kContextCount> rates{};
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::istringstream cells(line);
    std::string ctx, count, rate;
    if (!std::getline(cells, ctx, ',') || !std::getline(cells, count, ',') ||
        !std::getline(cells, rate, ',')) {
      throw ParseError("frequency CSV line " + std::to_string(line_no) + ": expected 3 columns");
    }
    auto context = context_from_string(ctx);
    if (!context) {
      throw ParseError("frequency CSV line " + std::to_string(line_no) + ": unknown context");
    }
    try {
      table.counts[context_index(*context)] = std::stoull(count);
      rates[context_index(*context)] = std::stoull(rate);
    } catch (const std::exception&) {
      throw ParseError("frequency CSV line " + std::to_string(line_no) + ": bad number");
    }
    have_counts = true;
    max_count = std::max(max_count, table.counts[context_index(*context)]);
  }
  if (!have_counts) return table;
  // recover the sentence count from the densest context's count/rate pair
  for (ContextType c : all_contexts()) {
    const std::size_t idx = context_index(c);
    if (table.counts[idx] == max_count && rates[idx] > 0) {
      table.sentence_count = static_cast<std::size_t>(
          std::llround(static_cast<double>(table.counts[idx]) * 100000.0 /
                       static_cast<double>(rates[idx])));
      break;
    }
  }
  return table;
}

}  // namespace polarity
