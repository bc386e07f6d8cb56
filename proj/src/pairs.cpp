#include "polarity/pairs.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "polarity/error.hpp"
#include "polarity/num_format.hpp"
#include "polarity/rng.hpp"

namespace polarity {

using nlohmann::json;

std::size_t PairTemplate::expansion_count() const {
  std::size_t n = licensor_pairs.size() * npi_fillers.size();
  for (const auto& [name, fillers] : slot_fillers) n *= fillers.size();
  return n;
}

void PairTemplate::validate() const {
  if (licensor_pairs.empty()) throw FormatError("template: licensor slot has no alternates");
  if (npi_fillers.empty()) throw FormatError("template: npi slot has no fillers");
  for (const auto& [good, bad] : licensor_pairs) {
    if (good.empty() || bad.empty()) throw FormatError("template: empty licensor alternate");
    if (good.size() != bad.size()) {
      throw FormatError("template: licensor/non-licensor alternates must have equal length");
    }
  }
  for (const auto& f : npi_fillers) {
    if (f.empty()) throw FormatError("template: empty npi filler");
  }
  bool saw_licensor = false, saw_npi = false;
  for (const PatternTok& t : pattern) {
    if (!t.is_slot) continue;
    if (t.text == "licensor") {
      if (saw_npi) throw FormatError("template: {licensor} must precede {npi}");
      saw_licensor = true;
    } else if (t.text == "npi") {
      saw_npi = true;
    } else {
      auto it = slot_fillers.find(t.text);
      if (it == slot_fillers.end() || it->second.empty()) {
        throw FormatError("template: slot {" + t.text + "} has no fillers");
      }
      for (const auto& f : it->second) {
        if (f.empty()) throw FormatError("template: empty filler for slot {" + t.text + "}");
      }
    }
  }
  if (!saw_licensor || !saw_npi) {
    throw FormatError("template: pattern must contain {licensor} and {npi}");
  }
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

std::vector<PairTemplate> load_templates(std::istream& in) {
  std::vector<PairTemplate> templates;
  PairTemplate cur;
  bool open = false;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& msg) {
    throw FormatError("templates line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream is(line);
    std::string keyword;
    is >> keyword;

    if (keyword == "template") {
      if (open) fail("missing 'end' before new template");
      std::string label;
      is >> label;
      auto ctx = context_from_string(label);
      if (!ctx) fail("unknown context '" + label + "'");
      cur = PairTemplate{};
      cur.context = *ctx;
      open = true;
    } else if (keyword == "end") {
      if (!open) fail("'end' without template");
      cur.validate();
      templates.push_back(std::move(cur));
      open = false;
    } else if (!open) {
      fail("'" + keyword + "' outside a template block");
    } else if (keyword == "pattern") {
      std::string tok;
      while (is >> tok) {
        if (tok.size() >= 2 && tok.front() == '{' && tok.back() == '}') {
          cur.pattern.push_back({tok.substr(1, tok.size() - 2), true});
        } else {
          cur.pattern.push_back({tok, false});
        }
      }
      if (cur.pattern.empty()) fail("empty pattern");
    } else if (keyword == "licensor") {
      std::string rest;
      std::getline(is, rest);
      const auto bar = rest.find('|');
      if (bar == std::string::npos) fail("licensor line needs 'good | bad'");
      auto good = split_ws(rest.substr(0, bar));
      auto bad = split_ws(rest.substr(bar + 1));
      if (good.empty() || bad.empty()) fail("empty licensor alternate");
      cur.licensor_pairs.emplace_back(std::move(good), std::move(bad));
    } else if (keyword == "npi") {
      std::string rest;
      std::getline(is, rest);
      auto toks = split_ws(rest);
      if (toks.empty()) fail("empty npi filler");
      cur.npi_fillers.push_back(std::move(toks));
    } else if (keyword == "slot") {
      std::string name;
      is >> name;
      if (name.empty()) fail("slot line needs a name");
      std::string rest;
      std::getline(is, rest);
      auto toks = split_ws(rest);
      if (toks.empty()) fail("empty filler for slot " + name);
      cur.slot_fillers[name].push_back(std::move(toks));
    } else {
      fail("unknown keyword '" + keyword + "'");
    }
  }
  if (open) throw FormatError("templates: unterminated template block");
  return templates;
}

std::vector<PairTemplate> load_templates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open template file: " + path);
  return load_templates(in);
}

namespace {

// Expands assignment index `flat` (mixed radix over licensor, npi, slots).
MinimalPair expand(const PairTemplate& tpl, std::size_t flat) {
  const std::size_t li = flat % tpl.licensor_pairs.size();
  flat /= tpl.licensor_pairs.size();
  const std::size_t ni = flat % tpl.npi_fillers.size();
  flat /= tpl.npi_fillers.size();
  std::map<std::string, std::size_t> slot_choice;
  for (const auto& [name, fillers] : tpl.slot_fillers) {
    slot_choice[name] = flat % fillers.size();
    flat /= fillers.size();
  }

  MinimalPair pair;
  pair.context = tpl.context;
  pair.npi = tpl.npi_fillers[ni];
  for (const PairTemplate::PatternTok& t : tpl.pattern) {
    if (t.is_slot && t.text == "npi") break;  // prefix ends at the NPI slot
    if (!t.is_slot) {
      pair.good_prefix.push_back(t.text);
      pair.bad_prefix.push_back(t.text);
      continue;
    }
    if (t.text == "licensor") {
      const auto& [good, bad] = tpl.licensor_pairs[li];
      pair.good_prefix.insert(pair.good_prefix.end(), good.begin(), good.end());
      pair.bad_prefix.insert(pair.bad_prefix.end(), bad.begin(), bad.end());
    } else {
      const auto& f = tpl.slot_fillers.at(t.text)[slot_choice[t.text]];
      pair.good_prefix.insert(pair.good_prefix.end(), f.begin(), f.end());
      pair.bad_prefix.insert(pair.bad_prefix.end(), f.begin(), f.end());
    }
  }
  return pair;
}

std::string pair_key(const MinimalPair& p) {
  std::string key;
  for (const auto& t : p.good_prefix) key += t + ' ';
  key += '\x01';
  for (const auto& t : p.bad_prefix) key += t + ' ';
  key += '\x01';
  for (const auto& t : p.npi) key += t + ' ';
  return key;
}

}  // namespace

std::vector<MinimalPair> generate_pairs(const std::vector<PairTemplate>& templates,
                                        std::size_t n_per_context, std::uint64_t seed) {
  std::vector<MinimalPair> out;
  for (ContextType context : all_contexts()) {
    std::vector<const PairTemplate*> group;
    for (const PairTemplate& t : templates) {
      if (t.context == context) {
        t.validate();
        group.push_back(&t);
      }
    }
    if (group.empty()) continue;

    std::size_t space = 0;
    for (const PairTemplate* t : group) space += t->expansion_count();

    auto materialize = [&](std::size_t flat) {
      for (const PairTemplate* t : group) {
        if (flat < t->expansion_count()) return expand(*t, flat);
        flat -= t->expansion_count();
      }
      throw ArgumentError("generate_pairs: internal index overflow");
    };

    Rng rng(stream_seed(seed, std::string("pairs.") + std::string(to_string(context))));
    std::unordered_set<std::string> seen;
    std::vector<MinimalPair> picked;

    if (space <= n_per_context) {
      for (std::size_t flat = 0; flat < space; ++flat) {
        MinimalPair p = materialize(flat);
        if (seen.insert(pair_key(p)).second) picked.push_back(std::move(p));
      }
      if (picked.size() < n_per_context) {
        std::cerr << "warning: context " << to_string(context) << " has only " << picked.size()
                  << " distinct pairs (requested " << n_per_context << ")\n";
      }
    } else if (space <= 1000000) {
      // seeded partial shuffle over assignment indices
      std::vector<std::size_t> order(space);
      for (std::size_t i = 0; i < space; ++i) order[i] = i;
      std::size_t cursor = 0;
      while (picked.size() < n_per_context && cursor < space) {
        const std::size_t j = cursor + rng.uniform_index(space - cursor);
        std::swap(order[cursor], order[j]);
        MinimalPair p = materialize(order[cursor]);
        ++cursor;
        if (seen.insert(pair_key(p)).second) picked.push_back(std::move(p));
      }
      if (picked.size() < n_per_context) {
        std::cerr << "warning: context " << to_string(context) << " has only " << picked.size()
                  << " distinct pairs (requested " << n_per_context << ")\n";
      }
    } else {
      // space far exceeds the request: rejection sampling on indices
      std::unordered_set<std::size_t> used;
      while (picked.size() < n_per_context) {
        const std::size_t flat = rng.uniform_index(space);
        if (!used.insert(flat).second) continue;
        MinimalPair p = materialize(flat);
        if (seen.insert(pair_key(p)).second) picked.push_back(std::move(p));
      }
    }
    for (MinimalPair& p : picked) {
      p.id = out.size();
      out.push_back(std::move(p));
    }
  }
  return out;
}

bool score_pair(const PhraseScorer& model, const MinimalPair& pair) {
  const double good = model.phrase_logprob(pair.good_prefix, pair.npi);
  const double bad = model.phrase_logprob(pair.bad_prefix, pair.npi);
  return good > bad;
}

std::vector<ContextAccuracy> evaluate(const PhraseScorer& model,
                                      const std::vector<MinimalPair>& pairs) {
  if (pairs.empty()) throw ArgumentError("evaluate: empty pair list");
  std::array<ContextAccuracy, kContextCount> acc{};
  for (ContextType c : all_contexts()) acc[context_index(c)].context = c;
  for (const MinimalPair& p : pairs) {
    ContextAccuracy& a = acc[context_index(p.context)];
    a.total += 1;
    a.correct += score_pair(model, p) ? 1 : 0;
  }
  std::vector<ContextAccuracy> out;
  for (const ContextAccuracy& a : acc) {
    if (a.total > 0) out.push_back(a);
  }
  return out;
}

std::vector<EvalRow> evaluate_checkpoint_rows(std::span<const CheckpointedModel> checkpoints,
                                              const std::vector<MinimalPair>& pairs,
                                              std::span<const CheckpointAxis> axes) {
  if (checkpoints.size() != axes.size()) {
    throw ArgumentError("evaluate_checkpoint_rows: axes must match checkpoints one-to-one");
  }
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i].step <= checkpoints[i - 1].step) {
      throw ArgumentError("evaluate_checkpoint_rows: checkpoints must be ordered by step");
    }
  }
  std::vector<EvalRow> rows;
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    for (const ContextAccuracy& a : evaluate(checkpoints[i], pairs)) {
      EvalRow row;
      row.step = axes[i].step;
      row.tokens_seen = axes[i].tokens_seen;
      row.examples_seen = axes[i].examples_seen[context_index(a.context)];
      row.context = a.context;
      row.correct = a.correct;
      row.total = a.total;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<LearningCurve> curves_from_rows(const std::vector<EvalRow>& rows,
                                            const std::string& seed_tag) {
  std::vector<LearningCurve> curves;
  for (ContextType context : all_contexts()) {
    LearningCurve c;
    c.context = context;
    c.seed_tag = seed_tag;
    for (const EvalRow& r : rows) {
      if (r.context != context) continue;
      c.points.push_back(CurvePoint{r.step, r.tokens_seen, r.examples_seen,
                                    static_cast<double>(r.correct) / static_cast<double>(r.total)});
    }
    if (!c.points.empty()) curves.push_back(std::move(c));
  }
  return curves;
}

std::vector<LearningCurve> evaluate_checkpoints(std::span<const CheckpointedModel> checkpoints,
                                                const std::vector<MinimalPair>& pairs,
                                                std::span<const CheckpointAxis> axes) {
  return curves_from_rows(evaluate_checkpoint_rows(checkpoints, pairs, axes), "");
}

void write_pairs_jsonl(const std::vector<MinimalPair>& pairs, std::ostream& out) {
  for (const MinimalPair& p : pairs) {
    json j{{"id", p.id},
           {"context", to_string(p.context)},
           {"good_prefix", p.good_prefix},
           {"bad_prefix", p.bad_prefix},
           {"npi", p.npi}};
    out << j.dump() << '\n';
  }
}

std::vector<MinimalPair> read_pairs_jsonl(std::istream& in) {
  std::vector<MinimalPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("pairs line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("provenance")) continue;  // header record
    MinimalPair p;
    p.id = j.at("id").get<std::size_t>();
    auto ctx = context_from_string(j.at("context").get<std::string>());
    if (!ctx) throw ParseError("pairs line " + std::to_string(line_no) + ": bad context");
    p.context = *ctx;
    p.good_prefix = j.at("good_prefix").get<std::vector<std::string>>();
    p.bad_prefix = j.at("bad_prefix").get<std::vector<std::string>>();
    p.npi = j.at("npi").get<std::vector<std::string>>();
    pairs.push_back(std::move(p));
  }
  return pairs;
}

void write_results_csv(const std::vector<EvalRow>& rows, std::ostream& out) {
  out << "checkpoint_step,tokens_seen,context_examples_seen,context,correct,total,accuracy\n";
  for (const EvalRow& r : rows) {
    out << r.step << ',' << format_double(r.tokens_seen) << ',' << format_double(r.examples_seen)
        << ',' << to_string(r.context) << ',' << r.correct << ',' << r.total << ','
        << format_double(static_cast<double>(r.correct) / static_cast<double>(r.total)) << '\n';
  }
}

std::vector<EvalRow> read_results_csv(std::istream& in) {
  std::vector<EvalRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::istringstream cells(line);
    std::string step, tokens, examples, ctx, correct, total, acc;
    if (!std::getline(cells, step, ',') || !std::getline(cells, tokens, ',') ||
        !std::getline(cells, examples, ',') || !std::getline(cells, ctx, ',') ||
        !std::getline(cells, correct, ',') || !std::getline(cells, total, ',') ||
        !std::getline(cells, acc, ',')) {
      throw ParseError("results CSV line " + std::to_string(line_no) + ": expected 7 columns");
    }
    auto context = context_from_string(ctx);
    if (!context) throw ParseError("results CSV line " + std::to_string(line_no) + ": bad context");
    EvalRow r;
    try {
      r.step = std::stoull(step);
      r.tokens_seen = std::stod(tokens);
      r.examples_seen = std::stod(examples);
      r.correct = std::stoull(correct);
      r.total = std::stoull(total);
    } catch (const std::exception&) {
      throw ParseError("results CSV line " + std::to_string(line_no) + ": bad number");
    }
    r.context = *context;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace polarity
