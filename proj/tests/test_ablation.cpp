#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "polarity/ablation.hpp"
#include "polarity/error.hpp"
#include "polarity/rng.hpp"

using namespace polarity;

namespace {

Sentence sent(const std::vector<std::string>& forms, const std::vector<int>& heads) {
  Sentence s;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    Token t;
    t.form = forms[i];
    t.lower = case_fold(forms[i]);
    t.head = heads[i];
    t.deprel = heads[i] == 0 ? "root" : "dep";
    s.tokens.push_back(t);
  }
  return s;
}

Lexicon test_lexicon() {
  std::istringstream in(
      "any\tnpi\n"
      "ever\tnpi\n"
      "not\tlicensor\tsentential_negation\n"
      "rarely\tlicensor\tadverbs\n");
  return Lexicon::load(in);
}

Corpus push(Corpus c, Sentence s) {
  s.id = c.sentences.size();
  c.token_count += s.size();
  c.sentences.push_back(std::move(s));
  return c;
}

// negation sentence (length 7), adverb sentence (length 5), neutrals
Corpus demo_corpus() {
  Corpus c;
  c.parsed = true;
  c = push(std::move(c), sent({"the", "man", "did", "not", "buy", "any", "fruit"},
                              {2, 5, 5, 5, 0, 7, 5}));
  c = push(std::move(c), sent({"dogs", "rarely", "see", "any", "birds"}, {3, 3, 0, 5, 3}));
  c = push(std::move(c), sent({"aa", "bb", "cc", "dd", "ee", "ff", "gg"}, {2, 0, 2, 2, 2, 2, 2}));
  c = push(std::move(c), sent({"hh", "ii", "jj", "kk", "ll", "mm", "nn"}, {2, 0, 2, 2, 2, 2, 2}));
  c = push(std::move(c), sent({"oo", "pp", "qq", "rr", "ss", "tt", "uu"}, {2, 0, 2, 2, 2, 2, 2}));
  c = push(std::move(c), sent({"vv", "ww", "xx", "yy", "zz"}, {2, 0, 2, 2, 2}));
  return c;
}

}  // namespace

TEST_CASE("identity plan when only the kept context occurs") {
  Corpus c;
  c.parsed = true;
  c = push(std::move(c), sent({"dogs", "rarely", "see", "any", "birds"}, {3, 3, 0, 5, 3}));
  c = push(std::move(c), sent({"aa", "bb", "cc", "dd", "ee"}, {2, 0, 2, 2, 2}));
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  const AblationPlan plan = plan_ablation(c, scan.occurrences, ContextType::Adverbs, 5);
  CHECK(plan.replacements.empty());
  CHECK(plan.summary.replaced == 0);
  CHECK(apply_ablation(c, plan) == c);
}

TEST_CASE("seeded donor choice is the enumerated RNG draw") {
  const Corpus c = demo_corpus();
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  // keep adverbs: the length-7 negation sentence is replaced; donors of
  // length 7 are sentences 2, 3, 4 (in id order)
  const std::uint64_t seed = 99;
  const AblationPlan plan = plan_ablation(c, scan.occurrences, ContextType::Adverbs, seed);
  REQUIRE(plan.replacements.size() == 1);
  CHECK(plan.replacements[0].first == 0);
  Rng rng(seed);
  const std::size_t expected_donor = std::vector<std::size_t>{2, 3, 4}[rng.uniform_index(3)];
  CHECK(plan.replacements[0].second == expected_donor);
}

TEST_CASE("same seed gives an identical plan, twice") {
  const Corpus c = demo_corpus();
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  const AblationPlan a = plan_ablation(c, scan.occurrences, ContextType::Adverbs, 123);
  const AblationPlan b = plan_ablation(c, scan.occurrences, ContextType::Adverbs, 123);
  CHECK(a.replacements == b.replacements);
  std::ostringstream ja, jb;
  write_plan_json(a, ja);
  write_plan_json(b, jb);
  CHECK(ja.str() == jb.str());
}

TEST_CASE("isolation and conservation under rescan") {
  const Corpus c = demo_corpus();
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  REQUIRE(scan.occurrences.size() == 2);

  for (ContextType keep : {ContextType::SententialNegation, ContextType::Adverbs}) {
    CAPTURE(to_string(keep));
    const AblationPlan plan = plan_ablation(c, scan.occurrences, keep, 7);
    const Corpus ablated = apply_ablation(c, plan);
    CHECK(ablated.sentences.size() == c.sentences.size());

    const auto rescan = scan_corpus(ablated, lex);
    std::vector<std::string> kept_before, kept_after;
    for (const auto& o : scan.occurrences) {
      if (o.context == keep) kept_before.push_back(o.licensor.text + "|" + o.npi.text);
    }
    for (const auto& o : rescan.occurrences) {
      CHECK(o.context == keep);  // isolation
      kept_after.push_back(o.licensor.text + "|" + o.npi.text);
    }
    std::sort(kept_before.begin(), kept_before.end());
    std::sort(kept_after.begin(), kept_after.end());
    CHECK(kept_before == kept_after);  // conservation
  }
}

TEST_CASE("token count preserved with exact-length donors") {
  const Corpus c = demo_corpus();
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  const AblationPlan plan = plan_ablation(c, scan.occurrences, ContextType::Adverbs, 3);
  const Corpus ablated = apply_ablation(c, plan);
  CHECK(plan.summary.length_fallbacks == 0);
  CHECK(ablated.token_count == c.token_count);
  // non-replaced sentences are bit-identical
  for (std::size_t i = 0; i < c.sentences.size(); ++i) {
    bool replaced = false;
    for (const auto& [sid, donor] : plan.replacements) replaced |= (sid == i);
    if (!replaced) CHECK(ablated.sentences[i].tokens == c.sentences[i].tokens);
  }
}

TEST_CASE("length fallback within +-2 tokens, shorter preferred") {
  Corpus c;
  c.parsed = true;
  c = push(std::move(c), sent({"the", "man", "did", "not", "buy", "any", "fruit"},
                              {2, 5, 5, 5, 0, 7, 5}));                       // length 7
  c = push(std::move(c), sent({"aa", "bb", "cc", "dd", "ee", "ff"}, {2, 0, 2, 2, 2, 2}));  // 6
  c = push(std::move(c), sent({"gg", "hh", "ii", "jj", "kk", "ll", "mm", "nn"},
                              {2, 0, 2, 2, 2, 2, 2, 2}));                    // 8
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  const AblationPlan plan = plan_ablation(c, scan.occurrences, ContextType::Adverbs, 1);
  REQUIRE(plan.replacements.size() == 1);
  CHECK(plan.replacements[0].second == 1);  // length 6 preferred over 8
  CHECK(plan.summary.length_fallbacks == 1);
  const Corpus ablated = apply_ablation(c, plan);
  CHECK(ablated.sentences.size() == c.sentences.size());
  CHECK(ablated.token_count == c.token_count - 1);  // one token of slack
}

TEST_CASE("no donor in the window is a planning error") {
  Corpus c;
  c.parsed = true;
  c = push(std::move(c), sent({"the", "man", "did", "not", "buy", "any", "fruit"},
                              {2, 5, 5, 5, 0, 7, 5}));  // length 7
  c = push(std::move(c), sent({"aa", "bb"}, {2, 0}));   // length 2, outside +-2
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  CHECK_THROWS_WITH_AS(plan_ablation(c, scan.occurrences, ContextType::Adverbs, 1),
                       doctest::Contains("sentence 0"), PlanningError);
}

TEST_CASE("mixed keep+other sentences are replaced and the loss is reported") {
  Corpus c;
  c.parsed = true;
  // one sentence holding both an adverbs and a negation occurrence
  c = push(std::move(c), sent({"dogs", "rarely", "see", "any", "birds", "not", "ever"},
                              {3, 3, 0, 5, 3, 3, 6}));
  c = push(std::move(c), sent({"aa", "bb", "cc", "dd", "ee", "ff", "gg"}, {2, 0, 2, 2, 2, 2, 2}));
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  bool has_adverbs = false, has_negation = false;
  for (const auto& o : scan.occurrences) {
    has_adverbs |= o.context == ContextType::Adverbs;
    has_negation |= o.context == ContextType::SententialNegation;
  }
  REQUIRE(has_adverbs);
  REQUIRE(has_negation);
  const AblationPlan plan = plan_ablation(c, scan.occurrences, ContextType::Adverbs, 9);
  REQUIRE(plan.replacements.size() == 1);
  CHECK(plan.summary.kept_occurrences_lost >= 1);
  const auto rescan = scan_corpus(apply_ablation(c, plan), lex);
  CHECK(rescan.occurrences.empty());  // the mixed sentence is gone entirely
}

TEST_CASE("plan JSON round-trips") {
  const Corpus c = demo_corpus();
  const Lexicon lex = test_lexicon();
  const auto scan = scan_corpus(c, lex);
  const AblationPlan plan = plan_ablation(c, scan.occurrences, ContextType::Adverbs, 17);
  std::ostringstream os;
  write_plan_json(plan, os);
  std::istringstream is(os.str());
  const AblationPlan back = read_plan_json(is);
  CHECK(back.keep == plan.keep);
  CHECK(back.seed == plan.seed);
  CHECK(back.replacements == plan.replacements);
  CHECK(apply_ablation(c, back) == apply_ablation(c, plan));
}

TEST_CASE("plan referencing a missing sentence is rejected") {
  const Corpus c = demo_corpus();
  AblationPlan plan;
  plan.keep = ContextType::Adverbs;
  plan.replacements.emplace_back(99, 1);
  CHECK_THROWS_AS(apply_ablation(c, plan), ArgumentError);
}
