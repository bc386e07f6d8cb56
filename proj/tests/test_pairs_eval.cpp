#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "polarity/error.hpp"
#include "polarity/pairs.hpp"
#include "polarity/rng.hpp"

using namespace polarity;

namespace {

std::vector<PairTemplate> templates_from(const std::string& text) {
  std::istringstream in(text);
  return load_templates(in);
}

std::string join(std::span<const std::string> tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s.push_back(' ');
    s += t;
  }
  return s;
}

// test double: phrase log probabilities from an explicit table
class LookupScorer : public PhraseScorer {
 public:
  void set(const std::string& prefix, const std::string& phrase, double logprob) {
    table_[prefix + "##" + phrase] = logprob;
  }
  double phrase_logprob(std::span<const std::string> prefix,
                        std::span<const std::string> phrase) const override {
    auto it = table_.find(join(prefix) + "##" + join(phrase));
    return it == table_.end() ? fallback_ : it->second;
  }
  double fallback_ = -50.0;

 private:
  std::map<std::string, double> table_;
};

// deterministic pseudo-coin: verdict depends on a hash of the pair id
class CoinScorer : public PhraseScorer {
 public:
  double phrase_logprob(std::span<const std::string> prefix,
                        std::span<const std::string> phrase) const override {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& t : prefix) {
      for (char c : t) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    }
    for (const auto& t : phrase) {
      for (char c : t) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    }
    return -1.0 - static_cast<double>(h % 1000) / 1000.0;
  }
};

const char* kAdverbsTemplate =
    "template adverbs\n"
    "pattern a lady {licensor} {npi} thought that the children saw the boy\n"
    "licensor rarely | sometimes\n"
    "npi ever\n"
    "end\n";

}  // namespace

TEST_CASE("template expansion reproduces the adverbs example pair") {
  const auto templates = templates_from(kAdverbsTemplate);
  REQUIRE(templates.size() == 1);
  const auto pairs = generate_pairs(templates, 1, 0);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].context == ContextType::Adverbs);
  CHECK(join(pairs[0].good_prefix) == "a lady rarely");
  CHECK(join(pairs[0].bad_prefix) == "a lady sometimes");
  CHECK(join(pairs[0].npi) == "ever");
  CHECK(pairs[0].good_prefix.size() == pairs[0].bad_prefix.size());
}

TEST_CASE("template validation") {
  SUBCASE("licensor alternates must have equal lengths") {
    CHECK_THROWS_AS(templates_from("template adverbs\n"
                                   "pattern {licensor} {npi} x\n"
                                   "licensor did he | he\n"
                                   "npi ever\n"
                                   "end\n"),
                    FormatError);
  }
  SUBCASE("empty filler slot is a format error") {
    CHECK_THROWS_AS(templates_from("template adverbs\n"
                                   "pattern {licensor} {subject} {npi}\n"
                                   "licensor rarely | sometimes\n"
                                   "npi ever\n"
                                   "end\n"),
                    FormatError);
  }
  SUBCASE("licensor must precede npi") {
    CHECK_THROWS_AS(templates_from("template adverbs\n"
                                   "pattern {npi} {licensor}\n"
                                   "licensor rarely | sometimes\n"
                                   "npi ever\n"
                                   "end\n"),
                    FormatError);
  }
  SUBCASE("unknown context label") {
    CHECK_THROWS_AS(templates_from("template negation\npattern {licensor} {npi}\nend\n"),
                    FormatError);
  }
}

TEST_CASE("generate_pairs") {
  SUBCASE("requesting more than the expansion space returns all distinct pairs") {
    const auto templates = templates_from(
        "template adverbs\n"
        "pattern x {licensor} {npi}\n"
        "licensor rarely | sometimes\n"
        "licensor hardly | often\n"
        "npi ever\n"
        "npi any\n"
        "end\n");
    const auto pairs = generate_pairs(templates, 10, 7);  // space is 2x2 = 4
    CHECK(pairs.size() == 4);
    std::set<std::string> distinct;
    for (const auto& p : pairs) {
      distinct.insert(join(p.good_prefix) + "/" + join(p.bad_prefix) + "/" + join(p.npi));
    }
    CHECK(distinct.size() == 4);
  }
  SUBCASE("same seed gives identical lists") {
    const auto templates = templates_from(
        "template adverbs\n"
        "pattern the {subject} {licensor} saw {npi} birds\n"
        "licensor rarely | sometimes\n"
        "licensor hardly | often\n"
        "npi ever\n"
        "npi any\n"
        "slot subject man\n"
        "slot subject woman\n"
        "slot subject child\n"
        "end\n");
    const auto a = generate_pairs(templates, 5, 42);
    const auto b = generate_pairs(templates, 5, 42);
    CHECK(a == b);
    const auto c = generate_pairs(templates, 5, 43);
    CHECK(a != c);  // different seed, different sample (space is 12)
  }
  SUBCASE("ids are sequential in output order") {
    const auto templates = templates_from(kAdverbsTemplate);
    const auto pairs = generate_pairs(templates, 1, 0);
    for (std::size_t i = 0; i < pairs.size(); ++i) CHECK(pairs[i].id == i);
  }
}

TEST_CASE("score_pair") {
  MinimalPair pair;
  pair.context = ContextType::Adverbs;
  pair.good_prefix = {"a", "lady", "rarely"};
  pair.bad_prefix = {"a", "lady", "sometimes"};
  pair.npi = {"ever"};

  LookupScorer model;
  SUBCASE("higher probability under the licensor scores correct") {
    model.set("a lady rarely", "ever", std::log(0.01));
    model.set("a lady sometimes", "ever", std::log(0.001));
    CHECK(score_pair(model, pair));
  }
  SUBCASE("exact tie scores incorrect") {
    model.set("a lady rarely", "ever", std::log(0.01));
    model.set("a lady sometimes", "ever", std::log(0.01));
    CHECK_FALSE(score_pair(model, pair));
  }
  SUBCASE("reversed probabilities score incorrect") {
    model.set("a lady rarely", "ever", std::log(0.001));
    model.set("a lady sometimes", "ever", std::log(0.01));
    CHECK_FALSE(score_pair(model, pair));
  }
  SUBCASE("swapping prefixes flips the verdict unless tied") {
    model.set("a lady rarely", "ever", std::log(0.01));
    model.set("a lady sometimes", "ever", std::log(0.001));
    MinimalPair swapped = pair;
    std::swap(swapped.good_prefix, swapped.bad_prefix);
    CHECK(score_pair(model, pair) != score_pair(model, swapped));
  }
  SUBCASE("adding a constant to both logprobs leaves the verdict unchanged") {
    model.set("a lady rarely", "ever", std::log(0.01));
    model.set("a lady sometimes", "ever", std::log(0.001));
    LookupScorer shifted;
    shifted.set("a lady rarely", "ever", std::log(0.01) + 3.7);
    shifted.set("a lady sometimes", "ever", std::log(0.001) + 3.7);
    CHECK(score_pair(model, pair) == score_pair(shifted, pair));
  }
}

namespace {

std::vector<MinimalPair> four_pair_fixture() {
  std::vector<MinimalPair> pairs;
  for (int i = 0; i < 4; ++i) {
    MinimalPair p;
    p.id = static_cast<std::size_t>(i);
    p.context = i < 3 ? ContextType::Only : ContextType::Questions;
    p.good_prefix = {"g" + std::to_string(i)};
    p.bad_prefix = {"b" + std::to_string(i)};
    p.npi = {"npi"};
    pairs.push_back(p);
  }
  return pairs;
}

}  // namespace

TEST_CASE("evaluate") {
  SUBCASE("always-correct model gives accuracy 1 everywhere") {
    LookupScorer model;
    model.fallback_ = -10.0;
    auto pairs = four_pair_fixture();
    for (const auto& p : pairs) model.set(join(p.good_prefix), "npi", -1.0);
    const auto acc = evaluate(model, pairs);
    REQUIRE(acc.size() == 2);
    for (const auto& a : acc) CHECK(a.accuracy() == doctest::Approx(1.0));
  }
  SUBCASE("hand-built fixture gives the exact fraction") {
    LookupScorer model;
    auto pairs = four_pair_fixture();
    // only-context: 2 of 3 correct; questions: the single pair incorrect
    model.set("g0", "npi", -1.0);
    model.set("b0", "npi", -2.0);
    model.set("g1", "npi", -1.0);
    model.set("b1", "npi", -2.0);
    model.set("g2", "npi", -3.0);
    model.set("b2", "npi", -2.0);
    model.set("g3", "npi", -2.0);
    model.set("b3", "npi", -1.0);
    const auto acc = evaluate(model, pairs);
    REQUIRE(acc.size() == 2);
    CHECK(acc[0].context == ContextType::Questions);
    CHECK(acc[0].total == 1);
    CHECK(acc[0].correct == 0);
    CHECK(acc[1].context == ContextType::Only);
    CHECK(acc[1].total == 3);
    CHECK(acc[1].correct == 2);
    CHECK(acc[1].accuracy() == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("pseudo-coin model stays within the binomial bound") {
    std::vector<MinimalPair> pairs;
    for (int i = 0; i < 400; ++i) {
      MinimalPair p;
      p.id = static_cast<std::size_t>(i);
      p.context = ContextType::Adverbs;
      p.good_prefix = {"p" + std::to_string(i), "good"};
      p.bad_prefix = {"p" + std::to_string(i), "bad"};
      p.npi = {"npi"};
      pairs.push_back(p);
    }
    const CoinScorer coin;
    const auto acc = evaluate(coin, pairs);
    REQUIRE(acc.size() == 1);
    // 4.5 sigma around 0.5 for n=400: +-0.1125
    CHECK(acc[0].accuracy() > 0.5 - 0.1125);
    CHECK(acc[0].accuracy() < 0.5 + 0.1125);
  }
  SUBCASE("evaluate is permutation-invariant") {
    LookupScorer model;
    auto pairs = four_pair_fixture();
    model.set("g0", "npi", -1.0);
    model.set("b0", "npi", -2.0);
    const auto a = evaluate(model, pairs);
    std::reverse(pairs.begin(), pairs.end());
    const auto b = evaluate(model, pairs);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].context == b[i].context);
      CHECK(a[i].correct == b[i].correct);
      CHECK(a[i].total == b[i].total);
    }
  }
  SUBCASE("empty pair list is an error") {
    LookupScorer model;
    CHECK_THROWS_AS(evaluate(model, {}), ArgumentError);
  }
}

TEST_CASE("pairs JSONL round-trips") {
  const auto templates = templates_from(kAdverbsTemplate);
  const auto pairs = generate_pairs(templates, 1, 0);
  std::ostringstream os;
  write_pairs_jsonl(pairs, os);
  std::istringstream is(os.str());
  CHECK(read_pairs_jsonl(is) == pairs);
}

TEST_CASE("evaluate_checkpoints") {
  // tiny trained checkpoints for integration-style checks
  std::istringstream corpus_text(
      "the dog rarely saw any birds\n"
      "the man sometimes saw the birds\n"
      "the dog rarely saw any birds\n"
      "the man sometimes saw the birds\n");
  Corpus corpus = tokenize_plain(corpus_text);
  corpus.parsed = true;
  LMConfig cfg = LMConfig::desk_profile();
  cfg.hidden_dim = 8;
  cfg.embed_dim = 4;
  cfg.batch_size = 2;
  cfg.bptt_len = 5;
  cfg.epochs = 2;
  cfg.checkpoint_every_batches = 4;
  cfg.seed = 6;
  const TrainResult r = train_lm(corpus, &corpus, cfg);
  REQUIRE(r.checkpoints.size() >= 2);

  const auto templates = templates_from(kAdverbsTemplate);
  const auto pairs = generate_pairs(templates, 1, 0);

  std::vector<CheckpointAxis> axes(r.checkpoints.size());
  for (std::size_t i = 0; i < axes.size(); ++i) {
    axes[i].step = r.checkpoints[i].step;
    axes[i].tokens_seen = static_cast<double>(r.checkpoints[i].tokens_seen);
    axes[i].examples_seen[context_index(ContextType::Adverbs)] = static_cast<double>(i);
  }

  SUBCASE("one checkpoint gives curves of length one") {
    const std::vector<CheckpointedModel> one = {r.checkpoints.front()};
    const std::vector<CheckpointAxis> one_axis = {axes.front()};
    const auto curves = evaluate_checkpoints(one, pairs, one_axis);
    REQUIRE(curves.size() == 1);
    CHECK(curves[0].points.size() == 1);
  }
  SUBCASE("accuracies lie in the unit interval and match per-checkpoint evaluate") {
    const auto curves = evaluate_checkpoints(r.checkpoints, pairs, axes);
    REQUIRE(curves.size() == 1);
    REQUIRE(curves[0].points.size() == r.checkpoints.size());
    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
      const CurvePoint& p = curves[0].points[i];
      CHECK(p.accuracy >= 0.0);
      CHECK(p.accuracy <= 1.0);
      // recompute oracle: no cross-checkpoint state
      const auto acc = evaluate(r.checkpoints[i], pairs);
      REQUIRE(acc.size() == 1);
      CHECK(p.accuracy == doctest::Approx(acc[0].accuracy()));
      CHECK(p.step == r.checkpoints[i].step);
    }
  }
  SUBCASE("unordered checkpoints are rejected") {
    std::vector<CheckpointedModel> shuffled = {r.checkpoints[1], r.checkpoints[0]};
    const std::vector<CheckpointAxis> two = {axes[1], axes[0]};
    CHECK_THROWS_AS(evaluate_checkpoints(shuffled, pairs, two), ArgumentError);
  }
  SUBCASE("axis count must match") {
    const std::vector<CheckpointAxis> short_axes = {axes[0]};
    CHECK_THROWS_AS(evaluate_checkpoints(r.checkpoints, pairs, short_axes), ArgumentError);
  }
}

TEST_CASE("results CSV round-trips") {
  std::vector<EvalRow> rows;
  EvalRow r;
  r.step = 50;
  r.tokens_seen = 1600;
  r.examples_seen = 12;
  r.context = ContextType::Adverbs;
  r.correct = 3;
  r.total = 4;
  rows.push_back(r);
  r.step = 100;
  r.examples_seen = 24.5;
  rows.push_back(r);
  std::ostringstream os;
  write_results_csv(rows, os);
  std::istringstream is(os.str());
  const auto back = read_results_csv(is);
  REQUIRE(back.size() == 2);
  CHECK(back[0].step == 50);
  CHECK(back[1].examples_seen == 24.5);
  CHECK(back[0].correct == 3);
}
