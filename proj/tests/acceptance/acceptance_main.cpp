// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polarity/ablation.hpp"
#include "polarity/dynamics.hpp"
#include "polarity/experiment.hpp"
#include "polarity/gradcheck.hpp"
#include "polarity/lm.hpp"
#include "polarity/pairs.hpp"
#include "polarity/rng.hpp"
#include "polarity/run_config.hpp"
#include "polarity/scope.hpp"
#include "polarity/synth.hpp"

using namespace polarity;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %s — %s\n", pass ? "PASS" : "FAIL", number, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string data_path(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "polarity_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

// ---------------------------------------------------------------- 1
void criterion_gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  const double worst = gradient_check_many(25, 12345);
  const double secs = seconds_since(t0);
  report(1, "Gradient correctness", worst < 1e-4 && secs < 30.0,
         "max rel error " + std::to_string(worst) + " over 25 configs in " +
             std::to_string(secs) + "s (limits 1e-4, 30s)");
}

// ---------------------------------------------------------------- 2
void criterion_overfit() {
  // 50-sentence deterministic synthetic corpus (5 distinct frames x 10)
  std::istringstream grammar_text(
      "[neutral]\n"
      "frame the/2/det man/3/nsubj saw/0/root the/5/det bird/3/obj near/8/case the/8/det garden/3/obl\n"
      "frame a/2/det woman/3/nsubj liked/0/root a/5/det song/3/obj about/8/case the/8/det river/3/obl\n"
      "frame the/2/det dog/3/nsubj found/0/root a/5/det tree/3/obj behind/8/case the/8/det house/3/obl\n"
      "frame a/2/det child/3/nsubj watched/0/root the/5/det boats/3/obj on/8/case the/8/det water/3/obl\n"
      "frame the/2/det farmer/3/nsubj carried/0/root apples/3/obj to/6/case the/7/det market/3/obl\n");
  const GrammarSpec grammar = GrammarSpec::load(grammar_text);
  const SynthResult synth = generate_corpus(grammar, 50, 1);

  LMConfig cfg = LMConfig::desk_profile();
  cfg.hidden_dim = 32;
  cfg.epochs = 200;
  cfg.checkpoint_every_batches = 1000000;
  cfg.seed = 1;

  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult r = train_lm(synth.corpus, &synth.corpus, cfg);
  const double secs = seconds_since(t0);
  report(2, "Overfit sanity", r.final_perplexity < 1.5 && secs < 60.0,
         "training perplexity " + std::to_string(r.final_perplexity) + " after " +
             std::to_string(cfg.epochs) + " epochs in " + std::to_string(secs) +
             "s (limits 1.5, 60s)");
}

// ---------------------------------------------------------------- 3
void criterion_determinism() {
  RunConfig cfg;
  cfg.npis_path = data_path("npis.tsv");
  cfg.licensors_path = data_path("licensors.tsv");
  cfg.grammar_path = data_path("grammar_experiment.txt");
  cfg.templates_path = data_path("templates_experiment.txt");
  cfg.master_seed = 4242;
  cfg.seeds = {1, 2};
  cfg.corpus_sentences = 4000;
  cfg.validation_sentences = 500;
  cfg.pairs_per_context = 8;
  cfg.experiments = "both";
  cfg.smoothing.window = 5;  // short curves at this reduced size

  const fs::path a = work_dir() / "det_a";
  const fs::path b = work_dir() / "det_b";
  run_experiment(cfg, a.string());
  run_experiment(cfg, b.string());

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  bool ok = slurp(a / "report.json") == slurp(b / "report.json");
  std::size_t compared = 0;
  std::vector<fs::path> ckpts;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.path().extension() == ".bin") ckpts.push_back(fs::relative(e.path(), a));
  }
  std::sort(ckpts.begin(), ckpts.end());
  for (const fs::path& rel : ckpts) {
    if (!fs::exists(b / rel) || slurp(a / rel) != slurp(b / rel)) {
      ok = false;
      break;
    }
    ++compared;
  }
  report(3, "Determinism", ok && !ckpts.empty(),
         "report.json and " + std::to_string(compared) + " checkpoint files byte-identical");
}

// ---------------------------------------------------------------- 4
void criterion_smoothing() {
  Rng rng(99);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 13 + rng.uniform_index(60);
    LearningCurve c;
    c.context = ContextType::Adverbs;
    for (std::size_t i = 0; i < n; ++i) {
      c.points.push_back(CurvePoint{i * 50, double(i), double(i), rng.next_unit()});
    }
    const LearningCurve s = savgol_smooth(c, SmoothingConfig{25, 1});
    // centered moving average with the same symmetric truncation
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t h = std::min({std::size_t{12}, i, n - 1 - i});
      double sum = 0;
      for (std::size_t k = i - h; k <= i + h; ++k) sum += c.points[k].accuracy;
      worst = std::max(worst, std::fabs(s.points[i].accuracy - sum / double(2 * h + 1)));
    }
  }
  double linear_worst = 0.0;
  {
    LearningCurve lin;
    lin.context = ContextType::Only;
    for (std::size_t i = 0; i < 60; ++i) {
      lin.points.push_back(CurvePoint{i * 50, double(i), double(i), 0.1 + 0.012 * double(i)});
    }
    const LearningCurve s = savgol_smooth(lin, SmoothingConfig{25, 1});
    for (std::size_t i = 0; i < lin.points.size(); ++i) {
      linear_worst = std::max(linear_worst,
                              std::fabs(s.points[i].accuracy - lin.points[i].accuracy));
    }
  }
  report(4, "Smoothing oracle", worst < 1e-9 && linear_worst < 1e-9,
         "moving-average max diff " + std::to_string(worst) + ", linear passthrough max diff " +
             std::to_string(linear_worst) + " (limit 1e-9, window 25 degree 1)");
}

// ---------------------------------------------------------------- 5
void criterion_abc() {
  Rng rng(7);
  double worst_rel = 0.0;
  bool exact_ok = true;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 8 + rng.uniform_index(40);
    LearningCurve a, s;
    a.context = s.context = ContextType::Questions;
    for (std::size_t i = 0; i < n; ++i) {
      const double base = double(i) / double(n);
      a.points.push_back(CurvePoint{i * 50, double(i), 10.0 * double(i),
                                    0.55 + 0.4 * base + 0.02 * rng.next_unit()});
      s.points.push_back(CurvePoint{i * 50, double(i), 10.0 * double(i),
                                    0.25 + 0.4 * base + 0.02 * rng.next_unit()});
    }
    const AbcResult r = abc(a, s);
    // 10,000-subdivision midpoint Riemann sum over the piecewise-linear gap
    const std::size_t end = r.endpoint_step / 50;
    const double x0 = a.points[0].examples_seen;
    const double x1 = a.points[end].examples_seen;
    double sum = 0.0;
    const std::size_t N = 10000;
    for (std::size_t k = 0; k < N; ++k) {
      const double x = x0 + (x1 - x0) * (double(k) + 0.5) / double(N);
      const double fi = x / 10.0;
      const std::size_t lo = std::min(static_cast<std::size_t>(fi), end - 1);
      const double t = fi - double(lo);
      const double diff = (a.points[lo].accuracy - s.points[lo].accuracy) * (1 - t) +
                          (a.points[lo + 1].accuracy - s.points[lo + 1].accuracy) * t;
      sum += diff;
    }
    const double riemann = sum * (x1 - x0) / double(N);
    worst_rel = std::max(worst_rel,
                         std::fabs(r.abc - riemann) / std::max(std::fabs(riemann), 1e-12));

    exact_ok = exact_ok && abc(a, a).abc == 0.0;
    exact_ok = exact_ok && abc(a, s).abc == -abc(s, a).abc;
  }
  report(5, "AbC oracle", worst_rel < 1e-6 && exact_ok,
         "Riemann rel error " + std::to_string(worst_rel) +
             " over 50 pairs (limit 1e-6); self-zero and antisymmetry exact: " +
             (exact_ok ? "yes" : "no"));
}

// ---------------------------------------------------------------- 6
void criterion_data_efficiency_edge() {
  LearningCurve flat;
  flat.context = ContextType::SimpleQuestions;
  for (std::size_t i = 0; i < 30; ++i) {
    flat.points.push_back(CurvePoint{i * 50, double(i) * 100, double(i) * 5, 0.5});
  }
  flat.points[0].examples_seen = 0.0;
  const DataEfficiencyResult r = data_efficiency(savgol_smooth(flat, SmoothingConfig{25, 1}));
  report(6, "Data-efficiency edge case", r.examples_to_95 == 0.0 && r.step_to_95 == 0,
         "constant chance-level curve gives examples_to_95 = " + std::to_string(r.examples_to_95));
}

// ---------------------------------------------------------------- 7
void criterion_statistics() {
  bool ok = true;
  std::string detail;
  {
    const std::vector<double> xs = {1, 2, 3, 5, 7, 11, 13, 17, 19};
    const std::vector<double> ys = {2.1, 3.9, 6.2, 9.8, 14.1, 22.3, 25.9, 34.2, 38.5};
    const StatResult r = pearson(xs, ys);
    ok = ok && std::fabs(r.statistic - 0.99990540457309298825) < 1e-9;
    ok = ok && std::fabs(r.p_value - 2.7104574854594817256e-14) < 1e-9;
    detail += "pearson fixture dr=" + std::to_string(std::fabs(r.statistic - 0.99990540457309298825));
  }
  {
    const std::vector<double> vals = {0.31, -0.12, 0.55, 0.48, -0.05, 0.27, 0.61, 0.09, 0.4};
    const StatResult r = t_test_one_sample(vals, 0.0, Sidedness::OneSided);
    ok = ok && std::fabs(r.statistic - 3.2523366951728539432) < 1e-9;
    ok = ok && std::fabs(r.p_value - 0.0058301123647732037464) < 1e-9;
    detail += ", t fixture dt=" + std::to_string(std::fabs(r.statistic - 3.2523366951728539432));
  }
  {
    const std::vector<double> xs = {1, 2, 3};
    const std::vector<double> ys = {2, 4, 6};
    const StatResult r = pearson(xs, ys);
    ok = ok && std::fabs(r.statistic - 1.0) < 1e-12 && r.p_value == 0.0;
    detail += ", perfect line r=" + std::to_string(r.statistic);
  }
  report(7, "Statistics oracles", ok, detail + " (limits 1e-9)");
}

// ---------------------------------------------------------------- 8
std::string occ_key(const LicensedOccurrence& o) {
  return std::to_string(o.sentence_id) + ":" + std::to_string(o.npi.start) + "-" +
         std::to_string(o.npi.end) + ":" + std::to_string(o.licensor.start) + "-" +
         std::to_string(o.licensor.end) + ":" + std::string(to_string(o.context)) + ":" +
         std::to_string(o.tree_distance);
}

void criterion_scope_exactness() {
  const Lexicon lex = Lexicon::load_files(data_path("npis.tsv"), data_path("licensors.tsv"));
  const GrammarSpec grammar = GrammarSpec::load_file(data_path("grammar_default.txt"));
  const SynthResult synth = generate_corpus(grammar, 10000, 2024);
  const ScanResult scan = scan_corpus(synth.corpus, lex);

  std::set<std::string> gold, found;
  for (const auto& o : synth.gold) gold.insert(occ_key(o));
  for (const auto& o : scan.occurrences) found.insert(occ_key(o));
  const bool scan_exact = gold == found && !gold.empty();

  // tree_distance vs an independent BFS on 1000 random trees
  Rng rng(555);
  bool bfs_ok = true;
  for (int rep = 0; rep < 1000 && bfs_ok; ++rep) {
    const std::size_t n = 2 + rng.uniform_index(14);
    Sentence s;
    for (std::size_t i = 0; i < n; ++i) {
      Token t;
      t.form = "w";
      t.lower = "w";
      t.head = i == 0 ? 0 : static_cast<int>(rng.uniform_index(i)) + 1;
      s.tokens.push_back(t);
    }
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (s.tokens[i].head > 0) {
        adj[i].push_back(static_cast<std::size_t>(s.tokens[i].head - 1));
        adj[static_cast<std::size_t>(s.tokens[i].head - 1)].push_back(i);
      }
    }
    const std::size_t a = rng.uniform_index(n);
    std::size_t b = rng.uniform_index(n);
    if (a == b) b = (b + 1) % n;
    std::vector<std::size_t> dist(n, SIZE_MAX);
    std::deque<std::size_t> q{a};
    dist[a] = 0;
    while (!q.empty()) {
      const std::size_t cur = q.front();
      q.pop_front();
      for (std::size_t nx : adj[cur]) {
        if (dist[nx] == SIZE_MAX) {
          dist[nx] = dist[cur] + 1;
          q.push_back(nx);
        }
      }
    }
    const auto got = tree_distance(s, a, b);
    const auto want = dist[b] == SIZE_MAX ? std::optional<std::size_t>{} :
                                            std::optional<std::size_t>{dist[b]};
    bfs_ok = got == want;
  }
  report(8, "Scope exactness", scan_exact && bfs_ok,
         std::to_string(synth.gold.size()) + " gold occurrences over 10000 sentences, scan " +
             (scan_exact ? "exact" : "MISMATCH") + "; BFS oracle on 1000 trees " +
             (bfs_ok ? "exact" : "MISMATCH"));
}

// ---------------------------------------------------------------- 9
void criterion_multi_licensor() {
  const Lexicon lex = Lexicon::load_files(data_path("npis.tsv"), data_path("licensors.tsv"));
  const GrammarSpec grammar = GrammarSpec::load_file(data_path("grammar_default.txt"));
  const SynthResult suite = multi_licensor_suite(grammar, 200, 77);
  bool candidates_ok = true;
  for (const Sentence& s : suite.corpus.sentences) {
    std::size_t npi_start = 0;
    for (const Match& m : find_matches(s, lex)) {
      if (m.entry->kind == EntryKind::Npi) npi_start = m.start;
    }
    std::size_t preceding = 0;
    for (const Match& m : find_matches(s, lex)) {
      if (m.entry->kind == EntryKind::Licensor && m.start < npi_start) ++preceding;
    }
    candidates_ok = candidates_ok && preceding >= 2;
  }
  const double precision = licensor_selection_precision(suite.corpus, lex, suite.gold);
  report(9, "Multi-licensor heuristic", candidates_ok && precision == 1.0,
         "200-sentence suite, selection precision " + std::to_string(precision) +
             (candidates_ok ? ", every sentence has >= 2 candidates" : ", CANDIDATE SHORTFALL"));
}

// ---------------------------------------------------------------- 10
void criterion_frequency_accounting() {
  const Lexicon lex = Lexicon::load_files(data_path("npis.tsv"), data_path("licensors.tsv"));
  const GrammarSpec grammar = GrammarSpec::load_file(data_path("grammar_default.txt"));
  const SynthResult synth = generate_corpus(grammar, 100000, 5);
  const ScanResult scan = scan_corpus(synth.corpus, lex);

  bool ok = true;
  std::string detail;
  for (const auto& [context, cg] : grammar.contexts) {
    const auto expect = static_cast<std::size_t>(std::llround(cg.freq_per_100k));
    const std::size_t got = scan.table.counts[context_index(context)];
    ok = ok && got == expect && scan.table.per_100k(context) == expect;
  }
  // the CSV itself must carry the schedule
  std::ostringstream csv;
  write_frequency_csv(scan.table, csv);
  std::istringstream csv_in(csv.str());
  const FrequencyTable back = read_frequency_csv(csv_in);
  for (ContextType c : all_contexts()) {
    ok = ok && back.counts[context_index(c)] == scan.table.counts[context_index(c)];
  }
  report(10, "Frequency accounting", ok,
         "scheduled Table-1 rates realized exactly at 100k sentences (sentential negation " +
             std::to_string(scan.table.per_100k(ContextType::SententialNegation)) + "/100k)");
}

// ---------------------------------------------------------------- 11
void criterion_ablation_invariants() {
  const Lexicon lex = Lexicon::load_files(data_path("npis.tsv"), data_path("licensors.tsv"));
  const GrammarSpec grammar = GrammarSpec::load_file(data_path("grammar_default.txt"));
  const SynthResult synth = generate_corpus(grammar, 10000, 31);
  const ScanResult scan = scan_corpus(synth.corpus, lex);

  bool ok = true;
  std::string failure;
  for (ContextType keep : all_contexts()) {
    const AblationPlan plan = plan_ablation(synth.corpus, scan.occurrences, keep,
                                            stream_seed(99, std::string(to_string(keep))));
    const Corpus ablated = apply_ablation(synth.corpus, plan);
    if (ablated.sentences.size() != synth.corpus.sentences.size()) {
      ok = false;
      failure = "sentence count changed for " + std::string(to_string(keep));
      break;
    }
    const ScanResult rescan = scan_corpus(ablated, lex);
    std::multiset<std::string> kept_before, kept_after;
    for (const auto& o : scan.occurrences) {
      if (o.context == keep) kept_before.insert(o.licensor.text + "|" + o.npi.text);
    }
    for (const auto& o : rescan.occurrences) {
      if (o.context != keep) {
        ok = false;
        failure = "other-context occurrence survived for keep=" + std::string(to_string(keep));
        break;
      }
      kept_after.insert(o.licensor.text + "|" + o.npi.text);
    }
    if (!ok) break;
    if (kept_before != kept_after) {
      ok = false;
      failure = "kept-context multiset changed for keep=" + std::string(to_string(keep));
      break;
    }
  }
  report(11, "Ablation invariants", ok,
         ok ? "9/9 keep-contexts: count preserved, isolation rescan clean, kept multiset intact"
            : failure);
}

// ---------------------------------------------------------------- 12
RunConfig experiment_config() {
  RunConfig cfg;
  cfg.npis_path = data_path("npis.tsv");
  cfg.licensors_path = data_path("licensors.tsv");
  cfg.grammar_path = data_path("grammar_experiment.txt");
  cfg.templates_path = data_path("templates_experiment.txt");
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.corpus_sentences = 50000;
  cfg.validation_sentences = 2000;
  cfg.pairs_per_context = 24;
  return cfg;
}

void criterion_experiment1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t positive = 0;
  std::string rs;
  for (std::uint64_t master : {101, 102, 103, 104, 105}) {
    RunConfig cfg = experiment_config();
    cfg.master_seed = master;
    cfg.experiments = "1";
    const fs::path out = work_dir() / ("exp1_ms" + std::to_string(master));
    const json report = run_experiment(cfg, out.string());
    const double r = report.at("experiment1").at("correlation").at("statistic").get<double>();
    positive += r > 0.0;
    rs += (rs.empty() ? "" : ", ") + std::to_string(r);
  }
  const double secs = seconds_since(t0);
  report(12, "Experiment 1 directional replication", positive >= 4 && secs < 1200.0,
         "r positive in " + std::to_string(positive) + "/5 master-seed repetitions [" + rs +
             "] in " + std::to_string(secs) + "s (limits 4/5, 1200s)");
}

// ---------------------------------------------------------------- 13
void criterion_experiment2() {
  const auto t0 = std::chrono::steady_clock::now();
  RunConfig cfg = experiment_config();
  cfg.master_seed = 202;
  cfg.experiments = "both";
  const fs::path out = work_dir() / "exp2_ms202";
  const json report_json = run_experiment(cfg, out.string());

  double mean_abc = 0.0;
  std::size_t n = 0;
  for (const auto& ctx : report_json.at("experiment2").at("contexts")) {
    mean_abc += ctx.at("abc").get<double>();
    ++n;
  }
  mean_abc /= double(n);
  const double p = report_json.at("experiment2").at("t_test").at("p_value").get<double>();
  const double secs = seconds_since(t0);
  report(13, "Experiment 2 directional replication", mean_abc > 0.0 && p < 0.2 && secs < 2700.0,
         "mean AbC " + std::to_string(mean_abc) + " over " + std::to_string(n) +
             " contexts, one-sided p " + std::to_string(p) + " in " + std::to_string(secs) +
             "s (limits >0, <0.2, 2700s)");
}

// ---------------------------------------------------------------- 14
class TableScorer : public PhraseScorer {
 public:
  std::map<std::string, double> table;
  double phrase_logprob(std::span<const std::string> prefix,
                        std::span<const std::string> phrase) const override {
    std::string key;
    for (const auto& t : prefix) key += t + " ";
    key += "|";
    for (const auto& t : phrase) key += " " + t;
    auto it = table.find(key);
    return it == table.end() ? -40.0 : it->second;
  }
};

void criterion_pair_scoring() {
  // 12 pairs across 3 contexts: 4 adverbs (3 correct), 4 only (2 correct,
  // one of them a tie which must score incorrect), 4 negation (0 correct)
  std::vector<MinimalPair> pairs;
  TableScorer model;
  auto add = [&](ContextType context, const std::string& good, const std::string& bad,
                 const std::string& npi, double lp_good, double lp_bad) {
    MinimalPair p;
    p.id = pairs.size();
    p.context = context;
    std::istringstream gs(good), bs(bad);
    std::string tok;
    while (gs >> tok) p.good_prefix.push_back(tok);
    while (bs >> tok) p.bad_prefix.push_back(tok);
    p.npi = {npi};
    model.table[good + " | " + npi] = lp_good;
    model.table[bad + " | " + npi] = lp_bad;
    pairs.push_back(std::move(p));
  };
  add(ContextType::Adverbs, "a lady rarely", "a lady sometimes", "ever", -2.0, -4.0);
  add(ContextType::Adverbs, "a man rarely", "a man sometimes", "ever", -2.5, -3.0);
  add(ContextType::Adverbs, "dogs rarely", "dogs sometimes", "ever", -1.0, -6.0);
  add(ContextType::Adverbs, "cats rarely", "cats sometimes", "ever", -5.0, -1.0);
  add(ContextType::Only, "only students pay", "some students pay", "anything", -3.0, -3.5);
  add(ContextType::Only, "only teachers pay", "some teachers pay", "anything", -2.0, -2.2);
  add(ContextType::Only, "only farmers pay", "some farmers pay", "anything", -2.0, -2.0);  // tie
  add(ContextType::Only, "only singers pay", "some singers pay", "anything", -4.0, -3.0);
  add(ContextType::SententialNegation, "bill did n't buy", "bill did just buy", "any", -3.0, -2.0);
  add(ContextType::SententialNegation, "they did n't buy", "they did just buy", "any", -2.8, -2.2);
  add(ContextType::SententialNegation, "she did n't buy", "she did just buy", "any", -3.3, -3.0);
  add(ContextType::SententialNegation, "we did n't buy", "we did just buy", "any", -5.0, -5.0);  // tie
  const auto acc = evaluate(model, pairs);
  bool ok = acc.size() == 3;
  for (const auto& a : acc) {
    if (a.context == ContextType::Adverbs) ok = ok && a.correct == 3 && a.total == 4;
    if (a.context == ContextType::Only) ok = ok && a.correct == 2 && a.total == 4;
    if (a.context == ContextType::SententialNegation) ok = ok && a.correct == 0 && a.total == 4;
  }
  report(14, "Minimal-pair scoring", ok,
         ok ? "12-pair fixture: 3/4, 2/4, 0/4 exactly; ties scored incorrect"
            : "fixture accuracies diverged");
}

}  // namespace

int main() {
  std::printf("polarity-lab acceptance suite\n");
  criterion_gradients();
  criterion_overfit();
  criterion_determinism();
  criterion_smoothing();
  criterion_abc();
  criterion_data_efficiency_edge();
  criterion_statistics();
  criterion_scope_exactness();
  criterion_multi_licensor();
  criterion_frequency_accounting();
  criterion_ablation_invariants();
  criterion_experiment1();
  criterion_experiment2();
  criterion_pair_scoring();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
