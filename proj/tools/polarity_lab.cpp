// polarity-lab: NPI licensing scans, corpus ablation, LSTM training,
// minimal-pair evaluation and learning-dynamics analysis as one CLI.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polarity/ablation.hpp"
#include "polarity/checkpoint_io.hpp"
#include "polarity/error.hpp"
#include "polarity/experiment.hpp"
#include "polarity/gradcheck.hpp"
#include "polarity/num_format.hpp"
#include "polarity/pairs.hpp"
#include "polarity/rng.hpp"
#include "polarity/run_config.hpp"
#include "polarity/svg.hpp"
#include "polarity/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace polarity;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

Corpus load_corpus_any(const std::string& path, bool plain) {
  if (plain) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus: " + path);
    return tokenize_plain(in);
  }
  return parse_conllu_file(path);
}

std::vector<LicensedOccurrence> load_occurrences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open occurrences: " + path);
  return read_occurrences_jsonl(in);
}

void write_provenance_sidecar(const RunConfig& cfg, const std::string& out_dir) {
  std::ofstream pf(fs::path(out_dir) / "provenance.json", std::ios::binary);
  pf << cfg.provenance().dump(2) << '\n';
}

int cmd_scan(const RunConfig& cfg, const std::string& corpus_path, bool plain,
             const std::string& out_dir) {
  ensure_dir(out_dir);
  const Lexicon lexicon = Lexicon::load_files(cfg.npis_path, cfg.licensors_path);
  const Corpus corpus = load_corpus_any(corpus_path, plain);
  const ScanResult scan = scan_corpus(corpus, lexicon);

  std::ofstream of(fs::path(out_dir) / "occurrences.jsonl", std::ios::binary);
  of << json{{"provenance", cfg.provenance()}}.dump() << '\n';
  write_occurrences_jsonl(scan.occurrences, of);
  std::ofstream ff(fs::path(out_dir) / "frequency.csv", std::ios::binary);
  ff << "# provenance " << cfg.config_hash() << "\n";
  write_frequency_csv(scan.table, ff);
  write_provenance_sidecar(cfg, out_dir);
  std::cout << "scanned " << corpus.sentences.size() << " sentences, " << scan.occurrences.size()
            << " licensed occurrences\n";
  return kExitOk;
}

int cmd_filter(const RunConfig& cfg, const std::string& corpus_path,
               const std::string& occurrences_path, const std::string& keep_name,
               std::uint64_t seed, const std::string& out_dir) {
  ensure_dir(out_dir);
  const auto keep = context_from_string(keep_name);
  if (!keep) throw ConfigError("unknown context '" + keep_name + "'");
  const Corpus corpus = parse_conllu_file(corpus_path);
  const auto occurrences = load_occurrences(occurrences_path);

  const AblationPlan plan = plan_ablation(corpus, occurrences, *keep, seed);
  const Corpus ablated = apply_ablation(corpus, plan);

  std::ofstream pf(fs::path(out_dir) / "plan.json", std::ios::binary);
  write_plan_json(plan, pf);
  std::ofstream cf(fs::path(out_dir) / "corpus.conllu", std::ios::binary);
  cf << "# provenance " << cfg.config_hash() << "\n";
  write_conllu(ablated, cf);
  write_provenance_sidecar(cfg, out_dir);
  std::cout << "replaced " << plan.summary.replaced << " sentences (neutral pool "
            << plan.summary.neutral_pool << ", kept-context occurrences lost "
            << plan.summary.kept_occurrences_lost << ")\n";
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, const std::string& corpus_path,
              const std::string& valid_path, std::uint64_t seed, const std::string& out_dir) {
  ensure_dir(out_dir);
  const Corpus corpus = parse_conllu_file(corpus_path);
  Corpus valid;
  const Corpus* valid_ptr = nullptr;
  if (!valid_path.empty()) {
    valid = parse_conllu_file(valid_path);
    valid_ptr = &valid;
  }

  LMConfig lm = cfg.lm;
  lm.seed = seed;
  const fs::path out(out_dir);

  std::ofstream log(out / "training_log.csv", std::ios::binary);
  log << "step,tokens_seen,train_loss,val_loss,lr\n";
  std::size_t count = 0;
  TrainOptions options;
  options.collect = false;
  options.on_checkpoint = [&](const CheckpointedModel& model) {
    std::string name = std::to_string(model.step);
    name = std::string(name.size() >= 8 ? 0 : 8 - name.size(), '0') + name;
    save_checkpoint(model, (out / ("ckpt_" + name + ".bin")).string());
    log << model.step << ',' << model.tokens_seen << ',' << format_double(model.train_loss) << ','
        << format_double(model.val_loss) << ',' << format_double(model.lr) << '\n';
    ++count;
  };

  const TrainResult result = train_lm(corpus, valid_ptr, lm, options);

  const std::size_t holdout = valid_ptr ? 0 : std::max<std::size_t>(1, corpus.sentences.size() / 20);
  const std::size_t train_sentences =
      valid_ptr ? corpus.sentences.size()
                : (holdout >= corpus.sentences.size() ? corpus.sentences.size()
                                                      : corpus.sentences.size() - holdout);
  json manifest{{"config_hash", cfg.config_hash()},
                {"lm_seed", seed},
                {"total_batches", result.total_batches},
                {"checkpoints", count},
                {"train_sentences", train_sentences},
                {"final_train_loss", result.final_train_loss},
                {"final_perplexity", result.final_perplexity},
                {"final_val_loss", result.final_val_loss},
                {"completed", true}};
  std::ofstream mf(out / "manifest.json", std::ios::binary);
  mf << manifest.dump(2) << '\n';
  std::cout << "trained " << result.total_batches << " batches, " << count
            << " checkpoints, final train perplexity " << result.final_perplexity << "\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const std::string& ckpt_dir, const std::string& pairs_path,
             const std::string& templates_path, std::size_t pairs_per_context,
             std::uint64_t pairs_seed, const std::string& corpus_path,
             const std::string& occurrences_path, const std::string& out_dir) {
  ensure_dir(out_dir);

  std::vector<MinimalPair> pairs;
  if (!pairs_path.empty()) {
    std::ifstream in(pairs_path);
    if (!in) throw InputError("cannot open pairs: " + pairs_path);
    pairs = read_pairs_jsonl(in);
  } else if (!templates_path.empty()) {
    pairs = generate_pairs(load_templates_file(templates_path), pairs_per_context, pairs_seed);
    std::ofstream pf(fs::path(out_dir) / "pairs.jsonl", std::ios::binary);
    pf << json{{"provenance", cfg.provenance()}}.dump() << '\n';
    write_pairs_jsonl(pairs, pf);
  } else {
    throw ConfigError("eval: provide --pairs or --templates");
  }

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(ckpt_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("ckpt_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".bin") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("eval: no ckpt_*.bin files in " + ckpt_dir);
  std::vector<CheckpointedModel> checkpoints;
  checkpoints.reserve(files.size());
  for (const std::string& f : files) checkpoints.push_back(load_checkpoint(f));

  // x-axis bookkeeping from the training corpus and its scan
  std::vector<CheckpointAxis> axes(checkpoints.size());
  if (!corpus_path.empty() && !occurrences_path.empty()) {
    Corpus corpus = parse_conllu_file(corpus_path);
    auto occurrences = load_occurrences(occurrences_path);
    // respect a standalone-train holdout if the manifest records one
    const fs::path manifest_path = fs::path(ckpt_dir) / "manifest.json";
    if (fs::exists(manifest_path)) {
      std::ifstream mf(manifest_path);
      json manifest;
      mf >> manifest;
      const auto train_sentences = manifest.at("train_sentences").get<std::size_t>();
      if (train_sentences < corpus.sentences.size()) {
        corpus.sentences.resize(train_sentences);
        corpus.token_count = 0;
        for (const Sentence& s : corpus.sentences) corpus.token_count += s.size();
        std::erase_if(occurrences, [&](const LicensedOccurrence& o) {
          return o.sentence_id >= train_sentences;
        });
      }
    }
    ExampleSchedule schedule(corpus, occurrences, checkpoints.front().config().batch_size);
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      axes[i].step = checkpoints[i].step;
      axes[i].tokens_seen = static_cast<double>(checkpoints[i].tokens_seen);
      axes[i].examples_seen = schedule.seen_at(checkpoints[i].epoch, checkpoints[i].pos_in_epoch);
    }
  } else {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
      axes[i].step = checkpoints[i].step;
      axes[i].tokens_seen = static_cast<double>(checkpoints[i].tokens_seen);
    }
  }

  const auto rows = evaluate_checkpoint_rows(checkpoints, pairs, axes);
  {
    std::ofstream rf(fs::path(out_dir) / "results.csv", std::ios::binary);
    rf << "# provenance " << cfg.config_hash() << "\n";
    write_results_csv(rows, rf);
  }
  {
    std::ofstream cf(fs::path(out_dir) / "curves.csv", std::ios::binary);
    cf << "# provenance " << cfg.config_hash() << "\n";
    write_curves_csv(curves_from_rows(rows, "s" + std::to_string(pairs_seed)), cf);
  }
  write_provenance_sidecar(cfg, out_dir);
  std::cout << "evaluated " << pairs.size() << " pairs at " << checkpoints.size()
            << " checkpoints\n";
  return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, const std::string& all_csv,
                const std::vector<std::string>& single_csvs, const std::string& frequency_csv,
                const std::string& out_dir) {
  ensure_dir(out_dir);
  ensure_dir((fs::path(out_dir) / "figures").string());

  std::ifstream af(all_csv);
  if (!af) throw InputError("cannot open curves CSV: " + all_csv);
  const auto all_curves_raw = read_curves_csv(af);
  std::vector<LearningCurve> all_seed_curves;
  for (const LearningCurve& c : all_curves_raw) {
    if (c.seed_tag != "mean") all_seed_curves.push_back(c);
  }
  if (all_seed_curves.empty()) throw InputError("analyze: no curves in " + all_csv);
  const auto all_means = mean_curves_by_context(all_seed_curves);

  std::ifstream ff(frequency_csv);
  if (!ff) throw InputError("cannot open frequency CSV: " + frequency_csv);
  const FrequencyTable freq = read_frequency_csv(ff);

  std::vector<ContextType> contexts;
  for (const LearningCurve& c : all_means) contexts.push_back(c.context);
  if (contexts.size() < 3) {
    throw ArgumentError("analyze: need at least 3 contexts for the correlation");
  }

  json report;
  report["provenance"] = cfg.provenance();

  // experiment-1 style analysis
  std::map<std::string, std::vector<const LearningCurve*>> by_seed;
  for (const LearningCurve& c : all_seed_curves) by_seed[c.seed_tag].push_back(&c);
  std::vector<std::vector<DataEfficiencyResult>> per_seed;
  for (const auto& [tag, curves] : by_seed) {
    std::vector<DataEfficiencyResult> rs;
    for (const LearningCurve* c : curves) {
      rs.push_back(data_efficiency(savgol_smooth(*c, cfg.smoothing)));
    }
    per_seed.push_back(std::move(rs));
  }
  std::vector<std::pair<ContextType, double>> freqs;
  for (ContextType c : contexts) freqs.emplace_back(c, static_cast<double>(freq.per_100k(c)));
  const auto eff = frequency_vs_efficiency(freqs, per_seed);

  json exp1;
  exp1["points"] = json::array();
  std::vector<double> xs, ys;
  std::vector<std::string> labels;
  for (const auto& p : eff.points) {
    exp1["points"].push_back(json{{"context", to_string(p.context)},
                                  {"frequency_per_100k", p.frequency_per_100k},
                                  {"mean_examples_to_95", p.mean_examples_to_95},
                                  {"per_seed_examples_to_95", p.per_seed_examples}});
    xs.push_back(p.frequency_per_100k);
    ys.push_back(p.mean_examples_to_95);
    labels.push_back(std::string(to_string(p.context)));
  }
  exp1["correlation"] = json{{"test", eff.correlation.test},
                             {"statistic", eff.correlation.statistic},
                             {"p_value", eff.correlation.p_value},
                             {"n", eff.correlation.n}};
  report["experiment1"] = exp1;

  SvgPlot scatter("Data efficiency vs context frequency", "frequency per 100k sentences",
                  "examples to 95% of final accuracy");
  scatter.add_points("contexts", xs, ys, labels);
  scatter.save((fs::path(out_dir) / "figures" / "fig_efficiency_scatter.svg").string());

  // experiment-2 style analysis over the provided single-context curve files
  if (!single_csvs.empty()) {
    json exp2;
    exp2["contexts"] = json::array();
    std::vector<double> abcs, normalized, fx;
    std::vector<std::string> abc_labels;
    for (const std::string& path : single_csvs) {
      std::ifstream sf(path);
      if (!sf) throw InputError("cannot open curves CSV: " + path);
      std::vector<LearningCurve> seed_curves;
      for (const LearningCurve& c : read_curves_csv(sf)) {
        if (c.seed_tag != "mean") seed_curves.push_back(c);
      }
      if (seed_curves.empty()) throw InputError("analyze: no curves in " + path);
      const auto means = mean_curves_by_context(seed_curves);
      for (const LearningCurve& single_mean : means) {
        const LearningCurve* all_mean = nullptr;
        for (const LearningCurve& c : all_means) {
          if (c.context == single_mean.context) all_mean = &c;
        }
        if (!all_mean) {
          throw InputError("analyze: no all-context curve for " +
                           std::string(to_string(single_mean.context)));
        }
        const AbcResult r = abc(savgol_smooth(*all_mean, cfg.smoothing),
                                savgol_smooth(single_mean, cfg.smoothing));
        exp2["contexts"].push_back(json{{"context", to_string(r.context)},
                                        {"abc", r.abc},
                                        {"normalized_abc", r.normalized_abc},
                                        {"endpoint_step", r.endpoint_step}});
        abcs.push_back(r.abc);
        normalized.push_back(r.normalized_abc);
        fx.push_back(static_cast<double>(freq.per_100k(r.context)));
        abc_labels.push_back(std::string(to_string(r.context)));
      }
    }
    if (abcs.size() >= 2) {
      const auto t = t_test_one_sample(abcs, 0.0, Sidedness::OneSided);
      exp2["t_test"] = json{{"test", t.test},
                            {"statistic", t.statistic},
                            {"p_value", t.p_value},
                            {"df", t.df},
                            {"sidedness", "one_sided"}};
    }
    if (abcs.size() >= 3) {
      const auto r = pearson(fx, abcs);
      exp2["abc_frequency_correlation"] =
          json{{"test", r.test}, {"statistic", r.statistic}, {"p_value", r.p_value}, {"n", r.n}};
    }
    report["experiment2"] = exp2;

    SvgPlot abc_fig("Normalised AbC vs context frequency", "frequency per 100k sentences",
                    "normalised AbC");
    abc_fig.add_points("contexts", fx, normalized, abc_labels);
    abc_fig.save((fs::path(out_dir) / "figures" / "fig_abc_scatter.svg").string());
  }

  std::ofstream rf(fs::path(out_dir) / "report.json", std::ios::binary);
  rf << report.dump(2) << '\n';
  std::cout << "report written to " << (fs::path(out_dir) / "report.json").string() << "\n";
  return kExitOk;
}

int cmd_synth(const RunConfig& cfg, const std::string& grammar_path, std::size_t sentences,
              std::uint64_t seed, bool suite, const std::string& out_dir) {
  ensure_dir(out_dir);
  const GrammarSpec grammar = GrammarSpec::load_file(grammar_path);
  const Lexicon lexicon = Lexicon::load_files(cfg.npis_path, cfg.licensors_path);
  validate_against_lexicon(grammar, lexicon);

  const SynthResult result = suite ? multi_licensor_suite(grammar, sentences, seed)
                                   : generate_corpus(grammar, sentences, seed);
  std::ofstream cf(fs::path(out_dir) / "corpus.conllu", std::ios::binary);
  cf << "# provenance " << cfg.config_hash() << "\n";
  write_conllu(result.corpus, cf);
  cf.close();
  std::ofstream gf(fs::path(out_dir) / "gold.jsonl", std::ios::binary);
  gf << json{{"provenance", cfg.provenance()}}.dump() << '\n';
  write_occurrences_jsonl(result.gold, gf, true);
  write_provenance_sidecar(cfg, out_dir);
  std::cout << "generated " << result.corpus.sentences.size() << " sentences ("
            << result.gold.size() << " gold occurrences, vocabulary " << grammar.vocab_size()
            << " types)\n";
  return kExitOk;
}

int cmd_gradcheck(std::size_t runs, std::uint64_t seed) {
  const double worst = gradient_check_many(runs, seed);
  std::cout << "max relative error over " << runs << " configurations: " << worst << "\n";
  if (worst >= 1e-4) {
    std::cerr << "gradient check FAILED (threshold 1e-4)\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarity-lab: NPI licensing dynamics toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "INI config file (flags override it)")
      ->configurable(false);

  RunConfig cfg;

  // scan
  auto* scan = app.add_subcommand("scan", "detect licensed NPIs, write occurrences + frequency");
  std::string scan_corpus_path, scan_out = "scan_out";
  bool scan_plain = false;
  scan->add_option("--corpus", scan_corpus_path, "CoNLL-U corpus")->required();
  scan->add_flag("--plain", scan_plain, "treat the corpus as one-sentence-per-line plain text");
  scan->add_option("--out", scan_out, "output directory");

  // filter
  auto* filter = app.add_subcommand("filter", "build a single-context corpus");
  std::string f_corpus, f_occ, f_keep, f_out = "filter_out";
  std::uint64_t f_seed = 0;
  filter->add_option("--corpus", f_corpus, "CoNLL-U corpus")->required();
  filter->add_option("--occurrences", f_occ, "occurrences.jsonl from scan")->required();
  filter->add_option("--keep", f_keep, "context to keep")->required();
  filter->add_option("--seed", f_seed, "donor sampling seed");
  filter->add_option("--out", f_out, "output directory");

  // train
  auto* train = app.add_subcommand("train", "train the LSTM with dense checkpointing");
  std::string t_corpus, t_valid, t_out = "train_out";
  std::uint64_t t_seed = 0;
  train->add_option("--corpus", t_corpus, "CoNLL-U training corpus")->required();
  train->add_option("--valid", t_valid, "validation corpus (default: 5% holdout)");
  train->add_option("--seed", t_seed, "training seed");
  train->add_option("--out", t_out, "output directory");
  std::string t_profile;
  train->add_option("--profile", t_profile, "LM profile: desk or paper");
  std::size_t t_epochs = 0, t_hidden = 0, t_embed = 0, t_every = 0;
  train->add_option("--epochs", t_epochs, "override epochs");
  train->add_option("--hidden", t_hidden, "override hidden_dim");
  train->add_option("--embed", t_embed, "override embed_dim");
  train->add_option("--checkpoint-every", t_every, "override checkpoint cadence");

  // eval
  auto* eval = app.add_subcommand("eval", "score minimal pairs at every checkpoint");
  std::string e_ckpts, e_pairs, e_templates, e_corpus, e_occ, e_out = "eval_out";
  std::size_t e_npc = 24;
  std::uint64_t e_seed = 0;
  eval->add_option("--checkpoints", e_ckpts, "checkpoint directory")->required();
  eval->add_option("--pairs", e_pairs, "pairs.jsonl");
  eval->add_option("--templates", e_templates, "template file (generates pairs)");
  eval->add_option("--pairs-per-context", e_npc, "pairs per context when generating");
  eval->add_option("--pairs-seed", e_seed, "pair sampling seed");
  eval->add_option("--corpus", e_corpus, "training corpus (for example counts)");
  eval->add_option("--occurrences", e_occ, "occurrences.jsonl (for example counts)");
  eval->add_option("--out", e_out, "output directory");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "dynamics metrics + figures from curve CSVs");
  std::string a_all, a_freq, a_out = "analyze_out";
  std::vector<std::string> a_singles;
  analyze->add_option("--all", a_all, "all-context curves CSV")->required();
  analyze->add_option("--single", a_singles, "single-context curves CSV (repeatable)");
  analyze->add_option("--frequency", a_freq, "frequency CSV from scan")->required();
  analyze->add_option("--out", a_out, "output directory");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "full synthetic pipeline (both experiments)");
  std::string x_out = "experiment_out";
  std::uint64_t x_master = 0;
  bool x_master_set = false;
  std::string x_experiments;
  experiment->add_option("--out", x_out, "output directory");
  experiment
      ->add_option("--master-seed", x_master, "master seed (overrides config)")
      ->each([&](const std::string&) { x_master_set = true; });
  experiment->add_option("--experiments", x_experiments, "1, 2 or both");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with gold annotations");
  std::string s_grammar, s_out = "synth_out";
  std::size_t s_n = 1000;
  std::uint64_t s_seed = 0;
  bool s_suite = false;
  synth->add_option("--grammar", s_grammar, "grammar spec file");
  synth->add_option("--sentences", s_n, "number of sentences");
  synth->add_option("--seed", s_seed, "generation seed");
  synth->add_flag("--suite", s_suite, "generate the multi-licensor suite");
  synth->add_option("--out", s_out, "output directory");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the LSTM backward pass");
  std::size_t g_runs = 25;
  std::uint64_t g_seed = 12345;
  gradcheck->add_option("--runs", g_runs, "number of random configurations");
  gradcheck->add_option("--seed", g_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (!config_path.empty()) cfg.apply_file(config_path);

    if (scan->parsed()) return cmd_scan(cfg, scan_corpus_path, scan_plain, scan_out);
    if (filter->parsed()) return cmd_filter(cfg, f_corpus, f_occ, f_keep, f_seed, f_out);
    if (train->parsed()) {
      if (!t_profile.empty()) cfg.lm = LMConfig::profile(t_profile);
      if (t_epochs) cfg.lm.epochs = t_epochs;
      if (t_hidden) cfg.lm.hidden_dim = t_hidden;
      if (t_embed) cfg.lm.embed_dim = t_embed;
      if (t_every) cfg.lm.checkpoint_every_batches = t_every;
      return cmd_train(cfg, t_corpus, t_valid, t_seed, t_out);
    }
    if (eval->parsed()) {
      return cmd_eval(cfg, e_ckpts, e_pairs, e_templates, e_npc, e_seed, e_corpus, e_occ, e_out);
    }
    if (analyze->parsed()) return cmd_analyze(cfg, a_all, a_singles, a_freq, a_out);
    if (experiment->parsed()) {
      if (x_master_set) cfg.master_seed = x_master;
      if (!x_experiments.empty()) {
        if (x_experiments != "1" && x_experiments != "2" && x_experiments != "both") {
          throw ConfigError("--experiments must be 1, 2 or both");
        }
        cfg.experiments = x_experiments;
      }
      run_experiment(cfg, x_out);
      std::cout << "experiment report written to " << (fs::path(x_out) / "report.json").string()
                << "\n";
      return kExitOk;
    }
    if (synth->parsed()) {
      const std::string grammar = s_grammar.empty() ? cfg.grammar_path : s_grammar;
      return cmd_synth(cfg, grammar, s_n, s_seed, s_suite, s_out);
    }
    if (gradcheck->parsed()) return cmd_gradcheck(g_runs, g_seed);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
