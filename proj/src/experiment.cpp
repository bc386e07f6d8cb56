#include "polarity/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "polarity/ablation.hpp"
#include "polarity/checkpoint_io.hpp"
#include "polarity/error.hpp"
#include "polarity/num_format.hpp"
#include "polarity/pairs.hpp"
#include "polarity/rng.hpp"
#include "polarity/svg.hpp"
#include "polarity/synth.hpp"

namespace polarity {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mutex g_log_mutex;

void log_line(const std::string& line) {
  std::lock_guard<std::mutex> lock(g_log_mutex);
  std::cerr << line << "\n";
}

std::string zero_pad(std::size_t v, std::size_t width) {
  std::string s = std::to_string(v);
  return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

json stat_to_json(const StatResult& s) {
  return json{{"test", s.test},
              {"statistic", s.statistic},
              {"p_value", s.p_value},
              {"n", s.n},
              {"df", s.df},
              {"sidedness", s.sidedness == Sidedness::OneSided ? "one_sided" : "two_sided"}};
}

struct TrainedRun {
  std::vector<EvalRow> rows;
};

// One training run with per-checkpoint pair evaluation. A completed run is
// identified by its manifest and reused verbatim on re-invocation.
TrainedRun run_training(const RunConfig& cfg, const std::string& run_dir, const std::string& tag,
                        std::uint64_t seed, const Corpus& train, const Corpus& valid,
                        const std::vector<LicensedOccurrence>& occurrences,
                        const std::vector<MinimalPair>& pairs) {
  const fs::path dir(run_dir);
  const fs::path manifest_path = dir / "manifest.json";
  const std::uint64_t lm_seed = stream_seed(cfg.master_seed, "train." + tag + ".s" + std::to_string(seed));

  if (fs::exists(manifest_path)) {
    std::ifstream mf(manifest_path);
    json manifest;
    try {
      mf >> manifest;
      if (manifest.at("config_hash") == cfg.config_hash() &&
          manifest.at("lm_seed") == lm_seed && manifest.at("completed") == true) {
        std::ifstream rf(dir / "results.csv");
        if (rf) {
          TrainedRun run;
          run.rows = read_results_csv(rf);
          log_line("[experiment] reusing completed run " + tag + "/s" + std::to_string(seed));
          return run;
        }
      }
    } catch (const std::exception&) {
      // fall through to retraining
    }
  }

  fs::create_directories(dir);
  LMConfig lm = cfg.lm;
  lm.seed = lm_seed;

  ExampleSchedule schedule(train, occurrences, lm.batch_size);
  TrainedRun run;
  std::ofstream log(dir / "training_log.csv", std::ios::binary);
  log << "step,tokens_seen,train_loss,val_loss,lr\n";

  TrainOptions options;
  options.collect = false;
  options.on_checkpoint = [&](const CheckpointedModel& model) {
    CheckpointAxis axis;
    axis.step = model.step;
    axis.tokens_seen = static_cast<double>(model.tokens_seen);
    axis.examples_seen = schedule.seen_at(model.epoch, model.pos_in_epoch);
    for (const ContextAccuracy& a : evaluate(model, pairs)) {
      EvalRow row;
      row.step = axis.step;
      row.tokens_seen = axis.tokens_seen;
      row.examples_seen = axis.examples_seen[context_index(a.context)];
      row.context = a.context;
      row.correct = a.correct;
      row.total = a.total;
      run.rows.push_back(row);
    }
    save_checkpoint(model, (dir / ("ckpt_" + zero_pad(model.step, 8) + ".bin")).string());
    log << model.step << ',' << model.tokens_seen << ',' << format_double(model.train_loss) << ','
        << format_double(model.val_loss) << ',' << format_double(model.lr) << '\n';
  };

  TrainResult result = train_lm(train, &valid, lm, options);

  std::ofstream rf(dir / "results.csv", std::ios::binary);
  write_results_csv(run.rows, rf);
  rf.close();
  log.close();

  json manifest{{"config_hash", cfg.config_hash()},
                {"lm_seed", lm_seed},
                {"tag", tag},
                {"seed", seed},
                {"total_batches", result.total_batches},
                {"train_sentences", train.sentences.size()},
                {"final_val_loss", result.final_val_loss},
                {"completed", true}};
  std::ofstream mf(manifest_path, std::ios::binary);
  mf << manifest.dump(2) << '\n';
  return run;
}

// waves of at most `jobs` parallel tasks, merged in input order
template <typename Task>
std::vector<TrainedRun> run_wave(std::vector<Task>& tasks, std::size_t jobs) {
  std::vector<TrainedRun> results(tasks.size());
  std::size_t next = 0;
  while (next < tasks.size()) {
    const std::size_t batch = std::min(jobs, tasks.size() - next);
    std::vector<std::future<TrainedRun>> futures;
    for (std::size_t k = 0; k < batch; ++k) {
      futures.push_back(std::async(std::launch::async, tasks[next + k]));
    }
    for (std::size_t k = 0; k < batch; ++k) {
      results[next + k] = futures[k].get();
    }
    next += batch;
  }
  return results;
}

std::vector<MinimalPair> pairs_for_context(const std::vector<MinimalPair>& pairs, ContextType c) {
  std::vector<MinimalPair> out;
  for (const MinimalPair& p : pairs) {
    if (p.context == c) out.push_back(p);
  }
  return out;
}

double linear_fit_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                        double& intercept) {
  double mx = 0, my = 0;
  for (double v : xs) mx += v;
  for (double v : ys) my += v;
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxx > 0 ? sxy / sxx : 0.0;
  intercept = my - slope * mx;
  return slope;
}

}  // namespace

json run_experiment(const RunConfig& cfg, const std::string& out_dir) {
  cfg.lm.validate();
  cfg.smoothing.validate();
  if (cfg.seeds.empty()) throw ConfigError("experiment: no seeds configured");

  const fs::path out(out_dir);
  fs::create_directories(out);
  fs::create_directories(out / "figures");

  const Lexicon lexicon = Lexicon::load_files(cfg.npis_path, cfg.licensors_path);
  const GrammarSpec grammar = GrammarSpec::load_file(cfg.grammar_path);
  validate_against_lexicon(grammar, lexicon);
  const auto templates = load_templates_file(cfg.templates_path);

  const auto pairs =
      generate_pairs(templates, cfg.pairs_per_context, stream_seed(cfg.master_seed, "pairs"));
  {
    std::ofstream pf(out / "pairs.jsonl", std::ios::binary);
    pf << json{{"provenance", cfg.provenance()}}.dump() << '\n';
    write_pairs_jsonl(pairs, pf);
  }

  std::cerr << "[experiment] generating corpus (" << cfg.corpus_sentences << " sentences)\n";
  const SynthResult synth =
      generate_corpus(grammar, cfg.corpus_sentences, stream_seed(cfg.master_seed, "corpus"));
  const SynthResult valid =
      generate_corpus(grammar, cfg.validation_sentences, stream_seed(cfg.master_seed, "valid"));
  {
    std::ofstream cf(out / "corpus.conllu", std::ios::binary);
    cf << "# provenance " << cfg.config_hash() << "\n";
    write_conllu(synth.corpus, cf);
    std::ofstream gf(out / "gold.jsonl", std::ios::binary);
    gf << json{{"provenance", cfg.provenance()}}.dump() << '\n';
    write_occurrences_jsonl(synth.gold, gf, true);
  }

  const ScanResult scan = scan_corpus(synth.corpus, lexicon);
  {
    std::ofstream of(out / "occurrences.jsonl", std::ios::binary);
    of << json{{"provenance", cfg.provenance()}}.dump() << '\n';
    write_occurrences_jsonl(scan.occurrences, of);
    std::ofstream ff(out / "frequency.csv", std::ios::binary);
    ff << "# provenance " << cfg.config_hash() << "\n";
    write_frequency_csv(scan.table, ff);
  }

  std::vector<ContextType> contexts;
  for (ContextType c : all_contexts()) {
    if (scan.table.counts[context_index(c)] > 0) contexts.push_back(c);
  }
  if (contexts.empty()) throw InputError("experiment: corpus contains no licensed occurrences");

  const std::size_t jobs =
      cfg.jobs > 0 ? cfg.jobs
                   : std::min<std::size_t>(cfg.seeds.size(),
                                           std::max(1u, std::thread::hardware_concurrency()));

  // ---- all-context training, one run per seed
  std::vector<std::function<TrainedRun()>> all_tasks;
  for (std::uint64_t seed : cfg.seeds) {
    const std::string dir = (out / "runs" / "all" / ("seed_" + std::to_string(seed))).string();
    all_tasks.push_back([&, dir, seed]() {
      log_line("[experiment] training all-context, seed " + std::to_string(seed));
      return run_training(cfg, dir, "all", seed, synth.corpus, valid.corpus, scan.occurrences,
                          pairs);
    });
  }
  const std::vector<TrainedRun> all_runs = run_wave(all_tasks, jobs);

  std::vector<LearningCurve> all_curves;  // per seed, all contexts
  for (std::size_t i = 0; i < all_runs.size(); ++i) {
    for (LearningCurve& c :
         curves_from_rows(all_runs[i].rows, "s" + std::to_string(cfg.seeds[i]))) {
      all_curves.push_back(std::move(c));
    }
  }
  const std::vector<LearningCurve> all_means = mean_curves_by_context(all_curves);
  {
    std::vector<LearningCurve> dump = all_curves;
    dump.insert(dump.end(), all_means.begin(), all_means.end());
    std::ofstream cf(out / "curves_all.csv", std::ios::binary);
    cf << "# provenance " << cfg.config_hash() << "\n";
    write_curves_csv(dump, cf);
  }

  json report;
  report["provenance"] = cfg.provenance();
  report["contexts"] = json::array();
  for (ContextType c : contexts) report["contexts"].push_back(to_string(c));
  {
    json freq = json::object();
    for (ContextType c : contexts) {
      freq[std::string(to_string(c))] = json{{"count", scan.table.counts[context_index(c)]},
                                             {"per_100k", scan.table.per_100k(c)}};
    }
    report["frequency"] = freq;
  }

  // ---- experiment 1: frequency vs data efficiency on all-context curves
  {
    std::vector<std::vector<DataEfficiencyResult>> per_seed;
    for (std::size_t i = 0; i < all_runs.size(); ++i) {
      std::vector<DataEfficiencyResult> seed_results;
      for (const LearningCurve& c : all_curves) {
        if (c.seed_tag == "s" + std::to_string(cfg.seeds[i])) {
          seed_results.push_back(data_efficiency(savgol_smooth(c, cfg.smoothing)));
        }
      }
      per_seed.push_back(std::move(seed_results));
    }
    std::vector<std::pair<ContextType, double>> freqs;
    for (ContextType c : contexts) {
      freqs.emplace_back(c, static_cast<double>(scan.table.per_100k(c)));
    }
    const FrequencyEfficiencyReport eff = frequency_vs_efficiency(freqs, per_seed);

    json exp1;
    exp1["points"] = json::array();
    std::vector<double> xs, ys;
    std::vector<std::string> labels;
    for (const EfficiencyScatterPoint& p : eff.points) {
      exp1["points"].push_back(json{{"context", to_string(p.context)},
                                    {"frequency_per_100k", p.frequency_per_100k},
                                    {"mean_examples_to_95", p.mean_examples_to_95},
                                    {"per_seed_examples_to_95", p.per_seed_examples}});
      xs.push_back(p.frequency_per_100k);
      ys.push_back(p.mean_examples_to_95);
      labels.push_back(std::string(to_string(p.context)));
    }
    exp1["correlation"] = stat_to_json(eff.correlation);
    // mean-curve efficiencies for reference
    json mean_eff = json::object();
    for (const LearningCurve& c : all_means) {
      const auto r = data_efficiency(savgol_smooth(c, cfg.smoothing));
      mean_eff[std::string(to_string(c.context))] =
          json{{"final_accuracy", r.final_accuracy},
               {"examples_to_95", r.examples_to_95},
               {"step_to_95", r.step_to_95}};
    }
    exp1["mean_curve_efficiency"] = mean_eff;
    report["experiment1"] = exp1;

    SvgPlot scatter("Data efficiency vs context frequency", "frequency per 100k sentences",
                    "examples to 95% of final accuracy");
    scatter.set_comment("provenance " + cfg.config_hash());
    scatter.add_points("contexts", xs, ys, labels);
    double intercept = 0;
    const double slope = linear_fit_slope(xs, ys, intercept);
    scatter.add_fit_line("linear fit", intercept, slope);
    scatter.save((out / "figures" / "fig_efficiency_scatter.svg").string());

    SvgPlot curves_fig("Evaluation accuracy during training (all contexts)", "training step",
                       "accuracy");
    curves_fig.set_comment("provenance " + cfg.config_hash());
    for (const LearningCurve& c : all_means) {
      std::vector<double> sx, sy;
      for (const CurvePoint& p : c.points) {
        sx.push_back(static_cast<double>(p.step));
        sy.push_back(p.accuracy);
      }
      curves_fig.add_line(std::string(to_string(c.context)), sx, sy);
    }
    curves_fig.save((out / "figures" / "fig_trained_out.svg").string());
  }

  // ---- experiment 2: single-context corpora and AbC
  if (cfg.experiments != "1") {
    json exp2;
    exp2["contexts"] = json::array();
    std::vector<double> abcs, normalized, freqs_x;
    std::vector<std::string> labels;
    json per_seed_abc = json::object();

    for (ContextType keep : contexts) {
      const std::string keep_name(to_string(keep));
      std::cerr << "[experiment] single-context corpus: " << keep_name << "\n";
      const AblationPlan plan = plan_ablation(synth.corpus, scan.occurrences, keep,
                                              stream_seed(cfg.master_seed, "ablation." + keep_name));
      const Corpus ablated = apply_ablation(synth.corpus, plan);
      {
        fs::create_directories(out / "ablation");
        std::ofstream pf(out / "ablation" / ("plan_" + keep_name + ".json"), std::ios::binary);
        write_plan_json(plan, pf);
      }
      const ScanResult rescan = scan_corpus(ablated, lexicon);
      const auto ctx_pairs = pairs_for_context(pairs, keep);
      if (ctx_pairs.empty()) {
        throw InputError("experiment: no evaluation pairs for context " + keep_name);
      }

      std::vector<std::function<TrainedRun()>> tasks;
      for (std::uint64_t seed : cfg.seeds) {
        const std::string dir =
            (out / "runs" / ("single_" + keep_name) / ("seed_" + std::to_string(seed))).string();
        tasks.push_back([&, dir, seed]() {
          log_line("[experiment] training single-context " + keep_name + ", seed " +
                   std::to_string(seed));
          return run_training(cfg, dir, "single_" + keep_name, seed, ablated, valid.corpus,
                              rescan.occurrences, ctx_pairs);
        });
      }
      const std::vector<TrainedRun> single_runs = run_wave(tasks, jobs);

      std::vector<LearningCurve> single_curves;
      for (std::size_t i = 0; i < single_runs.size(); ++i) {
        for (LearningCurve& c :
             curves_from_rows(single_runs[i].rows, "s" + std::to_string(cfg.seeds[i]))) {
          single_curves.push_back(std::move(c));
        }
      }
      const std::vector<LearningCurve> single_means = mean_curves_by_context(single_curves);
      {
        std::vector<LearningCurve> dump = single_curves;
        dump.insert(dump.end(), single_means.begin(), single_means.end());
        std::ofstream cf(out / ("curves_single_" + keep_name + ".csv"), std::ios::binary);
        cf << "# provenance " << cfg.config_hash() << "\n";
        write_curves_csv(dump, cf);
      }

      const LearningCurve* all_mean = nullptr;
      for (const LearningCurve& c : all_means) {
        if (c.context == keep) all_mean = &c;
      }
      if (!all_mean) throw InputError("experiment: missing all-context curve for " + keep_name);
      const LearningCurve all_smooth = savgol_smooth(*all_mean, cfg.smoothing);
      const LearningCurve single_smooth = savgol_smooth(single_means.front(), cfg.smoothing);
      const AbcResult r = abc(all_smooth, single_smooth);

      exp2["contexts"].push_back(json{{"context", keep_name},
                                      {"abc", r.abc},
                                      {"normalized_abc", r.normalized_abc},
                                      {"endpoint_step", r.endpoint_step},
                                      {"endpoint_examples", r.endpoint_examples}});
      abcs.push_back(r.abc);
      normalized.push_back(r.normalized_abc);
      freqs_x.push_back(static_cast<double>(scan.table.per_100k(keep)));
      labels.push_back(keep_name);

      // per-seed AbC for the same context
      json seed_abcs = json::array();
      for (std::uint64_t seed : cfg.seeds) {
        const std::string tag = "s" + std::to_string(seed);
        const LearningCurve* a = nullptr;
        const LearningCurve* s = nullptr;
        for (const LearningCurve& c : all_curves) {
          if (c.context == keep && c.seed_tag == tag) a = &c;
        }
        for (const LearningCurve& c : single_curves) {
          if (c.context == keep && c.seed_tag == tag) s = &c;
        }
        if (a && s) {
          const AbcResult sr = abc(savgol_smooth(*a, cfg.smoothing), savgol_smooth(*s, cfg.smoothing));
          seed_abcs.push_back(json{{"seed", seed}, {"abc", sr.abc},
                                   {"normalized_abc", sr.normalized_abc}});
        }
      }
      per_seed_abc[keep_name] = seed_abcs;

      SvgPlot fig("Learning curves: " + keep_name, "context examples seen", "accuracy");
      fig.set_comment("provenance " + cfg.config_hash());
      std::vector<double> ax, ay, sx, sy;
      for (const CurvePoint& p : all_smooth.points) {
        ax.push_back(p.examples_seen);
        ay.push_back(p.accuracy);
      }
      for (const CurvePoint& p : single_smooth.points) {
        sx.push_back(p.examples_seen);
        sy.push_back(p.accuracy);
      }
      fig.add_line("all contexts", ax, ay);
      fig.add_line("single context", sx, sy);
      fig.save((out / "figures" / ("fig_curves_" + keep_name + ".svg")).string());
    }

    exp2["per_seed_abc"] = per_seed_abc;
    exp2["t_test"] = stat_to_json(t_test_one_sample(abcs, 0.0, Sidedness::OneSided));
    if (freqs_x.size() >= 3) {
      exp2["abc_frequency_correlation"] = stat_to_json(pearson(freqs_x, abcs));
    }
    report["experiment2"] = exp2;

    SvgPlot abc_fig("Normalised AbC vs context frequency", "frequency per 100k sentences",
                    "normalised AbC");
    abc_fig.set_comment("provenance " + cfg.config_hash());
    abc_fig.add_points("contexts", freqs_x, normalized, labels);
    abc_fig.add_fit_line("zero", 0.0, 0.0);
    abc_fig.save((out / "figures" / "fig_abc_scatter.svg").string());
  }

  report["metadata"] = json{
      {"abc_x_axis", "context_examples_seen"},
      {"normalized_abc", "abc divided by the examples extent (mean vertical gap)"},
      {"final_accuracy", "smoothed accuracy at the last checkpoint"},
      {"data_efficiency_threshold", 0.95},
      {"significance_test", "one-sample one-sided t of per-context AbC against zero"},
      {"correlation_points", "per-context means across seeds"}};

  std::ofstream rf(out / "report.json", std::ios::binary);
  rf << report.dump(2) << '\n';
  return report;
}

}  // namespace polarity
