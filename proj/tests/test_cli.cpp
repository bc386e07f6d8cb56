#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polarity/scope.hpp"
#include "polarity/synth.hpp"

using namespace polarity;
namespace fs = std::filesystem;

namespace {

const std::string kBin = POLARITY_BIN;
const std::string kData = DATA_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("polarity_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("synth then scan: frequency CSV equals the gold schedule") {
  TempDir tmp;
  const std::string synth_out = (tmp.path / "synth").string();
  REQUIRE(run("synth --grammar " + kData + "/grammar_experiment.txt --sentences 2000 --seed 5 "
              "--npis-ignored x --out " + synth_out) == 2);  // unknown flag: input error
  REQUIRE(run("synth --grammar " + kData + "/grammar_experiment.txt --sentences 2000 --seed 5 "
              "--out " + synth_out) == 0);
  REQUIRE(fs::exists(tmp.path / "synth" / "corpus.conllu"));
  REQUIRE(fs::exists(tmp.path / "synth" / "gold.jsonl"));

  const std::string scan_out = (tmp.path / "scan").string();
  REQUIRE(run("scan --corpus " + synth_out + "/corpus.conllu --out " + scan_out) == 0);

  // counts in frequency.csv must equal the gold counts
  std::ifstream gf(tmp.path / "synth" / "gold.jsonl");
  const auto gold = read_occurrences_jsonl(gf);
  std::array<std::size_t, kContextCount> gold_counts{};
  for (const auto& o : gold) gold_counts[context_index(o.context)] += 1;

  std::ifstream ff(tmp.path / "scan" / "frequency.csv");
  const FrequencyTable table = read_frequency_csv(ff);
  for (ContextType c : all_contexts()) {
    CHECK(table.counts[context_index(c)] == gold_counts[context_index(c)]);
  }
}

TEST_CASE("missing input file exits with code 2") {
  TempDir tmp;
  CHECK(run("scan --corpus /nonexistent/corpus.conllu --out " + (tmp.path / "x").string()) == 2);
}

TEST_CASE("empty corpus scans to zero counts") {
  TempDir tmp;
  const fs::path corpus = tmp.path / "empty.conllu";
  std::ofstream(corpus).close();
  const std::string out = (tmp.path / "scan").string();
  REQUIRE(run("scan --corpus " + corpus.string() + " --out " + out) == 0);
  std::ifstream ff(tmp.path / "scan" / "frequency.csv");
  const FrequencyTable table = read_frequency_csv(ff);
  for (ContextType c : all_contexts()) CHECK(table.counts[context_index(c)] == 0);
}

TEST_CASE("filter: identity case and byte-identical plans for equal seeds") {
  TempDir tmp;
  const std::string synth_out = (tmp.path / "synth").string();
  REQUIRE(run("synth --grammar " + kData + "/grammar_experiment.txt --sentences 1500 --seed 9 "
              "--out " + synth_out) == 0);
  const std::string scan_out = (tmp.path / "scan").string();
  REQUIRE(run("scan --corpus " + synth_out + "/corpus.conllu --out " + scan_out) == 0);

  const std::string f1 = (tmp.path / "f1").string();
  const std::string f2 = (tmp.path / "f2").string();
  const std::string base = "filter --corpus " + synth_out + "/corpus.conllu --occurrences " +
                           scan_out + "/occurrences.jsonl --keep sentential_negation --seed 4 ";
  REQUIRE(run(base + "--out " + f1) == 0);
  REQUIRE(run(base + "--out " + f2) == 0);
  CHECK(slurp(tmp.path / "f1" / "plan.json") == slurp(tmp.path / "f2" / "plan.json"));
  CHECK(slurp(tmp.path / "f1" / "corpus.conllu") == slurp(tmp.path / "f2" / "corpus.conllu"));

  // rescan of the filtered corpus holds only the kept context
  const std::string rescan = (tmp.path / "rescan").string();
  REQUIRE(run("scan --corpus " + f1 + "/corpus.conllu --out " + rescan) == 0);
  std::ifstream ff(tmp.path / "rescan" / "frequency.csv");
  const FrequencyTable table = read_frequency_csv(ff);
  for (ContextType c : all_contexts()) {
    if (c != ContextType::SententialNegation) CHECK(table.counts[context_index(c)] == 0);
  }
  CHECK(table.counts[context_index(ContextType::SententialNegation)] > 0);
}

TEST_CASE("unknown config keys are rejected with exit 2") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "bad.ini";
  {
    std::ofstream out(cfg);
    out << "[lm]\nprofile = desk\nwarp_speed = 9\n";
  }
  CHECK(run("--config " + cfg.string() + " gradcheck --runs 1") == 2);

  const fs::path cfg2 = tmp.path / "bad2.ini";
  {
    std::ofstream out(cfg2);
    out << "[warp]\nspeed = 9\n";
  }
  CHECK(run("--config " + cfg2.string() + " gradcheck --runs 1") == 2);
}

TEST_CASE("gradcheck subcommand succeeds") {
  CHECK(run("gradcheck --runs 3 --seed 11") == 0);
}

TEST_CASE("eval without pairs or templates is an input error") {
  TempDir tmp;
  CHECK(run("eval --checkpoints " + tmp.path.string() + " --out " + (tmp.path / "e").string()) == 2);
}

TEST_CASE("train / eval / analyze round trip") {
  TempDir tmp;
  const std::string synth_out = (tmp.path / "synth").string();
  REQUIRE(run("synth --grammar " + kData + "/grammar_experiment.txt --sentences 1200 --seed 3 "
              "--out " + synth_out) == 0);
  const std::string scan_out = (tmp.path / "scan").string();
  REQUIRE(run("scan --corpus " + synth_out + "/corpus.conllu --out " + scan_out) == 0);

  const std::string train_out = (tmp.path / "train").string();
  REQUIRE(run("train --corpus " + synth_out + "/corpus.conllu --seed 1 --epochs 1 "
              "--checkpoint-every 30 --out " + train_out) == 0);
  REQUIRE(fs::exists(tmp.path / "train" / "manifest.json"));
  REQUIRE(fs::exists(tmp.path / "train" / "training_log.csv"));
  std::size_t ckpts = 0;
  for (const auto& e : fs::directory_iterator(train_out)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("ckpt_", 0) == 0 && name.size() > 4 && name.substr(name.size() - 4) == ".bin") {
      ++ckpts;
    }
  }
  CHECK(ckpts >= 2);

  const std::string eval_out = (tmp.path / "eval").string();
  REQUIRE(run("eval --checkpoints " + train_out + " --templates " + kData +
              "/templates_experiment.txt --pairs-per-context 8 --pairs-seed 2 --corpus " +
              synth_out + "/corpus.conllu --occurrences " + scan_out +
              "/occurrences.jsonl --out " + eval_out) == 0);
  REQUIRE(fs::exists(tmp.path / "eval" / "results.csv"));
  REQUIRE(fs::exists(tmp.path / "eval" / "curves.csv"));

  // short curves need a short smoothing window
  const fs::path cfg = tmp.path / "smooth.ini";
  {
    std::ofstream out(cfg);
    out << "[smoothing]\nwindow = 3\ndegree = 1\n";
  }
  const std::string analyze_out = (tmp.path / "analyze").string();
  REQUIRE(run("--config " + cfg.string() + " analyze --all " + eval_out + "/curves.csv "
              "--frequency " + scan_out + "/frequency.csv --out " + analyze_out) == 0);
  REQUIRE(fs::exists(tmp.path / "analyze" / "report.json"));
  REQUIRE(fs::exists(tmp.path / "analyze" / "figures" / "fig_efficiency_scatter.svg"));
}

TEST_CASE("analyze with fewer than 3 contexts exits 2") {
  TempDir tmp;
  const fs::path curves = tmp.path / "curves.csv";
  {
    std::ofstream out(curves);
    out << "context,seed,step,tokens_seen,context_examples_seen,accuracy\n";
    out << "adverbs,s1,0,0,0,0.5\nadverbs,s1,50,100,2,0.6\n";
    out << "only,s1,0,0,0,0.5\nonly,s1,50,100,2,0.6\n";
  }
  const fs::path freq = tmp.path / "frequency.csv";
  {
    std::ofstream out(freq);
    out << "context,count,per_100k\nadverbs,10,50\nonly,20,100\n";
  }
  CHECK(run("analyze --all " + curves.string() + " --frequency " + freq.string() + " --out " +
            (tmp.path / "a").string()) == 2);
}
