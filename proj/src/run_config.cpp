#include "polarity/run_config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "polarity/error.hpp"
#include "polarity/rng.hpp"

namespace polarity {

namespace {

std::uint64_t parse_u64(const std::string& v, const std::string& where) {
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for " + where + ": '" + v + "'");
  }
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    return std::stod(v);
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + where + ": '" + v + "'");
  }
}

}  // namespace

void RunConfig::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  apply_stream(in, path);
}

void RunConfig::apply_stream(std::istream& in, const std::string& origin) {
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"paths.npis", [&](const std::string& v) { npis_path = v; }},
      {"paths.licensors", [&](const std::string& v) { licensors_path = v; }},
      {"paths.grammar", [&](const std::string& v) { grammar_path = v; }},
      {"paths.templates", [&](const std::string& v) { templates_path = v; }},
      {"lm.profile",
       [&](const std::string& v) {
         profile = v;
         lm = LMConfig::profile(v);
       }},
      {"lm.embed_dim", [&](const std::string& v) { lm.embed_dim = parse_u64(v, "lm.embed_dim"); }},
      {"lm.hidden_dim",
       [&](const std::string& v) { lm.hidden_dim = parse_u64(v, "lm.hidden_dim"); }},
      {"lm.layers", [&](const std::string& v) { lm.layers = parse_u64(v, "lm.layers"); }},
      {"lm.dropout", [&](const std::string& v) { lm.dropout = parse_double(v, "lm.dropout"); }},
      {"lm.batch_size",
       [&](const std::string& v) { lm.batch_size = parse_u64(v, "lm.batch_size"); }},
      {"lm.bptt_len", [&](const std::string& v) { lm.bptt_len = parse_u64(v, "lm.bptt_len"); }},
      {"lm.base_lr", [&](const std::string& v) { lm.base_lr = parse_double(v, "lm.base_lr"); }},
      {"lm.lr_decay_factor",
       [&](const std::string& v) { lm.lr_decay_factor = parse_double(v, "lm.lr_decay_factor"); }},
      {"lm.epochs", [&](const std::string& v) { lm.epochs = parse_u64(v, "lm.epochs"); }},
      {"lm.checkpoint_every_batches",
       [&](const std::string& v) {
         lm.checkpoint_every_batches = parse_u64(v, "lm.checkpoint_every_batches");
       }},
      {"lm.min_count", [&](const std::string& v) { lm.min_count = parse_u64(v, "lm.min_count"); }},
      {"lm.clip_norm",
       [&](const std::string& v) { lm.clip_norm = parse_double(v, "lm.clip_norm"); }},
      {"smoothing.window",
       [&](const std::string& v) { smoothing.window = parse_u64(v, "smoothing.window"); }},
      {"smoothing.degree",
       [&](const std::string& v) { smoothing.degree = parse_u64(v, "smoothing.degree"); }},
      {"experiment.seeds",
       [&](const std::string& v) {
         seeds.clear();
         std::istringstream is(v);
         std::string tok;
         while (is >> tok) seeds.push_back(parse_u64(tok, "experiment.seeds"));
         if (seeds.empty()) throw ConfigError("config: experiment.seeds is empty");
       }},
      {"experiment.master_seed",
       [&](const std::string& v) { master_seed = parse_u64(v, "experiment.master_seed"); }},
      {"experiment.corpus_sentences",
       [&](const std::string& v) {
         corpus_sentences = parse_u64(v, "experiment.corpus_sentences");
       }},
      {"experiment.validation_sentences",
       [&](const std::string& v) {
         validation_sentences = parse_u64(v, "experiment.validation_sentences");
       }},
      {"experiment.pairs_per_context",
       [&](const std::string& v) {
         pairs_per_context = parse_u64(v, "experiment.pairs_per_context");
       }},
      {"experiment.experiments",
       [&](const std::string& v) {
         if (v != "1" && v != "2" && v != "both") {
           throw ConfigError("config: experiment.experiments must be 1, 2 or both");
         }
         experiments = v;
       }},
      {"experiment.jobs", [&](const std::string& v) { jobs = parse_u64(v, "experiment.jobs"); }},
  };

  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#' || line[first] == ';') continue;
    std::string body = line.substr(first);
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t')) body.pop_back();

    if (body.front() == '[') {
      const auto close = body.find(']');
      if (close == std::string::npos || close != body.size() - 1) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section header");
      }
      section = body.substr(1, close - 1);
      if (section != "paths" && section != "lm" && section != "smoothing" &&
          section != "experiment") {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown section [" +
                          section + "]");
      }
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = body.substr(0, eq);
    std::string value = body.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    const auto vstart = value.find_first_not_of(" \t");
    value = vstart == std::string::npos ? "" : value.substr(vstart);
    if (section.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": key outside any section");
    }
    auto it = setters.find(section + "." + key);
    if (it == setters.end()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    }
    it->second(value);
  }
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "version=" << kArtifactVersion << '\n';
  os << "paths.npis=" << npis_path << '\n';
  os << "paths.licensors=" << licensors_path << '\n';
  os << "paths.grammar=" << grammar_path << '\n';
  os << "paths.templates=" << templates_path << '\n';
  os << "lm.profile=" << profile << '\n';
  os << "lm.embed_dim=" << lm.embed_dim << '\n';
  os << "lm.hidden_dim=" << lm.hidden_dim << '\n';
  os << "lm.layers=" << lm.layers << '\n';
  os << "lm.dropout=" << lm.dropout << '\n';
  os << "lm.batch_size=" << lm.batch_size << '\n';
  os << "lm.bptt_len=" << lm.bptt_len << '\n';
  os << "lm.base_lr=" << lm.base_lr << '\n';
  os << "lm.lr_decay_factor=" << lm.lr_decay_factor << '\n';
  os << "lm.epochs=" << lm.epochs << '\n';
  os << "lm.checkpoint_every_batches=" << lm.checkpoint_every_batches << '\n';
  os << "lm.min_count=" << lm.min_count << '\n';
  os << "lm.clip_norm=" << lm.clip_norm << '\n';
  os << "smoothing.window=" << smoothing.window << '\n';
  os << "smoothing.degree=" << smoothing.degree << '\n';
  os << "experiment.master_seed=" << master_seed << '\n';
  os << "experiment.seeds=";
  for (std::uint64_t s : seeds) os << s << ' ';
  os << '\n';
  os << "experiment.corpus_sentences=" << corpus_sentences << '\n';
  os << "experiment.validation_sentences=" << validation_sentences << '\n';
  os << "experiment.pairs_per_context=" << pairs_per_context << '\n';
  os << "experiment.experiments=" << experiments << '\n';
  return os.str();
}

std::string RunConfig::config_hash() const {
  const std::uint64_t h = rng_detail::fnv1a64(canonical());
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

nlohmann::json RunConfig::provenance() const {
  return nlohmann::json{{"artifact_version", kArtifactVersion},
                        {"config_hash", config_hash()},
                        {"master_seed", master_seed},
                        {"seeds", seeds}};
}

}  // namespace polarity
