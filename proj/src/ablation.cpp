#include "polarity/ablation.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

#include "polarity/error.hpp"
#include "polarity/rng.hpp"

namespace polarity {

using nlohmann::json;

AblationPlan plan_ablation(const Corpus& corpus, const std::vector<LicensedOccurrence>& occurrences,
                           ContextType keep, std::uint64_t seed) {
  const std::size_t n = corpus.sentences.size();
  std::vector<bool> has_any(n, false);
  std::vector<bool> has_other(n, false);
  std::vector<std::size_t> kept_count(n, 0);
  for (const LicensedOccurrence& occ : occurrences) {
    if (occ.sentence_id >= n) {
      throw ArgumentError("plan_ablation: occurrence sentence_id out of range");
    }
    has_any[occ.sentence_id] = true;
    if (occ.context != keep) {
      has_other[occ.sentence_id] = true;
    } else {
      kept_count[occ.sentence_id] += 1;
    }
  }

  // neutral pool grouped by token length; buckets stay sorted by sentence id
  std::map<std::size_t, std::vector<std::size_t>> neutral_by_len;
  std::size_t pool_size = 0;
  for (std::size_t sid = 0; sid < n; ++sid) {
    if (has_any[sid]) continue;
    neutral_by_len[corpus.sentences[sid].size()].push_back(sid);
    ++pool_size;
  }

  AblationPlan plan;
  plan.keep = keep;
  plan.seed = seed;
  plan.summary.neutral_pool = pool_size;

  Rng rng(seed);
  for (std::size_t sid = 0; sid < n; ++sid) {
    if (!has_other[sid]) continue;
    const std::size_t len = corpus.sentences[sid].size();

    std::size_t donor;
    auto exact = neutral_by_len.find(len);
    if (exact != neutral_by_len.end()) {
      donor = exact->second[rng.uniform_index(exact->second.size())];
    } else {
      // nearest length within +-2, shorter preferred, then earliest id
      const std::size_t* found = nullptr;
      for (long delta : {-1L, 1L, -2L, 2L}) {
        const long cand = static_cast<long>(len) + delta;
        if (cand < 1) continue;
        auto it = neutral_by_len.find(static_cast<std::size_t>(cand));
        if (it != neutral_by_len.end()) {
          found = &it->second.front();
          break;
        }
      }
      if (!found) {
        throw PlanningError("plan_ablation: no neutral donor within +-2 tokens of sentence " +
                            std::to_string(sid) + " (length " + std::to_string(len) + ")");
      }
      donor = *found;
      plan.summary.length_fallbacks += 1;
    }
    plan.replacements.emplace_back(sid, donor);
    plan.summary.replaced += 1;
    plan.summary.kept_occurrences_lost += kept_count[sid];
  }
  return plan;
}

Corpus apply_ablation(const Corpus& corpus, const AblationPlan& plan) {
  Corpus out = corpus;
  for (const auto& [sid, donor] : plan.replacements) {
    if (sid >= corpus.sentences.size() || donor >= corpus.sentences.size()) {
      throw ArgumentError("apply_ablation: plan references sentence beyond corpus");
    }
    out.sentences[sid].tokens = corpus.sentences[donor].tokens;
  }
  out.token_count = 0;
  for (std::size_t i = 0; i < out.sentences.size(); ++i) {
    out.sentences[i].id = i;
    out.token_count += out.sentences[i].size();
  }
  return out;
}

void write_plan_json(const AblationPlan& plan, std::ostream& out) {
  json j{{"keep", to_string(plan.keep)},
         {"seed", plan.seed},
         {"replacements", plan.replacements},
         {"summary",
          {{"replaced", plan.summary.replaced},
           {"neutral_pool", plan.summary.neutral_pool},
           {"kept_occurrences_lost", plan.summary.kept_occurrences_lost},
           {"length_fallbacks", plan.summary.length_fallbacks}}}};
  out << j.dump(2) << '\n';
}

AblationPlan read_plan_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("ablation plan: ") + e.what());
  }
  AblationPlan plan;
  auto ctx = context_from_string(j.at("keep").get<std::string>());
  if (!ctx) throw ParseError("ablation plan: unknown keep context");
  plan.keep = *ctx;
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.replacements = j.at("replacements").get<std::vector<std::pair<std::size_t, std::size_t>>>();
  const json& s = j.at("summary");
  plan.summary.replaced = s.at("replaced").get<std::size_t>();
  plan.summary.neutral_pool = s.at("neutral_pool").get<std::size_t>();
  plan.summary.kept_occurrences_lost = s.at("kept_occurrences_lost").get<std::size_t>();
  plan.summary.length_fallbacks = s.at("length_fallbacks").get<std::size_t>();
  return plan;
}

}  // namespace polarity
