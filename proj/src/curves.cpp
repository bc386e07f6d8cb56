#include "polarity/curves.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "polarity/error.hpp"
#include "polarity/num_format.hpp"

namespace polarity {

void write_curves_csv(const std::vector<LearningCurve>& curves, std::ostream& out) {
  out << "context,seed,step,tokens_seen,context_examples_seen,accuracy\n";
  for (const LearningCurve& c : curves) {
    for (const CurvePoint& p : c.points) {
      out << to_string(c.context) << ',' << c.seed_tag << ',' << p.step << ','
          << format_double(p.tokens_seen) << ',' << format_double(p.examples_seen) << ','
          << format_double(p.accuracy) << '\n';
    }
  }
}

std::vector<LearningCurve> read_curves_csv(std::istream& in) {
  std::vector<LearningCurve> curves;
  std::map<std::pair<std::string, std::string>, std::size_t> index;  // (context, seed) -> slot
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // first non-comment line is the header
      continue;
    }
    std::istringstream cells(line);
    std::string ctx, seed, step, tokens, examples, acc;
    if (!std::getline(cells, ctx, ',') || !std::getline(cells, seed, ',') ||
        !std::getline(cells, step, ',') || !std::getline(cells, tokens, ',') ||
        !std::getline(cells, examples, ',') || !std::getline(cells, acc, ',')) {
      throw ParseError("curves CSV line " + std::to_string(line_no) + ": expected 6 columns");
    }
    auto context = context_from_string(ctx);
    if (!context) {
      throw ParseError("curves CSV line " + std::to_string(line_no) + ": unknown context " + ctx);
    }
    CurvePoint p;
    try {
      p.step = std::stoull(step);
      p.tokens_seen = std::stod(tokens);
      p.examples_seen = std::stod(examples);
      p.accuracy = std::stod(acc);
    } catch (const std::exception&) {
      throw ParseError("curves CSV line " + std::to_string(line_no) + ": bad number");
    }
    auto key = std::make_pair(ctx, seed);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, curves.size()).first;
      curves.push_back(LearningCurve{*context, seed, {}});
    }
    curves[it->second].points.push_back(p);
  }
  return curves;
}

std::vector<LearningCurve> mean_curves_by_context(const std::vector<LearningCurve>& curves) {
  std::map<ContextType, std::vector<const LearningCurve*>> groups;
  for (const LearningCurve& c : curves) groups[c.context].push_back(&c);

  std::vector<LearningCurve> out;
  for (const auto& [context, members] : groups) {
    const std::size_t len = members.front()->points.size();
    for (const LearningCurve* c : members) {
      if (c->points.size() != len) {
        throw ArgumentError("mean_curves_by_context: curves for " +
                            std::string(to_string(context)) + " differ in length");
      }
    }
    LearningCurve mean;
    mean.context = context;
    mean.seed_tag = "mean";
    mean.points.resize(len);
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t step = members.front()->points[i].step;
      CurvePoint& p = mean.points[i];
      p.step = step;
      for (const LearningCurve* c : members) {
        if (c->points[i].step != step) {
          throw ArgumentError("mean_curves_by_context: step grids differ for " +
                              std::string(to_string(context)));
        }
        p.tokens_seen += c->points[i].tokens_seen;
        p.examples_seen += c->points[i].examples_seen;
        p.accuracy += c->points[i].accuracy;
      }
      const double n = static_cast<double>(members.size());
      p.tokens_seen /= n;
      p.examples_seen /= n;
      p.accuracy /= n;
    }
    out.push_back(std::move(mean));
  }
  return out;
}

ExampleSchedule::ExampleSchedule(const Corpus& corpus,
                                 const std::vector<LicensedOccurrence>& occurrences,
                                 std::size_t batch_size) {
  // stream offsets: each sentence contributes len + 1 (<eos>) ids
  std::vector<std::size_t> offset(corpus.sentences.size(), 0);
  std::size_t pos = 0;
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    offset[i] = pos;
    pos += corpus.sentences[i].size() + 1;
  }
  const std::size_t stream_len = pos;
  const std::size_t nbatch = stream_len / batch_size;

  for (const LicensedOccurrence& occ : occurrences) {
    if (occ.sentence_id >= corpus.sentences.size()) {
      throw ArgumentError("ExampleSchedule: occurrence sentence_id out of range");
    }
    const std::size_t p = offset[occ.sentence_id] + occ.npi.end - 1;
    const std::size_t lane = nbatch == 0 ? batch_size : p / nbatch;
    if (lane >= batch_size) continue;  // truncated tail, never consumed
    lane_positions_[context_index(occ.context)].push_back(p - lane * nbatch);
  }
  for (std::size_t c = 0; c < kContextCount; ++c) {
    std::sort(lane_positions_[c].begin(), lane_positions_[c].end());
    totals_[c] = lane_positions_[c].size();
  }
}

std::array<double, kContextCount> ExampleSchedule::seen_at(std::size_t epoch,
                                                           std::size_t pos_in_epoch) const {
  std::array<double, kContextCount> out{};
  for (std::size_t c = 0; c < kContextCount; ++c) {
    const auto& v = lane_positions_[c];
    // NPI at lane offset q is predicted once inputs [0, pos) are consumed,
    // i.e. when q <= pos - 1 + 1 = pos; at pos 0 nothing is predicted.
    const std::size_t partial =
        pos_in_epoch == 0
            ? 0
            : static_cast<std::size_t>(std::upper_bound(v.begin(), v.end(), pos_in_epoch) -
                                       v.begin());
    out[c] = static_cast<double>(epoch) * static_cast<double>(totals_[c]) +
             static_cast<double>(partial);
  }
  return out;
}

}  // namespace polarity
