#include "fbcheck/methods.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace fbc {

namespace {

void require_profile(const BallotSpace& space, const Profile& profile) {
  if (!profile.space || !space.same_descriptor(*profile.space))
    throw std::invalid_argument("profile uses a different ballot space");
  if (profile.total() <= Rat(0))
    throw std::runtime_error("empty electorate: profile has no voters");
}

NormalVector negated(const NormalVector& v) {
  std::vector<Rat> comps = v.comps;
  for (Rat& c : comps) c = -c;
  return make_vector(v.space, std::move(comps));
}

ScoringWeights top_k_weights(int k, int len) {
  std::vector<Rat> w(len, Rat(0));
  for (int p = 0; p < k && p < len; ++p) w[p] = Rat(1);
  return ScoringWeights(std::move(w));
}

// One stage of positional scoring: highest total wins.
Stage positional_stage(const BallotSpacePtr& space, const ScoringWeights& weights) {
  Condition seed;
  seed.winner = 0;
  for (int j = 1; j < space->candidates(); ++j)
    seed.vectors.push_back(position_diff_vector(space, weights, 0, j));
  return generate_stage({seed});
}

Stage last_place_stage(const BallotSpacePtr& space) {
  Condition seed;
  seed.winner = 0;
  for (int j = 1; j < space->candidates(); ++j)
    seed.vectors.push_back(last_count_vector(space, 0, j));
  return generate_stage({seed});
}

// Most points among the top `depth` positions, provided the share of ballots
// listing the winner that high clears the quota.
Stage top_count_stage(const BallotSpacePtr& space, int depth, const Rat& quota) {
  Condition seed;
  seed.winner = 0;
  seed.vectors.push_back(top_count_quota_vector(space, 0, depth, quota));
  ScoringWeights w = top_k_weights(depth, space->rank_count());
  for (int j = 1; j < space->candidates(); ++j)
    seed.vectors.push_back(position_diff_vector(space, w, 0, j));
  return generate_stage({seed});
}

// Walks every assignment drawn from `options` (one pick per slot).
void for_each_assignment(const std::vector<std::vector<int>>& options,
                         const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(options.size(), 0);
  while (true) {
    std::vector<int> chosen(options.size());
    for (size_t s = 0; s < options.size(); ++s) chosen[s] = options[s][pick[s]];
    fn(chosen);
    size_t s = 0;
    while (s < options.size() && ++pick[s] == static_cast<int>(options[s].size())) {
      pick[s] = 0;
      ++s;
    }
    if (s == options.size()) break;
  }
}

std::vector<int> everyone_but(int n_c, int skip) {
  std::vector<int> out;
  for (int c = 0; c < n_c; ++c)
    if (c != skip) out.push_back(c);
  return out;
}

// A candidate wins outright by beating every rival head to head.
Stage dominates_all_stage(const BallotSpacePtr& space) {
  Condition seed;
  seed.winner = 0;
  for (int x = 1; x < space->candidates(); ++x)
    seed.vectors.push_back(negated(domination_vector(space, x, 0)));
  return generate_stage({seed});
}

// Fewest last places among the undominated candidates. Conditions spell out,
// per subset of beaten rivals, who beats each of them; rivals left standing
// must lose the last-place comparison. When everyone is beaten the
// last-place count alone decides.
Stage undominated_last_place_stage(const BallotSpacePtr& space) {
  const int n_c = space->candidates();
  std::vector<Condition> seeds;
  const std::vector<int> rivals = everyone_but(n_c, 0);
  const int n_r = static_cast<int>(rivals.size());
  for (unsigned mask = 0; mask < (1u << n_r); ++mask) {
    std::vector<int> beaten, standing;
    for (int t = 0; t < n_r; ++t) (mask >> t & 1 ? beaten : standing).push_back(rivals[t]);
    std::vector<std::vector<int>> options;
    for (int s : beaten) options.push_back(everyone_but(n_c, s));
    for_each_assignment(options, [&](const std::vector<int>& winner_over) {
      Condition c;
      c.winner = 0;
      for (int x : rivals) c.vectors.push_back(domination_vector(space, 0, x));
      for (size_t t = 0; t < beaten.size(); ++t)
        c.vectors.push_back(negated(domination_vector(space, beaten[t], winner_over[t])));
      for (int r : standing) c.vectors.push_back(last_count_vector(space, 0, r));
      seeds.push_back(std::move(c));
    });
  }
  // Nobody undominated: fewest last places wins outright.
  std::vector<std::vector<int>> options;
  for (int c = 0; c < n_c; ++c) options.push_back(everyone_but(n_c, c));
  for_each_assignment(options, [&](const std::vector<int>& winner_over) {
    Condition c;
    c.winner = 0;
    for (int x = 0; x < n_c; ++x)
      c.vectors.push_back(negated(domination_vector(space, x, winner_over[x])));
    for (int r : rivals) c.vectors.push_back(last_count_vector(space, 0, r));
    seeds.push_back(std::move(c));
  });
  return generate_stage(seeds);
}

std::string candidate_list(const BallotSpace& space, const std::vector<int>& cs) {
  std::string out;
  for (size_t k = 0; k < cs.size(); ++k) {
    if (k) out += ", ";
    out += space.label(cs[k]);
  }
  return out;
}

}  // namespace

ScoringWeights::ScoringWeights(std::vector<Rat> w) : per_position(std::move(w)) {
  if (per_position.empty()) throw std::invalid_argument("scoring weights are empty");
  for (size_t p = 1; p < per_position.size(); ++p)
    if (per_position[p] > per_position[p - 1])
      throw std::invalid_argument("scoring weights must be non-increasing");
}

bool ScoringWeights::equal_top_two() const {
  return per_position.size() >= 2 && per_position[0] == per_position[1];
}

std::vector<Rat> tally_points(const Profile& profile, const ScoringWeights& weights) {
  if (!profile.space) throw std::invalid_argument("profile has no ballot space");
  const BallotSpace& sp = *profile.space;
  if (static_cast<int>(weights.per_position.size()) < sp.rank_count())
    throw std::invalid_argument("weight vector too short for the ballot space");
  std::vector<Rat> totals(sp.candidates(), Rat(0));
  for (int k = 0; k < sp.size(); ++k) {
    if (profile.counts[k] == Rat(0)) continue;
    const Ranking& r = sp.ranking(k);
    for (int c = 0; c < sp.candidates(); ++c)
      totals[c] += profile.counts[k] * weights.per_position[r.position_of(c, sp.rank_count())];
  }
  return totals;
}

std::optional<int> pairwise_tiebreak(const Profile& profile, int a, int b) {
  if (!profile.space) throw std::invalid_argument("profile has no ballot space");
  const BallotSpace& sp = *profile.space;
  if (a < 0 || a >= sp.candidates() || b < 0 || b >= sp.candidates() || a == b)
    throw std::invalid_argument("tiebreak needs two distinct candidates");
  Rat pa(0), pb(0);
  for (int k = 0; k < sp.size(); ++k) {
    if (profile.counts[k] == Rat(0)) continue;
    const Ranking& r = sp.ranking(k);
    if (r.prefers(a, b)) pa += profile.counts[k];
    if (r.prefers(b, a)) pb += profile.counts[k];
  }
  if (pa > pb) return a;
  if (pb > pa) return b;
  return std::nullopt;
}

PointMethod::PointMethod(std::string name, BallotSpacePtr space, ScoringWeights weights,
                         Tiebreak tiebreak)
    : name_(std::move(name)),
      space_(std::move(space)),
      weights_(std::move(weights)),
      tiebreak_(std::move(tiebreak)) {
  if (!space_) throw std::invalid_argument("method needs a ballot space");
  if (static_cast<int>(weights_.per_position.size()) < space_->rank_count())
    throw std::invalid_argument("weight vector too short for the ballot space");
}

Outcome PointMethod::evaluate(const Profile& profile) const {
  require_profile(*space_, profile);
  std::vector<Rat> totals = tally_points(profile, weights_);
  Rat best = totals[0];
  for (const Rat& t : totals) best = std::max(best, t);
  std::vector<int> top;
  for (int c = 0; c < space_->candidates(); ++c)
    if (totals[c] == best) top.push_back(c);
  Outcome out;
  out.stage_index = 0;
  if (top.size() == 1) {
    out.kind = OutcomeKind::winner;
    out.winner = top[0];
    return out;
  }
  if (top.size() == 2 && tiebreak_) {
    if (std::optional<int> w = tiebreak_(profile, top[0], top[1])) {
      out.kind = OutcomeKind::winner;
      out.winner = *w;
      out.tiebreak_applied = true;
      out.pre_tiebreak = top;
      return out;
    }
  }
  out.kind = OutcomeKind::tie;
  out.tie_set = top;
  return out;
}

std::string PointMethod::explain(const Profile& profile) const {
  Outcome out = evaluate(profile);
  std::vector<Rat> totals = tally_points(profile, weights_);
  std::string text = "totals:";
  for (int c = 0; c < space_->candidates(); ++c)
    text += " " + space_->label(c) + "=" + format_rational(totals[c]);
  text += "\n" + describe_outcome(out, *space_) + "\n";
  return text;
}

IrvMethod::IrvMethod(BallotSpacePtr space, Tiebreak tiebreak)
    : space_(std::move(space)), tiebreak_(std::move(tiebreak)) {
  if (!space_) throw std::invalid_argument("method needs a ballot space");
  if (space_->ties())
    throw std::invalid_argument("irv needs strict rankings above the truncation tail");
}

namespace {

struct IrvRound {
  std::vector<int> active;
  std::vector<Rat> tallies;      // aligned with active
  std::vector<int> eliminated;   // emptied on a clean round, >1 on a tie
};

// The ballot's most preferred remaining candidate, or -1 when its remaining
// candidates are indistinguishable (a truncated tail).
int top_active(const Ranking& r, const std::vector<int>& active) {
  for (const std::vector<int>& tier : r.tiers) {
    std::vector<int> hits;
    for (int c : tier)
      if (std::find(active.begin(), active.end(), c) != active.end()) hits.push_back(c);
    if (hits.size() == 1) return hits[0];
    if (hits.size() > 1) return -1;
  }
  return -1;
}

std::vector<IrvRound> irv_rounds(const BallotSpace& sp, const Profile& profile) {
  std::vector<IrvRound> rounds;
  std::vector<int> active;
  for (int c = 0; c < sp.candidates(); ++c) active.push_back(c);
  while (active.size() > 2) {
    IrvRound round;
    round.active = active;
    round.tallies.assign(active.size(), Rat(0));
    for (int k = 0; k < sp.size(); ++k) {
      if (profile.counts[k] == Rat(0)) continue;
      int top = top_active(sp.ranking(k), active);
      if (top < 0) continue;
      round.tallies[std::find(active.begin(), active.end(), top) - active.begin()] +=
          profile.counts[k];
    }
    Rat least = round.tallies[0];
    for (const Rat& t : round.tallies) least = std::min(least, t);
    for (size_t a = 0; a < active.size(); ++a)
      if (round.tallies[a] == least) round.eliminated.push_back(active[a]);
    rounds.push_back(round);
    if (rounds.back().eliminated.size() > 1) return rounds;
    active.erase(std::find(active.begin(), active.end(), rounds.back().eliminated[0]));
  }
  // Final head-to-head among what remains.
  IrvRound last;
  last.active = active;
  last.tallies.assign(active.size(), Rat(0));
  for (int k = 0; k < sp.size(); ++k) {
    if (profile.counts[k] == Rat(0)) continue;
    int top = top_active(sp.ranking(k), active);
    if (top < 0) continue;
    last.tallies[std::find(active.begin(), active.end(), top) - active.begin()] +=
        profile.counts[k];
  }
  rounds.push_back(last);
  return rounds;
}

}  // namespace

Outcome IrvMethod::evaluate(const Profile& profile) const {
  require_profile(*space_, profile);
  std::vector<IrvRound> rounds = irv_rounds(*space_, profile);
  const IrvRound& last = rounds.back();
  Outcome out;
  out.stage_index = static_cast<int>(rounds.size()) - 1;
  if (last.eliminated.size() > 1) {  // stalled on an elimination tie
    out.kind = OutcomeKind::tie;
    out.tie_set = last.eliminated;
    std::sort(out.tie_set.begin(), out.tie_set.end());
    return out;
  }
  Rat best = last.tallies[0];
  for (const Rat& t : last.tallies) best = std::max(best, t);
  std::vector<int> top;
  for (size_t a = 0; a < last.active.size(); ++a)
    if (last.tallies[a] == best) top.push_back(last.active[a]);
  if (top.size() == 1) {
    out.kind = OutcomeKind::winner;
    out.winner = top[0];
    return out;
  }
  if (top.size() == 2 && tiebreak_) {
    if (std::optional<int> w = tiebreak_(profile, top[0], top[1])) {
      out.kind = OutcomeKind::winner;
      out.winner = *w;
      out.tiebreak_applied = true;
      out.pre_tiebreak = top;
      return out;
    }
  }
  out.kind = OutcomeKind::tie;
  out.tie_set = top;
  return out;
}

std::string IrvMethod::explain(const Profile& profile) const {
  require_profile(*space_, profile);
  std::vector<IrvRound> rounds = irv_rounds(*space_, profile);
  std::string text;
  for (size_t r = 0; r < rounds.size(); ++r) {
    const IrvRound& round = rounds[r];
    text += (r + 1 == rounds.size() && round.active.size() <= 2)
                ? "final round:"
                : "round " + std::to_string(r + 1) + ":";
    for (size_t a = 0; a < round.active.size(); ++a)
      text += " " + space_->label(round.active[a]) + "=" + format_rational(round.tallies[a]);
    text += "\n";
    if (round.eliminated.size() == 1)
      text += "  eliminate " + space_->label(round.eliminated[0]) + "\n";
    else if (round.eliminated.size() > 1)
      text += "  elimination tie: " + candidate_list(*space_, round.eliminated) + "\n";
  }
  text += describe_outcome(evaluate(profile), *space_) + "\n";
  return text;
}

NormalVector last_count_vector(const BallotSpacePtr& space, int a, int b) {
  if (!space) throw std::invalid_argument("null ballot space");
  const int n_c = space->candidates();
  if (a < 0 || a >= n_c || b < 0 || b >= n_c || a == b)
    throw std::invalid_argument("last-count vector needs two distinct candidates");
  std::vector<Rat> comps(space->size(), Rat(0));
  for (int k = 0; k < space->size(); ++k) {
    const Ranking& r = space->ranking(k);
    comps[k] = Rat((r.bottom_member(b) ? 1 : 0) - (r.bottom_member(a) ? 1 : 0));
  }
  return make_vector(space, std::move(comps));
}

NormalVector position_diff_vector(const BallotSpacePtr& space, const ScoringWeights& weights,
                                  int a, int b) {
  if (!space) throw std::invalid_argument("null ballot space");
  const int n_c = space->candidates();
  if (a < 0 || a >= n_c || b < 0 || b >= n_c || a == b)
    throw std::invalid_argument("position-diff vector needs two distinct candidates");
  if (static_cast<int>(weights.per_position.size()) < space->rank_count())
    throw std::invalid_argument("weight vector too short for the ballot space");
  std::vector<Rat> comps(space->size(), Rat(0));
  for (int k = 0; k < space->size(); ++k) {
    const Ranking& r = space->ranking(k);
    comps[k] = weights.per_position[r.position_of(a, space->rank_count())] -
               weights.per_position[r.position_of(b, space->rank_count())];
  }
  return make_vector(space, std::move(comps));
}

NormalVector top_count_quota_vector(const BallotSpacePtr& space, int c, int depth,
                                    const Rat& quota) {
  if (!space) throw std::invalid_argument("null ballot space");
  if (c < 0 || c >= space->candidates())
    throw std::invalid_argument("quota vector candidate out of range");
  if (depth < 1 || depth > space->rank_count())
    throw std::invalid_argument("quota vector depth out of range");
  std::vector<Rat> comps(space->size(), Rat(0));
  for (int k = 0; k < space->size(); ++k) {
    const Ranking& r = space->ranking(k);
    comps[k] = Rat(r.position_of(c, space->rank_count()) < depth ? 1 : 0) - quota;
  }
  return make_vector(space, std::move(comps));
}

NormalVector domination_vector(const BallotSpacePtr& space, int i, int j) {
  if (!space) throw std::invalid_argument("null ballot space");
  const int n_c = space->candidates();
  if (i < 0 || i >= n_c || j < 0 || j >= n_c || i == j)
    throw std::invalid_argument("domination vector needs two distinct candidates");
  std::vector<Rat> comps(space->size(), Rat(0));
  for (int k = 0; k < space->size(); ++k) {
    const Ranking& r = space->ranking(k);
    if (r.tier_count() == 1) continue;  // everyone tied: expresses no view
    comps[k] = Rat(r.prefers(j, i) ? -1 : 1);
  }
  return make_vector(space, std::move(comps));
}

std::string builtin_name(Builtin b) {
  switch (b) {
    case Builtin::antiplurality: return "antiplurality";
    case Builtin::equal_top_two: return "equal-top-two";
    case Builtin::quota_points: return "quota-points";
    case Builtin::mca: return "mca";
    case Builtin::mdda: return "mdda";
    case Builtin::approval: return "approval";
    case Builtin::range: return "range";
    case Builtin::plurality: return "plurality";
    case Builtin::irv: return "irv";
    case Builtin::bucklin: return "bucklin";
  }
  throw std::logic_error("unhandled builtin");
}

MethodSpec parse_method_spec(const std::string& text) {
  std::vector<std::string> tokens;
  {
    std::istringstream in(text);
    std::string t;
    while (in >> t) tokens.push_back(t);
  }
  if (tokens.empty()) throw std::invalid_argument("empty method spec");
  static const std::map<std::string, Builtin> names = {
      {"antiplurality", Builtin::antiplurality},
      {"equal-top-two", Builtin::equal_top_two},
      {"quota-points", Builtin::quota_points},
      {"mca", Builtin::mca},
      {"mdda", Builtin::mdda},
      {"approval", Builtin::approval},
      {"range", Builtin::range},
      {"plurality", Builtin::plurality},
      {"irv", Builtin::irv},
      {"bucklin", Builtin::bucklin},
  };
  auto hit = names.find(tokens[0]);
  if (hit == names.end())
    throw std::invalid_argument("unknown method '" + tokens[0] + "'");
  MethodSpec spec;
  spec.kind = hit->second;
  for (size_t t = 1; t < tokens.size(); ++t) {
    size_t eq = tokens[t].find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected KEY=VALUE, got '" + tokens[t] + "'");
    std::string key = tokens[t].substr(0, eq);
    std::string value = tokens[t].substr(eq + 1);
    if (key == "candidates") {
      spec.candidates = std::stoi(value);
    } else if (key == "tiebreak") {
      if (value == "pairwise")
        spec.pairwise_ties = true;
      else if (value == "none")
        spec.pairwise_ties = false;
      else
        throw std::invalid_argument("unknown tiebreak '" + value + "'");
    } else if (key == "q") {
      if (spec.kind != Builtin::quota_points)
        throw std::invalid_argument("parameter 'q' only applies to quota-points");
      spec.quota = parse_rational(value);
    } else if (key == "fallback") {
      if (spec.kind != Builtin::quota_points)
        throw std::invalid_argument("parameter 'fallback' only applies to quota-points");
      if (value == "antiplurality")
        spec.fallback = QuotaFallback::antiplurality;
      else if (value == "equal-top-two")
        spec.fallback = QuotaFallback::equal_top_two;
      else
        throw std::invalid_argument("unknown fallback '" + value + "'");
    } else if (key == "levels") {
      if (spec.kind != Builtin::range)
        throw std::invalid_argument("parameter 'levels' only applies to range");
      spec.levels = std::stoi(value);
    } else {
      throw std::invalid_argument("unknown parameter '" + key + "' for method '" + tokens[0] +
                                  "'");
    }
  }
  return spec;
}

MethodPtr build(const MethodSpec& spec) {
  const int n_c = spec.candidates;
  if (n_c < 2) throw std::invalid_argument("need at least two candidates");
  Tiebreak tb = spec.pairwise_ties ? Tiebreak(&pairwise_tiebreak) : Tiebreak();
  switch (spec.kind) {
    case Builtin::antiplurality: {
      BallotSpacePtr sp = make_space(n_c);
      return std::make_shared<StagedMethod>("antiplurality", sp,
                                            std::vector<Stage>{last_place_stage(sp)}, tb);
    }
    case Builtin::equal_top_two: {
      BallotSpacePtr sp = make_space(n_c);
      return std::make_shared<StagedMethod>(
          "equal-top-two", sp,
          std::vector<Stage>{positional_stage(sp, top_k_weights(2, sp->rank_count()))}, tb);
    }
    case Builtin::quota_points: {
      if (spec.quota <= Rat(1, 2) || spec.quota > Rat(1))
        throw std::invalid_argument("quota must lie in (1/2, 1]");
      BallotSpacePtr sp = make_space(n_c);
      Stage fallback = spec.fallback == QuotaFallback::antiplurality
                           ? last_place_stage(sp)
                           : positional_stage(sp, top_k_weights(2, sp->rank_count()));
      return std::make_shared<StagedMethod>(
          "quota-points q=" + format_rational(spec.quota), sp,
          std::vector<Stage>{top_count_stage(sp, 2, spec.quota), std::move(fallback)}, tb);
    }
    case Builtin::mca: {
      BallotSpacePtr sp = make_space(n_c, true, true, 3);
      return std::make_shared<StagedMethod>(
          "mca", sp,
          std::vector<Stage>{top_count_stage(sp, 1, Rat(1, 2)),
                             positional_stage(sp, top_k_weights(2, sp->rank_count()))},
          tb, FirstPlace::top_member);
    }
    case Builtin::mdda: {
      BallotSpacePtr sp = make_space(n_c, true, true);
      return std::make_shared<StagedMethod>(
          "mdda", sp,
          std::vector<Stage>{dominates_all_stage(sp), undominated_last_place_stage(sp)}, tb,
          FirstPlace::top_member);
    }
    case Builtin::approval: {
      BallotSpacePtr sp = make_space(n_c, true, true, 2);
      return std::make_shared<PointMethod>("approval", sp, top_k_weights(1, 2), tb);
    }
    case Builtin::range: {
      if (spec.levels < 2) throw std::invalid_argument("range needs at least two levels");
      BallotSpacePtr sp = make_space(n_c, true, true, spec.levels);
      std::vector<Rat> w;
      for (int p = spec.levels - 1; p >= 0; --p) w.push_back(Rat(p));
      return std::make_shared<PointMethod>("range levels=" + std::to_string(spec.levels), sp,
                                           ScoringWeights(std::move(w)), tb);
    }
    case Builtin::plurality: {
      BallotSpacePtr sp = make_space(n_c);
      return std::make_shared<PointMethod>("plurality", sp,
                                           top_k_weights(1, sp->rank_count()), tb);
    }
    case Builtin::irv:
      return std::make_shared<IrvMethod>(make_space(n_c), tb);
    case Builtin::bucklin: {
      BallotSpacePtr sp = make_space(n_c);
      std::vector<Stage> stages;
      for (int depth = 1; depth < n_c; ++depth)
        stages.push_back(top_count_stage(sp, depth, Rat(1, 2)));
      return std::make_shared<StagedMethod>("bucklin", sp, std::move(stages), tb);
    }
  }
  throw std::logic_error("unhandled builtin");
}

namespace {

bool parse_yes_no(const std::string& value, int line) {
  if (value == "yes") return true;
  if (value == "no") return false;
  throw ParseError(line, "expected yes or no, got '" + value + "'");
}

BallotSpacePtr parse_ballots_line(const std::string& rest, int line) {
  int candidates = -1, max_ranks = 0;
  bool ties = false, trunc = false;
  std::istringstream in(rest);
  std::string token;
  while (in >> token) {
    size_t eq = token.find('=');
    if (eq == std::string::npos)
      throw ParseError(line, "expected KEY=VALUE, got '" + token + "'");
    std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    try {
      if (key == "candidates")
        candidates = std::stoi(value);
      else if (key == "ties")
        ties = parse_yes_no(value, line);
      else if (key == "truncation")
        trunc = parse_yes_no(value, line);
      else if (key == "max_ranks")
        max_ranks = std::stoi(value);
      else
        throw ParseError(line, "unknown ballots parameter '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw ParseError(line, "bad value for '" + key + "': '" + value + "'");
    }
  }
  if (candidates < 0) throw ParseError(line, "ballots line needs candidates=N");
  try {
    return make_space(candidates, ties, trunc, max_ranks);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

}  // namespace

MethodPtr parse_method_file(const std::string& text, const std::string& base_dir) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  std::string name;
  FirstPlace reading = FirstPlace::sole_top;
  Tiebreak tiebreak;
  BallotSpacePtr space;
  std::vector<std::vector<Condition>> stage_seeds;  // one list per stage block

  enum class Ctx { top, stage, condition };
  Ctx ctx = Ctx::top;
  int condition_winner = -1;
  std::vector<NormalVector> condition_vectors;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::data_portion(raw);
    if (line.empty()) continue;

    if (ctx == Ctx::top) {
      if (line.rfind("builtin ", 0) == 0 || line == "builtin") {
        if (space || !stage_seeds.empty())
          throw ParseError(line_no, "builtin line does not combine with stage blocks");
        try {
          return build(parse_method_spec(line.substr(7)));
        } catch (const std::invalid_argument& e) {
          throw ParseError(line_no, e.what());
        }
      } else if (line.rfind("name ", 0) == 0) {
        name = detail::strip_ws(line.substr(5));
      } else if (line.rfind("first_place ", 0) == 0) {
        std::string value = detail::strip_ws(line.substr(12));
        if (value == "sole")
          reading = FirstPlace::sole_top;
        else if (value == "member")
          reading = FirstPlace::top_member;
        else
          throw ParseError(line_no, "first_place must be sole or member");
      } else if (line.rfind("tiebreak ", 0) == 0) {
        std::string value = detail::strip_ws(line.substr(9));
        if (value == "pairwise")
          tiebreak = &pairwise_tiebreak;
        else if (value == "none")
          tiebreak = nullptr;
        else
          throw ParseError(line_no, "unknown tiebreak '" + value + "'");
      } else if (line.rfind("ballots ", 0) == 0) {
        if (space) throw ParseError(line_no, "duplicate ballots line");
        space = parse_ballots_line(line.substr(8), line_no);
      } else if (line == "stage {") {
        if (!space) throw ParseError(line_no, "ballots line must precede stage blocks");
        stage_seeds.emplace_back();
        ctx = Ctx::stage;
      } else {
        throw ParseError(line_no, "unexpected line '" + line + "'");
      }
      continue;
    }

    if (ctx == Ctx::stage) {
      if (line == "}") {
        if (stage_seeds.back().empty())
          throw ParseError(line_no, "stage block has no conditions");
        ctx = Ctx::top;
      } else if (line.rfind("condition winner=", 0) == 0) {
        std::string rest = detail::strip_ws(line.substr(17));
        if (rest.size() < 2 || rest.back() != '{')
          throw ParseError(line_no, "expected 'condition winner=<label> {'");
        std::string label = detail::strip_ws(rest.substr(0, rest.size() - 1));
        condition_winner = space->candidate_by_label(label);
        if (condition_winner < 0)
          throw ParseError(line_no, "unknown candidate '" + label + "'");
        condition_vectors.clear();
        ctx = Ctx::condition;
      } else {
        throw ParseError(line_no, "unexpected line '" + line + "' in stage block");
      }
      continue;
    }

    // ctx == Ctx::condition
    if (line == "}") {
      Condition c;
      c.winner = condition_winner;
      c.vectors = condition_vectors;
      stage_seeds.back().push_back(std::move(c));
      ctx = Ctx::stage;
    } else if (line == "vector {") {
      std::string body;
      bool closed = false;
      while (std::getline(in, raw)) {
        ++line_no;
        std::string inner = detail::data_portion(raw);
        if (inner == "}") {
          closed = true;
          break;
        }
        body += raw + "\n";
      }
      if (!closed) throw ParseError(line_no, "unterminated vector block");
      condition_vectors.push_back(parse_vector_text(body, space));
    } else if (line.rfind("vector file=", 0) == 0) {
      std::filesystem::path ref(detail::strip_ws(line.substr(12)));
      if (ref.is_relative()) ref = std::filesystem::path(base_dir) / ref;
      std::ifstream vf(ref);
      if (!vf) throw ParseError(line_no, "cannot open vector file '" + ref.string() + "'");
      std::stringstream buf;
      buf << vf.rdbuf();
      condition_vectors.push_back(parse_vector_text(buf.str(), space));
    } else {
      throw ParseError(line_no, "unexpected line '" + line + "' in condition block");
    }
  }
  if (ctx != Ctx::top) throw ParseError(line_no, "unterminated block at end of file");
  if (!space) throw ParseError(line_no, "method file has no ballots line or builtin line");
  if (stage_seeds.empty()) throw ParseError(line_no, "method file has no stage blocks");

  std::vector<Stage> stages;
  for (const std::vector<Condition>& seeds : stage_seeds) stages.push_back(generate_stage(seeds));
  if (name.empty()) name = "method file";
  return std::make_shared<StagedMethod>(name, space, std::move(stages), tiebreak, reading);
}

MethodPtr load_method_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open method file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_method_file(buf.str(), std::filesystem::path(path).parent_path().string());
}

std::optional<ScoringWeights> fit_point_weights(const Stage& stage, FirstPlace reading) {
  if (stage.conditions.empty()) return std::nullopt;
  const BallotSpacePtr& space = stage.conditions[0].vectors.at(0).space;
  const int m = space->rank_count();

  // Rows of [coefficients | rhs] over the position weights.
  std::vector<std::vector<Rat>> rows;
  {
    std::vector<Rat> fix_last(m + 1, Rat(0));
    fix_last[m - 1] = Rat(1);
    rows.push_back(fix_last);  // anchor: the last position scores zero
  }
  for (const Condition& cond : stage.conditions) {
    for (const NormalVector& v : cond.vectors) {
      VectorCategory cat = classify_vector(v, reading);
      if (cat.kind != VectorKind::category1 || cat.i != cond.winner) return std::nullopt;
      for (int k = 0; k < space->size(); ++k) {
        const Ranking& r = space->ranking(k);
        std::vector<Rat> row(m + 1, Rat(0));
        row[r.position_of(cat.i, m)] += Rat(1);
        row[r.position_of(cat.j, m)] -= Rat(1);
        row[m] = v.comps[k];
        rows.push_back(std::move(row));
      }
    }
  }

  // Exact Gaussian elimination; free positions default to zero.
  std::vector<Rat> w(m, Rat(0));
  size_t top = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < m && top < rows.size(); ++col) {
    size_t hit = top;
    while (hit < rows.size() && rows[hit][col] == Rat(0)) ++hit;
    if (hit == rows.size()) continue;
    std::swap(rows[top], rows[hit]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == top || rows[r][col] == Rat(0)) continue;
      Rat f = rows[r][col] / rows[top][col];
      for (int c2 = col; c2 <= m; ++c2) rows[r][c2] -= f * rows[top][c2];
    }
    pivot_col.push_back(col);
    ++top;
  }
  for (size_t r = top; r < rows.size(); ++r)
    if (rows[r][m] != Rat(0)) return std::nullopt;  // inconsistent system
  // After full elimination each pivot row holds its pivot plus free columns
  // only, and free positions stay at zero.
  for (size_t r = 0; r < top; ++r) {
    int col = pivot_col[r];
    Rat value = rows[r][m];
    for (int c2 = col + 1; c2 < m; ++c2) value -= rows[r][c2] * w[c2];
    w[col] = value / rows[r][col];
  }

  for (int p = 1; p < m; ++p)
    if (w[p] > w[p - 1]) return std::nullopt;
  ScoringWeights fitted(std::move(w));
  // Confirm the fit reproduces every vector exactly.
  for (const Condition& cond : stage.conditions)
    for (const NormalVector& v : cond.vectors)
      if (!same_vector(v, position_diff_vector(space, fitted,
                                               classify_vector(v, reading).i,
                                               classify_vector(v, reading).j)))
        return std::nullopt;
  return fitted;
}

}  // namespace fbc
