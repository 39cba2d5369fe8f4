// Brute-force engines behind the criterion and monotonicity checks.
#include "fbcheck/oracle.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

namespace fbc {

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::sfbc: return "sfbc";
    case Criterion::fbc: return "fbc";
    case Criterion::lfp: return "lfp";
    case Criterion::monotonicity: return "monotonicity";
  }
  throw std::logic_error("unknown criterion");
}

Criterion parse_criterion(const std::string& name) {
  if (name == "sfbc") return Criterion::sfbc;
  if (name == "fbc") return Criterion::fbc;
  if (name == "lfp") return Criterion::lfp;
  if (name == "monotonicity") return Criterion::monotonicity;
  throw std::invalid_argument("unknown criterion '" + name + "'");
}

long long profile_count(int types, int n_voters) {
  if (types <= 0) throw std::invalid_argument("profile_count needs at least one ballot type");
  if (n_voters < 0) throw std::invalid_argument("voter count must be non-negative");
  long long result = 1;
  for (int i = 1; i < types; ++i) {
    result = result * (n_voters + i) / i;  // exact: each prefix is C(n_voters + i, i)
  }
  return result;
}

namespace {

Profile to_profile(const BallotSpacePtr& space, const std::vector<int>& counts) {
  Profile p = make_profile(space);
  for (std::size_t k = 0; k < counts.size(); ++k) p.counts[k] = counts[k];
  return p;
}

// Walks every count vector with the given remaining total, counts ascending
// lexicographically. The vector is restored to zero afterwards.
template <class Fn>
void walk_counts(std::vector<int>& counts, std::size_t idx, int remaining, Fn&& fn) {
  if (idx + 1 == counts.size()) {
    counts[idx] = remaining;
    fn();
    counts[idx] = 0;
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    counts[idx] = k;
    walk_counts(counts, idx + 1, remaining - k, fn);
  }
  counts[idx] = 0;
}

// Memoizing evaluator keyed on integer count vectors. One per worker, so the
// sweep needs no locks; map nodes keep returned references stable.
class Evaluator {
 public:
  Evaluator(const Method& method, BallotSpacePtr space)
      : method_(method), space_(std::move(space)) {}

  const Outcome& eval(const std::vector<int>& counts) {
    auto it = memo_.find(counts);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(counts, method_.evaluate(to_profile(space_, counts))).first->second;
  }

 private:
  const Method& method_;
  BallotSpacePtr space_;
  std::map<std::vector<int>, Outcome> memo_;
};

// The winner an evaluation settles on, or nothing when the instance must be
// skipped: ties, exhaustion, overlapping win conditions, and (while skipping
// on ties) outcomes that only a tiebreak decided.
std::optional<int> decided_winner(const Outcome& o, bool skip_on_tie) {
  if (o.kind != OutcomeKind::winner) return std::nullopt;
  if (skip_on_tie && o.tiebreak_applied) return std::nullopt;
  return o.winner;
}

struct Hit {
  long long profile_index = 0;
  int pivot = 0;
  int step = 0;
  Counterexample ce;
};

struct WorkerResult {
  long long profiles = 0;
  long long instances = 0;
  long long skipped = 0;
  long long tied = 0;
  std::vector<Hit> hits;
};

void criterion_worker(const Method& method, const SearchScope& scope, int workers,
                      int worker_id, WorkerResult& out) {
  const BallotSpace& space = *scope.space;
  const int n_types = space.size();
  const int n_c = space.candidates();
  Evaluator eval(method, scope.space);

  std::vector<Ranking> ballots;
  ballots.reserve(n_types);
  for (int k = 0; k < n_types; ++k) ballots.push_back(space.ranking(k));

  std::vector<int> counts(n_types, 0);
  std::vector<std::optional<int>> winner_for(n_types);
  long long profile_index = -1;

  auto handle_profile = [&]() {
    ++profile_index;
    if (profile_index % workers != worker_id) return;
    ++out.profiles;
    for (int t = 0; t < n_types; ++t) {
      if (counts[t] == 0) continue;
      const Ranking& sigma = ballots[t];
      if (sigma.tier_count() != n_c) continue;  // sincere preferences are strict
      ++out.instances;
      const int fav = sigma.tiers.front().front();
      const int least = sigma.tiers.back().front();

      auto shields = [&](const Ranking& b) {
        switch (scope.criterion) {
          case Criterion::sfbc: return b.sole_top(fav);
          case Criterion::fbc: return b.top_member(fav);
          case Criterion::lfp:
            return b.tiers.back().size() == 1 && b.tiers.back().front() == least;
          default: return false;
        }
      };

      // Every ballot the pivot could cast instead, the sincere one included.
      // A violation claim quantifies over all shielded recasts, so an
      // undecided shielded evaluation makes the instance unverifiable and we
      // skip it outright; an undecided exposed evaluation just cannot serve
      // as a witness and is dropped on its own.
      bool shielded_undecided = false;
      for (int b = 0; b < n_types; ++b) {
        --counts[t];
        ++counts[b];
        const Outcome& o = eval.eval(counts);
        ++counts[t];
        --counts[b];
        winner_for[b] = decided_winner(o, scope.skip_on_tie);
        if (!winner_for[b]) {
          ++out.tied;
          if (shields(ballots[b])) shielded_undecided = true;
        }
      }
      if (shielded_undecided) {
        ++out.skipped;
        continue;
      }

      // The best the pivot can do without dropping the shield. The sincere
      // ballot itself qualifies, so some shielded ballot always exists.
      int best_shielded = -1;
      int best_shielded_winner = -1;
      for (int b = 0; b < n_types; ++b) {
        if (!shields(ballots[b])) continue;
        const int w = *winner_for[b];
        if (best_shielded == -1 || sigma.prefers(w, best_shielded_winner)) {
          best_shielded = b;
          best_shielded_winner = w;
        }
      }
      if (best_shielded == -1) continue;

      // A violation: some exposed ballot beats everything a shielded one can
      // reach. Report the exposed ballot with the best winner, lowest ballot
      // index on equal winners.
      int manip = -1;
      int manip_winner = -1;
      for (int b = 0; b < n_types; ++b) {
        if (shields(ballots[b]) || !winner_for[b]) continue;
        const int w = *winner_for[b];
        if (!sigma.prefers(w, best_shielded_winner)) continue;
        if (manip == -1 || sigma.prefers(w, manip_winner)) {
          manip = b;
          manip_winner = w;
        }
      }
      if (manip == -1) continue;

      Counterexample ce;
      ce.criterion = scope.criterion;
      ce.base = to_profile(scope.space, counts);
      ce.sincere = sigma;
      ce.manipulating = ballots[manip];
      ce.sincere_outcome = eval.eval(counts);
      --counts[t];
      ++counts[manip];
      ce.manipulated_outcome = eval.eval(counts);
      ++counts[t];
      --counts[manip];
      ce.protecting = ballots[best_shielded];
      --counts[t];
      ++counts[best_shielded];
      ce.protected_outcome = eval.eval(counts);
      ++counts[t];
      --counts[best_shielded];
      out.hits.push_back(Hit{profile_index, t, 0, std::move(ce)});
    }
  };

  for (int n = 1; n <= scope.max_voters; ++n) walk_counts(counts, 0, n, handle_profile);
}

void monotonic_worker(const Method& method, const SearchScope& scope, int workers,
                      int worker_id, WorkerResult& out) {
  const BallotSpace& space = *scope.space;
  const int n_types = space.size();
  Evaluator eval(method, scope.space);

  std::vector<Ranking> ballots;
  ballots.reserve(n_types);
  for (int k = 0; k < n_types; ++k) ballots.push_back(space.ranking(k));

  std::vector<int> counts(n_types, 0);
  long long profile_index = -1;

  auto handle_profile = [&]() {
    ++profile_index;
    if (profile_index % workers != worker_id) return;
    ++out.profiles;
    const Outcome base = eval.eval(counts);
    const auto settled = decided_winner(base, scope.skip_on_tie);
    if (!settled) {
      ++out.tied;  // no winner to raise
      return;
    }
    const int winner = *settled;
    for (int t = 0; t < n_types; ++t) {
      if (counts[t] == 0) continue;
      const auto raised = raise_steps(ballots[t], winner, space);
      for (std::size_t s = 0; s < raised.size(); ++s) {
        ++out.instances;
        const int rt = space.index_of(raised[s]);
        --counts[t];
        ++counts[rt];
        const Outcome& after = eval.eval(counts);
        ++counts[t];
        --counts[rt];
        const auto now = decided_winner(after, scope.skip_on_tie);
        if (!now) {
          ++out.tied;
          ++out.skipped;
          continue;
        }
        if (*now == winner) continue;
        Counterexample ce;
        ce.criterion = Criterion::monotonicity;
        ce.base = to_profile(scope.space, counts);
        ce.sincere = ballots[t];
        ce.manipulating = raised[s];
        ce.sincere_outcome = base;
        ce.manipulated_outcome = after;
        out.hits.push_back(Hit{profile_index, t, static_cast<int>(s), std::move(ce)});
      }
    }
  };

  for (int n = 1; n <= scope.max_voters; ++n) walk_counts(counts, 0, n, handle_profile);
}

SearchScope normalize_scope(const Method& method, SearchScope scope, bool needs_strict_sincere) {
  if (!scope.space) scope.space = method.space();
  if (!scope.space->same_descriptor(*method.space()))
    throw std::invalid_argument("scope ballot space does not match the method's");
  if (scope.max_voters < 1) throw std::invalid_argument("max voters must be at least 1");
  if (!scope.skip_on_tie && !method.has_tiebreak())
    throw std::invalid_argument("turning skip_on_tie off needs a method with a tiebreak");
  if (needs_strict_sincere && scope.space->rank_count() < scope.space->candidates())
    throw std::invalid_argument("criterion check needs the space to admit strict full rankings");
  return scope;
}

Verdict sweep(const Method& method, const SearchScope& scope, int workers, bool monotonic) {
  if (workers < 1) throw std::invalid_argument("worker count must be positive");
  std::vector<WorkerResult> results(workers);
  auto run = [&](int id) {
    if (monotonic) {
      monotonic_worker(method, scope, workers, id, results[id]);
    } else {
      criterion_worker(method, scope, workers, id, results[id]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int id = 0; id < workers; ++id) pool.emplace_back(run, id);
    for (auto& th : pool) th.join();
  }

  Verdict v;
  v.scope = scope;
  v.method_name = method.name();
  std::vector<Hit> hits;
  for (auto& r : results) {
    v.profiles_examined += r.profiles;
    v.instances_examined += r.instances;
    v.skipped_instances += r.skipped;
    v.tied_evaluations += r.tied;
    for (auto& h : r.hits) hits.push_back(std::move(h));
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return std::tie(a.profile_index, a.pivot, a.step) <
           std::tie(b.profile_index, b.pivot, b.step);
  });
  v.counterexamples.reserve(hits.size());
  for (auto& h : hits) v.counterexamples.push_back(std::move(h.ce));
  return v;
}

}  // namespace

void enumerate_profiles(const BallotSpacePtr& space, int n_voters,
                        const std::function<void(const Profile&)>& fn) {
  if (!space) throw std::invalid_argument("enumerate_profiles needs a ballot space");
  if (n_voters < 0) throw std::invalid_argument("voter count must be non-negative");
  std::vector<int> counts(space->size(), 0);
  Profile p = make_profile(space);
  walk_counts(counts, 0, n_voters, [&] {
    for (std::size_t k = 0; k < counts.size(); ++k) p.counts[k] = counts[k];
    fn(p);
  });
}

std::vector<Ranking> raise_steps(const Ranking& r, int candidate, const BallotSpace& space) {
  std::vector<Ranking> steps;
  const int t = r.tier_of(candidate);
  if (t < 0) return steps;
  const auto& tier = r.tiers[t];
  if (tier.size() > 1) {
    // Leave a shared tier upward: the candidate alone, former tiermates below.
    Ranking up;
    up.tiers.reserve(r.tiers.size() + 1);
    for (int i = 0; i < t; ++i) up.tiers.push_back(r.tiers[i]);
    up.tiers.push_back({candidate});
    std::vector<int> rest;
    for (int c : tier) {
      if (c != candidate) rest.push_back(c);
    }
    up.tiers.push_back(std::move(rest));
    for (std::size_t i = t + 1; i < r.tiers.size(); ++i) up.tiers.push_back(r.tiers[i]);
    if (space.admits(up)) steps.push_back(std::move(up));
  } else if (t > 0 && space.ties()) {
    // Join the tier above.
    Ranking up;
    up.tiers.reserve(r.tiers.size() - 1);
    for (std::size_t i = 0; i < r.tiers.size(); ++i) {
      if (static_cast<int>(i) == t) continue;
      up.tiers.push_back(r.tiers[i]);
      if (static_cast<int>(i) == t - 1) {
        auto& joined = up.tiers.back();
        joined.push_back(candidate);
        std::sort(joined.begin(), joined.end());
      }
    }
    if (space.admits(up)) steps.push_back(std::move(up));
  } else if (t > 0 && r.tiers[t - 1].size() == 1) {
    // Swap past the single neighbor above.
    Ranking up = r;
    std::swap(up.tiers[t - 1], up.tiers[t]);
    if (space.admits(up)) steps.push_back(std::move(up));
  }
  return steps;
}

Verdict check_criterion(const Method& method, const SearchScope& scope, int workers) {
  if (scope.criterion == Criterion::monotonicity)
    throw std::invalid_argument("monotonicity runs through check_monotonic");
  return sweep(method, normalize_scope(method, scope, true), workers, false);
}

Verdict check_monotonic(const Method& method, const SearchScope& scope, int workers) {
  SearchScope s = normalize_scope(method, scope, false);
  s.criterion = Criterion::monotonicity;
  return sweep(method, s, workers, true);
}

Verdict run_check(const Method& method, const SearchScope& scope, int workers) {
  return scope.criterion == Criterion::monotonicity ? check_monotonic(method, scope, workers)
                                                    : check_criterion(method, scope, workers);
}

bool replay(const Counterexample& ce, const Method& method) {
  try {
    const BallotSpacePtr& space = ce.base.space;
    if (!space || !space->same_descriptor(*method.space())) return false;
    if (method.evaluate(ce.base) != ce.sincere_outcome) return false;
    const int from = space->index_of(ce.sincere);
    if (ce.base.counts.at(from) < Rat(1)) return false;
    auto recast = [&](const Ranking& to) {
      Profile p = ce.base;
      p.counts[from] -= 1;
      p.counts[space->index_of(to)] += 1;
      return p;
    };
    if (method.evaluate(recast(ce.manipulating)) != ce.manipulated_outcome) return false;
    if (ce.protecting) {
      if (!ce.protected_outcome) return false;
      if (method.evaluate(recast(*ce.protecting)) != *ce.protected_outcome) return false;
    }
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

std::string format_counterexample(const Counterexample& ce, const BallotSpace& space) {
  std::ostringstream out;
  out << "profile:\n";
  std::istringstream lines(format_profile(ce.base));
  std::string line;
  while (std::getline(lines, line)) out << "  " << line << "\n";
  if (ce.criterion == Criterion::monotonicity) {
    out << "raised ballot: " << format_ranking(ce.sincere, space) << " -> "
        << format_ranking(ce.manipulating, space) << "\n";
    out << "before: " << describe_outcome(ce.sincere_outcome, space) << "\n";
    out << "after: " << describe_outcome(ce.manipulated_outcome, space) << "\n";
  } else {
    out << "sincere ballot: " << format_ranking(ce.sincere, space) << "\n";
    out << "sincere outcome: " << describe_outcome(ce.sincere_outcome, space) << "\n";
    if (ce.protecting && ce.protected_outcome) {
      out << "best shielded ballot: " << format_ranking(*ce.protecting, space) << "\n";
      out << "best shielded outcome: " << describe_outcome(*ce.protected_outcome, space) << "\n";
    }
    out << "manipulating ballot: " << format_ranking(ce.manipulating, space) << "\n";
    out << "manipulated outcome: " << describe_outcome(ce.manipulated_outcome, space) << "\n";
  }
  return out.str();
}

std::string format_verdict(const Verdict& v) {
  std::ostringstream out;
  out << "method: " << v.method_name << "\n";
  if (v.scope.space) out << "space: " << v.scope.space->describe() << "\n";
  out << "criterion: " << criterion_name(v.scope.criterion) << "\n";
  if (v.scope.criterion == Criterion::fbc)
    out << "reading: a ballot is shielded when the favorite is among its top candidates\n";
  out << "max voters: " << v.scope.max_voters << "\n";
  out << "skip on tie: " << (v.scope.skip_on_tie ? "yes" : "no") << "\n";
  out << "profiles examined: " << v.profiles_examined << "\n";
  out << "instances examined: " << v.instances_examined << "\n";
  out << "skipped instances: " << v.skipped_instances << "\n";
  out << "tied evaluations: " << v.tied_evaluations << "\n";
  if (v.ok()) {
    out << "verdict: no counterexample\n";
    return out.str();
  }
  out << "verdict: " << v.counterexamples.size() << " counterexample"
      << (v.counterexamples.size() == 1 ? "" : "s") << "\n";
  for (std::size_t i = 0; i < v.counterexamples.size(); ++i) {
    out << "\ncounterexample " << (i + 1) << ":\n";
    std::istringstream lines(format_counterexample(v.counterexamples[i], *v.scope.space));
    std::string line;
    while (std::getline(lines, line)) out << "  " << line << "\n";
  }
  return out.str();
}

}  // namespace fbc
