// Exhaustive small-electorate search for favorite-protection and
// monotonicity failures, with replayable counterexamples.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbcheck/method.hpp"

namespace fbc {

enum class Criterion {
  sfbc,          // a protected ballot keeps the favorite strictly on top
  fbc,           // ... keeps the favorite weakly on top
  lfp,           // ... keeps the least favorite strictly on the bottom
  monotonicity,  // raising the winner on one ballot never unseats them
};

std::string criterion_name(Criterion c);
Criterion parse_criterion(const std::string& name);

struct SearchScope {
  BallotSpacePtr space;
  int max_voters = 1;  // every electorate size 1..max_voters is covered
  Criterion criterion = Criterion::sfbc;
  // A violation claim quantifies over every protected recast, so an instance
  // is skipped when any protected evaluation lands on a tie; an exposed
  // evaluation that ties is merely dropped as a witness. When off, the
  // method's tiebreak stands in and only residual ties count as undecided.
  bool skip_on_tie = true;
};

// One pivotal voter who gains by abandoning the protected ballots. The same
// shape reports monotonicity failures: `manipulating` is then the raised
// ballot and the protected fields stay empty.
struct Counterexample {
  Criterion criterion = Criterion::sfbc;
  Profile base;         // everyone voting as found, the pivot sincerely
  Ranking sincere;      // the pivot's sincere strict ranking (cast in base)
  Ranking manipulating; // the ballot that improves the pivot's outcome
  Outcome sincere_outcome;
  Outcome manipulated_outcome;
  std::optional<Ranking> protecting;       // best protected ballot
  std::optional<Outcome> protected_outcome;  // what `protecting` yields
};

struct Verdict {
  SearchScope scope;
  std::string method_name;
  long long profiles_examined = 0;
  long long instances_examined = 0;
  long long skipped_instances = 0;
  long long tied_evaluations = 0;
  std::vector<Counterexample> counterexamples;

  bool ok() const { return counterexamples.empty(); }
};

// Multisets of n_voters ballots over d types: C(n_voters + d - 1, d - 1).
long long profile_count(int types, int n_voters);

// Every profile with exactly n_voters voters, in lexicographic count order.
void enumerate_profiles(const BallotSpacePtr& space, int n_voters,
                        const std::function<void(const Profile&)>& fn);

// Sweeps every profile of size 1..max_voters and every pivotal voter whose
// cast ballot reads as a strict full ranking (one instance per cast ballot
// type: identical voters are interchangeable). Workers > 1 split the profile
// stream; results are merged in enumeration order, so the verdict does not
// depend on the worker count.
Verdict check_criterion(const Method& method, const SearchScope& scope, int workers = 1);

// Sweeps every decided profile and every one-step raise of the winner on a
// single ballot. The winner must keep winning.
Verdict check_monotonic(const Method& method, const SearchScope& scope, int workers = 1);

// Dispatches on scope.criterion.
Verdict run_check(const Method& method, const SearchScope& scope, int workers = 1);

// True iff re-evaluating the recorded profiles reproduces every recorded
// outcome. Mismatches and evaluation failures report false, never throw.
bool replay(const Counterexample& ce, const Method& method);

// The admissible one-step raises of `candidate` on ballot `r`: splitting out
// of a shared tier, or moving up one tier (a swap past a strict neighbor, a
// join where ties are allowed). Other candidates keep their relative order.
std::vector<Ranking> raise_steps(const Ranking& r, int candidate, const BallotSpace& space);

std::string format_counterexample(const Counterexample& ce, const BallotSpace& space);
std::string format_verdict(const Verdict& verdict);

}  // namespace fbc
