// The built-in method catalog: point systems, staged rules, and the direct
// tallies used as non-compliant controls.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbcheck/stages.hpp"

namespace fbc {

// Exact per-position scores, highest position first, non-increasing.
struct ScoringWeights {
  std::vector<Rat> per_position;

  explicit ScoringWeights(std::vector<Rat> w);
  bool equal_top_two() const;  // positions 0 and 1 score the same
};

// T_c = sum over ballots of weight at the candidate's position. Truncated
// tails sit at the last position (see Ranking::position_of).
std::vector<Rat> tally_points(const Profile& profile, const ScoringWeights& weights);

// Majority head-to-head between a and b; declines on a level pairing.
std::optional<int> pairwise_tiebreak(const Profile& profile, int a, int b);

// Positional scoring as a Method: argmax wins, level maxima tie (two-way
// ties go to the tiebreak when one is set).
class PointMethod : public Method {
 public:
  PointMethod(std::string name, BallotSpacePtr space, ScoringWeights weights,
              Tiebreak tiebreak = nullptr);
  const BallotSpacePtr& space() const override { return space_; }
  std::string name() const override { return name_; }
  const ScoringWeights& weights() const { return weights_; }
  Outcome evaluate(const Profile& profile) const override;
  std::string explain(const Profile& profile) const override;
  bool has_tiebreak() const override { return static_cast<bool>(tiebreak_); }

 private:
  std::string name_;
  BallotSpacePtr space_;
  ScoringWeights weights_;
  Tiebreak tiebreak_;
};

// Sequential elimination on strict (possibly truncated) rankings: drop the
// candidate with the fewest current first preferences until two remain, then
// majority. Elimination ties and final ties are reported, never broken
// silently; ballots whose remaining candidates are indistinguishable drop.
class IrvMethod : public Method {
 public:
  explicit IrvMethod(BallotSpacePtr space, Tiebreak tiebreak = nullptr);
  const BallotSpacePtr& space() const override { return space_; }
  std::string name() const override { return "irv"; }
  Outcome evaluate(const Profile& profile) const override;
  std::string explain(const Profile& profile) const override;
  bool has_tiebreak() const override { return static_cast<bool>(tiebreak_); }

 private:
  BallotSpacePtr space_;
  Tiebreak tiebreak_;
};

// ---- vector builders shared by the staged builtins ----

// Last-place count difference: positive where a is ranked last on fewer
// ballots than b (one point per ballot not ranking the candidate last).
NormalVector last_count_vector(const BallotSpacePtr& space, int a, int b);

// Positional-score difference between candidates a and b under the weights.
NormalVector position_diff_vector(const BallotSpacePtr& space, const ScoringWeights& weights,
                                  int a, int b);

// Share of ballots placing c at position <= depth-1, less the quota.
NormalVector top_count_quota_vector(const BallotSpacePtr& space, int c, int depth, const Rat& quota);

// Pairwise non-domination literal: +1 on ballots that do not prefer j to i,
// -1 on ballots that do, 0 on the all-tied ballot. Positive inner product
// means no majority (among ballots expressing a view) prefers j to i.
NormalVector domination_vector(const BallotSpacePtr& space, int i, int j);

// ---- builtins ----

enum class Builtin {
  antiplurality,
  equal_top_two,
  quota_points,
  mca,
  mdda,
  approval,
  range,
  plurality,
  irv,
  bucklin,
};

enum class QuotaFallback { antiplurality, equal_top_two };

struct MethodSpec {
  Builtin kind = Builtin::antiplurality;
  int candidates = 3;
  Rat quota = Rat(3, 4);                                  // quota_points
  QuotaFallback fallback = QuotaFallback::antiplurality;  // quota_points
  int levels = 6;                                         // range
  bool pairwise_ties = false;  // resolve two-way ties head-to-head
};

// Builtin names as used on the command line: "antiplurality",
// "equal-top-two", "quota-points", "mca", "mdda", "approval", "range",
// "plurality", "irv", "bucklin".
std::string builtin_name(Builtin b);

// Parses e.g. "quota-points q=3/4 fallback=antiplurality" or
// "range levels=6". Unknown names or parameters throw.
MethodSpec parse_method_spec(const std::string& text);

// Instantiates the builtin over its natural ballot space for
// spec.candidates candidates. Parameter errors throw std::invalid_argument.
MethodPtr build(const MethodSpec& spec);

// Method files: either a single "builtin <spec>" line, or a "ballots ..."
// line followed by "stage {" blocks of "condition winner=<label> {" blocks
// holding "vector {" literals (vector-file grammar) or "vector file=<path>"
// references resolved against base_dir. Stage conditions are seeds: each
// stage is closed under candidate swaps on load.
MethodPtr parse_method_file(const std::string& text, const std::string& base_dir = ".");
MethodPtr load_method_file(const std::string& path);

// Theorem-9 style weight recovery: for a stage whose vectors each separate
// one pair, solve for per-position weights whose score differences reproduce
// every vector. Returns nothing if the system is inconsistent.
std::optional<ScoringWeights> fit_point_weights(const Stage& stage,
                                                FirstPlace reading = FirstPlace::sole_top);

}  // namespace fbc
