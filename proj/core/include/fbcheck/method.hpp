// The method interface: anything that maps a profile to an outcome.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fbcheck/ballots.hpp"

namespace fbc {

enum class OutcomeKind {
  winner,
  tie,        // several candidates end level; needs an external resolution
  exhausted,  // no stage produced a winner or a tie
  exclusivity_violation,  // two conditions held strictly at once: the stage's
                          // win conditions fail to exclude each other
};

std::string outcome_kind_name(OutcomeKind k);

struct Outcome {
  OutcomeKind kind = OutcomeKind::exhausted;
  int winner = -1;            // kind == winner
  std::vector<int> tie_set;   // kind == tie; for exclusivity_violation the
                              // strict winners that overlapped (sorted)
  int stage_index = -1;       // 0-based stage that settled it, -1 otherwise
  bool tiebreak_applied = false;
  std::vector<int> pre_tiebreak;  // the tie the tiebreak resolved

  bool operator==(const Outcome&) const = default;
};

// Renders e.g. "winner: B (stage 2)" or "tie: A, C".
std::string describe_outcome(const Outcome& o, const BallotSpace& space);

class Method {
 public:
  virtual ~Method() = default;
  virtual const BallotSpacePtr& space() const = 0;
  virtual std::string name() const = 0;
  virtual Outcome evaluate(const Profile& profile) const = 0;
  // Optional multi-line human-readable account of how the outcome arises.
  virtual std::string explain(const Profile& profile) const;
  // Whether evaluate resolves two-way ties before reporting them.
  virtual bool has_tiebreak() const { return false; }
};

using MethodPtr = std::shared_ptr<const Method>;

}  // namespace fbc
