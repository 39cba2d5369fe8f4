// Staged methods: rounds of win conditions built from normal vectors, closed
// under candidate symmetry.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fbcheck/geometry.hpp"
#include "fbcheck/method.hpp"

namespace fbc {

// One way for a candidate to win a stage: every vector strictly positive.
struct Condition {
  int winner = -1;
  std::vector<NormalVector> vectors;
};

// A stage offers each candidate one or more conditions; a candidate wins the
// stage if any of its conditions holds strictly.
struct Stage {
  std::vector<Condition> conditions;
};

// Closes seed conditions under candidate swaps, so every candidate gets the
// image conditions of every other. Duplicate images collapse. The result is
// neutral by construction: each candidate carries the same number of
// conditions.
Stage generate_stage(const std::vector<Condition>& seeds);

// A minimal set of conditions whose closure regenerates the stage: the
// canonically smallest member of each swap-orbit.
std::vector<Condition> minimal_generators(const Stage& stage);

enum class StageType {
  type1,          // every vector separates one pair
  type1b,         // pair separators mixed with one-vs-rest vectors
  type2,          // every vector is one-vs-rest
  type3,          // uses an anything-goes vector
  non_compliant,  // uses a vector that protects nobody
};

std::string stage_type_name(StageType t);

// Precedence: any non-compliant vector taints the stage, then any
// category-3, then uniform categories, then the mix.
StageType classify_stage(const Stage& stage, FirstPlace reading = FirstPlace::sole_top);

// Resolves a two-way tie between candidates a and b, or declines.
using Tiebreak = std::function<std::optional<int>(const Profile&, int a, int b)>;

class StagedMethod : public Method {
 public:
  // Stages run in order. A stage whose vectors all separate single pairs
  // settles every profile off the boundaries, so a later stage could never
  // run: such a stage is rejected anywhere but last.
  StagedMethod(std::string name, BallotSpacePtr space, std::vector<Stage> stages,
               Tiebreak tiebreak = nullptr, FirstPlace reading = FirstPlace::sole_top);

  const BallotSpacePtr& space() const override { return space_; }
  std::string name() const override { return name_; }
  const std::vector<Stage>& stages() const { return stages_; }
  FirstPlace reading() const { return reading_; }
  bool has_tiebreak() const override { return static_cast<bool>(tiebreak_); }

  // Per stage: winners = candidates with a strictly positive condition;
  // boundary = others with a condition that is non-negative but not strict.
  // Two strict winners is an exclusivity violation; one strict winner and no
  // boundary settles the race; any other non-empty combination is a tie
  // (two-way ties go to the tiebreak when one is set); nothing at all moves
  // to the next stage, and past the last stage the outcome is exhausted.
  Outcome evaluate(const Profile& profile) const override;
  std::string explain(const Profile& profile) const override;

 private:
  std::string name_;
  BallotSpacePtr space_;
  std::vector<Stage> stages_;
  Tiebreak tiebreak_;
  FirstPlace reading_;
};

}  // namespace fbc
