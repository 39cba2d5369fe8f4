#pragma once

// Ballot types, ballot spaces and voter profiles.
//
// A ballot is a weak order over the candidates: a sequence of tiers, highest
// first, each tier a set of candidates tied at that level. Truncated input
// ("A>B" with three candidates) is canonicalized by placing every unlisted
// candidate into a final implicit tier, so two texts denoting the same weak
// order always produce the same Ranking value.

#include "fbcheck/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbc {

// Thrown on malformed text input; line is 1-based, 0 when not line-oriented.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Candidate {
  int index = 0;
  std::string label;
};

// Default display labels "A", "B", ... (up to 26 candidates).
std::string default_label(int index);

struct Ranking {
  // Canonical: every candidate appears exactly once, tiers non-empty,
  // members of each tier sorted ascending.
  std::vector<std::vector<int>> tiers;

  bool operator==(const Ranking&) const = default;
  bool operator<(const Ranking& other) const;  // shape-major canonical order

  int tier_count() const { return static_cast<int>(tiers.size()); }
  int tier_of(int candidate) const;  // -1 when absent (non-canonical values)
  bool sole_top(int candidate) const;
  bool top_member(int candidate) const;
  bool bottom_member(int candidate) const;
  // True when `a` occupies a strictly higher tier than `b`.
  bool prefers(int a, int b) const;

  // Scoring position. Tiers occupy positions 0,1,... except that the final
  // tier of a multi-tier ranking snaps to the bottom position rank_count-1,
  // which makes truncated ballots score as "unranked = last place".
  int position_of(int candidate, int rank_count) const;

  // Relabels candidates through a permutation (perm[old] = new).
  Ranking relabeled(const std::vector<int>& perm) const;
};

// An admissible set of ballot types. Immutable; enumeration, index lookup and
// the ballot-index permutations induced by candidate swaps are precomputed.
class BallotSpace {
 public:
  BallotSpace(int n_candidates, bool allow_ties = false, bool allow_truncation = false,
              int max_ranks = 0);

  int candidates() const { return n_c_; }
  bool ties() const { return ties_; }
  bool truncation() const { return trunc_; }
  int max_ranks() const { return max_ranks_; }      // 0 = uncapped
  int rank_count() const;                           // effective tier budget

  int size() const { return static_cast<int>(rankings_.size()); }
  const std::vector<Ranking>& rankings() const { return rankings_; }
  const Ranking& ranking(int k) const { return rankings_.at(k); }
  int index_of(const Ranking& r) const;             // -1 when not admissible
  bool admits(const Ranking& r) const;

  std::string label(int candidate) const;
  int candidate_by_label(const std::string& label) const;  // -1 unknown

  // Permutation p of ballot indices with p[k] = index of ranking k after
  // exchanging candidates i and j everywhere.
  const std::vector<int>& swap_permutation(int i, int j) const;

  // Field equality; distinct instances with equal fields are interchangeable.
  bool same_descriptor(const BallotSpace& other) const;
  std::string describe() const;

 private:
  int n_c_;
  bool ties_;
  bool trunc_;
  int max_ranks_;
  std::vector<Ranking> rankings_;
  std::map<Ranking, int> index_;
  std::vector<std::vector<int>> swaps_;  // keyed i * n_c_ + j
};

using BallotSpacePtr = std::shared_ptr<const BallotSpace>;

BallotSpacePtr make_space(int n_candidates, bool allow_ties = false,
                          bool allow_truncation = false, int max_ranks = 0);

// Text form: tiers separated by '>', tied candidates by '='; unlisted
// candidates land in the implicit final tier (requires the space to allow
// truncation). format_ranking always prints the full canonical text.
// line (1-based) is attached to any ParseError; 0 means standalone text.
Ranking parse_ranking(const std::string& text, const BallotSpace& space, int line = 0);
std::string format_ranking(const Ranking& r, const BallotSpace& space);

// A profile: exact non-negative count per ballot type of one space.
struct Profile {
  BallotSpacePtr space;
  std::vector<Rat> counts;  // size == space->size()

  Rat total() const;                  // number of voters
  bool is_normalized() const;         // total == 1
  Profile normalized() const;         // throws std::runtime_error on empty electorate
  Rat count(int k) const { return counts.at(k); }
};

Profile make_profile(BallotSpacePtr space);

// Profile files: one "COUNT: RANKING" per line, '#' comments, blank lines ok,
// counts are non-negative rationals, repeated rankings accumulate.
Profile parse_profile_text(const std::string& text, BallotSpacePtr space);
std::string format_profile(const Profile& profile);  // omits zero counts

}  // namespace fbc
