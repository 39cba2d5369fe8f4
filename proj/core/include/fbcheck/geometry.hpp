// Normal vectors over a ballot space: the linear functionals whose signs
// decide two-candidate races, plus the symmetry machinery (candidate swaps,
// orbits) and the compliance classifier for protecting first choices.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fbcheck/ballots.hpp"
#include "fbcheck/rational.hpp"

namespace fbc {

// Which ballots count as putting a candidate "in first place": alone at the
// top, or merely a member of the top tier. The two readings agree on spaces
// without ties.
enum class FirstPlace {
  sole_top,
  top_member,
};

// One exact component per ballot type of a space.
struct NormalVector {
  BallotSpacePtr space;
  std::vector<Rat> comps;  // size == space->size()
};

NormalVector make_vector(BallotSpacePtr space, std::vector<Rat> comps);
NormalVector zero_vector(BallotSpacePtr space);

bool same_vector(const NormalVector& a, const NormalVector& b);

// Plain dot product with the raw counts. Sign-equivalent to inner() since
// electorates have positive size.
Rat dot(const NormalVector& v, const Profile& p);

// <v, p> with the profile normalized to total 1. Zero means the profile sits
// exactly on the boundary the vector defines.
Rat inner(const NormalVector& v, const Profile& p);

// Candidate relabeling: perm[c] is the new name of candidate c. The value a
// vector assigns to a ballot follows the ballot to its relabeled image.
NormalVector relabel_vector(const NormalVector& v, const std::vector<int>& perm);
Profile relabel_profile(const Profile& p, const std::vector<int>& perm);

// The transposition special case, via the space's precomputed tables.
NormalVector swap_vector(const NormalVector& v, int i, int j);
Profile swap_profile(const Profile& p, int i, int j);

// All distinct images of v under candidate relabelings, sorted by component
// list. The size always divides n_candidates!.
std::vector<NormalVector> orbit(const NormalVector& v);

enum class VectorKind {
  category1,      // separates exactly one ordered pair of candidates
  category2,      // one candidate vs the rest (source: it takes the positive
                  // side of every passing pair; sink: the negative side)
  category3,      // passes for every ordered pair
  non_compliant,  // passes for none
};

std::string kind_name(VectorKind k);

struct VectorCategory {
  VectorKind kind = VectorKind::non_compliant;
  int i = -1, j = -1;     // category1: the unique passing pair
  int candidate = -1;     // category2: the distinguished candidate
  bool source = false;    // category2: positive side of every passing pair
  std::vector<std::pair<int, int>> passing;  // every ordered pair that passes
};

// The conditions a vector must meet to decide an i-vs-j race without ever
// rewarding a voter for demoting their favorite: at least n_c-1 components
// tie for the maximum, that maximum is positive, and the maximal components
// reach ballots listing every candidate other than j first; symmetrically
// for the minimum and candidates other than i.
bool pair_conditions_hold(const NormalVector& v, int i, int j,
                          FirstPlace reading = FirstPlace::sole_top);

// Classifies by the set of passing pairs. The only shapes that set can take
// are: empty, a single pair, a star around one candidate, or all pairs --
// anything else indicates an internal error and throws std::logic_error.
VectorCategory classify_vector(const NormalVector& v, FirstPlace reading = FirstPlace::sole_top);

// Vector files: one "VALUE: RANKING" per line, '#' comments, blank lines ok.
// Values are rationals of either sign; omitted ballot types get 0; listing a
// ballot type twice is an error.
NormalVector parse_vector_text(const std::string& text, BallotSpacePtr space);
std::string format_vector(const NormalVector& v);  // omits zero components

}  // namespace fbc
