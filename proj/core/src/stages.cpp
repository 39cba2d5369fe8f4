#include "fbcheck/stages.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fbc {

namespace {

// Canonical identity of a condition: winner plus the sorted component lists.
using CondKey = std::pair<int, std::vector<std::vector<Rat>>>;

CondKey key_of(const Condition& c) {
  std::vector<std::vector<Rat>> vecs;
  vecs.reserve(c.vectors.size());
  for (const NormalVector& v : c.vectors) vecs.push_back(v.comps);
  std::sort(vecs.begin(), vecs.end());
  vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
  return {c.winner, std::move(vecs)};
}

Condition from_key(const CondKey& key, const BallotSpacePtr& space) {
  Condition c;
  c.winner = key.first;
  for (const auto& comps : key.second) c.vectors.push_back(NormalVector{space, comps});
  return c;
}

Condition swap_condition(const Condition& c, int i, int j) {
  Condition out;
  out.winner = c.winner == i ? j : c.winner == j ? i : c.winner;
  out.vectors.reserve(c.vectors.size());
  for (const NormalVector& v : c.vectors) out.vectors.push_back(swap_vector(v, i, j));
  return out;
}

void validate_condition(const Condition& c, const BallotSpace& space) {
  if (c.winner < 0 || c.winner >= space.candidates())
    throw std::invalid_argument("condition winner out of range");
  if (c.vectors.empty())
    throw std::invalid_argument("condition needs at least one vector");
  for (const NormalVector& v : c.vectors) {
    if (!v.space->same_descriptor(space))
      throw std::invalid_argument("condition vectors use a different ballot space");
  }
}

}  // namespace

Stage generate_stage(const std::vector<Condition>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("stage needs at least one seed condition");
  const BallotSpacePtr space = seeds.front().vectors.empty()
                                   ? nullptr
                                   : seeds.front().vectors.front().space;
  if (!space) throw std::invalid_argument("condition needs at least one vector");
  const int n_c = space->candidates();

  std::set<CondKey> seen;
  std::vector<CondKey> frontier;
  for (const Condition& seed : seeds) {
    validate_condition(seed, *space);
    CondKey key = key_of(seed);
    if (seen.insert(key).second) frontier.push_back(std::move(key));
  }
  while (!frontier.empty()) {
    std::vector<CondKey> next;
    for (const CondKey& key : frontier) {
      const Condition cur = from_key(key, space);
      for (int i = 0; i < n_c; ++i) {
        for (int j = i + 1; j < n_c; ++j) {
          CondKey image = key_of(swap_condition(cur, i, j));
          if (seen.insert(image).second) next.push_back(std::move(image));
        }
      }
    }
    frontier = std::move(next);
  }

  Stage stage;
  std::vector<int> per_winner(n_c, 0);
  for (const CondKey& key : seen) {
    ++per_winner[key.first];
    stage.conditions.push_back(from_key(key, space));
  }
  for (int c = 0; c < n_c; ++c) {
    if (per_winner[c] != per_winner[0])
      throw std::logic_error("swap closure left candidates with unequal condition counts");
  }
  return stage;
}

std::vector<Condition> minimal_generators(const Stage& stage) {
  if (stage.conditions.empty()) throw std::invalid_argument("empty stage");
  const BallotSpacePtr space = stage.conditions.front().vectors.front().space;
  const int n_c = space->candidates();

  std::set<CondKey> members;
  for (const Condition& c : stage.conditions) members.insert(key_of(c));

  std::vector<Condition> out;
  std::set<CondKey> visited;
  for (const CondKey& start : members) {  // ascending, so orbit minima lead
    if (visited.count(start)) continue;
    out.push_back(from_key(start, space));
    std::vector<CondKey> frontier{start};
    visited.insert(start);
    while (!frontier.empty()) {
      std::vector<CondKey> next;
      for (const CondKey& key : frontier) {
        const Condition cur = from_key(key, space);
        for (int i = 0; i < n_c; ++i) {
          for (int j = i + 1; j < n_c; ++j) {
            CondKey image = key_of(swap_condition(cur, i, j));
            if (!members.count(image))
              throw std::invalid_argument("stage is not closed under candidate swaps");
            if (visited.insert(image).second) next.push_back(std::move(image));
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return out;
}

std::string stage_type_name(StageType t) {
  switch (t) {
    case StageType::type1: return "Type1";
    case StageType::type1b: return "Type1b";
    case StageType::type2: return "Type2";
    case StageType::type3: return "Type3";
    case StageType::non_compliant: return "NonCompliant";
  }
  throw std::logic_error("unhandled stage type");
}

StageType classify_stage(const Stage& stage, FirstPlace reading) {
  if (stage.conditions.empty()) throw std::invalid_argument("empty stage");
  bool has1 = false, has2 = false, has3 = false, has_nc = false;
  std::set<std::vector<Rat>> distinct;
  for (const Condition& c : stage.conditions) {
    for (const NormalVector& v : c.vectors) {
      if (!distinct.insert(v.comps).second) continue;
      switch (classify_vector(v, reading).kind) {
        case VectorKind::category1: has1 = true; break;
        case VectorKind::category2: has2 = true; break;
        case VectorKind::category3: has3 = true; break;
        case VectorKind::non_compliant: has_nc = true; break;
      }
    }
  }
  if (has_nc) return StageType::non_compliant;
  if (has3) return StageType::type3;
  if (has1 && has2) return StageType::type1b;
  if (has1) return StageType::type1;
  return StageType::type2;
}

StagedMethod::StagedMethod(std::string name, BallotSpacePtr space, std::vector<Stage> stages,
                           Tiebreak tiebreak, FirstPlace reading)
    : name_(std::move(name)),
      space_(std::move(space)),
      stages_(std::move(stages)),
      tiebreak_(std::move(tiebreak)),
      reading_(reading) {
  if (!space_) throw std::invalid_argument("method needs a ballot space");
  if (stages_.empty()) throw std::invalid_argument("method needs at least one stage");
  for (size_t s = 0; s < stages_.size(); ++s) {
    if (stages_[s].conditions.empty()) throw std::invalid_argument("empty stage");
    for (const Condition& c : stages_[s].conditions) validate_condition(c, *space_);
    if (s + 1 < stages_.size() && classify_stage(stages_[s], reading_) == StageType::type1)
      throw std::invalid_argument(
          "stage " + std::to_string(s + 1) +
          " settles every race off the boundaries; it must be the last stage");
  }
}

Outcome StagedMethod::evaluate(const Profile& profile) const {
  if (!space_->same_descriptor(*profile.space))
    throw std::invalid_argument("profile uses a different ballot space");
  if (profile.total() <= Rat(0))
    throw std::runtime_error("empty electorate: profile has no voters");

  const int n_c = space_->candidates();
  for (size_t s = 0; s < stages_.size(); ++s) {
    std::vector<char> strict(n_c, 0), edge(n_c, 0);
    for (const Condition& c : stages_[s].conditions) {
      bool negative = false, zero = false;
      for (const NormalVector& v : c.vectors) {
        const int sgn = sign(dot(v, profile));
        if (sgn < 0) {
          negative = true;
          break;
        }
        if (sgn == 0) zero = true;
      }
      if (negative) continue;
      (zero ? edge : strict)[c.winner] = 1;
    }

    Outcome o;
    o.stage_index = static_cast<int>(s);
    std::vector<int> winners, boundary;
    for (int c = 0; c < n_c; ++c) {
      if (strict[c]) winners.push_back(c);
      else if (edge[c]) boundary.push_back(c);
    }
    if (winners.size() >= 2) {
      o.kind = OutcomeKind::exclusivity_violation;
      o.tie_set = winners;
      return o;
    }
    if (winners.size() == 1 && boundary.empty()) {
      o.kind = OutcomeKind::winner;
      o.winner = winners.front();
      return o;
    }
    if (!winners.empty() || !boundary.empty()) {
      std::vector<int> tied = winners;
      tied.insert(tied.end(), boundary.begin(), boundary.end());
      std::sort(tied.begin(), tied.end());
      if (tied.size() == 2 && tiebreak_) {
        if (auto pick = tiebreak_(profile, tied[0], tied[1])) {
          o.kind = OutcomeKind::winner;
          o.winner = *pick;
          o.tiebreak_applied = true;
          o.pre_tiebreak = tied;
          return o;
        }
      }
      o.kind = OutcomeKind::tie;
      o.tie_set = std::move(tied);
      return o;
    }
  }
  return Outcome{};  // exhausted
}

std::string StagedMethod::explain(const Profile& profile) const {
  std::ostringstream os;
  const Outcome settled = evaluate(profile);
  for (size_t s = 0; s < stages_.size(); ++s) {
    os << "stage " << s + 1 << ":\n";
    std::map<int, int> nth;  // per-candidate condition counter
    for (const Condition& c : stages_[s].conditions) {
      os << "  " << space_->label(c.winner);
      if (std::count_if(stages_[s].conditions.begin(), stages_[s].conditions.end(),
                        [&](const Condition& d) { return d.winner == c.winner; }) > 1)
        os << " #" << ++nth[c.winner];
      os << ": ";
      bool negative = false, zero = false;
      for (size_t i = 0; i < c.vectors.size(); ++i) {
        const Rat value = dot(c.vectors[i], profile);
        os << (i ? ", " : "") << format_rational(value);
        if (value < Rat(0)) negative = true;
        if (value == Rat(0)) zero = true;
      }
      os << (negative ? " -> blocked" : zero ? " -> boundary" : " -> holds") << "\n";
    }
    if (settled.stage_index == static_cast<int>(s)) break;
    os << (s + 1 < stages_.size() ? "  no decision; next stage\n" : "  no decision\n");
  }
  os << describe_outcome(settled, *space_) << "\n";
  return os.str();
}

}  // namespace fbc
