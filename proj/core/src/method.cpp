#include "fbcheck/method.hpp"

#include <stdexcept>

namespace fbc {

std::string outcome_kind_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::winner: return "winner";
    case OutcomeKind::tie: return "tie";
    case OutcomeKind::exhausted: return "exhausted";
    case OutcomeKind::exclusivity_violation: return "exclusivity violation";
  }
  throw std::logic_error("unhandled outcome kind");
}

std::string describe_outcome(const Outcome& o, const BallotSpace& space) {
  switch (o.kind) {
    case OutcomeKind::winner: {
      std::string s = "winner: " + space.label(o.winner);
      if (o.tiebreak_applied) {
        s += " (tiebreak among";
        for (int c : o.pre_tiebreak) s += " " + space.label(c);
        s += ")";
      }
      return s;
    }
    case OutcomeKind::tie:
    case OutcomeKind::exclusivity_violation: {
      std::string s = outcome_kind_name(o.kind) + ":";
      for (size_t i = 0; i < o.tie_set.size(); ++i)
        s += (i ? ", " : " ") + space.label(o.tie_set[i]);
      return s;
    }
    case OutcomeKind::exhausted: return "exhausted";
  }
  throw std::logic_error("unhandled outcome kind");
}

std::string Method::explain(const Profile&) const { return ""; }

}  // namespace fbc
