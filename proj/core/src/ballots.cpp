#include "fbcheck/ballots.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fbc {

std::string default_label(int index) {
  if (index < 0 || index >= 26) throw std::invalid_argument("candidate index out of label range");
  return std::string(1, static_cast<char>('A' + index));
}

// ---- Ranking ----

bool Ranking::operator<(const Ranking& other) const {
  // Shape first (tier-size sequence), then members tier by tier. Gives a
  // deterministic order: strict rankings sort lexicographically, then
  // rankings with later/larger ties.
  const size_t n = std::min(tiers.size(), other.tiers.size());
  for (size_t t = 0; t < n; ++t) {
    if (tiers[t].size() != other.tiers[t].size()) return tiers[t].size() < other.tiers[t].size();
  }
  if (tiers.size() != other.tiers.size()) return tiers.size() < other.tiers.size();
  return tiers < other.tiers;
}

int Ranking::tier_of(int candidate) const {
  for (size_t t = 0; t < tiers.size(); ++t) {
    for (int c : tiers[t]) {
      if (c == candidate) return static_cast<int>(t);
    }
  }
  return -1;
}

bool Ranking::sole_top(int candidate) const {
  return !tiers.empty() && tiers.front().size() == 1 && tiers.front().front() == candidate;
}

bool Ranking::top_member(int candidate) const {
  return tier_of(candidate) == 0;
}

bool Ranking::bottom_member(int candidate) const {
  return !tiers.empty() && tier_of(candidate) == tier_count() - 1;
}

bool Ranking::prefers(int a, int b) const {
  return tier_of(a) < tier_of(b);
}

int Ranking::position_of(int candidate, int rank_count) const {
  int t = tier_of(candidate);
  if (t < 0) throw std::invalid_argument("candidate not present in ranking");
  if (tier_count() >= 2 && t == tier_count() - 1) return rank_count - 1;
  return t;
}

Ranking Ranking::relabeled(const std::vector<int>& perm) const {
  Ranking out;
  out.tiers.reserve(tiers.size());
  for (const auto& tier : tiers) {
    std::vector<int> mapped;
    mapped.reserve(tier.size());
    for (int c : tier) mapped.push_back(perm.at(c));
    std::sort(mapped.begin(), mapped.end());
    out.tiers.push_back(std::move(mapped));
  }
  return out;
}

// ---- BallotSpace ----

namespace {

// All ordered set partitions of {0..n-1}, unfiltered.
void enumerate_weak_orders(int n, std::vector<int>& pool, Ranking& acc,
                           std::vector<Ranking>& out) {
  if (pool.empty()) {
    out.push_back(acc);
    return;
  }
  // Choose a non-empty subset of the pool as the next tier. Iterate subsets
  // by bitmask over the pool's current contents.
  const int m = static_cast<int>(pool.size());
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> tier, rest;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) tier.push_back(pool[i]);
      else rest.push_back(pool[i]);
    }
    acc.tiers.push_back(tier);
    std::vector<int> saved = pool;
    pool = rest;
    enumerate_weak_orders(n, pool, acc, out);
    pool = saved;
    acc.tiers.pop_back();
  }
}

Ranking from_indices(std::initializer_list<std::initializer_list<int>> tiers) {
  Ranking r;
  for (auto& t : tiers) r.tiers.emplace_back(t);
  return r;
}

}  // namespace

BallotSpace::BallotSpace(int n_candidates, bool allow_ties, bool allow_truncation, int max_ranks)
    : n_c_(n_candidates), ties_(allow_ties), trunc_(allow_truncation), max_ranks_(max_ranks) {
  if (n_c_ < 1 || n_c_ > 26) throw std::invalid_argument("candidate count must be in 1..26");
  if (max_ranks_ < 0) throw std::invalid_argument("max_ranks must be >= 0");
  if (max_ranks_ == 1 && n_c_ > 1)
    throw std::invalid_argument("max_ranks=1 admits no ranking that separates candidates");

  if (n_c_ == 3 && !ties_ && !trunc_ && rank_count() == 3) {
    // Canonical basis order for the 3-candidate strict space: consecutive
    // rankings differ by one adjacent swap and the two halves are mirror
    // images; every literal vector in the repo is written in this order.
    rankings_ = {
        from_indices({{0}, {1}, {2}}),  // A>B>C
        from_indices({{0}, {2}, {1}}),  // A>C>B
        from_indices({{2}, {0}, {1}}),  // C>A>B
        from_indices({{2}, {1}, {0}}),  // C>B>A
        from_indices({{1}, {2}, {0}}),  // B>C>A
        from_indices({{1}, {0}, {2}}),  // B>A>C
    };
  } else {
    std::vector<Ranking> all;
    std::vector<int> pool(n_c_);
    for (int i = 0; i < n_c_; ++i) pool[i] = i;
    Ranking acc;
    enumerate_weak_orders(n_c_, pool, acc, all);
    for (const Ranking& r : all) {
      if (admits(r)) rankings_.push_back(r);
    }
    std::sort(rankings_.begin(), rankings_.end());
  }

  for (int k = 0; k < size(); ++k) index_[rankings_[k]] = k;

  swaps_.assign(static_cast<size_t>(n_c_) * n_c_, {});
  for (int i = 0; i < n_c_; ++i) {
    for (int j = 0; j < n_c_; ++j) {
      if (i == j) continue;
      std::vector<int> perm(n_c_);
      for (int c = 0; c < n_c_; ++c) perm[c] = c;
      std::swap(perm[i], perm[j]);
      std::vector<int> ballot_perm(size());
      for (int k = 0; k < size(); ++k) {
        int image = index_of(rankings_[k].relabeled(perm));
        if (image < 0)
          throw std::logic_error("ballot space is not closed under candidate swaps");
        ballot_perm[k] = image;
      }
      swaps_[static_cast<size_t>(i) * n_c_ + j] = std::move(ballot_perm);
    }
  }
}

int BallotSpace::rank_count() const {
  return max_ranks_ > 0 ? max_ranks_ : n_c_;
}

int BallotSpace::index_of(const Ranking& r) const {
  auto it = index_.find(r);
  return it == index_.end() ? -1 : it->second;
}

bool BallotSpace::admits(const Ranking& r) const {
  // Canonical-form checks.
  std::vector<char> seen(n_c_, 0);
  int covered = 0;
  for (const auto& tier : r.tiers) {
    if (tier.empty()) return false;
    if (!std::is_sorted(tier.begin(), tier.end())) return false;
    for (int c : tier) {
      if (c < 0 || c >= n_c_ || seen[c]) return false;
      seen[c] = 1;
      ++covered;
    }
  }
  if (covered != n_c_) return false;

  const int T = r.tier_count();
  if (T > rank_count()) return false;
  if (!ties_) {
    // Only the final tier may hold more than one candidate, and only as the
    // implicit remainder of a truncated ballot.
    for (int t = 0; t + 1 < T; ++t) {
      if (r.tiers[t].size() > 1) return false;
    }
    if (r.tiers.back().size() > 1) {
      if (!trunc_) return false;
      if (T == 1) return false;  // "rank nobody" is not a ballot
    }
  }
  return true;
}

std::string BallotSpace::label(int candidate) const {
  if (candidate < 0 || candidate >= n_c_) throw std::invalid_argument("candidate index out of range");
  return default_label(candidate);
}

int BallotSpace::candidate_by_label(const std::string& label) const {
  std::string want = label;
  for (char& ch : want) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (int c = 0; c < n_c_; ++c) {
    if (this->label(c) == want) return c;
  }
  return -1;
}

const std::vector<int>& BallotSpace::swap_permutation(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= n_c_ || j >= n_c_)
    throw std::invalid_argument("swap needs two distinct candidates");
  return swaps_[static_cast<size_t>(i) * n_c_ + j];
}

bool BallotSpace::same_descriptor(const BallotSpace& other) const {
  return n_c_ == other.n_c_ && ties_ == other.ties_ && trunc_ == other.trunc_ &&
         max_ranks_ == other.max_ranks_;
}

std::string BallotSpace::describe() const {
  std::ostringstream os;
  os << n_c_ << " candidates, ties " << (ties_ ? "allowed" : "forbidden") << ", truncation "
     << (trunc_ ? "allowed" : "forbidden");
  if (max_ranks_ > 0) os << ", max ranks " << max_ranks_;
  return os.str();
}

BallotSpacePtr make_space(int n_candidates, bool allow_ties, bool allow_truncation, int max_ranks) {
  return std::make_shared<const BallotSpace>(n_candidates, allow_ties, allow_truncation, max_ranks);
}

// ---- ranking text ----

namespace {

Ranking parse_ranking_at(const std::string& text, const BallotSpace& space, int line) {
  Ranking r;
  std::vector<char> seen(space.candidates(), 0);
  const std::string body = detail::strip_ws(text);
  if (body.empty()) throw ParseError(line, "empty ranking");
  for (const std::string& tier_text : detail::split(body, '>')) {
    std::vector<int> tier;
    for (const std::string& raw : detail::split(tier_text, '=')) {
      const std::string name = detail::strip_ws(raw);
      if (name.empty()) throw ParseError(line, "empty tier in ranking '" + body + "'");
      int c = space.candidate_by_label(name);
      if (c < 0) throw ParseError(line, "unknown candidate '" + name + "'");
      if (seen[c]) throw ParseError(line, "candidate '" + name + "' listed twice");
      seen[c] = 1;
      tier.push_back(c);
    }
    if (tier.empty()) throw ParseError(line, "empty tier in ranking '" + body + "'");
    std::sort(tier.begin(), tier.end());
    r.tiers.push_back(std::move(tier));
  }
  std::vector<int> rest;
  for (int c = 0; c < space.candidates(); ++c) {
    if (!seen[c]) rest.push_back(c);
  }
  if (!rest.empty()) {
    if (!space.truncation())
      throw ParseError(line, "candidate '" + space.label(rest.front()) +
                                 "' unranked, but the ballot space forbids truncation");
    r.tiers.push_back(std::move(rest));
  }
  if (!space.admits(r)) {
    throw ParseError(line, "ranking '" + body + "' is not admissible (" + space.describe() + ")");
  }
  return r;
}

}  // namespace

Ranking parse_ranking(const std::string& text, const BallotSpace& space, int line) {
  return parse_ranking_at(text, space, line);
}

std::string format_ranking(const Ranking& r, const BallotSpace& space) {
  std::string out;
  for (size_t t = 0; t < r.tiers.size(); ++t) {
    if (t) out += '>';
    for (size_t i = 0; i < r.tiers[t].size(); ++i) {
      if (i) out += '=';
      out += space.label(r.tiers[t][i]);
    }
  }
  return out;
}

// ---- Profile ----

Rat Profile::total() const {
  Rat sum(0);
  for (const Rat& c : counts) sum += c;
  return sum;
}

bool Profile::is_normalized() const { return total() == Rat(1); }

Profile Profile::normalized() const {
  Rat n = total();
  if (n == Rat(0)) throw std::runtime_error("empty electorate: profile has no voters");
  Profile out{space, counts};
  for (Rat& c : out.counts) c /= n;
  return out;
}

Profile make_profile(BallotSpacePtr space) {
  Profile p;
  p.counts.assign(space->size(), Rat(0));
  p.space = std::move(space);
  return p;
}

Profile parse_profile_text(const std::string& text, BallotSpacePtr space) {
  Profile p = make_profile(space);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::data_portion(raw);
    if (s.empty()) continue;
    size_t colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError(line, "expected 'COUNT: RANKING', got '" + s + "'");
    Rat count;
    try {
      count = parse_rational(s.substr(0, colon));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, std::string("bad count: ") + e.what());
    }
    if (count < Rat(0)) throw ParseError(line, "negative ballot count");
    Ranking r = parse_ranking_at(s.substr(colon + 1), *space, line);
    p.counts[space->index_of(r)] += count;
  }
  return p;
}

std::string format_profile(const Profile& profile) {
  std::string out;
  for (int k = 0; k < profile.space->size(); ++k) {
    if (profile.counts[k] == Rat(0)) continue;
    out += format_rational(profile.counts[k]);
    out += ": ";
    out += format_ranking(profile.space->ranking(k), *profile.space);
    out += '\n';
  }
  return out;
}

}  // namespace fbc
