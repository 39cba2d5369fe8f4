#include "fbcheck/geometry.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "text_util.hpp"

namespace fbc {

NormalVector make_vector(BallotSpacePtr space, std::vector<Rat> comps) {
  if (static_cast<int>(comps.size()) != space->size())
    throw std::invalid_argument("component count does not match ballot space size");
  return NormalVector{std::move(space), std::move(comps)};
}

NormalVector zero_vector(BallotSpacePtr space) {
  const int n = space->size();
  return NormalVector{std::move(space), std::vector<Rat>(n, Rat(0))};
}

bool same_vector(const NormalVector& a, const NormalVector& b) {
  return a.space->same_descriptor(*b.space) && a.comps == b.comps;
}

Rat dot(const NormalVector& v, const Profile& p) {
  if (!v.space->same_descriptor(*p.space))
    throw std::invalid_argument("vector and profile use different ballot spaces");
  Rat sum(0);
  for (int k = 0; k < v.space->size(); ++k) {
    if (p.counts[k] != Rat(0)) sum += v.comps[k] * p.counts[k];
  }
  return sum;
}

Rat inner(const NormalVector& v, const Profile& p) {
  Rat n = p.total();
  if (n == Rat(0)) throw std::runtime_error("empty electorate: profile has no voters");
  return dot(v, p) / n;
}

NormalVector relabel_vector(const NormalVector& v, const std::vector<int>& perm) {
  NormalVector out = zero_vector(v.space);
  for (int k = 0; k < v.space->size(); ++k) {
    const Ranking image = v.space->ranking(k).relabeled(perm);
    out.comps[v.space->index_of(image)] = v.comps[k];
  }
  return out;
}

Profile relabel_profile(const Profile& p, const std::vector<int>& perm) {
  Profile out = make_profile(p.space);
  for (int k = 0; k < p.space->size(); ++k) {
    const Ranking image = p.space->ranking(k).relabeled(perm);
    out.counts[p.space->index_of(image)] = p.counts[k];
  }
  return out;
}

NormalVector swap_vector(const NormalVector& v, int i, int j) {
  const auto& perm = v.space->swap_permutation(i, j);
  NormalVector out = zero_vector(v.space);
  for (int k = 0; k < v.space->size(); ++k) out.comps[perm[k]] = v.comps[k];
  return out;
}

Profile swap_profile(const Profile& p, int i, int j) {
  const auto& perm = p.space->swap_permutation(i, j);
  Profile out = make_profile(p.space);
  for (int k = 0; k < p.space->size(); ++k) out.counts[perm[k]] = p.counts[k];
  return out;
}

std::vector<NormalVector> orbit(const NormalVector& v) {
  // Transpositions generate every relabeling, so closing under swaps walks
  // the whole orbit.
  const int n_c = v.space->candidates();
  std::set<std::vector<Rat>> seen;
  std::vector<std::vector<Rat>> frontier{v.comps};
  seen.insert(v.comps);
  while (!frontier.empty()) {
    std::vector<std::vector<Rat>> next;
    for (const auto& comps : frontier) {
      NormalVector cur{v.space, comps};
      for (int i = 0; i < n_c; ++i) {
        for (int j = i + 1; j < n_c; ++j) {
          std::vector<Rat> image = swap_vector(cur, i, j).comps;
          if (seen.insert(image).second) next.push_back(std::move(image));
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<NormalVector> out;
  out.reserve(seen.size());
  for (const auto& comps : seen) out.push_back(NormalVector{v.space, comps});
  return out;
}

std::string kind_name(VectorKind k) {
  switch (k) {
    case VectorKind::category1: return "Category1";
    case VectorKind::category2: return "Category2";
    case VectorKind::category3: return "Category3";
    case VectorKind::non_compliant: return "NonCompliant";
  }
  throw std::logic_error("unhandled vector kind");
}

namespace {

bool lists_first(const Ranking& r, int candidate, FirstPlace reading) {
  return reading == FirstPlace::sole_top ? r.sole_top(candidate) : r.top_member(candidate);
}

struct ExtremeSides {
  bool sized = false;               // both extremes big enough and signed right
  std::vector<char> covered_max;    // candidate has a first-place ballot at the max
  std::vector<char> covered_min;    // ... at the min
};

ExtremeSides extreme_sides(const NormalVector& v, FirstPlace reading) {
  const BallotSpace& sp = *v.space;
  const int n_c = sp.candidates();
  ExtremeSides out;
  out.covered_max.assign(n_c, 0);
  out.covered_min.assign(n_c, 0);
  const Rat mx = *std::max_element(v.comps.begin(), v.comps.end());
  const Rat mn = *std::min_element(v.comps.begin(), v.comps.end());
  int n_max = 0, n_min = 0;
  for (int k = 0; k < sp.size(); ++k) {
    if (v.comps[k] == mx) ++n_max;
    if (v.comps[k] == mn) ++n_min;
  }
  out.sized = mx > Rat(0) && mn < Rat(0) && n_max >= n_c - 1 && n_min >= n_c - 1;
  if (!out.sized) return out;
  for (int k = 0; k < sp.size(); ++k) {
    for (int c = 0; c < n_c; ++c) {
      if (v.comps[k] == mx && lists_first(sp.ranking(k), c, reading)) out.covered_max[c] = 1;
      if (v.comps[k] == mn && lists_first(sp.ranking(k), c, reading)) out.covered_min[c] = 1;
    }
  }
  return out;
}

bool pair_passes(const ExtremeSides& sides, int n_c, int i, int j) {
  if (!sides.sized) return false;
  for (int c = 0; c < n_c; ++c) {
    if (c != j && !sides.covered_max[c]) return false;
    if (c != i && !sides.covered_min[c]) return false;
  }
  return true;
}

}  // namespace

bool pair_conditions_hold(const NormalVector& v, int i, int j, FirstPlace reading) {
  const int n_c = v.space->candidates();
  if (i < 0 || j < 0 || i >= n_c || j >= n_c || i == j)
    throw std::invalid_argument("pair needs two distinct candidates");
  return pair_passes(extreme_sides(v, reading), n_c, i, j);
}

VectorCategory classify_vector(const NormalVector& v, FirstPlace reading) {
  const int n_c = v.space->candidates();
  if (n_c < 2) throw std::invalid_argument("classification needs at least two candidates");
  const ExtremeSides sides = extreme_sides(v, reading);

  VectorCategory cat;
  for (int i = 0; i < n_c; ++i) {
    for (int j = 0; j < n_c; ++j) {
      if (i != j && pair_passes(sides, n_c, i, j)) cat.passing.emplace_back(i, j);
    }
  }
  const size_t all = static_cast<size_t>(n_c) * (n_c - 1);

  if (cat.passing.empty()) {
    cat.kind = VectorKind::non_compliant;
    return cat;
  }
  if (cat.passing.size() == all) {
    cat.kind = VectorKind::category3;
    return cat;
  }
  if (cat.passing.size() == 1) {
    cat.kind = VectorKind::category1;
    cat.i = cat.passing.front().first;
    cat.j = cat.passing.front().second;
    return cat;
  }
  // A star: one candidate on the same side of every passing pair.
  const bool source_star = std::all_of(cat.passing.begin(), cat.passing.end(),
                                       [&](auto pr) { return pr.first == cat.passing[0].first; });
  const bool sink_star = std::all_of(cat.passing.begin(), cat.passing.end(),
                                     [&](auto pr) { return pr.second == cat.passing[0].second; });
  if (cat.passing.size() == static_cast<size_t>(n_c) - 1 && (source_star || sink_star)) {
    cat.kind = VectorKind::category2;
    cat.source = source_star;
    cat.candidate = source_star ? cat.passing[0].first : cat.passing[0].second;
    return cat;
  }
  throw std::logic_error("passing pairs form no recognized shape");
}

NormalVector parse_vector_text(const std::string& text, BallotSpacePtr space) {
  NormalVector v = zero_vector(space);
  std::vector<char> set_once(space->size(), 0);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::data_portion(raw);
    if (s.empty()) continue;
    size_t colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError(line, "expected 'VALUE: RANKING', got '" + s + "'");
    Rat value;
    try {
      value = parse_rational(s.substr(0, colon));
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, std::string("bad value: ") + e.what());
    }
    const Ranking r = parse_ranking(s.substr(colon + 1), *space, line);
    const int k = space->index_of(r);
    if (set_once[k])
      throw ParseError(line, "component for '" + format_ranking(r, *space) + "' set twice");
    set_once[k] = 1;
    v.comps[k] = value;
  }
  return v;
}

std::string format_vector(const NormalVector& v) {
  std::string out;
  for (int k = 0; k < v.space->size(); ++k) {
    if (v.comps[k] == Rat(0)) continue;
    out += format_rational(v.comps[k]);
    out += ": ";
    out += format_ranking(v.space->ranking(k), *v.space);
    out += '\n';
  }
  return out;
}

}  // namespace fbc
