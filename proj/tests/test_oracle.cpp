// Exhaustive criterion sweeps. The frozen counts below were cross-checked
// against an independent reimplementation of the sweep; any drift in skip or
// tie accounting shows up as a mismatch here long before it corrupts a
// verdict.
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "fbcheck/methods.hpp"
#include "fbcheck/oracle.hpp"
#include "fbcheck/stages.hpp"

using namespace fbc;

namespace {

MethodPtr builtin(Builtin kind, bool pairwise = false) {
  MethodSpec spec;
  spec.kind = kind;
  spec.pairwise_ties = pairwise;
  return build(spec);
}

Verdict sweep(const MethodPtr& m, Criterion c, int max_n, bool skip = true,
              int workers = 1) {
  SearchScope scope;
  scope.max_voters = max_n;
  scope.criterion = c;
  scope.skip_on_tie = skip;
  return run_check(*m, scope, workers);
}

void expect_stats(const Verdict& v, long long profiles, long long instances,
                  long long skipped, long long tied, std::size_t ces) {
  CHECK(v.profiles_examined == profiles);
  CHECK(v.instances_examined == instances);
  CHECK(v.skipped_instances == skipped);
  CHECK(v.tied_evaluations == tied);
  CHECK(v.counterexamples.size() == ces);
}

// "Fewest first places wins": plurality with the inequalities flipped, a
// deliberately perverse control that any monotonicity checker must catch.
MethodPtr fewest_firsts() {
  BallotSpacePtr sp = make_space(3);
  ScoringWeights firsts({Rat(1), Rat(0), Rat(0)});
  Condition seed;
  seed.winner = 0;
  seed.vectors = {position_diff_vector(sp, firsts, 1, 0),
                  position_diff_vector(sp, firsts, 2, 0)};
  std::vector<Stage> stages = {generate_stage({seed})};
  return std::make_shared<StagedMethod>("fewest-firsts", sp, stages);
}

// True when some counterexample matches the given base profile, sincere
// ballot, and recast ballot (for monotonicity: raised-from and raised-to).
bool has_witness(const Verdict& v, const Method& m, const std::string& profile,
                 const std::string& sincere, const std::string& recast) {
  const BallotSpacePtr& sp = m.space();
  Profile base = parse_profile_text(profile, sp);
  Ranking sig = parse_ranking(sincere, *sp);
  Ranking man = parse_ranking(recast, *sp);
  for (const auto& ce : v.counterexamples) {
    if (ce.base.counts == base.counts && ce.sincere == sig && ce.manipulating == man)
      return true;
  }
  return false;
}

long long ces_at(const Verdict& v, int n_voters) {
  long long hits = 0;
  for (const auto& ce : v.counterexamples) {
    Rat total(0);
    for (const Rat& c : ce.base.counts) total += c;
    if (total == Rat(n_voters)) ++hits;
  }
  return hits;
}

}  // namespace

TEST_CASE("profile counts follow the multiset formula") {
  CHECK(profile_count(6, 2) == 21);
  CHECK(profile_count(6, 6) == 462);
  CHECK(profile_count(2, 3) == 4);
  CHECK(profile_count(13, 5) == 6188);
  CHECK(profile_count(1, 7) == 1);
  CHECK(profile_count(4, 0) == 1);
  long long strict_to_6 = 0;
  for (int n = 1; n <= 6; ++n) strict_to_6 += profile_count(6, n);
  CHECK(strict_to_6 == 923);
  CHECK_THROWS_AS(profile_count(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(profile_count(3, -1), std::invalid_argument);
}

TEST_CASE("profile enumeration emits every multiset exactly once, in order") {
  BallotSpacePtr sp = make_space(2);
  std::vector<std::vector<Rat>> seen;
  enumerate_profiles(sp, 3, [&](const Profile& p) { seen.push_back(p.counts); });
  std::vector<std::vector<Rat>> want = {
      {Rat(0), Rat(3)}, {Rat(1), Rat(2)}, {Rat(2), Rat(1)}, {Rat(3), Rat(0)}};
  CHECK(seen == want);
  CHECK_THROWS_AS(enumerate_profiles(nullptr, 2, [](const Profile&) {}),
                  std::invalid_argument);
}

TEST_CASE("single-stage point methods never reward abandoning the favorite") {
  expect_stats(sweep(builtin(Builtin::antiplurality), Criterion::sfbc, 6),
               923, 2772, 1470, 4572, 0);
  expect_stats(sweep(builtin(Builtin::antiplurality), Criterion::fbc, 6),
               923, 2772, 1470, 4572, 0);
  expect_stats(sweep(builtin(Builtin::equal_top_two), Criterion::sfbc, 6),
               923, 2772, 1470, 4572, 0);
  expect_stats(sweep(builtin(Builtin::equal_top_two), Criterion::lfp, 5),
               461, 1260, 402, 2412, 0);
}

TEST_CASE("bare plurality has no single-pivot betrayal incentive") {
  // A lone recast moves one point between two tallies, and integer margins
  // leave no room for a strict gain that keeping the favorite on top misses.
  expect_stats(sweep(builtin(Builtin::plurality), Criterion::fbc, 9),
               5004, 18018, 2736, 16416, 0);
  expect_stats(sweep(builtin(Builtin::plurality), Criterion::sfbc, 5),
               461, 1260, 318, 1908, 0);
}

TEST_CASE("irv rewards betrayal from five voters up") {
  MethodPtr irv = builtin(Builtin::irv);
  CHECK(sweep(irv, Criterion::fbc, 4).ok());

  Verdict v5 = sweep(irv, Criterion::fbc, 5);
  expect_stats(v5, 461, 1260, 498, 2988, 18);
  CHECK(has_witness(v5, *irv, "1: A>C>B\n2: B>A>C\n2: C>B>A", "B>A>C", "A>B>C"));
  for (const auto& ce : v5.counterexamples) {
    CHECK(replay(ce, *irv));
    REQUIRE(ce.manipulated_outcome.kind == OutcomeKind::winner);
    REQUIRE(ce.protected_outcome.has_value());
    CHECK(ce.sincere.prefers(ce.manipulated_outcome.winner,
                             ce.protected_outcome->winner));
  }

  Verdict v9 = sweep(irv, Criterion::fbc, 9);
  expect_stats(v9, 5004, 18018, 5634, 32076, 102);
  CHECK(ces_at(v9, 5) == 18);
  CHECK(ces_at(v9, 6) == 0);
  CHECK(ces_at(v9, 7) == 0);
  CHECK(ces_at(v9, 8) == 24);
  CHECK(ces_at(v9, 9) == 60);
}

TEST_CASE("irv keeps the least favorite demotion safe at small sizes") {
  expect_stats(sweep(builtin(Builtin::irv), Criterion::lfp, 5),
               461, 1260, 834, 2988, 0);
}

TEST_CASE("bucklin rewards betrayal at five voters") {
  MethodPtr m = builtin(Builtin::bucklin);
  Verdict v = sweep(m, Criterion::fbc, 5);
  expect_stats(v, 461, 1260, 324, 1620, 12);
  CHECK(has_witness(v, *m, "1: A>C>B\n2: B>A>C\n2: C>B>A", "A>C>B", "C>A>B"));
  for (const auto& ce : v.counterexamples) CHECK(replay(ce, *m));
}

TEST_CASE("mdda shields a weak top but not a strict one") {
  MethodPtr mdda = builtin(Builtin::mdda);
  expect_stats(sweep(mdda, Criterion::fbc, 5), 8567, 14280, 11106, 62736, 0);

  Verdict sf = sweep(mdda, Criterion::sfbc, 5);
  expect_stats(sf, 8567, 14280, 6216, 62736, 30);
  CHECK(ces_at(sf, 5) == 30);
  CHECK(has_witness(sf, *mdda, "1: A=C>B\n2: B>A>C\n1: C>A>B\n1: C>B>A",
                    "B>A>C", "A>B>C"));
  for (const auto& ce : sf.counterexamples) CHECK(replay(ce, *mdda));
}

TEST_CASE("mca shields a weak top but not a strict one") {
  MethodPtr mca = builtin(Builtin::mca);
  expect_stats(sweep(mca, Criterion::fbc, 5), 8567, 14280, 7932, 45564, 0);

  Verdict sf = sweep(mca, Criterion::sfbc, 5);
  expect_stats(sf, 8567, 14280, 3882, 45564, 54);
  CHECK(ces_at(sf, 5) == 54);
  for (const auto& ce : sf.counterexamples) CHECK(replay(ce, *mca));

  // One instance, pinned end to end: the strict shield tops out at B, a
  // betrayal reaches C, and the equal-top recast A=C>B reaches C too — the
  // escape the weak shield allows, which is why the weak sweep stays clean.
  const BallotSpacePtr& sp = mca->space();
  Profile base = parse_profile_text("1: A>C>B\n2: B>A=C\n2: C>B>A", sp);
  Ranking sigma = parse_ranking("A>C>B", *sp);
  bool found = false;
  for (const auto& ce : sf.counterexamples) {
    if (ce.base.counts != base.counts || ce.sincere != sigma) continue;
    found = true;
    REQUIRE(ce.protected_outcome.has_value());
    CHECK(ce.protected_outcome->winner == 1);
    CHECK(ce.manipulated_outcome.winner == 2);
  }
  CHECK(found);
  Profile recast = base;
  recast.counts[sp->index_of(sigma)] -= Rat(1);
  recast.counts[sp->index_of(parse_ranking("A=C>B", *sp))] += Rat(1);
  Outcome via_equal_top = mca->evaluate(recast);
  CHECK(via_equal_top.kind == OutcomeKind::winner);
  CHECK(via_equal_top.winner == 2);
}

TEST_CASE("a pairwise tiebreak narrows the skips and can create failures") {
  expect_stats(sweep(builtin(Builtin::antiplurality, true), Criterion::sfbc, 6, false),
               923, 2772, 480, 1476, 0);

  // Bare plurality is clean above; the head-to-head rescue of two-way ties
  // is what hands the betrayer a lever.
  MethodPtr pl = builtin(Builtin::plurality, true);
  Verdict v = sweep(pl, Criterion::fbc, 7, false);
  expect_stats(v, 1715, 5544, 372, 2232, 90);
  CHECK(ces_at(v, 5) == 18);
  CHECK(ces_at(v, 6) == 0);
  CHECK(ces_at(v, 7) == 72);
  CHECK(has_witness(v, *pl, "1: A>C>B\n2: B>A>C\n2: C>B>A", "B>A>C", "A>B>C"));
  for (const auto& ce : v.counterexamples) CHECK(replay(ce, *pl));
}

TEST_CASE("raising the winner never unseats them under irv or plurality") {
  // A one-step raise either leaves the first count unchanged or pads the
  // winner's own tally, so three-candidate eliminations never flip; known
  // elimination pathologies need multi-ballot or multi-step rearrangements.
  expect_stats(sweep(builtin(Builtin::irv), Criterion::monotonicity, 9),
               5004, 6888, 1020, 2484, 0);
  expect_stats(sweep(builtin(Builtin::plurality), Criterion::monotonicity, 6),
               923, 1056, 0, 176, 0);
}

TEST_CASE("the monotonicity checker catches a perverse method immediately") {
  MethodPtr ff = fewest_firsts();
  CHECK(sweep(ff, Criterion::monotonicity, 2).counterexamples.size() == 12);

  Verdict v = sweep(ff, Criterion::monotonicity, 5);
  expect_stats(v, 461, 804, 192, 344, 156);
  CHECK(ces_at(v, 2) == 12);
  CHECK(ces_at(v, 3) == 18);
  CHECK(ces_at(v, 4) == 24);
  CHECK(ces_at(v, 5) == 102);
  CHECK(has_witness(v, *ff, "1: B>C>A\n1: C>A>B", "C>A>B", "A>C>B"));
  for (const auto& ce : v.counterexamples) {
    CHECK(replay(ce, *ff));
    CHECK_FALSE(ce.protecting.has_value());
  }
  std::string text = format_counterexample(v.counterexamples.front(), *ff->space());
  CHECK(text.find("raised ballot:") != std::string::npos);
}

TEST_CASE("replay rejects tampered evidence") {
  MethodPtr irv = builtin(Builtin::irv);
  Verdict v = sweep(irv, Criterion::fbc, 5);
  REQUIRE_FALSE(v.counterexamples.empty());
  const Counterexample& good = v.counterexamples.front();
  CHECK(replay(good, *irv));

  CHECK_FALSE(replay(good, *builtin(Builtin::plurality)));  // same space, other method
  CHECK_FALSE(replay(good, *builtin(Builtin::mdda)));       // other space entirely

  Counterexample swapped = good;
  swapped.sincere_outcome = swapped.manipulated_outcome;
  CHECK_FALSE(replay(swapped, *irv));

  Counterexample starved = good;  // pivot's ballot type missing from the base
  starved.base.counts[irv->space()->index_of(starved.sincere)] = Rat(0);
  CHECK_FALSE(replay(starved, *irv));
}

TEST_CASE("verdicts are deterministic and worker-count independent") {
  MethodPtr irv = builtin(Builtin::irv);
  Verdict a = sweep(irv, Criterion::fbc, 5, true, 1);
  Verdict b = sweep(irv, Criterion::fbc, 5, true, 4);
  Verdict c = sweep(irv, Criterion::fbc, 5, true, 1);
  CHECK(b.counterexamples.size() == 18);
  CHECK(format_verdict(a) == format_verdict(b));
  CHECK(format_verdict(a) == format_verdict(c));
}

TEST_CASE("strict ballots collapse the weak and strict shields") {
  MethodPtr irv = builtin(Builtin::irv);
  Verdict f = sweep(irv, Criterion::fbc, 5);
  Verdict s = sweep(irv, Criterion::sfbc, 5);
  CHECK(f.profiles_examined == s.profiles_examined);
  CHECK(f.instances_examined == s.instances_examined);
  CHECK(f.skipped_instances == s.skipped_instances);
  CHECK(f.tied_evaluations == s.tied_evaluations);
  REQUIRE(f.counterexamples.size() == s.counterexamples.size());
  for (std::size_t i = 0; i < f.counterexamples.size(); ++i) {
    CHECK(format_counterexample(f.counterexamples[i], *irv->space()) ==
          format_counterexample(s.counterexamples[i], *irv->space()));
  }
}

TEST_CASE("counterexample sets are closed under candidate relabeling") {
  MethodPtr irv = builtin(Builtin::irv);
  const BallotSpacePtr& sp = irv->space();
  Verdict v = sweep(irv, Criterion::fbc, 5);
  REQUIRE_FALSE(v.counterexamples.empty());

  // The recorded witness ballot is an index tiebreak, so key on the
  // relabeling-equivariant parts: profile, sincere ballot, both winners.
  using Key = std::tuple<std::vector<Rat>, int, int, int>;
  std::set<Key> keys;
  for (const auto& ce : v.counterexamples) {
    REQUIRE(ce.protected_outcome.has_value());
    keys.insert({ce.base.counts, sp->index_of(ce.sincere),
                 ce.manipulated_outcome.winner, ce.protected_outcome->winner});
  }
  CHECK(keys.size() == v.counterexamples.size());

  const std::vector<std::vector<int>> perms = {{1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
  for (const auto& perm : perms) {
    for (const auto& ce : v.counterexamples) {
      Key image{relabel_profile(ce.base, perm).counts,
                sp->index_of(ce.sincere.relabeled(perm)),
                perm[ce.manipulated_outcome.winner],
                perm[ce.protected_outcome->winner]};
      CHECK(keys.count(image) == 1);
    }
  }
}

TEST_CASE("one-step raises: swaps on strict ballots, splits and joins with ties") {
  BallotSpacePtr strict = make_space(3);
  Ranking r = parse_ranking("C>A>B", *strict);
  auto up_a = raise_steps(r, 0, *strict);
  REQUIRE(up_a.size() == 1);
  CHECK(format_ranking(up_a[0], *strict) == "A>C>B");
  auto up_b = raise_steps(r, 1, *strict);
  REQUIRE(up_b.size() == 1);
  CHECK(format_ranking(up_b[0], *strict) == "C>B>A");
  CHECK(raise_steps(r, 2, *strict).empty());  // already sole top

  BallotSpacePtr weak = make_space(3, true);
  auto flat = raise_steps(parse_ranking("A=B=C", *weak), 1, *weak);
  REQUIRE(flat.size() == 1);
  CHECK(format_ranking(flat[0], *weak) == "B>A=C");
  auto join = raise_steps(parse_ranking("A>B>C", *weak), 1, *weak);
  REQUIRE(join.size() == 1);  // with ties the single step up is the join
  CHECK(format_ranking(join[0], *weak) == "A=B>C");
  auto split_low = raise_steps(parse_ranking("A>B=C", *weak), 2, *weak);
  REQUIRE(split_low.size() == 1);
  CHECK(format_ranking(split_low[0], *weak) == "A>C>B");
  auto split_top = raise_steps(parse_ranking("A=B>C", *weak), 0, *weak);
  REQUIRE(split_top.size() == 1);
  CHECK(format_ranking(split_top[0], *weak) == "A>B>C");
  CHECK(raise_steps(parse_ranking("A>B=C", *weak), 0, *weak).empty());

  // Two-rank spaces cannot host the three-tier result of a shared-tier
  // split, so the ladder offers nothing there.
  BallotSpacePtr approval_sp = make_space(3, true, true, 2);
  CHECK(raise_steps(parse_ranking("A>B=C", *approval_sp), 1, *approval_sp).empty());
  auto from_flat = raise_steps(parse_ranking("A=B=C", *approval_sp), 0, *approval_sp);
  REQUIRE(from_flat.size() == 1);
  CHECK(format_ranking(from_flat[0], *approval_sp) == "A>B=C");
}

TEST_CASE("scope validation rejects unanswerable questions") {
  MethodPtr pl = builtin(Builtin::plurality);

  SearchScope no_tb;
  no_tb.skip_on_tie = false;
  CHECK_THROWS_AS(run_check(*pl, no_tb), std::invalid_argument);

  SearchScope mono;
  mono.criterion = Criterion::monotonicity;
  CHECK_THROWS_AS(check_criterion(*pl, mono), std::invalid_argument);

  SearchScope zero;
  zero.max_voters = 0;
  CHECK_THROWS_AS(run_check(*pl, zero), std::invalid_argument);

  SearchScope foreign;
  foreign.space = make_space(3, true);
  CHECK_THROWS_AS(run_check(*pl, foreign), std::invalid_argument);

  CHECK_THROWS_AS(run_check(*pl, SearchScope{}, 0), std::invalid_argument);

  // Approval ballots have no strict full rankings to read as sincere
  // preferences, so criterion sweeps refuse; monotonicity still runs.
  MethodPtr appr = builtin(Builtin::approval);
  CHECK_THROWS_AS(run_check(*appr, SearchScope{}), std::invalid_argument);
  SearchScope appr_mono;
  appr_mono.criterion = Criterion::monotonicity;
  CHECK_NOTHROW(run_check(*appr, appr_mono));

  CHECK(parse_criterion("lfp") == Criterion::lfp);
  CHECK(criterion_name(Criterion::monotonicity) == "monotonicity");
  CHECK_THROWS_AS(parse_criterion("nope"), std::invalid_argument);
}

TEST_CASE("verdicts and counterexamples render with their inputs spelled out") {
  MethodPtr irv = builtin(Builtin::irv);
  Verdict clean = sweep(builtin(Builtin::antiplurality), Criterion::sfbc, 2);
  std::string text = format_verdict(clean);
  CHECK(text.find("method: antiplurality") != std::string::npos);
  CHECK(text.find("criterion: sfbc") != std::string::npos);
  CHECK(text.find("skip on tie: yes") != std::string::npos);
  CHECK(text.find("verdict: no counterexample") != std::string::npos);

  Verdict v = sweep(irv, Criterion::fbc, 5);
  REQUIRE_FALSE(v.counterexamples.empty());
  std::string ce = format_counterexample(v.counterexamples.front(), *irv->space());
  CHECK(ce.find("sincere ballot:") != std::string::npos);
  CHECK(ce.find("best shielded ballot:") != std::string::npos);
  CHECK(ce.find("manipulating ballot:") != std::string::npos);
  CHECK(ce.find("manipulated outcome:") != std::string::npos);
  std::string full = format_verdict(v);
  CHECK(full.find("18 counterexample") != std::string::npos);
}
