// fbcheck: tally profiles, classify stage geometry, and sweep small
// electorates for first-choice-protection failures.
//
// Exit codes: 0 success (for `check`: no counterexample), 1 a check found
// counterexamples, 2 any error. Structured output is deterministic: the same
// inputs give byte-identical JSON.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fbcheck/methods.hpp"
#include "fbcheck/oracle.hpp"
#include "fbcheck/stages.hpp"
#include "json.hpp"

using namespace fbc;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// A method source is a builtin spec ("irv", "quota-points q=3/4") or a path
// to a method file; an existing file wins.
MethodPtr resolve_method(const std::string& source, int candidates) {
  if (std::filesystem::exists(source)) {
    if (candidates > 0)
      throw std::invalid_argument("--candidates applies to builtin specs, not method files");
    return load_method_file(source);
  }
  MethodSpec spec = parse_method_spec(source);
  if (candidates > 0) spec.candidates = candidates;
  return build(spec);
}

struct SpaceFlags {
  int candidates = 3;
  bool ties = false;
  bool truncation = false;
  int max_ranks = 0;

  BallotSpacePtr make() const { return make_space(candidates, ties, truncation, max_ranks); }
  void attach(CLI::App* cmd) {
    cmd->add_option("--candidates", candidates, "number of candidates (default 3)");
    cmd->add_flag("--ties", ties, "allow tied ranks on ballots");
    cmd->add_flag("--truncation", truncation, "allow truncated ballots");
    cmd->add_option("--max-ranks", max_ranks, "cap the number of rank positions (0 = none)");
  }
};

Rat profile_total(const Profile& p) {
  Rat total(0);
  for (const Rat& c : p.counts) total += c;
  return total;
}

ordered_json vector_json(const NormalVector& v) {
  ordered_json j = ordered_json::object();
  for (int k = 0; k < v.space->size(); ++k) {
    if (v.comps[k] == Rat(0)) continue;
    j[format_ranking(v.space->ranking(k), *v.space)] = format_rational(v.comps[k]);
  }
  return j;
}

ordered_json outcome_json(const Outcome& o, const BallotSpace& sp) {
  ordered_json j;
  j["kind"] = outcome_kind_name(o.kind);
  if (o.kind == OutcomeKind::winner) j["winner"] = sp.label(o.winner);
  if (!o.tie_set.empty()) {
    ordered_json tied = ordered_json::array();
    for (int c : o.tie_set) tied.push_back(sp.label(c));
    j["tie_set"] = tied;
  }
  if (o.stage_index >= 0) j["stage"] = o.stage_index + 1;
  if (o.tiebreak_applied) {
    j["tiebreak_applied"] = true;
    ordered_json pre = ordered_json::array();
    for (int c : o.pre_tiebreak) pre.push_back(sp.label(c));
    j["pre_tiebreak"] = pre;
  }
  return j;
}

void emit(const ordered_json& j, bool json_out, const std::string& text) {
  if (json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

// ---- tally ----

int cmd_tally(const std::string& method_src, int candidates, const std::string& profile_path,
              bool json_out) {
  MethodPtr m = resolve_method(method_src, candidates);
  Profile p = parse_profile_text(read_file(profile_path), m->space());
  Outcome o = m->evaluate(p);
  std::string explain = m->explain(p);

  std::ostringstream text;
  text << "method: " << m->name() << "\n";
  text << "space: " << m->space()->describe() << "\n";
  text << "profile (" << format_rational(profile_total(p)) << " voters):\n";
  std::istringstream lines(format_profile(p));
  for (std::string line; std::getline(lines, line);) text << "  " << line << "\n";
  text << explain;

  ordered_json j;
  j["command"] = "tally";
  j["method"] = m->name();
  j["space"] = m->space()->describe();
  j["voters"] = format_rational(profile_total(p));
  j["profile"] = format_profile(p);
  j["outcome"] = outcome_json(o, *m->space());
  j["explain"] = explain;
  emit(j, json_out, text.str());
  return 0;
}

// ---- classify ----

void classify_stage_report(const Stage& stage, FirstPlace reading, int index,
                           std::ostream& text, ordered_json& stages) {
  std::vector<NormalVector> distinct;
  for (const Condition& c : stage.conditions) {
    for (const NormalVector& v : c.vectors) {
      bool seen = false;
      for (const NormalVector& d : distinct) seen = seen || same_vector(d, v);
      if (!seen) distinct.push_back(v);
    }
  }
  std::vector<Condition> gens = minimal_generators(stage);

  text << "stage " << index << ": " << stage_type_name(classify_stage(stage, reading)) << "\n";
  text << "  conditions: " << stage.conditions.size() << "  distinct vectors: " << distinct.size()
       << "  generators: " << gens.size() << "\n";
  for (std::size_t k = 0; k < distinct.size(); ++k) {
    VectorCategory cat = classify_vector(distinct[k], reading);
    text << "  vector " << k + 1 << ": " << kind_name(cat.kind) << ", orbit size "
         << orbit(distinct[k]).size() << "\n";
  }
  for (std::size_t g = 0; g < gens.size(); ++g) {
    text << "  generator " << g + 1 << " (winner "
         << distinct.front().space->label(gens[g].winner) << "):\n";
    for (const NormalVector& v : gens[g].vectors) {
      std::istringstream lines(format_vector(v));
      bool first = true;
      for (std::string line; std::getline(lines, line);) {
        text << (first ? "    - " : "      ") << line << "\n";
        first = false;
      }
    }
  }

  ordered_json sj;
  sj["stage"] = index;
  sj["type"] = stage_type_name(classify_stage(stage, reading));
  sj["conditions"] = stage.conditions.size();
  ordered_json vecs = ordered_json::array();
  for (const NormalVector& v : distinct) {
    VectorCategory cat = classify_vector(v, reading);
    ordered_json vj;
    vj["category"] = kind_name(cat.kind);
    vj["orbit_size"] = orbit(v).size();
    vj["components"] = vector_json(v);
    vecs.push_back(vj);
  }
  sj["vectors"] = vecs;
  ordered_json gj = ordered_json::array();
  for (const Condition& g : gens) {
    ordered_json cj;
    cj["winner"] = distinct.front().space->label(g.winner);
    ordered_json gv = ordered_json::array();
    for (const NormalVector& v : g.vectors) gv.push_back(vector_json(v));
    cj["vectors"] = gv;
    gj.push_back(cj);
  }
  sj["generators"] = gj;
  stages.push_back(sj);
}

int cmd_classify_method(const std::string& method_src, int candidates, bool json_out) {
  MethodPtr m = resolve_method(method_src, candidates);
  const auto* staged = dynamic_cast<const StagedMethod*>(m.get());
  if (!staged)
    throw std::invalid_argument("method '" + m->name() +
                                "' has no stage form; only staged methods classify");

  std::ostringstream text;
  text << "method: " << m->name() << "\n";
  text << "space: " << m->space()->describe() << "\n";
  ordered_json stages = ordered_json::array();
  for (std::size_t s = 0; s < staged->stages().size(); ++s)
    classify_stage_report(staged->stages()[s], staged->reading(), static_cast<int>(s) + 1, text,
                          stages);

  ordered_json j;
  j["command"] = "classify";
  j["method"] = m->name();
  j["space"] = m->space()->describe();
  j["stages"] = stages;
  emit(j, json_out, text.str());
  return 0;
}

int cmd_classify_vector(const std::string& vector_path, const SpaceFlags& flags, bool top_member,
                        bool json_out) {
  BallotSpacePtr sp = flags.make();
  NormalVector v = parse_vector_text(read_file(vector_path), sp);
  FirstPlace reading = top_member ? FirstPlace::top_member : FirstPlace::sole_top;
  VectorCategory cat = classify_vector(v, reading);
  std::size_t orbit_size = orbit(v).size();

  std::ostringstream text;
  text << "space: " << sp->describe() << "\n";
  text << "vector:\n";
  std::istringstream lines(format_vector(v));
  for (std::string line; std::getline(lines, line);) text << "  " << line << "\n";
  text << "category: " << kind_name(cat.kind) << "\n";
  if (cat.kind == VectorKind::category1)
    text << "separates: " << sp->label(cat.i) << " vs " << sp->label(cat.j) << "\n";
  if (cat.kind == VectorKind::category2)
    text << "distinguishes: " << sp->label(cat.candidate) << (cat.source ? " (source)" : " (sink)")
         << "\n";
  text << "orbit size: " << orbit_size << "\n";

  ordered_json j;
  j["command"] = "classify";
  j["space"] = sp->describe();
  j["components"] = vector_json(v);
  j["category"] = kind_name(cat.kind);
  if (cat.kind == VectorKind::category1) {
    j["pair"] = ordered_json::array({sp->label(cat.i), sp->label(cat.j)});
  }
  if (cat.kind == VectorKind::category2) {
    j["candidate"] = sp->label(cat.candidate);
    j["source"] = cat.source;
  }
  j["orbit_size"] = orbit_size;
  emit(j, json_out, text.str());
  return 0;
}

// ---- check ----

int cmd_check(const std::string& method_src, int candidates, const std::string& criterion,
              int max_voters, bool no_skip, int workers, bool json_out) {
  MethodPtr m = resolve_method(method_src, candidates);
  SearchScope scope;
  scope.criterion = parse_criterion(criterion);
  scope.max_voters = max_voters;
  scope.skip_on_tie = !no_skip;
  if (workers == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    workers = hw == 0 ? 1 : static_cast<int>(hw);
  }
  Verdict v = run_check(*m, scope, workers);

  ordered_json j;
  j["command"] = "check";
  j["method"] = v.method_name;
  j["space"] = v.scope.space->describe();
  j["criterion"] = criterion_name(v.scope.criterion);
  j["max_voters"] = v.scope.max_voters;
  j["skip_on_tie"] = v.scope.skip_on_tie;
  j["profiles_examined"] = v.profiles_examined;
  j["instances_examined"] = v.instances_examined;
  j["skipped_instances"] = v.skipped_instances;
  j["tied_evaluations"] = v.tied_evaluations;
  ordered_json ces = ordered_json::array();
  const BallotSpace& sp = *v.scope.space;
  for (const Counterexample& ce : v.counterexamples) {
    ordered_json cj;
    cj["profile"] = format_profile(ce.base);
    cj["voters"] = format_rational(profile_total(ce.base));
    cj["sincere"] = format_ranking(ce.sincere, sp);
    cj["sincere_outcome"] = outcome_json(ce.sincere_outcome, sp);
    if (ce.protecting) {
      cj["best_shielded"] = format_ranking(*ce.protecting, sp);
      cj["best_shielded_outcome"] = outcome_json(*ce.protected_outcome, sp);
    }
    cj["manipulating"] = format_ranking(ce.manipulating, sp);
    cj["manipulated_outcome"] = outcome_json(ce.manipulated_outcome, sp);
    ces.push_back(cj);
  }
  j["counterexamples"] = ces;
  j["verdict"] = v.ok() ? "no counterexample" : "counterexamples found";

  emit(j, json_out, format_verdict(v));
  return v.ok() ? 0 : 1;
}

// ---- orbit ----

int cmd_orbit(const std::string& vector_path, const SpaceFlags& flags, bool json_out) {
  BallotSpacePtr sp = flags.make();
  NormalVector v = parse_vector_text(read_file(vector_path), sp);
  std::vector<NormalVector> members = orbit(v);

  std::ostringstream text;
  text << "space: " << sp->describe() << "\n";
  text << "orbit size: " << members.size() << "\n";
  for (std::size_t k = 0; k < members.size(); ++k) {
    text << "member " << k + 1 << ":\n";
    std::istringstream lines(format_vector(members[k]));
    for (std::string line; std::getline(lines, line);) text << "  " << line << "\n";
  }

  ordered_json j;
  j["command"] = "orbit";
  j["space"] = sp->describe();
  j["size"] = members.size();
  ordered_json arr = ordered_json::array();
  for (const NormalVector& member : members) arr.push_back(vector_json(member));
  j["members"] = arr;
  emit(j, json_out, text.str());
  return 0;
}

// ---- enumerate ----

int cmd_enumerate(const std::string& method_src, int builtin_candidates, const SpaceFlags& flags,
                  int voters, bool json_out) {
  BallotSpacePtr sp;
  if (!method_src.empty()) {
    sp = resolve_method(method_src, builtin_candidates)->space();
  } else {
    sp = flags.make();
  }

  std::ostringstream text;
  ordered_json j;
  j["command"] = "enumerate";
  j["space"] = sp->describe();
  text << "space: " << sp->describe() << "\n";
  if (voters <= 0) {
    text << "ballot types: " << sp->size() << "\n";
    ordered_json arr = ordered_json::array();
    for (int k = 0; k < sp->size(); ++k) {
      text << "  " << k << ": " << format_ranking(sp->ranking(k), *sp) << "\n";
      arr.push_back(format_ranking(sp->ranking(k), *sp));
    }
    j["ballots"] = arr;
  } else {
    text << "profiles with " << voters << " voters: " << profile_count(sp->size(), voters)
         << "\n";
    ordered_json arr = ordered_json::array();
    long long index = 0;
    enumerate_profiles(sp, voters, [&](const Profile& p) {
      text << "profile " << ++index << ":\n";
      std::istringstream lines(format_profile(p));
      for (std::string line; std::getline(lines, line);) text << "  " << line << "\n";
      arr.push_back(format_profile(p));
    });
    j["voters"] = voters;
    j["profiles"] = arr;
  }
  emit(j, json_out, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fbcheck: represent ranked-ballot election methods as stages of linear\n"
      "inequalities, classify their geometry, and exhaustively verify or refute\n"
      "first-choice protection and monotonicity on small electorates."};
  app.require_subcommand(1);

  std::string format = "text";

  // tally
  auto* tally = app.add_subcommand("tally", "evaluate a method on a profile file");
  std::string tally_method, tally_profile;
  int tally_candidates = 0;
  tally->add_option("--method", tally_method, "builtin spec or method file")->required();
  tally->add_option("--candidates", tally_candidates, "override candidate count (builtins)");
  tally->add_option("--profile", tally_profile, "profile file")->required();

  // classify
  auto* classify = app.add_subcommand("classify", "vector categories and stage types");
  std::string cls_method, cls_vector;
  bool cls_top_member = false;
  SpaceFlags cls_space;
  classify->add_option("--method", cls_method, "builtin spec or method file");
  classify->add_option("--vector", cls_vector, "vector file to classify instead");
  classify->add_flag("--top-member", cls_top_member,
                     "read 'first place' as top-tier membership (vector mode)");
  cls_space.attach(classify);

  // check
  auto* check = app.add_subcommand("check", "exhaustive criterion sweep");
  std::string chk_method, chk_criterion;
  int chk_candidates = 0, chk_max_voters = 0, chk_workers = 0;
  bool chk_no_skip = false;
  check->add_option("--method", chk_method, "builtin spec or method file")->required();
  check->add_option("--candidates", chk_candidates, "override candidate count (builtins)");
  check->add_option("--criterion", chk_criterion, "sfbc, fbc, lfp, or monotonicity")->required();
  check->add_option("--max-voters", chk_max_voters, "largest electorate to sweep")->required();
  check->add_flag("--no-skip-on-tie", chk_no_skip,
                  "let the method's tiebreak decide two-way ties; residual ties still skip");
  check->add_option("--workers", chk_workers, "sweep threads (0 = all cores; 1 = sequential)");

  // orbit
  auto* orb = app.add_subcommand("orbit", "close a vector under candidate swaps");
  std::string orb_vector;
  SpaceFlags orb_space;
  orb->add_option("--vector", orb_vector, "vector file")->required();
  orb_space.attach(orb);

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list a ballot space or its profiles");
  std::string enum_method;
  int enum_voters = 0;
  SpaceFlags enum_space;
  enumerate->add_option("--method", enum_method, "take the space from this method");
  enumerate->add_option("--voters", enum_voters, "list whole profiles of this size instead");
  enum_space.attach(enumerate);

  for (CLI::App* sub : {tally, classify, check, orb, enumerate}) {
    sub->add_option("--format", format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const bool json_out = format == "json";
  try {
    if (*tally) return cmd_tally(tally_method, tally_candidates, tally_profile, json_out);
    if (*classify) {
      if (cls_method.empty() == cls_vector.empty())
        throw std::invalid_argument("classify needs exactly one of --method or --vector");
      int override_c = classify->count("--candidates") ? cls_space.candidates : 0;
      if (!cls_method.empty()) return cmd_classify_method(cls_method, override_c, json_out);
      return cmd_classify_vector(cls_vector, cls_space, cls_top_member, json_out);
    }
    if (*check)
      return cmd_check(chk_method, chk_candidates, chk_criterion, chk_max_voters, chk_no_skip,
                       chk_workers, json_out);
    if (*orb) return cmd_orbit(orb_vector, orb_space, json_out);
    if (*enumerate) {
      int override_c = enumerate->count("--candidates") ? enum_space.candidates : 0;
      return cmd_enumerate(enum_method, override_c, enum_space, enum_voters, json_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
