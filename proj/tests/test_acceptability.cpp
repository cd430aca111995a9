#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "redlab/acceptability.hpp"
#include "redlab/error.hpp"
#include "redlab/json_io.hpp"
#include "redlab/parse.hpp"
#include "test_util.hpp"

using namespace redlab;

namespace {

Calculus fixture(const std::string& name) {
  return parse_calculus(testutil::read_file(testutil::fixture_path(name)));
}

Classification classify_named(const Calculus& c, const std::string& rule) {
  const ReductionRule* r = c.find_reduction(rule);
  REQUIRE(r != nullptr);
  return classify_rule(c, *r);
}

}  // namespace

TEST_CASE("beta preserves fully") {
  Classification cl = classify_named(builtin("stlc"), "beta");
  CHECK(cl.verdict == Verdict::FULL);
  REQUIRE(cl.branches.size() == 1);
  CHECK(cl.branches[0].status == BranchVerdict::Status::FullPreserving);
  CHECK(hat_eq(cl.branches[0].redex_hat, cl.branches[0].contractum_hat));
  CHECK(cl.branches[0].fresh_metavars.empty());
}

TEST_CASE("the tonk detour reduction is rejected") {
  Classification cl = classify_named(builtin("tonk"), "tonk-red");
  CHECK(cl.verdict == Verdict::REJECTED);
  REQUIRE(cl.branches.size() == 1);
  CHECK(cl.branches[0].status == BranchVerdict::Status::Arbitrary);
  CHECK_FALSE(cl.branches[0].fresh_metavars.empty());
  CHECK(to_string(cl.branches[0].redex_hat) == "?0");
  CHECK(to_string(cl.branches[0].contractum_hat) == "?1");
}

TEST_CASE("the collapse reduction is rejected") {
  Classification cl = classify_named(builtin("stlc+ekman"), "ekman");
  CHECK(cl.verdict == Verdict::REJECTED);
  REQUIRE(cl.branches.size() == 1);
  CHECK(cl.branches[0].status == BranchVerdict::Status::Arbitrary);
  CHECK(to_string(cl.branches[0].redex_hat) == "?0");
  CHECK(to_string(cl.branches[0].contractum_hat) == "?1");
}

TEST_CASE("the liar reduction preserves fully") {
  Classification cl = classify_named(builtin("liar"), "liar-red");
  CHECK(cl.verdict == Verdict::FULL);
  REQUIRE(cl.branches.size() == 1);
  CHECK(to_string(cl.branches[0].redex_hat) == "L -> bot");
  CHECK(to_string(cl.branches[0].contractum_hat) == "L -> bot");
}

TEST_CASE("core beta is weakly acceptable") {
  Classification cl = classify_named(builtin("core"), "beta");
  CHECK(cl.verdict == Verdict::WEAK);
  REQUIRE(cl.branches.size() == 2);
  CHECK(cl.branches[0].status == BranchVerdict::Status::FullPreserving);
  CHECK(cl.branches[1].status == BranchVerdict::Status::WeaklyRelated);
  CHECK(cl.branches[1].contractum_hat.is_frown());
  CHECK(cl.branches[1].fresh_metavars.empty());
  CHECK_FALSE(cl.note.empty());
}

TEST_CASE("classify_calculus covers every rule in order") {
  auto stlc = classify_calculus(builtin("stlc"));
  REQUIRE(stlc.size() == 1);
  CHECK(stlc[0].rule == "beta");
  CHECK(stlc[0].verdict == Verdict::FULL);

  auto ekman = classify_calculus(builtin("stlc+ekman"));
  REQUIRE(ekman.size() == 2);
  CHECK(ekman[0].rule == "beta");
  CHECK(ekman[0].verdict == Verdict::FULL);
  CHECK(ekman[1].rule == "ekman");
  CHECK(ekman[1].verdict == Verdict::REJECTED);

  auto core = classify_calculus(builtin("core"));
  REQUIRE(core.size() == 1);
  CHECK(core[0].verdict == Verdict::WEAK);

  auto tonk = classify_calculus(builtin("tonk"));
  REQUIRE(tonk.size() == 2);
  CHECK(tonk[0].verdict == Verdict::FULL);
  CHECK(tonk[1].verdict == Verdict::REJECTED);

  auto liar = classify_calculus(builtin("liar"));
  REQUIRE(liar.size() == 2);
  CHECK(liar[0].verdict == Verdict::FULL);
  CHECK(liar[1].verdict == Verdict::FULL);
}

TEST_CASE("rejected verdicts carry a replayable witness") {
  for (const char* setup : {"tonk", "stlc+ekman"}) {
    Calculus c = builtin(setup);
    for (const Classification& cl : classify_calculus(c)) {
      if (cl.verdict != Verdict::REJECTED) continue;
      REQUIRE(cl.witness_branch >= 0);
      const InferBranch& w = cl.reconstruction.branches[cl.witness_branch];
      CHECK(replay(c, w));
      // The witness branch exhibits the fresh metavariable.
      const BranchVerdict& bv = cl.branches[cl.witness_branch];
      CHECK_FALSE(bv.fresh_metavars.empty());
      std::set<int> redex_metas = meta_vars(bv.redex_hat);
      for (int m : bv.fresh_metavars) CHECK_FALSE(redex_metas.count(m));
    }
  }
}

TEST_CASE("full verdicts never carry fresh metavariables anywhere") {
  std::vector<Calculus> calcs;
  for (const auto& n : builtin_names()) calcs.push_back(builtin(n));
  calcs.push_back(fixture("loopy.rcalc"));
  calcs.push_back(fixture("shrink.rcalc"));
  calcs.push_back(fixture("frown-sink.rcalc"));
  for (const Calculus& c : calcs) {
    for (const Classification& cl : classify_calculus(c)) {
      if (cl.errored()) continue;
      for (const BranchVerdict& bv : cl.branches)
        if (bv.status == BranchVerdict::Status::FullPreserving)
          CHECK(bv.fresh_metavars.empty());
    }
  }
}

TEST_CASE("classification output is byte-stable") {
  Calculus c = builtin("core");
  TypeStyle st = c.type_style();
  Classification a = classify_named(c, "beta");
  Classification b = classify_named(c, "beta");
  CHECK(render_classification(a, st) == render_classification(b, st));
  CHECK(classification_json(a, st).dump(2) ==
        classification_json(b, st).dump(2));
}

TEST_CASE("weak without FROWN: determined but distinct hats") {
  // The contractum hat is built entirely from redex metavariables yet is not
  // the redex hat, so the rule is weakly acceptable.
  Calculus c = parse_calculus(
      "calculus diag\n"
      "typecon -> 2 infix\n"
      "head w constructor 1\n"
      "rule w-I: $t : ?A ==> w($t) : ?A -> ?A\n"
      "reduction unw: w($t) ~> $t\n");
  Classification cl = classify_named(c, "unw");
  CHECK(cl.verdict == Verdict::WEAK);
  REQUIRE(cl.branches.size() == 1);
  CHECK(cl.branches[0].status == BranchVerdict::Status::WeaklyRelated);
  CHECK(to_string(cl.branches[0].redex_hat) == "?0 -> ?0");
  CHECK(to_string(cl.branches[0].contractum_hat) == "?0");
  CHECK(cl.branches[0].fresh_metavars.empty());
}

TEST_CASE("one arbitrary branch dominates a fully preserving one") {
  Calculus c = parse_calculus(
      "calculus mixed\n"
      "head c constructor 1\n"
      "rule keep: $t : ?A ==> c($t) : ?A\n"
      "rule drop: $t : ?A ==> c($t) : ?B\n"
      "reduction unc: c($t) ~> $t\n");
  Classification cl = classify_named(c, "unc");
  CHECK(cl.verdict == Verdict::REJECTED);
  REQUIRE(cl.branches.size() == 2);
  CHECK(cl.branches[0].status == BranchVerdict::Status::FullPreserving);
  CHECK(cl.branches[1].status == BranchVerdict::Status::Arbitrary);
  CHECK(cl.witness_branch == 1);
}

TEST_CASE("untypable redex schemas are reported, not classified") {
  Calculus c = parse_calculus(
      "calculus odd\n"
      "head c destructor 1\n"
      "rule c-I: $t : K2 ==> c($t) : K\n"
      "reduction inner: c(c($t)) ~> $t\n");
  CHECK_THROWS_AS(classify_named(c, "inner"), DomainError);
  auto batch = classify_calculus(c);
  REQUIRE(batch.size() == 1);
  CHECK(batch[0].errored());
  CHECK(batch[0].error.find("UntypableRedex") != std::string::npos);
}

TEST_CASE("instance check: beta preserves on every trial") {
  Calculus stlc = builtin("stlc");
  SrReport r = check_sr_instances(stlc, *stlc.find_reduction("beta"), 60, 7);
  CHECK(r.trials == 60);
  CHECK(r.preserved == 60);
  CHECK(r.hat_changed == 0);
  CHECK(r.failed == 0);
}

TEST_CASE("instance check: core beta never fails outright") {
  Calculus core = builtin("core");
  SrReport r = check_sr_instances(core, *core.find_reduction("beta"), 60, 11);
  CHECK(r.trials == 60);
  CHECK(r.preserved + r.hat_changed == 60);
  CHECK(r.failed == 0);
}

TEST_CASE("instance check: the collapse rule fails on the identity detour") {
  Calculus ekman = builtin("stlc+ekman");
  std::vector<TermRef> fixtures = {parse_term("app(y, app(x, lam z. z))")};
  SrReport r = check_sr_instances(ekman, *ekman.find_reduction("ekman"), 40,
                                  13, fixtures);
  CHECK(r.trials == 40);
  CHECK(r.failed >= 1);
  REQUIRE_FALSE(r.failed_instances.empty());
  CHECK(r.failed_instances[0].find("lam z. z") != std::string::npos);
}

TEST_CASE("instance check: tonk detours never preserve") {
  Calculus tonk = builtin("tonk");
  SrReport r =
      check_sr_instances(tonk, *tonk.find_reduction("tonk-red"), 30, 17);
  CHECK(r.trials == 30);
  CHECK(r.failed == 30);
}

TEST_CASE("instance check: a FROWN-concluding head makes hats move") {
  Calculus c = fixture("frown-sink.rcalc");
  std::vector<TermRef> fixtures = {parse_term("app(lam x. boom(y), z)")};
  SrReport r =
      check_sr_instances(c, *c.find_reduction("beta"), 40, 19, fixtures);
  CHECK(r.trials == 40);
  CHECK(r.hat_changed >= 1);
  CHECK(r.failed == 0);
}

TEST_CASE("consistency: FULL-classified rules never fail an instance check") {
  for (const auto& name : builtin_names()) {
    Calculus c = builtin(name);
    for (const Classification& cl : classify_calculus(c)) {
      if (cl.errored() || cl.verdict != Verdict::FULL) continue;
      SrReport r =
          check_sr_instances(c, *c.find_reduction(cl.rule), 25, 23);
      INFO(name, "/", cl.rule);
      CHECK(r.failed == 0);
      CHECK(r.hat_changed == 0);
    }
  }
}
