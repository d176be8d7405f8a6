#include <doctest.h>

#include <algorithm>

#include "pmon/deduction.hpp"
#include "pmon/errors.hpp"
#include "pmon/monitor.hpp"
#include "support.hpp"

using namespace pmon;
using namespace pmon::testing;

namespace {

struct Bundle {
  Protocol protocol;
  Monitor monitor;
  ProtocolImplementation frames;
  AttackDefinition attack;
};

Bundle bundle(const char* proto, const char* mon, const char* att) {
  const auto& sys = classic();
  Bundle b;
  b.protocol = parse_protocol(read_file(corpus(proto)), sys);
  b.monitor = build_monitor(b.protocol, parse_monitor(read_file(corpus(mon)), sys));
  b.frames = compile_monitor(b.monitor, sys);
  b.attack = parse_attack(read_file(corpus(att)), sys);
  return b;
}

Bundle iso() { return bundle("iso9797.pnar", "iso9797.monitor", "iso9797.attack"); }
Bundle lowe() { return bundle("nspk.pnar", "nspk.monitor", "nspk-lowe.attack"); }

AttackPresentation presentation(const Trace& attack, const Trace& normal) {
  AttackPresentation p;
  p.attack_log.entries = attack;
  p.normal_log.entries = normal;
  return p;
}

}  // namespace

TEST_CASE("monitor construction and validation") {
  const auto& sys = classic();
  Bundle b = iso();
  CHECK(b.monitor.traces.at("A").str() ==
        "?A, ?B, ?D, ?R, ?~kA, !h(A,D,~kA,R), ?h(B,D,~kB,R), !h(B,D,~kB,R), ?~kB");
  CHECK(b.monitor.traces.at("B").str() == negate(input(b.protocol.trace("B"))).str());
  CHECK(validate_monitor(b.monitor, b.protocol, sys).ok);
  CHECK(pseudocode(b.frames.frame("A")) ==
        "1. receive v1\n2. receive v2\n3. receive v3\n4. receive v4\n5. receive v5\n"
        "6. send h(v1,v3,v5,v4)\n7. receive v6\n8. send v6\n9. receive v7\n");

  CHECK(validate_monitor(full_disclosure_monitor(b.protocol), b.protocol, sys).ok);

  Monitor extra = b.monitor;
  extra.traces["A"].push_received(msg("x"));
  auto check = validate_monitor(extra, b.protocol, sys);
  CHECK_FALSE(check.ok);
  CHECK(check.problems.size() == 1);

  Monitor leaky = b.monitor;
  leaky.traces["B"].push_sent(msg("~kI"));  // never received
  CHECK_FALSE(validate_monitor(leaky, b.protocol, sys).ok);

  CHECK_THROWS_AS(build_monitor(b.protocol, {"M", "", {{"C", 0, msg("a")}}}), Error);
  CHECK_THROWS_AS(build_monitor(b.protocol, {"M", "", {{"A", 9, msg("a")}}}), Error);
}

TEST_CASE("ISO logs, test and verdicts") {
  const auto& sys = classic();
  Bundle b = iso();
  AttackPresentation pres = attack_presentation(b.frames, b.attack, sys);
  CHECK(pres.normal_log.entries.str() == "!h(A,D,~kA,R), !h(B,D,~kB,R)");
  // The intruder reflects a's own commitment, so a reports it twice.
  CHECK(pres.attack_log.entries.str() == "!h(A,D,~kA,R), !h(A,D,~kA,R)");
  CHECK(pres.attack_log.provenance.size() == 2);
  CHECK(pres.attack_log.provenance[1].participant == "a");
  CHECK(pres.attack_log.provenance[1].step == 8);

  CHECK(detectable(pres, sys, Route::Basis));
  CHECK(detectable(pres, sys, Route::StaticEquivalence));
  auto rule = synthesize_test(pres, sys);
  REQUIRE(rule);
  CHECK(rule->equation == eqn("v1", "v2"));
  CHECK(rule->polarity == VerdictPolarity::BlockIfSatisfied);
  CHECK(apply_verdict(*rule, pres.attack_log.entries, sys) == Verdict::Block);
  CHECK(apply_verdict(*rule, pres.normal_log.entries, sys) == Verdict::Allow);
  CHECK(apply_verdicts({}, pres.attack_log.entries, sys) == Verdict::Allow);
}

TEST_CASE("Lowe logs, test and verdicts") {
  const auto& sys = classic();
  Bundle b = lowe();
  CHECK(validate_monitor(b.monitor, b.protocol, sys).ok);
  AttackPresentation pres = attack_presentation(b.frames, b.attack, sys);
  CHECK(pres.normal_log.entries.str() == "!enc(~NB,KB), !enc(~NB,KB)");
  CHECK(pres.attack_log.entries.str() == "!enc(~NB,KI), !enc(~NB,KB)");
  CHECK(detectable(pres, sys));
  auto rule = synthesize_test(pres, sys);
  REQUIRE(rule);
  CHECK(rule->equation == eqn("v1", "v2"));
  CHECK(rule->polarity == VerdictPolarity::BlockIfViolated);
}

TEST_CASE("degenerate presentations") {
  const auto& sys = classic();
  Bundle b = iso();
  AttackDefinition same = b.attack;
  same.attack_traces = same.normal_traces;
  AttackPresentation pres = attack_presentation(b.frames, same, sys);
  CHECK(pres.attack_log.entries == pres.normal_log.entries);
  CHECK_FALSE(detectable(pres, sys));
  CHECK_FALSE(detectable(pres, sys, Route::StaticEquivalence));
  CHECK_FALSE(synthesize_test(pres, sys));

  Monitor silent = build_monitor(b.protocol, {"Silent", "", {}});
  auto log = execution_log(compile_monitor(silent, sys), b.attack.attack(), sys);
  CHECK(log.entries.empty());

  auto longer = presentation(trace("!a, !b"), trace("!a"));
  CHECK(detectable(longer, sys));
  CHECK(detectable(longer, sys, Route::StaticEquivalence));
  auto rule = synthesize_test(longer, sys);
  REQUIRE(rule);
  CHECK(apply_verdict(*rule, longer.attack_log.entries, sys) == Verdict::Block);
  CHECK(apply_verdict(*rule, longer.normal_log.entries, sys) == Verdict::Allow);

  CHECK_THROWS_AS(execution_log(b.frames, b.attack.attack(), sys, std::vector<std::string>{"i"}),
                  Error);
}

TEST_CASE("logs are deterministic and order only permutes blocks") {
  const auto& sys = classic();
  Bundle b = lowe();
  auto p1 = attack_presentation(b.frames, b.attack, sys);
  auto p2 = attack_presentation(b.frames, b.attack, sys);
  CHECK(p1.attack_log.entries == p2.attack_log.entries);
  auto rev = attack_presentation(b.frames, b.attack, sys, std::vector<std::string>{"b", "a"});
  CHECK(rev.attack_log.entries.str() == "!enc(~NB,KB), !enc(~NB,KI)");
  CHECK(detectable(rev, sys) == detectable(p1, sys));
  auto r1 = synthesize_test(p1, sys), r2 = synthesize_test(rev, sys);
  REQUIRE(r1);
  REQUIRE(r2);
  CHECK(r1->polarity == r2->polarity);
  CHECK(apply_verdict(*r2, rev.attack_log.entries, sys) == Verdict::Block);
}

TEST_CASE("simulation with prudent frames and a synthesized rule") {
  const auto& sys = classic();
  Bundle b = lowe();
  auto impl = compile_protocol(b.protocol, sys, true);
  auto rule = synthesize_test(attack_presentation(b.frames, b.attack, sys), sys);
  REQUIRE(rule);

  auto honest = parse_execution(read_file(corpus("nspk-honest.exec")), sys);
  Simulation s = simulate(impl, honest, sys, &b.frames, {*rule});
  CHECK(std::all_of(s.runs.begin(), s.runs.end(), [](auto& r) { return r.accepted; }));
  CHECK(s.verdict == Verdict::Allow);

  auto attack = parse_execution(read_file(corpus("nspk-lowe.exec")), sys);
  s = simulate(impl, attack, sys, &b.frames, {*rule});
  CHECK(std::all_of(s.runs.begin(), s.runs.end(), [](auto& r) { return r.accepted; }));
  CHECK(s.verdict == Verdict::Block);

  // Input-level refinement of each accepted participant.
  for (const auto& run : s.runs)
    CHECK(refines(input(attack.traces.at(run.participant)),
                  input(b.monitor.traces.at(run.role)), sys));

  // b's trace with a's last message altered does not match its role.
  ProtocolExecution broken = honest;
  Trace tb;
  for (const auto& m : honest.traces.at("b")) tb.push(m.polarity, m.payload);
  broken.traces["b"] = Trace(std::vector<LabeledMessage>(tb.begin(), tb.end() - 1));
  broken.traces["b"].push_received(msg("enc(~NA,KB)"));
  s = simulate(impl, broken, sys);
  CHECK(s.runs[0].accepted);
  CHECK_FALSE(s.runs[1].accepted);
  CHECK_FALSE(s.verdict);
}

TEST_CASE("synthesized tests separate random presentations") {
  const auto& sys = classic();
  TermGen gen(41);
  int detected = 0;
  for (int i = 0; i < 200; ++i) {
    Trace n = gen.positive(1 + gen.pick(4), 3);
    Trace a = gen.coin(0.9) ? gen.perturb(n, 3) : gen.positive(1 + gen.pick(4), 3);
    auto pres = presentation(a, n);
    INFO(a.str(), " vs ", n.str());
    bool d = detectable(pres, sys);
    REQUIRE(d == detectable(pres, sys, Route::StaticEquivalence));
    auto rule = synthesize_test(pres, sys);
    REQUIRE(d == rule.has_value());
    if (rule) {
      REQUIRE(apply_verdict(*rule, a, sys) == Verdict::Block);
      REQUIRE(apply_verdict(*rule, n, sys) == Verdict::Allow);
    }
    detected += d;
  }
  CHECK(detected > 40);
  CHECK(detected < 190);
}
