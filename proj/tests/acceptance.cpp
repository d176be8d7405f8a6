// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failing criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "pmon/compiler.hpp"
#include "pmon/deduction.hpp"
#include "pmon/json.hpp"
#include "pmon/monitor.hpp"
#include "pmon/oracle.hpp"
#include "support.hpp"

using namespace pmon;
using namespace pmon::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Result {
  bool pass;
  std::string detail;
};

// For a pair the depth-3 oracle accepts but the basis rejects: a witness that
// holds on `ref`, fails on `other`, and is deeper than the oracle looks.
bool deep_witness(const Trace& other, const Trace& ref, std::size_t* depth) {
  auto w = refinement_witness(other, ref, classic());
  if (!w || !satisfies(ref, *w, classic()) || satisfies(other, *w, classic())) return false;
  *depth = std::max(w->lhs.body().depth(), w->rhs.body().depth());
  return *depth > 3;
}

std::string run_cli(std::vector<std::string> args, int* code = nullptr) {
  std::ostringstream out, err;
  int c = cli::run(args, out, err);
  if (code) *code = c;
  return out.str();
}

std::vector<std::string> bundle_args(const char* cmd, const char* attack, const char* monitor,
                                     const char* protocol) {
  return {cmd, corpus(attack), corpus(monitor), corpus(protocol), "--format", "json"};
}

// 1. Prudent NSPK initiator frame entails pi1(dec(v7,v6)) = v1.
Result nspk_prudent_compilation() {
  auto start = Clock::now();
  int code = 0;
  Json report = Json::parse(run_cli({"compile", corpus("nspk.pnar"), "--prudent", "--format", "json"}, &code));
  if (code != 0) return {false, "compile exited with " + std::to_string(code)};
  ActiveFrame phi = frame_from_json(report["result"]["strands"]["A"]["frame"], classic());
  TestSystem all;
  for (const auto& s : phi.steps)
    for (const auto& e : s.tests.equations) all.equations.push_back(e);
  TestSystem goal{{eqn("pi1(dec(v7,v6))", "v1")}};

  // Ground instantiations of the seven inputs, half of them shaped like the
  // honest run with random names, the rest with one component disturbed.
  TermGen gen(101, {"n", "m", "a", "b", "k", "k2"});
  int holds = 0, entailed = 0;
  for (int i = 0; i < 100; ++i) {
    Term na = gen.atom(), nb = gen.atom(), ka = gen.atom();
    Term key = gen.coin(0.7) ? ka : gen.atom();
    Term first = gen.coin(0.7) ? na : gen.atom();
    Term inv = Term::app("inv", {gen.coin(0.85) ? ka : gen.atom()});
    Term m7 = gen.coin(0.9) ? Term::app("enc", {Term::app("pair", {first, nb}), key})
                            : gen.message(3);
    Trace t = Trace::sent({na, gen.atom(), gen.atom(), ka, gen.atom(), inv, m7});
    bool s = satisfies(t, all, classic());
    bool g = satisfies(t, goal, classic());
    holds += s;
    if (s && !g) return {false, "instance satisfies the frame tests but not the goal: " + t.str()};
    entailed += g;
  }
  double secs = seconds_since(start);
  std::ostringstream d;
  d << "100 instances, " << holds << " satisfy the tests, " << entailed << " the goal; "
    << secs << " s";
  return {holds > 0 && holds < 100 && secs < 1.0, d.str()};
}

// 2. compile(trace) implements trace for every NSPK and ISO role.
Result implementation_round_trip() {
  int checked = 0;
  for (const char* f : {"nspk.pnar", "iso9797.pnar"}) {
    Protocol p = parse_protocol(read_file(corpus(f)), classic());
    for (const auto& s : p.strands)
      for (bool prudent : {true, false}) {
        if (!is_implementation(compile(p.trace(s), classic(), prudent), p.trace(s), classic()))
          return {false, std::string(f) + " role " + s + " fails"};
        ++checked;
      }
  }
  return {true, std::to_string(checked) + " role frames reproduce their traces"};
}

// 3. ISO logs, synthesized test and verdicts.
Result iso_logs() {
  auto start = Clock::now();
  const auto& sys = classic();
  Protocol p = parse_protocol(read_file(corpus("iso9797.pnar")), sys);
  auto frames = compile_monitor(build_monitor(p, parse_monitor(read_file(corpus("iso9797.monitor")), sys)), sys);
  AttackPresentation pres =
      attack_presentation(frames, parse_attack(read_file(corpus("iso9797.attack")), sys), sys);
  auto rule = synthesize_test(pres, sys);

  Trace want_normal = trace("!h(A,D,~kA,R), !h(B,D,~kB,R)");
  Trace want_attack = trace("!h(A,D,~kA,R), !h(B,D,~kA,R)");
  bool normal_ok = pres.normal_log.entries == want_normal;
  bool attack_ok = pres.attack_log.entries == want_attack;
  bool rule_ok = rule && rule->equation == eqn("v1", "v2") &&
                 rule->polarity == VerdictPolarity::BlockIfSatisfied;
  bool block = rule && apply_verdict(*rule, pres.attack_log.entries, sys) == Verdict::Block;
  bool allow = rule && apply_verdict(*rule, pres.normal_log.entries, sys) == Verdict::Allow;
  double secs = seconds_since(start);

  std::ostringstream d;
  d << "normal log " << (normal_ok ? "matches" : "differs") << "; attack log "
    << (attack_ok ? "matches" : "differs: got (" + pres.attack_log.entries.str() + "), expected (" +
                                    want_attack.str() + ")")
    << "; rule " << (rule ? rule->equation.str() + " " + polarity_name(rule->polarity) : "none")
    << (rule_ok ? " matches" : " differs") << "; attack " << (block ? "blocked" : "allowed")
    << ", normal " << (allow ? "allowed" : "blocked") << "; " << secs << " s";
  return {normal_ok && attack_ok && rule_ok && block && allow && secs < 1.0, d.str()};
}

// 4. Lowe's attack is blocked, the honest run allowed.
Result lowe_interception() {
  auto sim = [](const char* exec) {
    return Json::parse(run_cli({"simulate", corpus("nspk.pnar"), corpus(exec), "--monitor",
                                corpus("nspk.monitor"), "--attack", corpus("nspk-lowe.attack"),
                                "--format", "json"}));
  };
  Json attack = sim("nspk-lowe.exec"), honest = sim("nspk-honest.exec");
  bool accepted = true;
  for (const Json* j : {&attack, &honest})
    for (const auto& r : (*j)["result"]["runs"]) accepted = accepted && r["accepted"].get<bool>();
  std::string va = attack["result"]["verdict"], vh = honest["result"]["verdict"];
  return {accepted && va == "block" && vh == "allow",
          "prudent frames " + std::string(accepted ? "accept" : "reject") + " both runs; attack " +
              va + ", honest " + vh};
}

// 5. Prudent frames accept exactly the refinements, per the oracle.
Result prudence() {
  auto start = Clock::now();
  TermGen gen(2024);
  int n = 0, agree = 0, accepted = 0, deep = 0;
  std::string first_miss;
  for (; n < 250; ++n) {
    Trace lam = gen.role(1 + gen.pick(6), 3);
    Trace in = input(lam);
    Trace other = gen.perturb(in, 3);
    bool frame = evaluate(compile(lam, classic(), true), other, classic()).accepted;
    bool oracle = oracle_refines(other, in, classic(), {3});
    accepted += frame;
    if (frame == oracle) {
      ++agree;
      continue;
    }
    std::size_t depth = 0;
    if (!frame && deep_witness(other, in, &depth)) ++deep;
    if (first_miss.empty())
      first_miss = "; first disagreement: " + lam.str() + " on " + other.str() + " (witness depth " +
                   std::to_string(depth) + ")";
  }
  double secs = seconds_since(start);
  std::ostringstream d;
  d << agree << "/" << n << " agree, " << accepted << " accepted, " << secs << " s";
  if (agree != n) d << "; " << deep << " of " << n - agree << " disagreements have a verified witness deeper than 3";
  d << first_miss;
  return {agree == n && secs < 60.0, d.str()};
}

// 6. finite_basis and the depth-3 oracle induce the same refinement verdicts.
Result basis_vs_oracle() {
  TermGen gen(77);
  int n = 0, agree = 0, refining = 0, deep = 0;
  std::string first_miss;
  for (; n < 250; ++n) {
    Trace ref = gen.positive(1 + gen.pick(4), 3);
    Trace other = gen.perturb(ref, 3);
    bool fast = satisfies(other, finite_basis(ref, classic()), classic());
    bool oracle = oracle_refines(other, ref, classic(), {3});
    refining += fast;
    if (fast == oracle) {
      ++agree;
      continue;
    }
    std::size_t depth = 0;
    if (!fast && deep_witness(other, ref, &depth)) ++deep;
    if (first_miss.empty())
      first_miss = "; first disagreement: " + ref.str() + " vs " + other.str() + " (witness depth " +
                   std::to_string(depth) + ")";
  }
  std::ostringstream d;
  d << agree << "/" << n << " agree, " << refining << " refining";
  if (agree != n) d << "; " << deep << " of " << n - agree << " disagreements have a verified witness deeper than 3";
  d << first_miss;
  return {agree == n, d.str()};
}

// 7. Detection via equivalence agrees with the static-equivalence reduction.
Result detection_routes() {
  const auto& sys = classic();
  int n = 0, agree = 0, detected = 0;
  auto check = [&](const AttackPresentation& p) {
    bool a = detectable(p, sys, Route::Basis);
    bool b = detectable(p, sys, Route::StaticEquivalence);
    ++n;
    agree += a == b;
    detected += a;
  };
  TermGen gen(5150);
  for (int i = 0; i < 150; ++i) {
    AttackPresentation p;
    p.normal_log.entries = gen.positive(1 + gen.pick(4), 3);
    p.attack_log.entries = gen.coin(0.85) ? gen.perturb(p.normal_log.entries, 3)
                                          : gen.positive(1 + gen.pick(4), 3);
    check(p);
  }
  struct B {
    const char *proto, *mon, *att;
  };
  for (B b : {B{"iso9797.pnar", "iso9797.monitor", "iso9797.attack"},
              B{"nspk.pnar", "nspk.monitor", "nspk-lowe.attack"}}) {
    Protocol p = parse_protocol(read_file(corpus(b.proto)), sys);
    auto frames = compile_monitor(build_monitor(p, parse_monitor(read_file(corpus(b.mon)), sys)), sys);
    check(attack_presentation(frames, parse_attack(read_file(corpus(b.att)), sys), sys));
  }
  std::ostringstream d;
  d << agree << "/" << n << " agree (" << detected << " detectable)";
  return {agree == n, d.str()};
}

// 8. Reports are reproducible; participant order does not change verdicts.
Result determinism() {
  auto args = bundle_args("detect", "iso9797.attack", "iso9797.monitor", "iso9797.pnar");
  args.insert(args.end(), {"--via", "both"});
  std::string first = cli::strip_timing(run_cli(args));
  for (int i = 1; i < 10; ++i)
    if (cli::strip_timing(run_cli(args)) != first) return {false, "run " + std::to_string(i) + " differs"};

  auto verdicts = [](std::vector<std::string> order) {
    std::string o = order.empty() ? "" : order[0] + "," + order[1];
    auto d = bundle_args("detect", "nspk-lowe.attack", "nspk.monitor", "nspk.pnar");
    auto s = bundle_args("synthesize", "nspk-lowe.attack", "nspk.monitor", "nspk.pnar");
    if (!o.empty()) {
      d.insert(d.end(), {"--order", o});
      s.insert(s.end(), {"--order", o});
    }
    d.insert(d.end(), {"--via", "both"});
    Json dj = Json::parse(run_cli(d)), sj = Json::parse(run_cli(s));
    return std::make_pair(dj["result"]["detectable"].get<bool>(),
                          sj["result"]["rule"]["polarity"].get<std::string>());
  };
  auto ab = verdicts({"a", "b"}), ba = verdicts({"b", "a"});
  return {ab == ba, "10 identical ISO reports; Lowe verdicts under both orders: " +
                        std::string(ab.first ? "detectable" : "undetectable") + ", " + ab.second};
}

// 9. Normalization is idempotent and strategy independent.
Result rewriting() {
  TermGen gen(9);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    Term t = gen.any(5);
    Term n = normalize(t, classic());
    if (!(normalize(n, classic()) == n) || !(classic().normalize_outermost(t) == n)) ++bad;
  }
  return {bad == 0, "1000 terms, " + std::to_string(bad) + " failures"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Result()> run;
  };
  std::vector<Criterion> criteria = {
      {1, "NSPK prudent compilation", nspk_prudent_compilation},
      {2, "implementation round-trip", implementation_round_trip},
      {3, "ISO 9797-1 logs and verdicts", iso_logs},
      {4, "Lowe attack interception", lowe_interception},
      {5, "prudence against the oracle", prudence},
      {6, "finite basis against the oracle", basis_vs_oracle},
      {7, "detection routes agree", detection_routes},
      {8, "determinism and participant order", determinism},
      {9, "rewriting sanity", rewriting},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("%s %d %s: %s\n", r.pass ? "PASS" : "FAIL", c.id, c.name, r.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
