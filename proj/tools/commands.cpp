#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "pmon/compiler.hpp"
#include "pmon/deduction.hpp"
#include "pmon/errors.hpp"
#include "pmon/json.hpp"
#include "pmon/monitor.hpp"
#include "pmon/narration.hpp"
#include "pmon/oracle.hpp"

namespace pmon::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string strip_timing(const std::string& report) {
  Json j = Json::parse(report);
  j.erase("timing_ms");
  return j.dump(2);
}

namespace {

struct Options {
  std::string theory = "classic";
  std::string format = "text";
  std::string out;
  bool prudent = false;
  std::string via = "basis";
  std::size_t depth = 3;
  std::size_t budget = 1'000'000;
  bool oracle = false;
  std::string strand;
  std::vector<std::string> order;
  std::vector<std::string> files;
  std::string monitor, rules, attack;
};

/// Result of a command: its JSON payload, a text rendering and an exit code.
struct Outcome {
  Json result;
  std::string text;
  int code = kOk;
};

class Session {
 public:
  explicit Session(const Options& o) : opt_(o), sys_(resolve_theory(o.theory)) {
    if (o.theory != "classic" && !o.theory.empty()) record(o.theory);
  }

  const DeductionSystem& sys() const { return sys_; }
  const Options& opt() const { return opt_; }
  const Json& inputs() const { return inputs_; }

  Document load(const std::string& path) { return parse_document(record(path), sys_); }

  template <typename T>
  T load_as(const std::string& path, const char* what) {
    Document d = load(path);
    if (auto* p = std::get_if<T>(&d)) return std::move(*p);
    throw Error(path + ": expected " + what);
  }

  std::string record(const std::string& path) {
    std::string bytes = read_file(path);
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    inputs_.push_back({{"path", path}, {"fnv1a64", hex}});
    return bytes;
  }

  std::optional<std::vector<std::string>> order() const {
    if (opt_.order.empty()) return std::nullopt;
    return opt_.order;
  }

 private:
  const Options& opt_;
  DeductionSystem sys_;
  Json inputs_ = Json::array();
};

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << text;
}

// compile ---------------------------------------------------------------

Outcome cmd_compile(Session& s) {
  Protocol p = s.load_as<Protocol>(s.opt().files.at(0), "a protocol");
  Outcome o;
  ProtocolImplementation impl;
  try {
    impl = compile_protocol(p, s.sys(), s.opt().prudent);
  } catch (const NotExecutable& e) {
    o.code = kNotExecutable;
    o.result = {{"executable", false},
                {"strand", e.strand()},
                {"step", e.step()},
                {"message", e.message()}};
    o.text = std::string(e.what()) + "\n";
    return o;
  }
  Json frames = Json::object();
  std::ostringstream text;
  for (const auto& strand : impl.strands) {
    const ActiveFrame& f = impl.frame(strand);
    std::string listing = pseudocode(f);
    frames[strand] = {{"frame", to_json(f)}, {"pseudocode", listing}};
    text << "strand " << strand << (impl.prudent ? " (prudent)" : "") << "\n" << listing;
    if (!s.opt().out.empty()) {
      std::filesystem::create_directories(s.opt().out);
      write_file(std::filesystem::path(s.opt().out) / (strand + ".json"), to_json(f).dump(2) + "\n");
      write_file(std::filesystem::path(s.opt().out) / (strand + ".txt"), listing);
    }
  }
  o.result = {{"executable", true}, {"prudent", impl.prudent}, {"strands", frames}};
  o.text = text.str();
  return o;
}

// check-refines ---------------------------------------------------------

Trace positive_trace(Session& s, const std::string& path) {
  Document d = s.load(path);
  auto* p = std::get_if<Protocol>(&d);
  if (!p) throw Error(path + ": expected a trace file");
  std::string strand = s.opt().strand;
  if (strand.empty()) {
    if (p->strands.size() != 1) throw Error(path + ": several strands, pick one with --strand");
    strand = p->strands.front();
  }
  Trace t = p->trace(strand);
  if (!t.is_positive()) throw Error(path + ": trace of " + strand + " is not positive");
  return t;
}

Outcome cmd_check_refines(Session& s) {
  Trace a = positive_trace(s, s.opt().files.at(0));
  Trace b = positive_trace(s, s.opt().files.at(1));
  const auto& sys = s.sys();
  Outcome o;
  auto witness = [&](const Trace& x, const Trace& y) -> Json {
    if (x.size() != y.size()) return nullptr;
    auto w = refinement_witness(x, y, sys);
    return w ? Json(w->str()) : Json(nullptr);
  };
  bool ab = refines(a, b, sys), ba = refines(b, a, sys);
  o.result = {{"lengths", {a.size(), b.size()}},
              {"comparable", a.size() == b.size()},
              {"first_refines_second", ab},
              {"second_refines_first", ba},
              {"equivalent", ab && ba},
              {"witness", {{"first_refines_second", witness(a, b)},
                           {"second_refines_first", witness(b, a)}}}};
  std::ostringstream text;
  if (a.size() != b.size())
    text << "not comparable: lengths " << a.size() << " and " << b.size() << "\n";
  text << "first refines second: " << (ab ? "yes" : "no") << "\n";
  if (!o.result["witness"]["first_refines_second"].is_null())
    text << "  fails " << o.result["witness"]["first_refines_second"].get<std::string>() << "\n";
  text << "second refines first: " << (ba ? "yes" : "no") << "\n";
  if (!o.result["witness"]["second_refines_first"].is_null())
    text << "  fails " << o.result["witness"]["second_refines_first"].get<std::string>() << "\n";
  text << "equivalent: " << (ab && ba ? "yes" : "no") << "\n";
  if (s.opt().oracle) {
    OracleLimits lim{s.opt().depth, s.opt().budget};
    bool oab = oracle_refines(a, b, sys, lim), oba = oracle_refines(b, a, sys, lim);
    o.result["oracle"] = {{"depth", lim.depth},
                          {"first_refines_second", oab},
                          {"second_refines_first", oba}};
    text << "oracle (depth " << lim.depth << "): " << (oab ? "yes" : "no") << ", "
         << (oba ? "yes" : "no") << "\n";
  }
  o.text = text.str();
  return o;
}

// detect / synthesize ---------------------------------------------------

struct Loaded {
  AttackDefinition attack;
  Monitor monitor;
  ProtocolImplementation frames;
};

Loaded load_bundle(Session& s, const std::string& attack, const std::string& monitor,
                   const std::string& protocol) {
  const auto& sys = s.sys();
  AttackDefinition a = s.load_as<AttackDefinition>(attack, "an attack definition");
  MonitorSpec ms = s.load_as<MonitorSpec>(monitor, "a monitor");
  Protocol p = s.load_as<Protocol>(protocol, "a protocol");
  for (const auto& problem : check_execution(a.attack(), p)) throw Error(attack + ": " + problem);
  Monitor m = build_monitor(p, ms);
  MonitorCheck check = validate_monitor(m, p, sys);
  if (!check.ok) throw Error(monitor + ": " + check.problems.front());
  ProtocolImplementation frames = compile_monitor(m, sys);
  return {std::move(a), std::move(m), std::move(frames)};
}

std::string log_text(const ExecutionLog& log) {
  std::ostringstream out;
  out << "(" << log.entries.str() << ")";
  return out.str();
}

Outcome cmd_detect(Session& s) {
  const auto& f = s.opt().files;
  Loaded b = load_bundle(s, f.at(0), f.at(1), f.at(2));
  AttackPresentation pres = attack_presentation(b.frames, b.attack, s.sys(), s.order());
  Outcome o;
  Json routes = Json::object();
  std::optional<bool> verdict;
  const std::string& via = s.opt().via;
  if (via == "basis" || via == "both") routes["basis"] = detectable(pres, s.sys(), Route::Basis);
  if (via == "staticeq" || via == "both")
    routes["staticeq"] = detectable(pres, s.sys(), Route::StaticEquivalence);
  for (const auto& [name, v] : routes.items()) {
    if (verdict && *verdict != v.get<bool>()) throw Error("detection routes disagree");
    verdict = v.get<bool>();
  }
  std::ostringstream text;
  for (const auto& w : knowledge_warnings(b.attack)) text << "warning: " << w << "\n";
  text << "attack log: " << log_text(pres.attack_log) << "\n";
  text << "normal log: " << log_text(pres.normal_log) << "\n";
  text << "detectable: " << (*verdict ? "yes" : "no") << "\n";
  o.result = {{"attack_log", to_json(pres.attack_log)},
              {"normal_log", to_json(pres.normal_log)},
              {"routes", routes},
              {"detectable", *verdict},
              {"warnings", knowledge_warnings(b.attack)}};
  o.text = text.str();
  return o;
}

Outcome cmd_synthesize(Session& s) {
  const auto& f = s.opt().files;
  Loaded b = load_bundle(s, f.at(0), f.at(1), f.at(2));
  AttackPresentation pres = attack_presentation(b.frames, b.attack, s.sys(), s.order());
  auto rule = synthesize_test(pres, s.sys());
  Outcome o;
  if (!rule) {
    o.code = kUndetectable;
    o.result = {{"detectable", false}, {"rule", nullptr}};
    o.text = "undetectable: the attack and normal logs are equivalent\n";
    return o;
  }
  o.result = {{"detectable", true}, {"rule", to_json(*rule)}};
  if (!s.opt().out.empty()) write_file(s.opt().out, to_json(*rule).dump(2) + "\n");
  o.text = rule->equation.str() + " (" + polarity_name(rule->polarity) + ")\n";
  return o;
}

// simulate --------------------------------------------------------------

Outcome cmd_simulate(Session& s) {
  const auto& sys = s.sys();
  const Options& opt = s.opt();
  Protocol p = s.load_as<Protocol>(opt.files.at(0), "a protocol");
  ProtocolExecution e = s.load_as<ProtocolExecution>(opt.files.at(1), "an execution");
  for (const auto& problem : check_execution(e, p)) throw Error(opt.files.at(1) + ": " + problem);
  ProtocolImplementation impl = compile_protocol(p, sys, true);

  std::optional<ProtocolImplementation> frames;
  std::vector<MonitorVerdictRule> rules;
  if (!opt.monitor.empty()) {
    Monitor m = build_monitor(p, s.load_as<MonitorSpec>(opt.monitor, "a monitor"));
    MonitorCheck check = validate_monitor(m, p, sys);
    if (!check.ok) throw Error(opt.monitor + ": " + check.problems.front());
    frames = compile_monitor(m, sys);
  }
  if (!opt.rules.empty()) rules = rules_from_json(Json::parse(s.record(opt.rules)), sys);
  if (!opt.attack.empty()) {
    if (!frames) throw Error("--attack needs --monitor");
    AttackDefinition a = s.load_as<AttackDefinition>(opt.attack, "an attack definition");
    if (auto r = synthesize_test(attack_presentation(*frames, a, sys, s.order()), sys))
      rules.push_back(*r);
  }

  Simulation sim = simulate(impl, e, sys, frames ? &*frames : nullptr, rules, s.order());
  Outcome o;
  std::ostringstream text;
  Json runs = Json::array();
  for (const auto& r : sim.runs) {
    runs.push_back({{"participant", r.participant},
                    {"role", r.role},
                    {"accepted", r.accepted},
                    {"problem", r.problem},
                    {"evaluation", to_json(r.result)}});
    text << r.participant << " as " << r.role << ": " << (r.accepted ? "accept" : "reject");
    if (!r.problem.empty()) text << " (" << r.problem << ")";
    text << "\n";
    for (const auto& t : r.result.transcript)
      text << "  step " << t.step << ": " << t.equation.str() << (t.passed ? " ok" : " FAILS")
           << "\n";
  }
  Json rule_json = Json::array();
  for (const auto& r : rules) rule_json.push_back(to_json(r));
  o.result = {{"runs", runs}, {"rules", rule_json}};
  if (sim.log) {
    o.result["log"] = to_json(*sim.log);
    o.result["verdict"] = verdict_name(*sim.verdict);
    text << "log: " << log_text(*sim.log) << "\n";
    text << "verdict: " << verdict_name(*sim.verdict) << "\n";
  }
  o.text = text.str();
  return o;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Compile protocol narrations into role programs and synthesize monitors", "pmon"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--theory", opt.theory, "Built-in theory name or theory file")
      ->envname("PMON_THEORY");
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* compile = app.add_subcommand("compile", "Compile every role of a protocol");
  compile->add_option("protocol", opt.files, "Protocol file")->required()->expected(1);
  compile->add_flag("--prudent", opt.prudent, "Add the tests that make frames prudent");
  compile->add_option("--out", opt.out, "Directory for <role>.json and <role>.txt");

  auto* check = app.add_subcommand("check-refines", "Compare two positive traces");
  check->add_option("traces", opt.files, "Two trace files")->required()->expected(2);
  check->add_option("--strand", opt.strand, "Strand to read from each file");
  check->add_flag("--oracle", opt.oracle, "Also run the exhaustive oracle");
  check->add_option("--depth", opt.depth, "Oracle context depth");
  check->add_option("--budget", opt.budget, "Oracle context budget");

  auto* detect = app.add_subcommand("detect", "Decide whether a monitor detects an attack");
  detect->add_option("files", opt.files, "Attack, monitor and protocol files")
      ->required()
      ->expected(3);
  detect->add_option("--via", opt.via, "Decision route")
      ->check(CLI::IsMember({"basis", "staticeq", "both"}));
  detect->add_option("--order", opt.order, "Participant order")->delimiter(',');

  auto* synth = app.add_subcommand("synthesize", "Synthesize a test blocking an attack");
  synth->add_option("files", opt.files, "Attack, monitor and protocol files")
      ->required()
      ->expected(3);
  synth->add_option("--out", opt.out, "Write the rule JSON here");
  synth->add_option("--order", opt.order, "Participant order")->delimiter(',');

  auto* sim = app.add_subcommand("simulate", "Replay an execution through prudent frames");
  sim->add_option("files", opt.files, "Protocol and execution files")->required()->expected(2);
  sim->add_option("--monitor", opt.monitor, "Monitor file");
  sim->add_option("--rules", opt.rules, "Verdict rules (JSON)");
  sim->add_option("--attack", opt.attack, "Attack definition to synthesize a rule from");
  sim->add_option("--order", opt.order, "Participant order")->delimiter(',');

  std::vector<std::string> argv_store{"pmon"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "pmon: " << e.what() << "\n";
    return kUsage;
  }

  std::string name = app.get_subcommands().front()->get_name();
  static const std::map<std::string, std::function<Outcome(Session&)>> commands = {
      {"compile", cmd_compile},
      {"check-refines", cmd_check_refines},
      {"detect", cmd_detect},
      {"synthesize", cmd_synthesize},
      {"simulate", cmd_simulate}};

  auto start = std::chrono::steady_clock::now();
  Outcome o;
  Json inputs;
  try {
    Session s(opt);
    o = commands.at(name)(s);
    inputs = s.inputs();
  } catch (const NotExecutable& e) {
    err << "pmon: " << e.what() << "\n";
    return kNotExecutable;
  } catch (const std::exception& e) {
    err << "pmon: " << e.what() << "\n";
    return kUsage;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();

  if (opt.format == "json") {
    Json report = {{"tool", "pmon"},
                   {"version", kVersion},
                   {"command", args},
                   {"inputs", inputs},
                   {"result", o.result},
                   {"exit_code", o.code},
                   {"timing_ms", ms}};
    out << report.dump(2) << "\n";
  } else {
    out << o.text;
  }
  return o.code;
}

}  // namespace pmon::cli
