#include "pmon/narration.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "pmon/errors.hpp"
#include "pmon/syntax.hpp"

namespace pmon {

const Trace& Protocol::trace(const std::string& strand) const {
  auto it = traces.find(strand);
  if (it == traces.end()) throw Error("unknown strand " + strand);
  return it->second;
}

bool Protocol::has_strand(const std::string& strand) const {
  return std::find(strands.begin(), strands.end(), strand) != strands.end();
}

bool Protocol::is_positive_strand(const std::string& strand) const {
  return trace(strand).is_positive();
}

bool ProtocolExecution::is_intruder(const std::string& participant) const {
  auto it = role_map.find(participant);
  return it != role_map.end() && it->second == kIntruder;
}

std::vector<std::string> ProtocolExecution::honest() const {
  std::vector<std::string> out;
  for (const auto& p : participants)
    if (!is_intruder(p)) out.push_back(p);
  return out;
}

bool AttackDefinition::is_intruder(const std::string& participant) const {
  auto it = role_map.find(participant);
  return it != role_map.end() && it->second == kIntruder;
}

std::vector<std::string> AttackDefinition::honest() const {
  std::vector<std::string> out;
  for (const auto& p : participants)
    if (!is_intruder(p)) out.push_back(p);
  return out;
}

ProtocolExecution AttackDefinition::attack() const {
  return {name, protocol, participants, attack_traces, role_map};
}

ProtocolExecution AttackDefinition::normal() const {
  ProtocolExecution e{name, protocol, honest(), normal_traces, {}};
  for (const auto& p : e.participants) e.role_map[p] = role_map.at(p);
  return e;
}

namespace {

enum class Kind { Protocol, Monitor, Attack, Execution };

class Parser {
 public:
  Parser(std::string_view text, const DeductionSystem& sys) : lex_(text), sys_(sys) {}

  Document run() {
    lex_.skip_newlines();
    header();
    while (!lex_.at(TokenKind::End)) {
      statement();
      lex_.skip_newlines();
    }
    return finish();
  }

 private:
  Lexer lex_;
  const DeductionSystem& sys_;
  Kind kind_ = Kind::Protocol;
  std::string name_, for_;

  Protocol protocol_;
  bool roles_declared_ = false;
  MonitorSpec monitor_;
  std::vector<std::string> participants_;
  std::map<std::string, std::string> role_map_;
  std::map<std::string, Trace> attack_, normal_;
  enum class Section { None, Attack, Normal } section_ = Section::None;
  std::size_t step_ = 0;

  void header() {
    static const std::map<std::string, Kind> kinds = {{"protocol", Kind::Protocol},
                                                      {"monitor", Kind::Monitor},
                                                      {"attack", Kind::Attack},
                                                      {"execution", Kind::Execution}};
    if (!lex_.at(TokenKind::Ident) || lex_.peek(1).kind != TokenKind::Ident) return;
    auto it = kinds.find(lex_.peek().text);
    if (it == kinds.end()) return;
    lex_.next();
    kind_ = it->second;
    name_ = lex_.expect(TokenKind::Ident, "a name").text;
    if (lex_.accept_keyword("for")) for_ = lex_.expect(TokenKind::Ident, "a protocol name").text;
    end_statement();
  }

  void end_statement() {
    if (lex_.at(TokenKind::End)) return;
    lex_.expect(TokenKind::Newline, "end of line");
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) { lex_.fail(t, msg); }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out;
    do {
      out.push_back(lex_.expect(TokenKind::Ident, "a name").text);
    } while (lex_.accept(TokenKind::Comma));
    return out;
  }

  Term message() { return parse_term(lex_, TermMode::Message, sys_); }

  bool parties() const { return kind_ == Kind::Attack || kind_ == Kind::Execution; }

  /// Trace a statement writes to, checked against declared names.
  Trace& target(const Token& who) {
    const std::string& x = who.text;
    if (kind_ == Kind::Protocol) {
      if (!protocol_.has_strand(x)) fail(who, "undeclared role '" + x + "'");
      return protocol_.traces[x];
    }
    if (kind_ == Kind::Monitor) fail(who, "monitor files only contain 'share' lines");
    if (std::find(participants_.begin(), participants_.end(), x) == participants_.end())
      fail(who, "undeclared participant '" + x + "'");
    if (kind_ == Kind::Execution) return attack_[x];
    if (section_ == Section::None) fail(who, "expected 'attack:' or 'normal:' first");
    if (section_ == Section::Normal) {
      auto r = role_map_.find(x);
      if (r != role_map_.end() && r->second == kIntruder)
        fail(who, "the intruder '" + x + "' has no normal trace");
      return normal_[x];
    }
    return attack_[x];
  }

  /// NAME or NAME(ALIAS); the alias is routing metadata only.
  Token endpoint() {
    Token t = lex_.expect(TokenKind::Ident, "a role or participant");
    if (lex_.accept(TokenKind::LParen)) {
      lex_.expect(TokenKind::Ident, "a name");
      lex_.expect(TokenKind::RParen, "')'");
    }
    return t;
  }

  void statement() {
    const Token& t = lex_.peek();
    if (t.kind == TokenKind::Number) return step();
    if (t.kind != TokenKind::Ident) fail(t, std::string("unexpected ") + token_name(t.kind));
    const std::string& w = t.text;
    const Token& after = lex_.peek(1);

    if (w == "roles" && after.kind == TokenKind::Ident) return roles();
    if (w == "participants" && after.kind == TokenKind::Ident) return participants();
    if (w == "fresh" && after.kind == TokenKind::Ident) return fresh();
    if (w == "trace" && after.kind == TokenKind::Ident) return trace_line();
    if (w == "share" && after.kind == TokenKind::Ident) return share();
    if ((w == "attack" || w == "normal") && after.kind == TokenKind::Colon) return section();
    if (after.kind == TokenKind::Ident && after.text == "knows") return knows();
    if (after.kind == TokenKind::Ident && after.text == "plays") return plays();
    return step();
  }

  void roles() {
    Token kw = lex_.next();
    if (kind_ != Kind::Protocol) fail(kw, "'roles' belongs in protocol files");
    if (roles_declared_) fail(kw, "roles declared twice");
    roles_declared_ = true;
    for (auto& r : ident_list()) {
      if (protocol_.has_strand(r)) fail(kw, "duplicate role '" + r + "'");
      protocol_.strands.push_back(r);
      protocol_.traces[r];
    }
    end_statement();
  }

  void participants() {
    Token kw = lex_.next();
    if (!parties()) fail(kw, "'participants' belongs in attack and execution files");
    if (!participants_.empty()) fail(kw, "participants declared twice");
    for (auto& p : ident_list()) {
      if (std::find(participants_.begin(), participants_.end(), p) != participants_.end())
        fail(kw, "duplicate participant '" + p + "'");
      participants_.push_back(p);
      attack_[p];
    }
    end_statement();
  }

  void plays() {
    Token who = lex_.next();
    lex_.next();
    if (!parties()) fail(who, "'plays' belongs in attack and execution files");
    if (std::find(participants_.begin(), participants_.end(), who.text) == participants_.end())
      fail(who, "undeclared participant '" + who.text + "'");
    Token role = lex_.expect(TokenKind::Ident, "a role or 'intruder'");
    if (!role_map_.emplace(who.text, role.text).second)
      fail(who, "role of '" + who.text + "' given twice");
    end_statement();
  }

  void knows() {
    Token who = lex_.next();
    lex_.next();
    Trace& tr = target(who);
    do {
      tr.push_received(message());
    } while (lex_.accept(TokenKind::Comma));
    end_statement();
  }

  void fresh() {
    lex_.next();
    Token who = lex_.expect(TokenKind::Ident, "a role or participant");
    lex_.expect(TokenKind::Colon, "':'");
    Trace& tr = target(who);
    do {
      Token n = lex_.expect(TokenKind::Nonce, "a nonce such as ~n");
      tr.push_received(Term::nonce(n.text));
    } while (lex_.accept(TokenKind::Comma));
    end_statement();
  }

  void trace_line() {
    lex_.next();
    Token who = lex_.expect(TokenKind::Ident, "a role or participant");
    lex_.expect(TokenKind::Colon, "':'");
    Trace& tr = target(who);
    do {
      Polarity p;
      if (lex_.accept(TokenKind::Bang)) {
        p = Polarity::Sent;
      } else {
        lex_.expect(TokenKind::Query, "'!' or '?'");
        p = Polarity::Received;
      }
      tr.push(p, message());
    } while (lex_.accept(TokenKind::Comma));
    end_statement();
  }

  void step() {
    if (lex_.at(TokenKind::Number)) {
      Token n = lex_.next();
      lex_.expect(TokenKind::Dot, "'.' after the step number");
      if (std::stoul(n.text) != step_ + 1)
        fail(n, "expected step " + std::to_string(step_ + 1));
    }
    ++step_;
    Token from = endpoint();
    lex_.expect(TokenKind::Arrow, "'->'");
    Token to = endpoint();
    lex_.expect(TokenKind::Colon, "':'");
    Term m = message();
    target(from).push_sent(m);
    target(to).push_received(m);
    end_statement();
  }

  void share() {
    Token kw = lex_.next();
    if (kind_ != Kind::Monitor) fail(kw, "'share' belongs in monitor files");
    Token role = lex_.expect(TokenKind::Ident, "a role");
    if (!lex_.accept_keyword("after")) fail(lex_.peek(), "expected 'after'");
    Token n = lex_.expect(TokenKind::Number, "an input count");
    lex_.expect(TokenKind::Colon, "':'");
    monitor_.shares.push_back({role.text, std::stoul(n.text), message()});
    end_statement();
  }

  void section() {
    Token kw = lex_.next();
    lex_.next();
    if (kind_ != Kind::Attack) fail(kw, "sections belong in attack files");
    Section s = kw.text == "attack" ? Section::Attack : Section::Normal;
    if (s == section_) fail(kw, "section '" + kw.text + "' repeated");
    section_ = s;
    step_ = 0;
    if (s == Section::Normal)
      for (const auto& p : participants_) {
        auto r = role_map_.find(p);
        if (r == role_map_.end() || r->second != kIntruder) normal_[p];
      }
  }

  void check_roles() {
    for (const auto& p : participants_)
      if (!role_map_.count(p))
        throw SyntaxError(lex_.peek().line, 1, "participant '" + p + "' plays no role");
  }

  Document finish() {
    switch (kind_) {
      case Kind::Protocol:
        protocol_.name = name_;
        return protocol_;
      case Kind::Monitor:
        monitor_.name = name_;
        monitor_.protocol = for_;
        return monitor_;
      case Kind::Execution:
        check_roles();
        return ProtocolExecution{name_, for_, participants_, attack_, role_map_};
      case Kind::Attack: {
        check_roles();
        AttackDefinition a{name_, for_, participants_, role_map_, attack_, normal_};
        for (const auto& p : a.honest()) a.normal_traces[p];
        return a;
      }
    }
    return protocol_;
  }
};

template <typename T>
T expect_kind(Document doc, const char* what) {
  if (auto* p = std::get_if<T>(&doc)) return std::move(*p);
  throw Error(std::string("expected ") + what + " file");
}

void join(std::ostringstream& out, const std::vector<std::string>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? ", " : "") << xs[i];
}

void print_traces(std::ostringstream& out, const std::vector<std::string>& order,
                  const std::map<std::string, Trace>& traces) {
  for (const auto& name : order) {
    auto it = traces.find(name);
    if (it == traces.end() || it->second.empty()) continue;
    out << "trace " << name << " : " << it->second.str() << "\n";
  }
}

void print_parties(std::ostringstream& out, const std::vector<std::string>& ps,
                   const std::map<std::string, std::string>& roles) {
  if (ps.empty()) return;
  out << "participants ";
  join(out, ps);
  out << "\n";
  for (const auto& p : ps) out << p << " plays " << roles.at(p) << "\n";
}

std::string header(const char* kind, const std::string& name, const std::string& proto) {
  std::string h = std::string(kind) + " " + name;
  if (!proto.empty()) h += " for " + proto;
  return h + "\n";
}

}  // namespace

Document parse_document(std::string_view text, const DeductionSystem& sys) {
  return Parser(text, sys).run();
}

Protocol parse_protocol(std::string_view text, const DeductionSystem& sys) {
  return expect_kind<Protocol>(parse_document(text, sys), "a protocol");
}

MonitorSpec parse_monitor(std::string_view text, const DeductionSystem& sys) {
  return expect_kind<MonitorSpec>(parse_document(text, sys), "a monitor");
}

AttackDefinition parse_attack(std::string_view text, const DeductionSystem& sys) {
  return expect_kind<AttackDefinition>(parse_document(text, sys), "an attack");
}

ProtocolExecution parse_execution(std::string_view text, const DeductionSystem& sys) {
  return expect_kind<ProtocolExecution>(parse_document(text, sys), "an execution");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_text(const Document& doc) {
  std::ostringstream out;
  if (auto* p = std::get_if<Protocol>(&doc)) {
    if (!p->name.empty()) out << "protocol " << p->name << "\n";
    if (!p->strands.empty()) {
      out << "roles ";
      join(out, p->strands);
      out << "\n";
    }
    print_traces(out, p->strands, p->traces);
  } else if (auto* m = std::get_if<MonitorSpec>(&doc)) {
    out << header("monitor", m->name, m->protocol);
    for (const auto& s : m->shares)
      out << "share " << s.role << " after " << s.after << " : " << s.term.str() << "\n";
  } else if (auto* e = std::get_if<ProtocolExecution>(&doc)) {
    out << header("execution", e->name, e->protocol);
    print_parties(out, e->participants, e->role_map);
    print_traces(out, e->participants, e->traces);
  } else if (auto* a = std::get_if<AttackDefinition>(&doc)) {
    out << header("attack", a->name, a->protocol);
    print_parties(out, a->participants, a->role_map);
    out << "attack:\n";
    print_traces(out, a->participants, a->attack_traces);
    out << "normal:\n";
    print_traces(out, a->participants, a->normal_traces);
  }
  return out.str();
}

std::vector<std::string> check_execution(const ProtocolExecution& e, const Protocol& p) {
  std::vector<std::string> problems;
  for (const auto& x : e.participants) {
    if (p.has_strand(x)) problems.push_back("participant '" + x + "' is also a strand name");
    auto r = e.role_map.find(x);
    if (r == e.role_map.end())
      problems.push_back("participant '" + x + "' plays no role");
    else if (r->second != kIntruder && !p.has_strand(r->second))
      problems.push_back("participant '" + x + "' plays unknown role '" + r->second + "'");
  }
  return problems;
}

namespace {

Trace leading_inputs(const Trace& t) {
  Trace out;
  for (const auto& m : t) {
    if (m.polarity != Polarity::Received) break;
    out.push(m.polarity, m.payload);
  }
  return out;
}

}  // namespace

std::vector<std::string> knowledge_warnings(const AttackDefinition& a) {
  std::vector<std::string> out;
  for (const auto& p : a.honest()) {
    auto at = a.attack_traces.find(p);
    auto nt = a.normal_traces.find(p);
    Trace ak = at == a.attack_traces.end() ? Trace{} : leading_inputs(at->second);
    Trace nk = nt == a.normal_traces.end() ? Trace{} : leading_inputs(nt->second);
    if (!(ak == nk))
      out.push_back("participant '" + p + "' starts the attack and normal runs with different knowledge");
  }
  return out;
}

}  // namespace pmon
