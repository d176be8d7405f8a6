#include "pmon/syntax.hpp"

#include <cctype>

#include "pmon/errors.hpp"
#include "pmon/theory.hpp"

namespace pmon {

const char* token_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Nonce: return "nonce";
    case TokenKind::Number: return "number";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Colon: return "':'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Bang: return "'!'";
    case TokenKind::Query: return "'?'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Newline: return "end of line";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

Lexer::Lexer(std::string_view text) {
  std::size_t line = 1, col = 1, i = 0;
  int depth = 0;
  auto push = [&](TokenKind kind, std::string s, std::size_t l, std::size_t c) {
    if (kind == TokenKind::Newline) {
      if (depth > 0 || tokens_.empty()) return;
      TokenKind last = tokens_.back().kind;
      if (last == TokenKind::Newline || last == TokenKind::Comma || last == TokenKind::Colon ||
          last == TokenKind::Arrow)
        return;
    }
    tokens_.push_back({kind, std::move(s), l, c});
  };
  while (i < text.size()) {
    char ch = text[i];
    std::size_t l = line, c = col;
    if (ch == '\n') {
      push(TokenKind::Newline, "\n", l, c);
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (ch == '#') {
      while (i < text.size() && text[i] != '\n') ++i, ++col;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++i, ++col;
      continue;
    }
    if (ident_start(ch) || (ch == '~' && i + 1 < text.size() && ident_start(text[i + 1]))) {
      bool nonce = ch == '~';
      std::size_t start = nonce ? i + 1 : i;
      std::size_t j = start;
      while (j < text.size() && ident_char(text[j])) ++j;
      push(nonce ? TokenKind::Nonce : TokenKind::Ident, std::string(text.substr(start, j - start)),
           l, c);
      col += j - i;
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::Number, std::string(text.substr(i, j - i)), l, c);
      col += j - i;
      i = j;
      continue;
    }
    if (ch == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(TokenKind::Arrow, "->", l, c);
      i += 2, col += 2;
      continue;
    }
    TokenKind kind;
    switch (ch) {
      case '(': kind = TokenKind::LParen; ++depth; break;
      case ')': kind = TokenKind::RParen; if (depth > 0) --depth; break;
      case ',': kind = TokenKind::Comma; break;
      case ':': kind = TokenKind::Colon; break;
      case '!': kind = TokenKind::Bang; break;
      case '?': kind = TokenKind::Query; break;
      case '/': kind = TokenKind::Slash; break;
      case '.': kind = TokenKind::Dot; break;
      default:
        throw SyntaxError(l, c, std::string("unexpected character '") + ch + "'");
    }
    push(kind, std::string(1, ch), l, c);
    ++i, ++col;
  }
  if (!tokens_.empty() && tokens_.back().kind != TokenKind::Newline)
    tokens_.push_back({TokenKind::Newline, "\n", line, col});
  tokens_.push_back({TokenKind::End, "", line, col});
}

const Token& Lexer::peek(std::size_t ahead) const {
  std::size_t p = pos_ + ahead;
  return p < tokens_.size() ? tokens_[p] : tokens_.back();
}

Token Lexer::next() {
  Token t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Lexer::accept(TokenKind kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

Token Lexer::expect(TokenKind kind, std::string_view what) {
  if (!at(kind)) {
    const Token& t = peek();
    std::string got = t.kind == TokenKind::Ident || t.kind == TokenKind::Number
                          ? "'" + t.text + "'"
                          : token_name(t.kind);
    fail(t, "expected " + std::string(what) + ", got " + got);
  }
  return next();
}

bool Lexer::accept_keyword(std::string_view word) {
  if (!at(TokenKind::Ident) || peek().text != word) return false;
  next();
  return true;
}

void Lexer::skip_newlines() {
  while (at(TokenKind::Newline)) next();
}

void Lexer::fail(const Token& at, const std::string& message) const {
  throw SyntaxError(at.line, at.column, message);
}

bool is_position_name(std::string_view ident, std::size_t* index) {
  if (ident.size() < 2 || ident[0] != 'v' || ident[1] == '0') return false;
  std::size_t n = 0;
  for (std::size_t i = 1; i < ident.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(ident[i]))) return false;
    n = n * 10 + static_cast<std::size_t>(ident[i] - '0');
  }
  if (index) *index = n;
  return true;
}

namespace {

const Symbol* lookup(const std::vector<Symbol>& symbols, const std::string& name) {
  for (const Symbol& s : symbols)
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace

Term parse_term(Lexer& lex, TermMode mode, const std::vector<Symbol>& symbols) {
  const Token& start = lex.peek();
  if (start.kind == TokenKind::Nonce) {
    if (mode == TermMode::Context)
      lex.fail(start, "contexts cannot contain nonce constants");
    if (mode == TermMode::Pattern) lex.fail(start, "rules cannot contain nonce constants");
    return Term::nonce(lex.next().text);
  }
  Token id = lex.expect(TokenKind::Ident, "a term");
  const Symbol* sym = lookup(symbols, id.text);
  std::vector<Term> args;
  bool call = lex.at(TokenKind::LParen);
  if (call) {
    lex.next();
    if (!lex.at(TokenKind::RParen)) {
      args.push_back(parse_term(lex, mode, symbols));
      while (lex.accept(TokenKind::Comma)) args.push_back(parse_term(lex, mode, symbols));
    }
    lex.expect(TokenKind::RParen, "',' or ')'");
  }
  if (sym) {
    if (args.size() != sym->arity)
      throw ArityError(std::to_string(id.line) + ":" + std::to_string(id.column) + ": " +
                       id.text + " expects " + std::to_string(sym->arity) + " argument(s), got " +
                       std::to_string(args.size()));
    if (mode == TermMode::Context && !sym->is_public)
      lex.fail(id, "private symbol " + id.text + " cannot appear in a context");
    return Term::app(id.text, std::move(args));
  }
  if (call)
    throw UnknownSymbol(std::to_string(id.line) + ":" + std::to_string(id.column) +
                        ": unknown function symbol " + id.text);
  std::size_t index = 0;
  bool position = is_position_name(id.text, &index);
  switch (mode) {
    case TermMode::Context:
      if (!position)
        throw UnknownSymbol(std::to_string(id.line) + ":" + std::to_string(id.column) + ": " +
                            id.text + " is neither a position nor a public constant");
      return Term::position(index);
    case TermMode::Message:
      if (position) lex.fail(id, id.text + " is reserved for context positions");
      return Term::free_const(id.text);
    case TermMode::Pattern:
      if (position) lex.fail(id, id.text + " is reserved for context positions");
      return Term::var(id.text);
  }
  return Term::free_const(id.text);
}

Term parse_term(Lexer& lex, TermMode mode, const DeductionSystem& sys) {
  return parse_term(lex, mode, sys.symbols());
}

Term parse_message(std::string_view text, const DeductionSystem& sys) {
  Lexer lex(text);
  Term t = parse_term(lex, TermMode::Message, sys);
  lex.skip_newlines();
  if (!lex.at(TokenKind::End)) lex.fail(lex.peek(), "trailing input after term");
  return t;
}

}  // namespace pmon
