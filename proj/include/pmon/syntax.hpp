#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pmon/term.hpp"

namespace pmon {

class DeductionSystem;
struct Symbol;

enum class TokenKind {
  Ident,
  Nonce,   // ~name
  Number,
  LParen,
  RParen,
  Comma,
  Colon,
  Arrow,   // ->
  Bang,    // !
  Query,   // ?
  Slash,
  Dot,
  Newline,
  End,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

const char* token_name(TokenKind kind);

/// Line-oriented tokenizer shared by the theory, narration and context
/// parsers. `#` starts a comment. Newlines are dropped inside parentheses and
/// after a comma, colon or arrow so long statements can wrap.
class Lexer {
 public:
  explicit Lexer(std::string_view text);

  const Token& peek() const { return tokens_[pos_]; }
  const Token& peek(std::size_t ahead) const;
  Token next();
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool accept(TokenKind kind);
  Token expect(TokenKind kind, std::string_view what);
  /// Consumes `Ident` with the given text.
  bool accept_keyword(std::string_view word);
  void skip_newlines();
  [[noreturn]] void fail(const Token& at, const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// How bare identifiers are read.
enum class TermMode {
  Message,  // free constants; vN is reserved
  Pattern,  // rule variables
  Context,  // vN positions only; no constants of any kind
};

/// Parses one term. Identifiers naming a declared symbol are applications
/// (arity checked against `symbols`); others are interpreted per `mode`.
Term parse_term(Lexer& lex, TermMode mode, const std::vector<Symbol>& symbols);
Term parse_term(Lexer& lex, TermMode mode, const DeductionSystem& sys);

Term parse_message(std::string_view text, const DeductionSystem& sys);

/// `vN` for positive N.
bool is_position_name(std::string_view ident, std::size_t* index = nullptr);

}  // namespace pmon
