#pragma once

// Concrete syntax for rewrite systems and matrix interpretations.
//
// TRS files use the classic TPDB layout:
//
//   (VAR x y)
//   (RULES
//     add @ x @ 0 -> x
//     f#1(x) -> g @ x
//   )
//
// `@` is left-associative infix application and denotes the binary symbol
// `app`. Juxtaposition is not application. Identifiers outside VAR are
// function symbols whose arity must be consistent across occurrences.
//
// Matrix interpretations list one block per symbol:
//
//   add#2/2 : [ [1 1; 0 1], [1 1; 0 1] ] + [0; 1]
//   0/0 : [] + [0; 1]

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "atrs/matrix.hpp"
#include "atrs/trs.hpp"

namespace atrs {

struct InputProblem {
  Trs trs;
  std::vector<std::string> declared_vars;
  std::optional<std::string> app_hint;  ///< "app" when `@` occurs
  std::optional<std::string> strategy;  ///< contents of a STRATEGY section
  std::string origin;
  std::vector<std::string> warnings;
};

namespace detail {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  struct Token {
    enum Kind { LParen, RParen, Comma, At, Arrow, Ident, End } kind;
    std::string text;
    std::size_t line;
    std::size_t column;
  };

  const Token& peek() {
    if (!ahead_) ahead_ = lex();
    return *ahead_;
  }

  Token next() {
    Token t = peek();
    ahead_.reset();
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw Error(ErrorKind::SyntaxError, std::to_string(at.line) + ":" + std::to_string(at.column) +
                                            ": " + what);
  }

  /// Skips a parenthesised section whose opening parenthesis was consumed.
  std::string skip_section() {
    std::string content;
    int depth = 1;
    while (pos_ < text_.size()) {
      const char c = advance();
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) return content;
      content += c;
    }
    Token end{Token::End, "", line_, column_};
    fail(end, "unterminated section");
  }

 private:
  static bool is_ident_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
           c != '@' && c != '"';
  }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  Token lex() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    Token t{Token::End, "", line_, column_};
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (c == '(') { advance(); t.kind = Token::LParen; return t; }
    if (c == ')') { advance(); t.kind = Token::RParen; return t; }
    if (c == ',') { advance(); t.kind = Token::Comma; return t; }
    if (c == '@') { advance(); t.kind = Token::At; return t; }
    if (text_.substr(pos_, 2) == "->") {
      advance();
      advance();
      t.kind = Token::Arrow;
      return t;
    }
    if (c == '"') fail(t, "unexpected '\"'");
    t.kind = Token::Ident;
    while (pos_ < text_.size() && is_ident_char(text_[pos_]) && text_.substr(pos_, 2) != "->") {
      t.text += advance();
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::optional<Token> ahead_;
};

class TermParser {
 public:
  using Token = Lexer::Token;

  TermParser(Lexer& lexer, const std::set<std::string>& vars, std::map<std::string, std::size_t>& arities)
      : lex_(lexer), vars_(vars), arities_(arities) {}

  bool saw_app = false;

  Term term() {
    Term t = primary();
    while (lex_.peek().kind == Token::At) {
      lex_.next();
      Term rhs = primary();
      declare(Token{Token::At, default_app_name(), 0, 0}, default_app_name(), 2);
      saw_app = true;
      t = Term::function(default_app(), {std::move(t), std::move(rhs)});
    }
    return t;
  }

 private:
  Term primary() {
    Token tok = lex_.next();
    if (tok.kind == Token::LParen) {
      Term t = term();
      expect(Token::RParen, "')'");
      return t;
    }
    if (tok.kind != Token::Ident) lex_.fail(tok, "expected a term");
    if (lex_.peek().kind != Token::LParen) {
      if (vars_.count(tok.text)) return Term::variable(tok.text);
      declare(tok, tok.text, 0);
      return Term::constant(tok.text);
    }
    if (vars_.count(tok.text)) lex_.fail(tok, "variable " + tok.text + " applied to arguments");
    lex_.next();
    std::vector<Term> args;
    if (lex_.peek().kind != Token::RParen) {
      args.push_back(term());
      while (lex_.peek().kind == Token::Comma) {
        lex_.next();
        args.push_back(term());
      }
    }
    expect(Token::RParen, "')' or ','");
    const std::size_t arity = args.size();
    declare(tok, tok.text, arity);
    return Term::function(Symbol{tok.text, arity}, std::move(args));
  }

  void declare(const Token& at, const std::string& name, std::size_t arity) {
    auto [it, inserted] = arities_.try_emplace(name, arity);
    if (!inserted && it->second != arity) {
      throw Error(ErrorKind::ArityMismatch,
                  std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + name +
                      " used with arity " + std::to_string(arity) + " and " +
                      std::to_string(it->second));
    }
  }

  void expect(Token::Kind kind, const std::string& what) {
    Token t = lex_.next();
    if (t.kind != kind) lex_.fail(t, "expected " + what);
  }

  Lexer& lex_;
  const std::set<std::string>& vars_;
  std::map<std::string, std::size_t>& arities_;
};

}  // namespace detail

/// Parses a TRS in the classic TPDB format with `@` application.
inline InputProblem parse_trs(std::string_view text, std::string origin = "") {
  using Token = detail::Lexer::Token;
  detail::Lexer lex(text);
  InputProblem problem;
  problem.origin = std::move(origin);
  std::set<std::string> vars;
  std::map<std::string, std::size_t> arities;
  std::vector<Rule> rules;
  bool saw_app = false;
  bool saw_rules = false;

  while (lex.peek().kind != Token::End) {
    Token open = lex.next();
    if (open.kind != Token::LParen) lex.fail(open, "expected '('");
    Token keyword = lex.next();
    if (keyword.kind != Token::Ident) lex.fail(keyword, "expected a section name");
    if (keyword.text == "VAR") {
      while (lex.peek().kind == Token::Ident) {
        Token v = lex.next();
        if (arities.count(v.text)) lex.fail(v, v.text + " already used as a function symbol");
        if (vars.insert(v.text).second) problem.declared_vars.push_back(v.text);
      }
      Token close = lex.next();
      if (close.kind != Token::RParen) lex.fail(close, "expected ')' after VAR");
    } else if (keyword.text == "RULES") {
      saw_rules = true;
      detail::TermParser parser(lex, vars, arities);
      while (lex.peek().kind != Token::RParen) {
        if (lex.peek().kind == Token::End) lex.fail(lex.peek(), "unterminated RULES section");
        Term lhs = parser.term();
        Token arrow = lex.next();
        if (arrow.kind != Token::Arrow) lex.fail(arrow, "expected '->'");
        if (lex.peek().kind == Token::RParen || lex.peek().kind == Token::End) {
          lex.fail(lex.peek(), "missing right-hand side");
        }
        Term rhs = parser.term();
        try {
          rules.emplace_back(std::move(lhs), std::move(rhs));
        } catch (const Error& e) {
          lex.fail(arrow, e.what());
        }
      }
      lex.next();
      saw_app = saw_app || parser.saw_app;
    } else if (keyword.text == "STRATEGY") {
      std::string s = lex.skip_section();
      const auto b = s.find_first_not_of(" \t\r\n");
      const auto e = s.find_last_not_of(" \t\r\n");
      problem.strategy = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    } else {
      lex.skip_section();
    }
  }
  if (!saw_rules) {
    throw Error(ErrorKind::SyntaxError, "no RULES section");
  }

  problem.trs = Trs(std::move(rules));
  if (saw_app) problem.app_hint = default_app_name();

  // Constants that never occur on a left-hand side may be misspelt variables.
  std::set<std::string> on_lhs;
  for (const Rule& r : problem.trs.rules()) {
    for (const Symbol& f : symbols_of(r.lhs())) on_lhs.insert(f.name);
  }
  std::set<std::string> warned;
  for (const Rule& r : problem.trs.rules()) {
    for (const Symbol& f : symbols_of(r.rhs())) {
      if (f.arity == 0 && !on_lhs.count(f.name) && warned.insert(f.name).second) {
        problem.warnings.push_back("undeclared identifier " + f.name +
                                   " occurs only in right-hand sides; treated as a constant");
      }
    }
  }
  return problem;
}

/// Parses a single term. Identifiers in `vars` are variables; symbols
/// known from `signature` must keep their arity.
inline Term parse_term(std::string_view text, const std::vector<std::string>& vars = {},
                       const std::vector<Symbol>& signature = {}) {
  detail::Lexer lex(text);
  std::set<std::string> var_set(vars.begin(), vars.end());
  std::map<std::string, std::size_t> arities;
  for (const Symbol& f : signature) arities.emplace(f.name, f.arity);
  detail::TermParser parser(lex, var_set, arities);
  Term t = parser.term();
  if (lex.peek().kind != detail::Lexer::Token::End) lex.fail(lex.peek(), "trailing input after term");
  return t;
}

/// Variables of all rules in first-occurrence order.
inline std::vector<std::string> rule_variables(const std::vector<Rule>& rules) {
  std::vector<std::string> out;
  for (const Rule& r : rules) {
    for (const Term* side : {&r.lhs(), &r.rhs()}) {
      for (auto& v : variables(*side)) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
    }
  }
  return out;
}

/// Prints `trs` in the format accepted by parse_trs; `app` is shown as `@`.
inline std::string print_trs(const Trs& trs, const Symbol& app = default_app()) {
  std::string out = "(VAR";
  for (const auto& v : rule_variables(trs.rules())) out += " " + v;
  out += ")\n(RULES\n";
  for (const Rule& r : trs.rules()) out += "  " + to_string(r, app) + "\n";
  out += ")\n";
  return out;
}

namespace detail {

class TmiReader {
 public:
  explicit TmiReader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  std::string symbol_name() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '/' && text_[pos_] != '\n') ++pos_;
    if (pos_ >= text_.size() || text_[pos_] != '/') fail("expected 'name/arity'");
    std::string name(text_.substr(start, pos_ - start));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    if (name.empty()) fail("empty symbol name");
    ++pos_;
    return name == "@" ? default_app_name() : name;
  }

  Natural number() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a natural number");
    try {
      return std::stoull(std::string(text_.substr(start, pos_ - start)));
    } catch (const std::out_of_range&) {
      fail("number out of range");
    }
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  /// `[a b; c d]` as rows.
  std::vector<std::vector<Natural>> rows() {
    expect('[');
    std::vector<std::vector<Natural>> out(1);
    while (!accept(']')) {
      if (accept(';')) {
        out.emplace_back();
        continue;
      }
      out.back().push_back(number());
    }
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::SyntaxError, std::to_string(line) + ":" + std::to_string(column) + ": " + what);
  }

 private:
  void skip_space() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (text_.substr(pos_, 2) == "//" || (pos_ < text_.size() && text_[pos_] == '%')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the TMI format. The dimension is taken from the first constant
/// vector and must be uniform. Every symbol of `signature` must be
/// interpreted with its arity.
inline MatrixInterp parse_tmi(std::string_view text, const std::vector<Symbol>& signature = {}) {
  detail::TmiReader in(text);
  struct Block {
    Symbol symbol;
    std::vector<std::vector<std::vector<Natural>>> matrices;
    std::vector<std::vector<Natural>> vector;
  };
  std::vector<Block> blocks;
  while (!in.at_end()) {
    Block b;
    b.symbol.name = in.symbol_name();
    b.symbol.arity = static_cast<std::size_t>(in.number());
    in.expect(':');
    in.expect('[');
    while (!in.accept(']')) {
      if (!b.matrices.empty()) in.expect(',');
      b.matrices.push_back(in.rows());
    }
    in.expect('+');
    b.vector = in.rows();
    blocks.push_back(std::move(b));
  }
  if (blocks.empty()) throw Error(ErrorKind::SyntaxError, "no interpretations");

  const std::size_t dim = blocks.front().vector.size();
  if (dim == 0) throw Error(ErrorKind::DimensionMismatch, "empty constant vector");
  MatrixInterp m(dim);
  for (const Block& b : blocks) {
    const std::string who = to_string(b.symbol);
    if (b.matrices.size() != b.symbol.arity) {
      throw Error(ErrorKind::ArityMismatch, who + " has " + std::to_string(b.matrices.size()) + " matrices");
    }
    SymbolInterp interp;
    if (b.vector.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, who + ": constant vector has length " +
                                                    std::to_string(b.vector.size()) + ", expected " +
                                                    std::to_string(dim));
    }
    for (const auto& row : b.vector) {
      if (row.size() != 1) throw Error(ErrorKind::DimensionMismatch, who + ": constant must be a column vector");
      interp.constant.push_back(row[0]);
    }
    for (const auto& rows : b.matrices) {
      if (rows.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, who + ": matrix has " + std::to_string(rows.size()) +
                                                      " rows, expected " + std::to_string(dim));
      }
      std::vector<Natural> entries;
      for (const auto& row : rows) {
        if (row.size() != dim) {
          throw Error(ErrorKind::DimensionMismatch, who + ": matrix row has " + std::to_string(row.size()) +
                                                        " entries, expected " + std::to_string(dim));
        }
        entries.insert(entries.end(), row.begin(), row.end());
      }
      interp.coefficients.emplace_back(dim, std::move(entries));
    }
    m.set(b.symbol, std::move(interp));
  }
  for (const Symbol& f : signature) {
    if (!m.find(f)) {
      for (const auto& [g, interp] : m.entries()) {
        if (g.name == f.name) {
          throw Error(ErrorKind::ArityMismatch, to_string(f) + " interpreted as " + to_string(g));
        }
      }
      throw Error(ErrorKind::MissingSymbol, "no interpretation for " + to_string(f));
    }
  }
  return m;
}

inline std::string print_matrix(const Matrix& a) {
  std::string out = "[";
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (i) out += "; ";
    for (std::size_t j = 0; j < a.dim(); ++j) {
      if (j) out += ' ';
      out += std::to_string(a(i, j));
    }
  }
  return out + "]";
}

inline std::string print_vector(const Vector& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += "; ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

inline std::string print_tmi(const MatrixInterp& m) {
  std::string out;
  for (const auto& [f, interp] : m.entries()) {
    out += (f.name == default_app_name() && f.arity == 2 ? std::string("@") : f.name) + "/" +
           std::to_string(f.arity) + " : [";
    for (std::size_t i = 0; i < interp.coefficients.size(); ++i) {
      out += i ? ", " : " ";
      out += print_matrix(interp.coefficients[i]);
    }
    out += interp.coefficients.empty() ? "]" : " ]";
    out += " + " + print_vector(interp.constant) + "\n";
  }
  return out;
}

}  // namespace atrs
