#pragma once

#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "logicad/error.hpp"
#include "logicad/fol/formula.hpp"
#include "logicad/fol/theory.hpp"

namespace logicad::fol {

// Recursive-descent parser for the specification language:
//
//   theory   = { formula ";" } ;
//   formula  = quant ;
//   quant    = ("forall"|"exists") VAR "." quant | iff ;
//   iff      = imp { "<->" imp } ;
//   imp      = or [ "->" imp ] ;
//   or       = and { "|" and } ;
//   and      = unary { "&" unary } ;
//   unary    = "~" unary | "(" formula ")" | atom ;
//   atom     = PRED "(" term {"," term} ")" | term ("="|"!=") term ;
//   term     = CONST | VAR | NUMERAL | "irrel" ;
//
// `#` starts a comment running to the end of the line.
class Parser {
 public:
  // `origin` shifts reported positions, for text embedded in a larger file.
  explicit Parser(std::string_view source, SourcePos origin = {}) : src_(source), origin_(origin) { advance(); }

  Theory parse_theory() {
    Theory theory;
    while (tok_.kind != Tok::End) {
      SourcePos start = tok_.pos;
      Formula f = parse_formula();
      expect(Tok::Semi, "';'");
      check_closed(f, start);
      theory.add(std::move(f));
    }
    return theory;
  }

  // A single closed formula with an optional trailing ';'.
  Formula parse_single() {
    SourcePos start = tok_.pos;
    Formula f = parse_formula();
    if (tok_.kind == Tok::Semi) advance();
    if (tok_.kind != Tok::End) fail({"end of input"});
    check_closed(f, start);
    return f;
  }

 private:
  enum class Tok { End, LowerId, UpperId, Number, Irrel, Forall, Exists, Dot, LParen, RParen, Comma, Semi, Not, And, Or, Imp, Iff, Eq, Neq };

  struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourcePos pos;
  };

  static const char* describe(Tok k) {
    switch (k) {
      case Tok::End: return "end of input";
      case Tok::LowerId: return "identifier";
      case Tok::UpperId: return "variable";
      case Tok::Number: return "numeral";
      case Tok::Irrel: return "'irrel'";
      case Tok::Forall: return "'forall'";
      case Tok::Exists: return "'exists'";
      case Tok::Dot: return "'.'";
      case Tok::LParen: return "'('";
      case Tok::RParen: return "')'";
      case Tok::Comma: return "','";
      case Tok::Semi: return "';'";
      case Tok::Not: return "'~'";
      case Tok::And: return "'&'";
      case Tok::Or: return "'|'";
      case Tok::Imp: return "'->'";
      case Tok::Iff: return "'<->'";
      case Tok::Eq: return "'='";
      case Tok::Neq: return "'!='";
    }
    return "?";
  }

  SourcePos here() const {
    SourcePos p{line_ + origin_.line - 1, col_};
    if (line_ == 1) p.column = col_ + origin_.column - 1;
    return p;
  }

  char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance() {
    for (;;) {
      while (pos_ < src_.size() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n')) bump();
      if (peek() == '#') {
        while (pos_ < src_.size() && peek() != '\n') bump();
        continue;
      }
      break;
    }
    tok_ = Token{};
    tok_.pos = here();
    if (pos_ >= src_.size()) return;

    const char c = peek();
    auto single = [&](Tok k, std::size_t len) {
      tok_.kind = k;
      tok_.text = std::string(src_.substr(pos_, len));
      for (std::size_t i = 0; i < len; ++i) bump();
    };
    if (detail::is_lower(c) || detail::is_upper(c)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (detail::is_lower(peek()) || detail::is_upper(peek()) || detail::is_digit(peek()) || peek() == '_'))
        bump();
      tok_.text = std::string(src_.substr(start, pos_ - start));
      if (detail::is_upper(c)) {
        tok_.kind = Tok::UpperId;
      } else if (tok_.text == "forall") {
        tok_.kind = Tok::Forall;
      } else if (tok_.text == "exists") {
        tok_.kind = Tok::Exists;
      } else if (tok_.text == "irrel") {
        tok_.kind = Tok::Irrel;
      } else {
        if (!is_lower_identifier(tok_.text)) throw SyntaxError(tok_.pos, "invalid identifier '" + tok_.text + "'");
        tok_.kind = Tok::LowerId;
      }
      return;
    }
    if (detail::is_digit(c)) {
      std::size_t start = pos_;
      while (detail::is_digit(peek())) bump();
      tok_.kind = Tok::Number;
      tok_.text = std::string(src_.substr(start, pos_ - start));
      if (detail::is_lower(peek()) || detail::is_upper(peek()) || peek() == '_')
        throw SyntaxError(tok_.pos, "identifiers must not start with a digit");
      return;
    }
    switch (c) {
      case '.': return single(Tok::Dot, 1);
      case '(': return single(Tok::LParen, 1);
      case ')': return single(Tok::RParen, 1);
      case ',': return single(Tok::Comma, 1);
      case ';': return single(Tok::Semi, 1);
      case '~': return single(Tok::Not, 1);
      case '&': return single(Tok::And, 1);
      case '|': return single(Tok::Or, 1);
      case '=': return single(Tok::Eq, 1);
      case '-':
        if (peek(1) == '>') return single(Tok::Imp, 2);
        break;
      case '<':
        if (peek(1) == '-' && peek(2) == '>') return single(Tok::Iff, 3);
        break;
      case '!':
        if (peek(1) == '=') return single(Tok::Neq, 2);
        break;
      default: break;
    }
    throw SyntaxError(tok_.pos, std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] void fail(std::set<std::string> expected) const {
    std::string got = tok_.kind == Tok::End ? "end of input" : "'" + tok_.text + "'";
    throw SyntaxError(tok_.pos, "unexpected " + got, std::move(expected));
  }

  void expect(Tok k, const char* name) {
    if (tok_.kind != k) fail({name});
    advance();
  }

  Formula parse_formula() { return parse_quant(); }

  Formula parse_quant() {
    if (tok_.kind == Tok::Forall || tok_.kind == Tok::Exists) {
      const bool universal = tok_.kind == Tok::Forall;
      advance();
      if (tok_.kind != Tok::UpperId) fail({"variable"});
      std::string var = tok_.text;
      advance();
      expect(Tok::Dot, "'.'");
      Formula body = parse_quant();
      return universal ? Formula::forall(std::move(var), std::move(body))
                       : Formula::exists(std::move(var), std::move(body));
    }
    return parse_iff();
  }

  Formula parse_iff() {
    Formula lhs = parse_imp();
    while (tok_.kind == Tok::Iff) {
      advance();
      lhs = Formula::equivalence(std::move(lhs), parse_imp());
    }
    return lhs;
  }

  Formula parse_imp() {
    Formula lhs = parse_or();
    if (tok_.kind == Tok::Imp) {
      advance();
      return Formula::implication(std::move(lhs), parse_imp());
    }
    return lhs;
  }

  Formula parse_or() {
    std::vector<Formula> ops{parse_and()};
    while (tok_.kind == Tok::Or) {
      advance();
      ops.push_back(parse_and());
    }
    return Formula::disjunction(std::move(ops));
  }

  Formula parse_and() {
    std::vector<Formula> ops{parse_unary()};
    while (tok_.kind == Tok::And) {
      advance();
      ops.push_back(parse_unary());
    }
    return Formula::conjunction(std::move(ops));
  }

  Formula parse_unary() {
    if (tok_.kind == Tok::Not) {
      advance();
      return Formula::negation(parse_unary());
    }
    if (tok_.kind == Tok::LParen) {
      advance();
      Formula f = parse_formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    return parse_atom();
  }

  Formula parse_atom() {
    if (tok_.kind == Tok::LowerId) {
      Token name = tok_;
      advance();
      if (tok_.kind == Tok::LParen) {
        advance();
        std::vector<Term> args{parse_term()};
        while (tok_.kind == Tok::Comma) {
          advance();
          args.push_back(parse_term());
        }
        if (tok_.kind != Tok::RParen) fail({"','", "')'"});
        advance();
        return Formula::atom(name.text, std::move(args));
      }
      return parse_equality(Term::constant(name.text));
    }
    if (tok_.kind == Tok::UpperId || tok_.kind == Tok::Number || tok_.kind == Tok::Irrel) {
      return parse_equality(parse_term());
    }
    fail({"'~'", "'('", "'forall'", "'exists'", "identifier", "variable", "numeral", "'irrel'"});
  }

  Formula parse_equality(Term lhs) {
    if (tok_.kind != Tok::Eq && tok_.kind != Tok::Neq) fail({"'('", "'='", "'!='"});
    const bool negated = tok_.kind == Tok::Neq;
    advance();
    Term rhs = parse_term();
    return negated ? Formula::neq(std::move(lhs), std::move(rhs)) : Formula::eq(std::move(lhs), std::move(rhs));
  }

  Term parse_term() {
    Token t = tok_;
    switch (t.kind) {
      case Tok::LowerId: advance(); return Term::constant(t.text);
      case Tok::UpperId: advance(); return Term::variable(t.text);
      case Tok::Irrel: advance(); return Term::irrel();
      case Tok::Number: {
        advance();
        if (t.text.size() > 18) throw SyntaxError(t.pos, "numeral out of range: " + t.text);
        return Term::numeral(std::stoull(t.text));
      }
      default: fail({"identifier", "variable", "numeral", "'irrel'"});
    }
  }

  static void check_closed(const Formula& f, SourcePos start) {
    auto free = free_variables(f);
    if (!free.empty()) throw UnboundVariable(start, *free.begin());
  }

  std::string_view src_;
  SourcePos origin_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token tok_;
};

inline Theory parse_theory(std::string_view source, SourcePos origin = {}) { return Parser(source, origin).parse_theory(); }

inline Formula parse_formula(std::string_view source) { return Parser(source).parse_single(); }

// A theory whose members must all be ground atoms.
inline FactSet parse_facts(std::string_view source, SourcePos origin = {}) {
  Theory t = parse_theory(source, origin);
  FactSet facts;
  for (const auto& f : t) {
    if (!is_ground_atom(f)) throw SpecError("facts must be ground atoms, got: " + print_formula(f));
    facts.add(f);
  }
  return facts;
}

}  // namespace logicad::fol
