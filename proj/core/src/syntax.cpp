#include "mrsc/syntax.hpp"

#include <cctype>
#include <map>
#include <vector>

#include "mrsc/error.hpp"

namespace mrsc {
namespace {

enum class Tok { Ident, LParen, RParen, Comma, Equals, Semicolon, Colon, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_upper_ident(const std::string& s) { return std::isupper(static_cast<unsigned char>(s[0])) != 0; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line;
    const std::size_t cl = col;
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), l, cl});
      advance(j - i);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      case '=': kind = Tok::Equals; break;
      case ';': kind = Tok::Semicolon; break;
      case ':': kind = Tok::Colon; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({kind, std::string(1, c), l, cl});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Equals: return "'='";
    case Tok::Semicolon: return "';'";
    case Tok::Colon: return "':'";
    case Tok::End: return "end of input";
  }
  return "?";
}

// One definition head as written, before clauses are grouped by name.
struct RawDef {
  std::string name;
  std::optional<Pattern> pattern;
  std::vector<std::string> params;
  Expr body;
  std::size_t line;
  std::size_t column;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  SourceFile parse_file() {
    std::vector<RawDef> raw;
    std::optional<Expr> root;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Ident && peek().text == "expression" && peek(1).kind == Tok::Colon) {
        pos_ += 2;
        root = parse_expr();
        accept(Tok::Semicolon);
        if (peek().kind != Tok::End) fail("expected end of input after the expression directive");
        break;
      }
      raw.push_back(parse_def());
    }
    SourceFile file;
    file.program = group(std::move(raw));
    validate(file.program);
    if (root) validate_expression(file.program, *root);
    file.root = std::move(root);
    return file;
  }

  Expr parse_single_expression() {
    Expr e = parse_expr();
    if (peek().kind != Tok::End) fail("unexpected trailing input");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + describe(kind) + ", found " +
           (peek().kind == Tok::Ident ? "'" + peek().text + "'" : describe(peek().kind)));
    }
    return toks_[pos_++];
  }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  std::string expect_lower(const char* what) {
    const Token& t = expect(Tok::Ident);
    if (is_upper_ident(t.text)) {
      throw ParseError(std::string("expected ") + what + ", found constructor '" + t.text + "'", t.line, t.column);
    }
    return t.text;
  }

  Expr parse_expr() {
    const Token& t = expect(Tok::Ident);
    if (is_upper_ident(t.text)) {
      std::vector<Expr> args;
      if (peek().kind == Tok::LParen) args = parse_args();
      return make_ctr(t.text, std::move(args));
    }
    if (peek().kind == Tok::LParen) return make_call(t.text, parse_args());
    return make_var(t.text);
  }

  std::vector<Expr> parse_args() {
    expect(Tok::LParen);
    std::vector<Expr> args;
    if (accept(Tok::RParen)) return args;
    for (;;) {
      args.push_back(parse_expr());
      if (accept(Tok::RParen)) return args;
      expect(Tok::Comma);
    }
  }

  RawDef parse_def() {
    RawDef d;
    d.line = peek().line;
    d.column = peek().column;
    d.name = expect_lower("function name");
    expect(Tok::LParen);
    if (!accept(Tok::RParen)) {
      if (peek().kind == Tok::Ident && is_upper_ident(peek().text)) {
        Pattern p;
        p.ctor = expect(Tok::Ident).text;
        if (accept(Tok::LParen) && !accept(Tok::RParen)) {
          for (;;) {
            p.vars.push_back(expect_lower("pattern variable"));
            if (accept(Tok::RParen)) break;
            expect(Tok::Comma);
          }
        }
        d.pattern = std::move(p);
      } else {
        d.params.push_back(expect_lower("parameter"));
      }
      for (;;) {
        if (accept(Tok::RParen)) break;
        expect(Tok::Comma);
        // Tolerate the empty trailing slot printed as `f(Nil(), )`.
        if (accept(Tok::RParen)) break;
        d.params.push_back(expect_lower("parameter"));
      }
    }
    expect(Tok::Equals);
    d.body = parse_expr();
    expect(Tok::Semicolon);
    return d;
  }

  static Program group(std::vector<RawDef> raw) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<RawDef>> by_name;
    for (auto& d : raw) {
      auto [it, inserted] = by_name.try_emplace(d.name);
      if (inserted) order.push_back(d.name);
      it->second.push_back(std::move(d));
    }
    Program program;
    for (const auto& name : order) {
      auto& defs = by_name[name];
      const bool matching = defs.front().pattern.has_value();
      for (const auto& d : defs) {
        if (d.pattern.has_value() != matching) {
          throw ParseError("function '" + name + "' mixes ordinary and pattern-matching definitions", d.line,
                           d.column);
        }
      }
      if (!matching) {
        if (defs.size() > 1) {
          throw ParseError("duplicate definition of function '" + name + "'", defs[1].line, defs[1].column);
        }
        program.add(make_ordinary(name, std::move(defs.front().params), std::move(defs.front().body)));
        continue;
      }
      std::vector<Clause> clauses;
      for (auto& d : defs) {
        for (const auto& c : clauses) {
          if (c.pattern.ctor == d.pattern->ctor) {
            throw ParseError("overlapping clauses of '" + name + "' for constructor '" + d.pattern->ctor + "'",
                             d.line, d.column);
          }
        }
        if (!clauses.empty() && clauses.front().params.size() != d.params.size()) {
          throw ParseError("clauses of '" + name + "' have inconsistent arity", d.line, d.column);
        }
        clauses.push_back(Clause{std::move(*d.pattern), std::move(d.params), std::move(d.body)});
      }
      program.add(make_matching(name, std::move(clauses)));
    }
    return program;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void print_expr(const Expr& e, std::string& out) {
  out += e->name;
  if (is_var(e)) return;
  if (is_ctr(e) && e->args.empty()) return;
  out += '(';
  for (std::size_t i = 0; i < e->args.size(); ++i) {
    if (i != 0) out += ", ";
    print_expr(e->args[i], out);
  }
  out += ')';
}

void print_head(const std::string& name, const Pattern* pattern, const std::vector<std::string>& params,
                std::string& out) {
  out += name;
  out += '(';
  bool first = true;
  if (pattern != nullptr) {
    out += to_string(*pattern);
    first = false;
  }
  for (const auto& p : params) {
    if (!first) out += ", ";
    first = false;
    out += p;
  }
  out += ')';
}

}  // namespace

SourceFile parse_source(std::string_view text) { return Parser(text).parse_file(); }

Program parse_program(std::string_view text) { return parse_source(text).program; }

Expr parse_expression(std::string_view text) { return Parser(text).parse_single_expression(); }

std::string to_string(const Expr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

std::string to_string(const Pattern& p) {
  std::string out = p.ctor;
  if (p.vars.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < p.vars.size(); ++i) {
    if (i != 0) out += ", ";
    out += p.vars[i];
  }
  return out + ')';
}

std::string to_string(const Program& p) {
  std::string out;
  for (const auto& d : p.defs()) {
    if (d.kind == DefKind::Ordinary) {
      print_head(d.name, nullptr, d.params, out);
      out += " = ";
      print_expr(d.body, out);
      out += ";\n";
      continue;
    }
    for (const auto& c : d.clauses) {
      print_head(d.name, &c.pattern, c.params, out);
      out += " = ";
      print_expr(c.body, out);
      out += ";\n";
    }
  }
  return out;
}

std::string to_string(const Program& p, const Expr& root) {
  return to_string(p) + "expression: " + to_string(root) + "\n";
}

}  // namespace mrsc
