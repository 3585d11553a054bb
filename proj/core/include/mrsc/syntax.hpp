#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mrsc/expr.hpp"

namespace mrsc {

/// A program file: definitions plus the optional `expression:` directive.
struct SourceFile {
  Program program;
  std::optional<Expr> root;
};

/// Parses and validates a program file. Throws ParseError or ProgramError.
///
/// Grammar (whitespace insignificant, `--` starts a line comment):
///
///   file   ::= { def } [ "expression" ":" expr [";"] ]
///   def    ::= name "(" [ first { "," var } ] ")" "=" expr ";"
///   first  ::= Ctor [ "(" [ var { "," var } ] ")" ] | var
///   expr   ::= var | name "(" [ expr { "," expr } ] ")"
///            | Ctor [ "(" [ expr { "," expr } ] ")" ]
SourceFile parse_source(std::string_view text);
Program parse_program(std::string_view text);
Expr parse_expression(std::string_view text);

/// Expressions print with nullary constructors bare (`Nil`, not `Nil()`).
std::string to_string(const Expr& e);
std::string to_string(const Pattern& p);

/// One line per definition clause, `name(args) = body;`.
std::string to_string(const Program& p);

/// Program text followed by `expression: <root>`.
std::string to_string(const Program& p, const Expr& root);

}  // namespace mrsc
