#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mrsc/residualizer.hpp"
#include "mrsc/syntax.hpp"

namespace mrsc::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Example {
  Program program;
  Expr root;
};

inline Example corpus(const std::string& name) {
  SourceFile src = parse_source(read_file(std::string(MRSC_CORPUS_DIR) + "/" + name + ".sll"));
  return Example{std::move(src.program), *src.root};
}

inline ResidualProgram golden(const std::string& name) {
  SourceFile src = parse_source(read_file(std::string(MRSC_GOLDEN_DIR) + "/" + name + ".txt"));
  return ResidualProgram{std::move(src.program), *src.root};
}

inline const char* kAppend =
    "append(Nil, ys) = ys;\n"
    "append(Cons(x, xs), ys) = Cons(x, append(xs, ys));\n";

inline const char* kExpGrowth =
    "g(Nil, y) = y;\n"
    "g(Cons(x, xs), y) = f(g(xs, y));\n"
    "f(w) = B(w, w);\n";

inline Expr ex(const std::string& text) { return parse_expression(text); }

inline Renaming rename(const std::string& from, const std::string& to) {
  return Renaming(std::vector<std::pair<std::string, std::string>>{{from, to}});
}

}  // namespace mrsc::testing
