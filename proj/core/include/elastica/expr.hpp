#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elastica/jet.hpp"

namespace elastica {

// Grammar (whitespace ignored):
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := ("-" | "+") unary | power
//   power   := primary [ "^" exponent ]
//   exponent:= ["-" | "+"] power            must fold to an integer constant
//   primary := number | name | func "(" expr ")" | "(" expr ")"
//   func    := sin | cos | sinh | cosh | tanh | exp | log | sqrt
//   number  := digits ["." digits] [("e"|"E") ["+"|"-"] digits]
// Names pi and e are constants; all other names must be declared variables.
class Expr {
 public:
  enum class Kind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Func };
  enum class Func { Sin, Cos, Sinh, Cosh, Tanh, Exp, Log, Sqrt };

  struct Node {
    Kind kind;
    double number = 0.0;
    int index = 0;  // variable slot or integer exponent
    Func func = Func::Sin;
    std::shared_ptr<const Node> a, b;
  };

  static Expr parse(std::string_view source, std::vector<std::string> variables);

  double evaluate(std::span<const double> values) const;
  Jet2 evaluate(std::span<const Jet2> seeds) const;

  // Canonical infix form; parse(to_string()) reproduces the tree.
  std::string to_string() const;
  // Structural form such as Add(Var u, Mul(Var v, Num 2)).
  std::string tree() const;

  const std::vector<std::string>& variables() const { return vars_; }
  const Node& root() const { return *root_; }

 private:
  Expr(std::shared_ptr<const Node> root, std::vector<std::string> vars)
      : root_(std::move(root)), vars_(std::move(vars)) {}
  std::shared_ptr<const Node> root_;
  std::vector<std::string> vars_;
};

std::string function_name(Expr::Func f);

}  // namespace elastica
