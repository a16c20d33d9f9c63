#include "elastica/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Kind;

constexpr int kConstPi = 1;
constexpr int kConstE = 2;

struct FuncName {
  const char* name;
  Expr::Func func;
};
constexpr FuncName kFuncs[] = {
    {"sin", Expr::Func::Sin},   {"cos", Expr::Func::Cos},   {"sinh", Expr::Func::Sinh},
    {"cosh", Expr::Func::Cosh}, {"tanh", Expr::Func::Tanh}, {"exp", Expr::Func::Exp},
    {"log", Expr::Func::Log},   {"sqrt", Expr::Func::Sqrt},
};

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_number(double v, int constant = 0) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = Kind::Number;
  n->number = v;
  n->index = constant;
  return n;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr run() {
    skip();
    if (pos_ >= src_.size()) throw SyntaxError("empty expression", pos_);
    NodePtr e = expr();
    skip();
    if (pos_ < src_.size())
      throw SyntaxError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      skip();
      if (pos_ >= src_.size())
        throw SyntaxError(std::string("expected '") + c + "' before end of input", pos_);
      throw SyntaxError(std::string("expected '") + c + "', found '" + src_[pos_] + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make(Kind::Add, lhs, term());
      else if (accept('-')) lhs = make(Kind::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make(Kind::Mul, lhs, unary());
      else if (accept('/')) lhs = make(Kind::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip();
    const std::size_t at = pos_;
    if (!accept('^')) return base;
    int sign = 1;
    if (accept('-')) sign = -1;
    else accept('+');
    NodePtr ex = power();
    std::optional<double> v = fold(*ex);
    if (!v) throw SyntaxError("exponent must be a constant", at);
    const double k = sign * *v;
    if (k != std::round(k) || std::fabs(k) > 64)
      throw SyntaxError("exponent must be an integer between -64 and 64", at);
    auto n = std::make_shared<Expr::Node>();
    n->kind = Kind::Pow;
    n->index = static_cast<int>(k);
    n->a = base;
    return n;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) throw SyntaxError("malformed number", start);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) throw SyntaxError("number out of range", start);
    return make_number(v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string id(src_.substr(start, pos_ - start));
    for (const auto& f : kFuncs) {
      if (id == f.name) {
        expect('(');
        auto n = std::make_shared<Expr::Node>();
        n->kind = Kind::Func;
        n->func = f.func;
        n->a = expr();
        expect(')');
        return n;
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == id) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Kind::Variable;
        n->index = static_cast<int>(i);
        return n;
      }
    }
    if (id == "pi") return make_number(std::numbers::pi, kConstPi);
    if (id == "e") return make_number(std::numbers::e, kConstE);
    throw UnknownVariable(id, start);
  }

  static std::optional<double> fold(const Expr::Node& n) {
    auto un = [](const NodePtr& p) { return fold(*p); };
    switch (n.kind) {
      case Kind::Number: return n.number;
      case Kind::Variable: return std::nullopt;
      case Kind::Neg: {
        auto a = un(n.a);
        if (!a) return std::nullopt;
        return -*a;
      }
      case Kind::Pow: {
        auto a = un(n.a);
        if (!a) return std::nullopt;
        return std::pow(*a, n.index);
      }
      case Kind::Func: return std::nullopt;
      default: {
        auto a = un(n.a), b = un(n.b);
        if (!a || !b) return std::nullopt;
        switch (n.kind) {
          case Kind::Add: return *a + *b;
          case Kind::Sub: return *a - *b;
          case Kind::Mul: return *a * *b;
          default: return *a / *b;
        }
      }
    }
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

template <class T, class Lift>
T eval_node(const Expr::Node& n, std::span<const T> vars, const Lift& lift) {
  switch (n.kind) {
    case Kind::Number: return lift(n.number);
    case Kind::Variable: return vars[n.index];
    case Kind::Neg: return -eval_node(*n.a, vars, lift);
    case Kind::Add: return eval_node(*n.a, vars, lift) + eval_node(*n.b, vars, lift);
    case Kind::Sub: return eval_node(*n.a, vars, lift) - eval_node(*n.b, vars, lift);
    case Kind::Mul: return eval_node(*n.a, vars, lift) * eval_node(*n.b, vars, lift);
    case Kind::Div: {
      T den = eval_node(*n.b, vars, lift);
      if constexpr (std::is_same_v<T, double>) {
        if (den == 0.0) throw DomainError("expression division", "divisor is zero");
      }
      return eval_node(*n.a, vars, lift) / den;
    }
    case Kind::Pow: {
      T base = eval_node(*n.a, vars, lift);
      if constexpr (std::is_same_v<T, double>) {
        if (base == 0.0 && n.index < 0) throw DomainError("power", "zero base with negative exponent");
        return std::pow(base, n.index);
      } else {
        return pow(base, n.index);
      }
    }
    case Kind::Func: {
      T x = eval_node(*n.a, vars, lift);
      using std::sin, std::cos, std::sinh, std::cosh, std::tanh, std::exp, std::log, std::sqrt;
      switch (n.func) {
        case Expr::Func::Sin: return sin(x);
        case Expr::Func::Cos: return cos(x);
        case Expr::Func::Sinh: return sinh(x);
        case Expr::Func::Cosh: return cosh(x);
        case Expr::Func::Tanh: return tanh(x);
        case Expr::Func::Exp: return exp(x);
        case Expr::Func::Log:
          if constexpr (std::is_same_v<T, double>) {
            if (!(x > 0.0)) throw DomainError("log", "argument is not positive");
          }
          return log(x);
        case Expr::Func::Sqrt:
          if constexpr (std::is_same_v<T, double>) {
            if (x < 0.0) throw DomainError("sqrt", "argument is negative");
          }
          return sqrt(x);
      }
    }
  }
  throw std::logic_error("Expr: corrupt node");
}

int precedence(const Expr::Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Expr::Node& n, const std::vector<std::string>& vars, int min_prec,
           std::string& out) {
  const bool paren = precedence(n) < min_prec;
  if (paren) out += '(';
  switch (n.kind) {
    case Kind::Number:
      if (n.index == kConstPi) out += "pi";
      else if (n.index == kConstE) out += "e";
      else out += format_number(n.number);
      break;
    case Kind::Variable: out += vars[n.index]; break;
    case Kind::Neg:
      out += '-';
      print(*n.a, vars, 3, out);
      break;
    case Kind::Add:
    case Kind::Sub:
      print(*n.a, vars, 1, out);
      out += n.kind == Kind::Add ? " + " : " - ";
      print(*n.b, vars, 2, out);
      break;
    case Kind::Mul:
    case Kind::Div:
      print(*n.a, vars, 2, out);
      out += n.kind == Kind::Mul ? " * " : " / ";
      print(*n.b, vars, 3, out);
      break;
    case Kind::Pow:
      print(*n.a, vars, 5, out);
      out += '^';
      out += std::to_string(n.index);
      break;
    case Kind::Func:
      out += function_name(n.func);
      out += '(';
      print(*n.a, vars, 0, out);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

void print_tree(const Expr::Node& n, const std::vector<std::string>& vars, std::string& out) {
  auto bin = [&](const char* name) {
    out += name;
    out += '(';
    print_tree(*n.a, vars, out);
    out += ", ";
    print_tree(*n.b, vars, out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::Number:
      out += "Num ";
      out += n.index == kConstPi ? "pi" : n.index == kConstE ? "e" : format_number(n.number);
      break;
    case Kind::Variable: out += "Var " + vars[n.index]; break;
    case Kind::Neg:
      out += "Neg(";
      print_tree(*n.a, vars, out);
      out += ')';
      break;
    case Kind::Add: bin("Add"); break;
    case Kind::Sub: bin("Sub"); break;
    case Kind::Mul: bin("Mul"); break;
    case Kind::Div: bin("Div"); break;
    case Kind::Pow:
      out += "Pow(";
      print_tree(*n.a, vars, out);
      out += ", " + std::to_string(n.index) + ")";
      break;
    case Kind::Func:
      out += "Func(" + function_name(n.func) + ", ";
      print_tree(*n.a, vars, out);
      out += ')';
      break;
  }
}

}  // namespace

std::string function_name(Expr::Func f) {
  for (const auto& e : kFuncs)
    if (e.func == f) return e.name;
  return "?";
}

Expr Expr::parse(std::string_view source, std::vector<std::string> variables) {
  for (const auto& v : variables) {
    if (v == "pi" || v == "e") throw InputError("variable name '" + v + "' is reserved");
    for (const auto& f : kFuncs)
      if (v == f.name) throw InputError("variable name '" + v + "' is reserved");
  }
  Parser p(source, variables);
  NodePtr root = p.run();
  return Expr(std::move(root), std::move(variables));
}

double Expr::evaluate(std::span<const double> values) const {
  if (values.size() != vars_.size()) throw std::invalid_argument("Expr::evaluate: wrong arity");
  return eval_node<double>(*root_, values, [](double x) { return x; });
}

Jet2 Expr::evaluate(std::span<const Jet2> seeds) const {
  if (seeds.size() != vars_.size()) throw std::invalid_argument("Expr::evaluate: wrong arity");
  int is = Jet2::kDefaultSigmaOrder, jt = Jet2::kDefaultTOrder;
  if (!seeds.empty()) {
    is = seeds[0].sigma_order();
    jt = seeds[0].t_order();
    for (const auto& s : seeds)
      if (s.sigma_order() != is || s.t_order() != jt)
        throw std::invalid_argument("Expr::evaluate: seed jets of unequal orders");
  }
  return eval_node<Jet2>(*root_, seeds, [&](double x) { return Jet2::constant(x, is, jt); });
}

std::string Expr::to_string() const {
  std::string out;
  print(*root_, vars_, 0, out);
  return out;
}

std::string Expr::tree() const {
  std::string out;
  print_tree(*root_, vars_, out);
  return out;
}

}  // namespace elastica
