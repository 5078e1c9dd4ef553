#include "inscribed/radial_expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "inscribed/error.hpp"

namespace inscribed::spheres {

class ExprParser {
 public:
  ExprParser(std::string_view src, int dim, RadialExpr& out) : src_(src), dim_(dim), out_(out) {}

  int parse() {
    const int root = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return root;
  }

 private:
  using Op = RadialExpr::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(ErrorKind::Syntax, what, pos_);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  int add(RadialExpr::Node node) {
    out_.nodes_.push_back(node);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int binary(Op op, int lhs, int rhs) { return add({op, 0.0, 0, lhs, rhs}); }

  int expr() {
    int lhs = term();
    for (;;) {
      if (accept('+')) lhs = binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  int term() {
    int lhs = unary();
    for (;;) {
      if (accept('*')) lhs = binary(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  int unary() {
    if (accept('-')) return add({Op::Neg, 0.0, 0, unary(), -1});
    if (accept('+')) return unary();
    return power();
  }

  int power() {
    const int base = primary();
    if (!accept('^')) return base;
    skip_space();
    bool negative = false;
    if (accept('-')) negative = true;
    else accept('+');
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be an integer literal");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      fail("exponent must be an integer literal");
    }
    const std::string digits(src_.substr(start, pos_ - start));
    if (digits.size() > 6) fail("exponent too large");
    const int n = std::stoi(digits);
    return add({Op::Pow, 0.0, negative ? -n : n, base, -1});
  }

  int primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected '") + c + "'");
  }

  int number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) {
      pos_ = start;
      fail("malformed number '" + text + "'");
    }
    return add({Op::Const, v, 0, -1, -1});
  }

  int identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(src_.substr(start, pos_ - start));
    if (name == "pi") return add({Op::Pi, std::numbers::pi, 0, -1, -1});
    if (name == "theta") return add({Op::Theta, 0.0, 0, -1, -1});
    if (name == "phi") {
      if (dim_ != 3) throw ParseError(ErrorKind::UnknownIdentifier, "'phi' is only defined for surfaces (k = 3)", start);
      return add({Op::Phi, 0.0, 0, -1, -1});
    }
    Op fn;
    if (name == "sin") fn = Op::Sin;
    else if (name == "cos") fn = Op::Cos;
    else if (name == "abs") fn = Op::Abs;
    else throw ParseError(ErrorKind::UnknownIdentifier, "unknown identifier '" + name + "'", start);
    expect('(');
    const int arg = expr();
    expect(')');
    return add({fn, 0.0, 0, arg, -1});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int dim_;
  RadialExpr& out_;
};

RadialExpr RadialExpr::parse(std::string_view source, int dim) {
  if (dim != 2 && dim != 3) throw Error(ErrorKind::InvalidArgument, "radial expressions support k = 2 or 3");
  RadialExpr e;
  e.dim_ = dim;
  e.root_ = ExprParser(source, dim, e).parse();
  return e;
}

double RadialExpr::evaluate(double phi, double theta) const { return jet(phi, theta).value; }

AngleJet RadialExpr::jet(double phi, double theta) const {
  return eval(root_, AngleJet{phi, 1.0, 0.0}, AngleJet{theta, 0.0, 1.0});
}

AngleJet RadialExpr::eval(int index, const AngleJet& phi, const AngleJet& theta) const {
  const Node& n = nodes_[index];
  auto scale = [](const AngleJet& a, double f, double df) {
    return AngleJet{f, df * a.d_phi, df * a.d_theta};
  };
  switch (n.op) {
    case Op::Const:
    case Op::Pi: return AngleJet{n.value, 0.0, 0.0};
    case Op::Phi: return phi;
    case Op::Theta: return theta;
    case Op::Neg: {
      const AngleJet a = eval(n.lhs, phi, theta);
      return AngleJet{-a.value, -a.d_phi, -a.d_theta};
    }
    case Op::Add:
    case Op::Sub: {
      const AngleJet a = eval(n.lhs, phi, theta);
      const AngleJet b = eval(n.rhs, phi, theta);
      const double s = n.op == Op::Add ? 1.0 : -1.0;
      return AngleJet{a.value + s * b.value, a.d_phi + s * b.d_phi, a.d_theta + s * b.d_theta};
    }
    case Op::Mul: {
      const AngleJet a = eval(n.lhs, phi, theta);
      const AngleJet b = eval(n.rhs, phi, theta);
      return AngleJet{a.value * b.value, a.d_phi * b.value + a.value * b.d_phi,
                      a.d_theta * b.value + a.value * b.d_theta};
    }
    case Op::Div: {
      const AngleJet a = eval(n.lhs, phi, theta);
      const AngleJet b = eval(n.rhs, phi, theta);
      const double inv = 1.0 / b.value;
      const double q = a.value * inv;
      return AngleJet{q, (a.d_phi - q * b.d_phi) * inv, (a.d_theta - q * b.d_theta) * inv};
    }
    case Op::Pow: {
      const AngleJet a = eval(n.lhs, phi, theta);
      if (n.exponent == 0) return AngleJet{1.0, 0.0, 0.0};
      const double lower = std::pow(a.value, n.exponent - 1);
      return scale(a, lower * a.value, n.exponent * lower);
    }
    case Op::Sin: {
      const AngleJet a = eval(n.lhs, phi, theta);
      return scale(a, std::sin(a.value), std::cos(a.value));
    }
    case Op::Cos: {
      const AngleJet a = eval(n.lhs, phi, theta);
      return scale(a, std::cos(a.value), -std::sin(a.value));
    }
    case Op::Abs: {
      const AngleJet a = eval(n.lhs, phi, theta);
      const double sign = a.value > 0.0 ? 1.0 : (a.value < 0.0 ? -1.0 : 0.0);
      return scale(a, std::abs(a.value), sign);
    }
  }
  return {};
}

std::string RadialExpr::to_string() const {
  std::string out;
  print(root_, out);
  return out;
}

void RadialExpr::print(int index, std::string& out) const {
  const Node& n = nodes_[index];
  auto binary = [&](const char* op) {
    out += '(';
    print(n.lhs, out);
    out += op;
    print(n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    print(n.lhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::Const: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      out += buf;
      break;
    }
    case Op::Pi: out += "pi"; break;
    case Op::Phi: out += "phi"; break;
    case Op::Theta: out += "theta"; break;
    case Op::Neg:
      out += "(-";
      print(n.lhs, out);
      out += ')';
      break;
    case Op::Add: binary(" + "); break;
    case Op::Sub: binary(" - "); break;
    case Op::Mul: binary(" * "); break;
    case Op::Div: binary(" / "); break;
    case Op::Pow:
      out += '(';
      print(n.lhs, out);
      out += ")^";
      out += std::to_string(n.exponent);
      break;
    case Op::Sin: call("sin"); break;
    case Op::Cos: call("cos"); break;
    case Op::Abs: call("abs"); break;
  }
}

}  // namespace inscribed::spheres
