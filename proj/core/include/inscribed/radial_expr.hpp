#pragma once

// Small expression language for radial functions over the unit sphere.
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = ("-" | "+") unary | power ;
//   power   = primary [ "^" [ "-" | "+" ] integer ] ;
//   primary = number | "pi" | variable | func "(" expr ")" | "(" expr ")" ;
//   func    = "sin" | "cos" | "abs" ;
//
// Variables are `theta` for curves (k = 2) and `phi`, `theta` for surfaces
// (k = 3), with phi measured from +z and theta the azimuth.

#include <string>
#include <string_view>
#include <vector>

namespace inscribed::spheres {

/// Value and first partials with respect to (phi, theta).
struct AngleJet {
  double value = 0.0;
  double d_phi = 0.0;
  double d_theta = 0.0;
};

class RadialExpr {
 public:
  /// Throws ParseError(Syntax) with the offending offset, or
  /// ParseError(UnknownIdentifier) for names outside the variable set.
  static RadialExpr parse(std::string_view source, int dim);

  int dim() const { return dim_; }

  double evaluate(double phi, double theta) const;
  /// Forward-mode derivative; d|x|/dx at 0 is taken to be 0.
  AngleJet jet(double phi, double theta) const;

  /// Fully parenthesized form that parses back to an equivalent tree.
  std::string to_string() const;

 private:
  enum class Op { Const, Pi, Phi, Theta, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Abs };

  struct Node {
    Op op;
    double value = 0.0;
    int exponent = 0;
    int lhs = -1;
    int rhs = -1;
  };

  friend class ExprParser;

  AngleJet eval(int index, const AngleJet& phi, const AngleJet& theta) const;
  void print(int index, std::string& out) const;

  int dim_ = 2;
  int root_ = -1;
  std::vector<Node> nodes_;
};

}  // namespace inscribed::spheres
