#pragma once

// Closed-form expression trees over z_k, zbar_k and complex constants.
// They are the single source for metric components: jets, point values and
// printable formulas are all derived from the same tree.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hcf/jets.hpp"

namespace hcf {

class Expr {
 public:
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Log };

  struct Node {
    Kind kind;
    cplx value{};   // Const
    int var = 0;    // Var: coordinate index
    bool conj = false;  // Var: zbar instead of z
    double power = 0;   // Pow
    std::vector<Expr> args;
  };

  Expr() : Expr(cplx(0.0)) {}
  Expr(cplx c);
  Expr(double c) : Expr(cplx(c)) {}
  Expr(int c) : Expr(cplx(static_cast<double>(c))) {}

  static Expr z(int k);
  static Expr zbar(int k);

  const Node& node() const { return *node_; }
  const Node* id() const { return node_.get(); }

  cplx eval(const Point& x) const;
  ComplexJet jet(const Point& x, int order) const;
  std::string str() const;

 private:
  friend Expr make(Expr::Kind, std::vector<Expr>, double);
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& a, double p);
Expr exp(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr log(const Expr& a);
// Expression for the complex conjugate of a (real exponents, principal branches).
Expr conj(const Expr& a);
// |z|^2 = sum z_k zbar_k.
Expr norm_sq(int n);
// Re z_k and Im z_k.
Expr re_z(int k);
Expr im_z(int k);

// Jets of many expressions at one point, sharing common subtrees.
class JetEvaluator {
 public:
  JetEvaluator(const Point& x, int order) : x_(x), order_(order) {}
  const ComplexJet& operator()(const Expr& e);

 private:
  Point x_;
  int order_;
  std::map<const Expr::Node*, ComplexJet> memo_;
};

}  // namespace hcf
