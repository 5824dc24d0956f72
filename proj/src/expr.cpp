#include "hcf/expr.hpp"

#include <cmath>
#include <sstream>

#include "hcf/errors.hpp"

namespace hcf {

Expr make(Expr::Kind k, std::vector<Expr> args, double power) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = k;
  n->args = std::move(args);
  n->power = power;
  return Expr(std::shared_ptr<const Expr::Node>(std::move(n)));
}

Expr::Expr(cplx c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = c;
  node_ = std::move(n);
}

Expr Expr::z(int k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = k;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::zbar(int k) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = k;
  n->conj = true;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr operator+(const Expr& a, const Expr& b) { return make(Expr::Kind::Add, {a, b}, 0); }
Expr operator-(const Expr& a, const Expr& b) { return make(Expr::Kind::Sub, {a, b}, 0); }
Expr operator*(const Expr& a, const Expr& b) { return make(Expr::Kind::Mul, {a, b}, 0); }
Expr operator/(const Expr& a, const Expr& b) { return make(Expr::Kind::Div, {a, b}, 0); }
Expr operator-(const Expr& a) { return make(Expr::Kind::Neg, {a}, 0); }
Expr pow(const Expr& a, double p) { return make(Expr::Kind::Pow, {a}, p); }
Expr exp(const Expr& a) { return make(Expr::Kind::Exp, {a}, 0); }
Expr sin(const Expr& a) { return make(Expr::Kind::Sin, {a}, 0); }
Expr cos(const Expr& a) { return make(Expr::Kind::Cos, {a}, 0); }
Expr log(const Expr& a) { return make(Expr::Kind::Log, {a}, 0); }

Expr conj(const Expr& a) {
  const auto& n = a.node();
  switch (n.kind) {
    case Expr::Kind::Const:
      return Expr(std::conj(n.value));
    case Expr::Kind::Var:
      return n.conj ? Expr::z(n.var) : Expr::zbar(n.var);
    default: {
      std::vector<Expr> args;
      for (const auto& c : n.args) args.push_back(conj(c));
      return make(n.kind, std::move(args), n.power);
    }
  }
}

Expr norm_sq(int n) {
  Expr s = Expr::z(0) * Expr::zbar(0);
  for (int k = 1; k < n; ++k) s = s + Expr::z(k) * Expr::zbar(k);
  return s;
}

Expr re_z(int k) { return (Expr::z(k) + Expr::zbar(k)) * 0.5; }
Expr im_z(int k) { return (Expr::z(k) - Expr::zbar(k)) * cplx(0.0, -0.5); }

cplx Expr::eval(const Point& x) const {
  const auto& n = *node_;
  switch (n.kind) {
    case Kind::Const: return n.value;
    case Kind::Var:
      if (n.var >= static_cast<int>(x.size())) throw StructuralError("expression variable out of range");
      return n.conj ? std::conj(x[n.var]) : x[n.var];
    case Kind::Add: return n.args[0].eval(x) + n.args[1].eval(x);
    case Kind::Sub: return n.args[0].eval(x) - n.args[1].eval(x);
    case Kind::Mul: return n.args[0].eval(x) * n.args[1].eval(x);
    case Kind::Div: return n.args[0].eval(x) / n.args[1].eval(x);
    case Kind::Neg: return -n.args[0].eval(x);
    case Kind::Pow: return std::pow(n.args[0].eval(x), n.power);
    case Kind::Exp: return std::exp(n.args[0].eval(x));
    case Kind::Sin: return std::sin(n.args[0].eval(x));
    case Kind::Cos: return std::cos(n.args[0].eval(x));
    case Kind::Log: return std::log(n.args[0].eval(x));
  }
  return 0.0;
}

ComplexJet Expr::jet(const Point& x, int order) const {
  JetEvaluator ev(x, order);
  return ev(*this);
}

const ComplexJet& JetEvaluator::operator()(const Expr& e) {
  auto it = memo_.find(e.id());
  if (it != memo_.end()) return it->second;
  const auto& n = e.node();
  ComplexJet out;
  switch (n.kind) {
    case Expr::Kind::Const: out = ComplexJet::constant(x_, order_, n.value); break;
    case Expr::Kind::Var:
      if (n.var >= static_cast<int>(x_.size())) throw StructuralError("expression variable out of range");
      out = ComplexJet::variable(x_, order_, n.var, n.conj);
      break;
    case Expr::Kind::Add: out = (*this)(n.args[0]) + (*this)(n.args[1]); break;
    case Expr::Kind::Sub: out = (*this)(n.args[0]) - (*this)(n.args[1]); break;
    case Expr::Kind::Mul: out = (*this)(n.args[0]) * (*this)(n.args[1]); break;
    case Expr::Kind::Div: out = (*this)(n.args[0]) / (*this)(n.args[1]); break;
    case Expr::Kind::Neg: out = -(*this)(n.args[0]); break;
    case Expr::Kind::Pow: out = pow((*this)(n.args[0]), n.power); break;
    case Expr::Kind::Exp: out = exp((*this)(n.args[0])); break;
    case Expr::Kind::Sin: out = sin((*this)(n.args[0])); break;
    case Expr::Kind::Cos: out = cos((*this)(n.args[0])); break;
    case Expr::Kind::Log: out = log((*this)(n.args[0])); break;
  }
  return memo_.emplace(e.id(), std::move(out)).first->second;
}

namespace {

std::string fmt(cplx c) {
  std::ostringstream os;
  os.precision(12);
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << "i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

}  // namespace

std::string Expr::str() const {
  const auto& n = *node_;
  auto a = [&](int i) { return n.args[i].str(); };
  switch (n.kind) {
    case Kind::Const: return fmt(n.value);
    case Kind::Var: return (n.conj ? "zb" : "z") + std::to_string(n.var + 1);
    case Kind::Add: return "(" + a(0) + " + " + a(1) + ")";
    case Kind::Sub: return "(" + a(0) + " - " + a(1) + ")";
    case Kind::Mul: return a(0) + "*" + a(1);
    case Kind::Div: return a(0) + "/" + a(1);
    case Kind::Neg: return "-" + a(0);
    case Kind::Pow: {
      std::ostringstream os;
      os << a(0) << "^" << n.power;
      return os.str();
    }
    case Kind::Exp: return "exp(" + a(0) + ")";
    case Kind::Sin: return "sin(" + a(0) + ")";
    case Kind::Cos: return "cos(" + a(0) + ")";
    case Kind::Log: return "log(" + a(0) + ")";
  }
  return "?";
}

}  // namespace hcf
