#include "boehm/expr.hpp"

#include <cmath>
#include <sstream>

#include "boehm/mollifier.hpp"

namespace boehm {

double Expr::operator()(double x) const {
  switch (kind) {
    case Kind::poly: {
      double v = 0.0;
      for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
      return v;
    }
    case Kind::sin:
      return amp * std::sin(freq * x + phase);
    case Kind::cos:
      return amp * std::cos(freq * x + phase);
    case Kind::exp:
      return amp * std::exp(rate * x);
    case Kind::abs:
      return amp * std::abs(x - center);
    case Kind::bump: {
      const double y = (x - center) / radius;
      const double q = 1.0 - y * y;
      return q > 0.0 ? amp * bump_constant() / radius * std::exp(-1.0 / q) : 0.0;
    }
    case Kind::sum: {
      double v = 0.0;
      for (const auto& t : terms) v += t(x);
      return v;
    }
  }
  return 0.0;
}

std::string Expr::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (kind) {
    case Kind::poly:
      os << "poly(";
      for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
      os << ")";
      break;
    case Kind::sin:
      os << amp << "*sin(" << freq << "x+" << phase << ")";
      break;
    case Kind::cos:
      os << amp << "*cos(" << freq << "x+" << phase << ")";
      break;
    case Kind::exp:
      os << amp << "*exp(" << rate << "x)";
      break;
    case Kind::abs:
      os << amp << "*|x-" << center << "|";
      break;
    case Kind::bump:
      os << amp << "*bump(" << radius << ")(x-" << center << ")";
      break;
    case Kind::sum:
      for (std::size_t i = 0; i < terms.size(); ++i) os << (i ? " + " : "") << terms[i].describe();
      break;
  }
  return os.str();
}

Expr Expr::poly(std::vector<double> c) {
  Expr e;
  e.kind = Kind::poly;
  e.coeffs = std::move(c);
  return e;
}

Expr Expr::sine(double a, double f, double p) {
  Expr e;
  e.kind = Kind::sin;
  e.amp = a;
  e.freq = f;
  e.phase = p;
  return e;
}

Expr Expr::cosine(double a, double f, double p) {
  Expr e = sine(a, f, p);
  e.kind = Kind::cos;
  return e;
}

Expr Expr::exponential(double a, double r) {
  Expr e;
  e.kind = Kind::exp;
  e.amp = a;
  e.rate = r;
  return e;
}

Expr Expr::absolute(double a, double c) {
  Expr e;
  e.kind = Kind::abs;
  e.amp = a;
  e.center = c;
  return e;
}

Expr Expr::bump(double r, double c, double a) {
  Expr e;
  e.kind = Kind::bump;
  e.radius = r;
  e.center = c;
  e.amp = a;
  return e;
}

Expr Expr::sum(std::vector<Expr> t) {
  Expr e;
  e.kind = Kind::sum;
  e.terms = std::move(t);
  return e;
}

}  // namespace boehm
