#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

#include "bosonic/vec.hpp"

namespace bosonic {

// Exponents over the 2m variables (x_1..x_m, u_1..u_m); entries past 2m stay 0.
using Exponents = std::array<std::uint8_t, 2 * kMaxDim>;

enum class Var { X, U };

template <class Scalar>
class BasicMultiPoly {
 public:
  using Terms = std::map<Exponents, Scalar>;

  BasicMultiPoly() = default;
  explicit BasicMultiPoly(int m) : m_(m) {
    if (m < 1 || m > kMaxDim) throw DomainError("polynomial dimension out of range");
  }

  static BasicMultiPoly constant(int m, const Scalar& c) {
    BasicMultiPoly p(m);
    p.add_term(Exponents{}, c);
    return p;
  }
  // Single variable x_i or u_i (0-based i).
  static BasicMultiPoly variable(int m, Var v, int i) {
    BasicMultiPoly p(m);
    Exponents e{};
    e[slot(m, v, i)] = 1;
    p.add_term(e, Scalar(1));
    return p;
  }
  static BasicMultiPoly monomial(int m, const Exponents& e, const Scalar& c) {
    BasicMultiPoly p(m);
    p.add_term(e, c);
    return p;
  }

  int dim() const { return m_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(const Exponents& e, const Scalar& c) {
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  Scalar coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  BasicMultiPoly& operator+=(const BasicMultiPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  BasicMultiPoly& operator-=(const BasicMultiPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  BasicMultiPoly& operator*=(const Scalar& s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend BasicMultiPoly operator+(BasicMultiPoly a, const BasicMultiPoly& b) { return a += b; }
  friend BasicMultiPoly operator-(BasicMultiPoly a, const BasicMultiPoly& b) { return a -= b; }
  friend BasicMultiPoly operator*(BasicMultiPoly a, const Scalar& s) { return a *= s; }
  friend BasicMultiPoly operator*(const Scalar& s, BasicMultiPoly a) { return a *= s; }
  friend BasicMultiPoly operator-(BasicMultiPoly a) { return a *= Scalar(-1); }

  friend BasicMultiPoly operator*(const BasicMultiPoly& a, const BasicMultiPoly& b) {
    a.check(b);
    BasicMultiPoly r(a.m_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e{};
        for (int i = 0; i < 2 * a.m_; ++i) {
          int s = ea[i] + eb[i];
          if (s > 255) throw DomainError("polynomial exponent overflow");
          e[i] = static_cast<std::uint8_t>(s);
        }
        r.add_term(e, ca * cb);
      }
    return r;
  }

  friend bool operator==(const BasicMultiPoly& a, const BasicMultiPoly& b) { return a.m_ == b.m_ && a.terms_ == b.terms_; }

  BasicMultiPoly derivative(Var v, int i) const {
    int s = slot(m_, v, i);
    BasicMultiPoly r(m_);
    for (const auto& [e, c] : terms_) {
      if (e[s] == 0) continue;
      Exponents d = e;
      d[s] -= 1;
      r.add_term(d, c * Scalar(static_cast<int>(e[s])));
    }
    return r;
  }
  BasicMultiPoly derivative_x(int i) const { return derivative(Var::X, i); }
  BasicMultiPoly derivative_u(int i) const { return derivative(Var::U, i); }

  BasicMultiPoly laplacian(Var v) const {
    BasicMultiPoly r(m_);
    for (int i = 0; i < m_; ++i) r += derivative(v, i).derivative(v, i);
    return r;
  }
  BasicMultiPoly laplacian_u() const { return laplacian(Var::U); }
  BasicMultiPoly laplacian_x() const { return laplacian(Var::X); }

  // Multiplies by the variable x_i or u_i.
  BasicMultiPoly times_variable(Var v, int i) const {
    int s = slot(m_, v, i);
    BasicMultiPoly r(m_);
    for (const auto& [e, c] : terms_) {
      Exponents d = e;
      d[s] += 1;
      r.terms_.emplace(d, c);
    }
    return r;
  }

  // Highest total degree in the x (or u) block; -1 for the zero polynomial.
  int degree(Var v) const {
    int best = -1;
    for (const auto& [e, c] : terms_) best = std::max(best, block_degree(e, v));
    return best;
  }
  int min_degree(Var v) const {
    int best = -1;
    for (const auto& [e, c] : terms_) {
      int d = block_degree(e, v);
      best = best < 0 ? d : std::min(best, d);
    }
    return best;
  }
  bool homogeneous(Var v, int d) const {
    for (const auto& [e, c] : terms_)
      if (block_degree(e, v) != d) return false;
    return true;
  }

  double evaluate(const Vec& x, const Vec& u) const {
    if (x.dim() != m_ || u.dim() != m_) throw DimensionMismatch("polynomial evaluation point has wrong dimension");
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = to_double(c);
      for (int i = 0; i < m_; ++i) {
        if (e[i]) t *= std::pow(x[i], e[i]);
        if (e[m_ + i]) t *= std::pow(u[i], e[m_ + i]);
      }
      s += t;
    }
    return s;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += scalar_string(c);
      for (int i = 0; i < 2 * m_; ++i) {
        if (!e[i]) continue;
        out += (i < m_ ? "*x" : "*u") + std::to_string(i % m_ + 1);
        if (e[i] > 1) out += "^" + std::to_string(e[i]);
      }
    }
    return out;
  }

  static int slot(int m, Var v, int i) {
    if (i < 0 || i >= m) throw DomainError("variable index out of range");
    return v == Var::X ? i : m + i;
  }
  int block_degree(const Exponents& e, Var v) const {
    int off = v == Var::X ? 0 : m_, d = 0;
    for (int i = 0; i < m_; ++i) d += e[off + i];
    return d;
  }

 private:
  void check(const BasicMultiPoly& o) const {
    if (o.m_ != m_) throw DimensionMismatch("polynomial dimensions differ: " + std::to_string(m_) + " vs " + std::to_string(o.m_));
  }
  static double to_double(const Scalar& c) {
    if constexpr (std::is_same_v<Scalar, double>) {
      return c;
    } else {
      return static_cast<double>(c);
    }
  }
  static std::string scalar_string(const Scalar& c) {
    if constexpr (std::is_same_v<Scalar, double>) {
      return std::to_string(c);
    } else {
      return c.str();
    }
  }

  int m_ = 0;
  Terms terms_;
};

using Rational = boost::multiprecision::cpp_rational;
using MultiPoly = BasicMultiPoly<double>;
using RationalPoly = BasicMultiPoly<Rational>;

MultiPoly to_double(const RationalPoly& p);

}  // namespace bosonic
