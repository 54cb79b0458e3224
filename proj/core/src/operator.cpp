#include "bosonic/operator.hpp"

#include <cmath>
#include <map>

namespace bosonic {

FieldHk::FieldHk(std::shared_ptr<const HarmonicBasis> basis, FieldDomain domain, CoefficientFn coefficients, std::string provenance)
    : basis_(std::move(basis)), domain_(domain), coef_(std::move(coefficients)), provenance_(std::move(provenance)) {
  if (!basis_) throw DomainError("field needs a harmonic basis");
}

std::vector<double> FieldHk::coefficients(const Vec& x) const {
  auto c = coef_(x);
  if (c.size() != basis_->size()) throw DimensionMismatch("field returned " + std::to_string(c.size()) + " coefficients, dim H_k is " + std::to_string(basis_->size()));
  return c;
}

double FieldHk::value(const Vec& x, const Vec& nu) const { return basis_->combination(coefficients(x), nu); }

bool FieldHk::contains(const Vec& x, double margin) const {
  if (x.dim() != basis_->m()) return false;
  switch (domain_) {
    case FieldDomain::HalfSpace: return x[x.dim() - 1] > margin;
    case FieldDomain::Ball: return norm(x) < 1.0 - margin;
    case FieldDomain::AllSpace: return true;
  }
  return false;
}

FieldHk FieldHk::frozen_at(const Vec& x0) const { return freeze_ ? freeze_(x0) : *this; }

std::vector<double> FieldHk::closure_coefficients(const Vec& zeta) const {
  if (!closure_) throw DomainError("field has no boundary closure: " + provenance_);
  return closure_(zeta);
}

FieldHk polynomial_field(const MultiPoly& p, std::shared_ptr<const HarmonicBasis> basis, FieldDomain domain) {
  const int m = basis->m();
  if (p.dim() != m) throw DimensionMismatch("polynomial dimension differs from basis dimension");
  // Group by x-monomial: p = sum_a x^a q_a(u), then expand every q_a in the basis.
  std::map<Exponents, MultiPoly> groups;
  for (const auto& [e, c] : p.terms()) {
    Exponents ex{}, eu{};
    for (int i = 0; i < m; ++i) {
      ex[i] = e[i];
      eu[m + i] = e[m + i];
    }
    auto it = groups.try_emplace(ex, MultiPoly(m)).first;
    it->second.add_term(eu, c);
  }
  std::vector<std::pair<std::vector<int>, std::vector<double>>> table;
  for (const auto& [ex, q] : groups) {
    Expansion exp = expand_in_basis(q, *basis);
    if (exp.residual > 1e-9) throw DomainError("polynomial field is not H_k-valued: residual " + std::to_string(exp.residual));
    std::vector<int> powers(ex.begin(), ex.begin() + m);
    table.emplace_back(std::move(powers), std::move(exp.coefficients));
  }
  const std::size_t t = basis->size();
  auto fn = [table, t, m](const Vec& x) {
    std::vector<double> g(t, 0.0);
    for (const auto& [powers, c] : table) {
      double mono = 1.0;
      for (int i = 0; i < m; ++i)
        if (powers[i]) mono *= std::pow(x[i], powers[i]);
      for (std::size_t j = 0; j < t; ++j) g[j] += mono * c[j];
    }
    return g;
  };
  return FieldHk(std::move(basis), domain, fn, "polynomial " + p.to_string());
}

namespace detail {

void check_dk_parameters(int m, int k, const DkOptions& options) {
  if (m < 3) throw DomainError("D_k needs m >= 3");
  if (k < 0) throw DomainError("D_k needs k >= 0");
  if (k == 0 && !options.allow_k0) throw DomainError("k = 0 is disabled; enable DkOptions::allow_k0 for the classical Laplacian");
  if (m + 2 * k - 4 == 0) throw DomainError("D_k constants are singular for m + 2k - 4 = 0");
}

}  // namespace detail

namespace {

// Re (part = 0) or Im (part = 1) of (u_a + i u_b)^k.
RationalPoly complex_power(int m, int k, int a, int b, int part) {
  RationalPoly p(m);
  Rational binom(1);
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom = binom * (k - j + 1) / j;
    if (j % 2 == part) {
      Exponents e{};
      e[m + a] = static_cast<std::uint8_t>(k - j);
      e[m + b] = static_cast<std::uint8_t>(j);
      p.add_term(e, ((j - part) / 2) % 2 ? -binom : binom);
    }
  }
  return p;
}

RationalPoly x_monomial(int m, std::initializer_list<std::pair<int, int>> powers, Rational c) {
  RationalPoly p(m);
  Exponents e{};
  for (auto [i, a] : powers) e[i] = static_cast<std::uint8_t>(a);
  p.add_term(e, c);
  return p;
}

}  // namespace

std::vector<RationalPoly> disjoint_null_solutions(int m, int k) {
  std::vector<RationalPoly> out;
  const RationalPoly saddle = x_monomial(m, {{0, 2}}, 1) - x_monomial(m, {{1, 2}}, 1);
  if (m == 3 && k == 1) {
    out.push_back(saddle * RationalPoly::variable(m, Var::U, 2));
    out.push_back(x_monomial(m, {{0, 1}, {1, 1}}, 1) * RationalPoly::variable(m, Var::U, 2));
  }
  if (m >= 4) out.push_back(saddle * complex_power(m, k, 2, 3, 0));
  if (m >= 5) out.push_back(x_monomial(m, {{0, 1}, {1, 1}, {2, 1}}, 1) * complex_power(m, k, 3, 4, 1));
  return out;
}

MaxwellReport maxwell_reduction_check(int m, const RationalPoly& p) {
  const RationalPoly full = apply_Dk_poly(p, m, 1);
  RationalPoly maxwell = p.laplacian_x();
  RationalPoly mixed(m), quartic(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const auto dij = p.derivative_x(i).derivative_x(j).derivative_u(j);
      mixed += dij.times_variable(Var::U, i);
      quartic += dij.derivative_u(i);
    }
  maxwell -= mixed * Rational(4, m);
  MaxwellReport r;
  r.third_term_vanishes = quartic.is_zero();
  r.agree = full == maxwell;
  for (const auto& [e, c] : (full - maxwell).terms()) r.max_difference = std::max(r.max_difference, std::abs(static_cast<double>(c)));
  return r;
}

BosonicOperator::BosonicOperator(std::shared_ptr<const HarmonicBasis> basis, DkOptions options)
    : basis_(std::move(basis)), m_(basis_->m()), k_(basis_->k()) {
  detail::check_dk_parameters(m_, k_, options);
  c1_ = 4.0 / (m_ + 2.0 * k_ - 2.0);
  c2_ = 4.0 / ((m_ + 2.0 * k_ - 2.0) * (m_ + 2.0 * k_ - 4.0));
  const std::size_t t = basis_->size();
  MultiPoly u2(m_);
  for (int i = 0; i < m_; ++i) {
    Exponents e{};
    e[m_ + i] = 2;
    u2.add_term(e, 1.0);
  }
  mixed_.resize(t * m_ * m_);
  quartic_.resize(t * m_ * m_);
  for (std::size_t l = 0; l < t; ++l)
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) {
        const MultiPoly dj = basis_->element(l).derivative_u(j);
        const MultiPoly a = dj.times_variable(Var::U, i);
        const MultiPoly b = u2 * dj.derivative_u(i);
        auto& A = mixed_[(l * m_ + i) * m_ + j];
        auto& B = quartic_[(l * m_ + i) * m_ + j];
        A.resize(t);
        B.resize(t);
        // Projection is exact: the D_k combination of these terms is harmonic in u.
        for (std::size_t q = 0; q < t; ++q) {
          A[q] = a.is_zero() ? 0.0 : sphere_inner_product(a, basis_->element(q));
          B[q] = b.is_zero() ? 0.0 : sphere_inner_product(b, basis_->element(q));
        }
      }
}

std::vector<double> BosonicOperator::combine(const std::vector<std::vector<double>>& hess) const {
  const std::size_t t = basis_->size();
  std::vector<double> out(t, 0.0);
  for (std::size_t l = 0; l < t; ++l) {
    const auto& H = hess[l];
    for (int i = 0; i < m_; ++i) out[l] += H[i * m_ + i];
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) {
        const double hij = H[i * m_ + j];
        if (hij == 0.0) continue;
        const auto& A = mixed_[(l * m_ + i) * m_ + j];
        const auto& B = quartic_[(l * m_ + i) * m_ + j];
        for (std::size_t q = 0; q < t; ++q) out[q] += hij * (c2_ * B[q] - c1_ * A[q]);
      }
  }
  return out;
}

DkResidual BosonicOperator::apply_fd(const FieldHk& field, const Vec& x, const Vec& nu, double h) const {
  if (field.basis().m() != m_ || field.basis().k() != k_) throw DimensionMismatch("field basis differs from operator basis");
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  if (!field.contains(x, 2.0 * h))
    throw DomainError("finite-difference stencil at " + to_string(x) + " violates the 2h margin of the field domain");
  const FieldHk f = field.frozen_at(x);
  const std::size_t t = basis_->size();
  std::vector<std::vector<double>> hess(t, std::vector<double>(static_cast<std::size_t>(m_ * m_), 0.0));
  const auto g0 = f.coefficients(x);
  for (int i = 0; i < m_; ++i) {
    const Vec ei = Vec::unit(m_, i) * h;
    const auto gp = f.coefficients(x + ei), gm = f.coefficients(x - ei);
    for (std::size_t l = 0; l < t; ++l) hess[l][i * m_ + i] = (gp[l] - 2.0 * g0[l] + gm[l]) / (h * h);
    for (int j = i + 1; j < m_; ++j) {
      const Vec ej = Vec::unit(m_, j) * h;
      const auto pp = f.coefficients(x + ei + ej), pm = f.coefficients(x + ei - ej);
      const auto mp = f.coefficients(x - ei + ej), mm = f.coefficients(x - ei - ej);
      for (std::size_t l = 0; l < t; ++l) {
        const double v = (pp[l] - pm[l] - mp[l] + mm[l]) / (4.0 * h * h);
        hess[l][i * m_ + j] = hess[l][j * m_ + i] = v;
      }
    }
  }
  DkResidual r;
  r.h = h;
  r.coefficients = combine(hess);
  r.value_at_nu = basis_->combination(r.coefficients, nu);
  double s = 0.0;
  for (double c : r.coefficients) s += c * c;
  r.norm = std::sqrt(s);
  return r;
}

RichardsonPair BosonicOperator::richardson(const FieldHk& field, const Vec& x, const Vec& nu, double h) const {
  RichardsonPair p;
  p.coarse = apply_fd(field, x, nu, h);
  p.fine = apply_fd(field, x, nu, 0.5 * h);
  p.ratio = p.fine.norm > 0.0 ? p.coarse.norm / p.fine.norm : 0.0;
  return p;
}

}  // namespace bosonic
