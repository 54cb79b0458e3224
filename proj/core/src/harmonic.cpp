#include "bosonic/harmonic.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace bosonic {

MultiPoly to_double(const RationalPoly& p) {
  MultiPoly r(p.dim());
  for (const auto& [e, c] : p.terms()) r.add_term(e, static_cast<double>(c));
  return r;
}

double sphere_area(int m) {
  if (m < 1) throw DomainError("sphere dimension must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m);
}

double sphere_moment(int m, const std::vector<int>& alpha) {
  if (static_cast<int>(alpha.size()) != m) throw DimensionMismatch("moment exponent has wrong length");
  double lg = 0.0;
  int total = 0;
  for (int a : alpha) {
    if (a < 0) throw DomainError("negative moment exponent");
    if (a % 2) return 0.0;
    lg += std::lgamma(0.5 * (a + 1));
    total += a;
  }
  return 2.0 * std::exp(lg - std::lgamma(0.5 * (total + m)));
}

namespace {

std::size_t binom(int n, int r) {
  if (r < 0 || n < r) return 0;
  std::size_t b = 1;
  for (int i = 1; i <= r; ++i) b = b * static_cast<std::size_t>(n - r + i) / static_cast<std::size_t>(i);
  return b;
}

void enumerate(int m, int d, int pos, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (pos == m - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int a = d; a >= 0; --a) {
    cur[pos] = a;
    enumerate(m, d - a, pos + 1, cur, out);
  }
}

Exponents u_exponents(int m, const std::vector<int>& e) {
  Exponents ex{};
  for (int i = 0; i < m; ++i) ex[m + i] = static_cast<std::uint8_t>(e[i]);
  return ex;
}

std::vector<int> u_block(int m, const Exponents& e) {
  std::vector<int> r(m);
  for (int i = 0; i < m; ++i) r[i] = e[m + i];
  return r;
}

}  // namespace

std::size_t monomial_count(int m, int d) { return d < 0 ? 0 : binom(m + d - 1, m - 1); }

std::size_t harmonic_dimension(int m, int k) { return monomial_count(m, k) - monomial_count(m, k - 2); }

std::vector<std::vector<int>> monomial_exponents(int m, int d) {
  std::vector<std::vector<int>> out;
  if (d < 0) return out;
  std::vector<int> cur(m, 0);
  enumerate(m, d, 0, cur, out);
  return out;
}

double sphere_inner_product(const MultiPoly& p, const MultiPoly& q) {
  int m = p.dim();
  if (q.dim() != m) throw DimensionMismatch("inner product of polynomials of different dimension");
  if (p.degree(Var::X) > 0 || q.degree(Var::X) > 0) throw DomainError("sphere inner product needs polynomials in u only");
  double s = 0.0;
  std::vector<int> a(m);
  for (const auto& [ep, cp] : p.terms())
    for (const auto& [eq, cq] : q.terms()) {
      for (int i = 0; i < m; ++i) a[i] = ep[m + i] + eq[m + i];
      s += cp * cq * sphere_moment(m, a);
    }
  return s;
}

HarmonicBasis::HarmonicBasis(int m, int k, BasisBudget budget) : m_(m), k_(k) {
  if (m < 2 || m > kMaxDim) throw DomainError("harmonic basis needs 2 <= m <= 16");
  if (k < 0) throw DomainError("harmonic degree must be non-negative");
  if (monomial_count(m, k) > budget.max_monomials)
    throw BudgetExceeded("H_k basis for m=" + std::to_string(m) + ", k=" + std::to_string(k) + " needs " +
                         std::to_string(monomial_count(m, k)) + " monomials, budget is " + std::to_string(budget.max_monomials));

  monomials_ = monomial_exponents(m, k);
  auto lower = monomial_exponents(m, k - 2);
  std::map<std::vector<int>, std::size_t> row_of;
  for (std::size_t r = 0; r < lower.size(); ++r) row_of[lower[r]] = r;

  const std::size_t ncol = monomials_.size(), nrow = lower.size();
  std::vector<std::vector<Rational>> L(nrow, std::vector<Rational>(ncol));
  for (std::size_t c = 0; c < ncol; ++c)
    for (int i = 0; i < m; ++i) {
      int a = monomials_[c][i];
      if (a < 2) continue;
      auto e = monomials_[c];
      e[i] -= 2;
      L[row_of.at(e)][c] += a * (a - 1);
    }

  // Reduced row echelon form over the rationals.
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncol && r < nrow; ++c) {
    std::size_t p = r;
    while (p < nrow && L[p][c] == 0) ++p;
    if (p == nrow) continue;
    std::swap(L[p], L[r]);
    Rational inv = 1 / L[r][c];
    for (auto& v : L[r]) v *= inv;
    for (std::size_t q = 0; q < nrow; ++q) {
      if (q == r || L[q][c] == 0) continue;
      Rational f = L[q][c];
      for (std::size_t j = c; j < ncol; ++j) L[q][j] -= f * L[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(ncol, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < ncol; ++f) {
    if (is_pivot[f]) continue;
    RationalPoly g(m);
    g.add_term(u_exponents(m, monomials_[f]), Rational(1));
    for (std::size_t row = 0; row < pivots.size(); ++row)
      if (L[row][f] != 0) g.add_term(u_exponents(m, monomials_[pivots[row]]), -L[row][f]);
    generators_.push_back(std::move(g));
  }
  if (generators_.size() != harmonic_dimension(m, k))
    throw Error("harmonic null space has rank " + std::to_string(generators_.size()) + ", expected " +
                std::to_string(harmonic_dimension(m, k)));

  const std::size_t t = generators_.size();
  std::map<std::vector<int>, std::size_t> col_of;
  for (std::size_t c = 0; c < ncol; ++c) col_of[monomials_[c]] = c;
  Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(ncol));
  for (std::size_t j = 0; j < t; ++j)
    for (const auto& [e, c] : generators_[j].terms()) gen(j, col_of.at(u_block(m, e))) = static_cast<double>(c);

  Eigen::MatrixXd moments(ncol, ncol);
  std::vector<int> a(m);
  for (std::size_t p = 0; p < ncol; ++p)
    for (std::size_t q = p; q < ncol; ++q) {
      for (int i = 0; i < m; ++i) a[i] = monomials_[p][i] + monomials_[q][i];
      moments(p, q) = moments(q, p) = sphere_moment(m, a);
    }

  // Two Cholesky passes: the second mops up rounding left by the first.
  coef_ = gen;
  for (int pass = 0; pass < 2; ++pass) {
    Eigen::MatrixXd G = coef_ * moments * coef_.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success) throw Error("Gram matrix of harmonic generators is not positive definite");
    coef_ = llt.matrixL().solve(coef_);
  }

  for (std::size_t j = 0; j < t; ++j) {
    MultiPoly p(m);
    for (std::size_t c = 0; c < ncol; ++c) p.add_term(u_exponents(m, monomials_[c]), coef_(j, c));
    elements_.push_back(std::move(p));
  }
}

Eigen::MatrixXd HarmonicBasis::gram() const {
  const auto t = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd G(t, t);
  for (Eigen::Index i = 0; i < t; ++i)
    for (Eigen::Index j = i; j < t; ++j) G(i, j) = G(j, i) = sphere_inner_product(elements_[i], elements_[j]);
  return G;
}

void HarmonicBasis::monomial_values(const Vec& u, double* out) const {
  if (u.dim() != m_) throw DimensionMismatch("basis evaluation point has wrong dimension");
  if (k_ > 31) throw DomainError("harmonic degree too large for evaluation table");
  double pw[kMaxDim][32];
  for (int i = 0; i < m_; ++i) {
    pw[i][0] = 1.0;
    for (int p = 1; p <= k_; ++p) pw[i][p] = pw[i][p - 1] * u[i];
  }
  for (std::size_t c = 0; c < monomials_.size(); ++c) {
    double v = 1.0;
    const auto& e = monomials_[c];
    for (int i = 0; i < m_; ++i) v *= pw[i][e[i]];
    out[c] = v;
  }
}

void HarmonicBasis::evaluate(const Vec& u, double* out) const {
  const auto n = static_cast<Eigen::Index>(monomials_.size());
  double mono_stack[256];
  std::vector<double> mono_heap;
  double* mono = mono_stack;
  if (n > 256) {
    mono_heap.resize(static_cast<std::size_t>(n));
    mono = mono_heap.data();
  }
  monomial_values(u, mono);
  for (Eigen::Index j = 0; j < coef_.rows(); ++j) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) s += coef_(j, c) * mono[c];
    out[j] = s;
  }
}

std::vector<double> HarmonicBasis::evaluate(const Vec& u) const {
  std::vector<double> out(size());
  evaluate(u, out.data());
  return out;
}

double HarmonicBasis::combination(const std::vector<double>& coefficients, const Vec& u) const {
  if (coefficients.size() != size()) throw DimensionMismatch("coefficient vector length differs from dim H_k");
  double vals[512];
  std::vector<double> heap;
  double* v = vals;
  if (size() > 512) {
    heap.resize(size());
    v = heap.data();
  }
  evaluate(u, v);
  double s = 0.0;
  for (std::size_t j = 0; j < size(); ++j) s += coefficients[j] * v[j];
  return s;
}

std::shared_ptr<const HarmonicBasis> shared_basis(int m, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const HarmonicBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, k}];
  if (!slot) slot = std::make_shared<const HarmonicBasis>(m, k);
  return slot;
}

Expansion expand_in_basis(const MultiPoly& p, const HarmonicBasis& basis) {
  if (p.dim() != basis.m()) throw DimensionMismatch("polynomial and basis dimensions differ");
  Expansion ex;
  ex.coefficients.resize(basis.size());
  MultiPoly rest = p;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    ex.coefficients[j] = sphere_inner_product(p, basis.element(j));
    rest -= basis.element(j) * ex.coefficients[j];
  }
  for (const auto& [e, c] : rest.terms()) ex.residual = std::max(ex.residual, std::abs(c));
  return ex;
}

}  // namespace bosonic
