#include "bess/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bess {

std::size_t BoundedLp::add_variable(double lo, double hi, double cost) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (auto& r : rows) r.push_back(0.0);
  return objective.size() - 1;
}

std::size_t BoundedLp::add_row(const std::vector<std::pair<std::size_t, double>>& terms,
                               double b) {
  std::vector<double> row(num_variables(), 0.0);
  for (const auto& [j, a] : terms) {
    if (j >= row.size()) throw std::invalid_argument("BoundedLp::add_row: column out of range");
    row[j] += a;
  }
  rows.push_back(std::move(row));
  rhs.push_back(b);
  return rows.size() - 1;
}

void BoundedLp::check() const {
  const std::size_t n = num_variables();
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("BoundedLp: bound vectors do not match objective length");
  if (rhs.size() != rows.size())
    throw std::invalid_argument("BoundedLp: rhs length does not match row count");
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("BoundedLp: row length mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
      throw std::invalid_argument("BoundedLp: variable " + std::to_string(j) +
                                  " has lower > upper");
    if (lower[j] == kInf || upper[j] == -kInf)
      throw std::invalid_argument("BoundedLp: variable " + std::to_string(j) +
                                  " has an empty domain");
    if (!std::isfinite(objective[j]))
      throw std::invalid_argument("BoundedLp: non-finite objective coefficient");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(rhs[i])) throw std::invalid_argument("BoundedLp: non-finite rhs");
    for (double a : rows[i])
      if (!std::isfinite(a)) throw std::invalid_argument("BoundedLp: non-finite coefficient");
  }
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

IterationLimitError::IterationLimitError(std::size_t iterations)
    : std::runtime_error("simplex: iteration limit exceeded after " +
                         std::to_string(iterations) + " iterations"),
      iterations_(iterations) {}

namespace {

// Original variable x = offset + sum(sign * y[col]) over its internal columns,
// every internal column living in [0, cap].
struct ColumnMap {
  double offset = 0.0;
  std::vector<std::pair<std::size_t, double>> parts;
};

class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n_struct, const SimplexOptions& opt)
      : m_(m), n_struct_(n_struct), n_(n_struct + m), opt_(opt),
        t_(m, std::vector<double>(n_struct + m, 0.0)),
        cap_(n_struct + m, kInf), at_upper_(n_struct + m, false),
        beta_(m, 0.0), basis_(m), in_basis_(n_struct + m, -1) {}

  std::size_t m_, n_struct_, n_;
  const SimplexOptions& opt_;
  std::vector<std::vector<double>> t_;  // B^-1 A over structural + artificial columns
  std::vector<double> b_;
  std::vector<double> cap_;
  std::vector<bool> at_upper_;
  std::vector<double> beta_;
  std::vector<std::size_t> basis_;
  std::vector<long> in_basis_;
  std::size_t iterations_ = 0;

  double nonbasic_value(std::size_t j) const { return at_upper_[j] ? cap_[j] : 0.0; }

  // Recomputes basic values from B^-1 (the artificial block of the tableau).
  void refresh(const std::vector<std::vector<double>>& a) {
    std::vector<double> r(b_);
    for (std::size_t j = 0; j < n_; ++j) {
      if (in_basis_[j] >= 0) continue;
      const double v = nonbasic_value(j);
      if (v == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) r[i] -= a[i][j] * v;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < m_; ++k) s += t_[i][n_struct_ + k] * r[k];
      beta_[i] = s;
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    const double p = t_[r][q];
    for (double& v : t_[r]) v /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const double f = t_[i][q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) t_[i][j] -= f * t_[r][j];
      t_[i][q] = 0.0;
    }
    in_basis_[basis_[r]] = -1;
    basis_[r] = q;
    in_basis_[q] = static_cast<long>(r);
  }

  // Runs primal simplex maximizing cost over columns allowed by `eligible`.
  // Returns false when unbounded.
  bool optimize(const std::vector<double>& cost, const std::vector<bool>& eligible) {
    std::vector<double> d(n_);
    for (;;) {
      if (iterations_ >= opt_.max_iterations) throw IterationLimitError(iterations_);
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis_[j] >= 0) { d[j] = 0.0; continue; }
        double z = 0.0;
        for (std::size_t i = 0; i < m_; ++i) z += cost[basis_[i]] * t_[i][j];
        d[j] = cost[j] - z;
      }
      // Bland: lowest-index improving column.
      long q = -1;
      double dir = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (in_basis_[j] >= 0 || !eligible[j] || cap_[j] == 0.0) continue;
        if (!at_upper_[j] && d[j] > opt_.optimality_tol) { q = static_cast<long>(j); dir = 1.0; break; }
        if (at_upper_[j] && d[j] < -opt_.optimality_tol) { q = static_cast<long>(j); dir = -1.0; break; }
      }
      if (q < 0) return true;
      const std::size_t col = static_cast<std::size_t>(q);

      double best = kInf;
      long leave = -1;
      bool leave_to_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const double alpha = dir * t_[i][col];
        double lim;
        bool to_upper;
        if (alpha > opt_.feasibility_tol) {
          lim = std::max(0.0, beta_[i]) / alpha;
          to_upper = false;
        } else if (alpha < -opt_.feasibility_tol && std::isfinite(cap_[basis_[i]])) {
          lim = std::max(0.0, cap_[basis_[i]] - beta_[i]) / -alpha;
          to_upper = true;
        } else {
          continue;
        }
        const double tie = 1e-12 * std::max(1.0, std::fabs(lim));
        if (leave < 0 || lim < best - tie ||
            (lim <= best + tie && basis_[i] < basis_[static_cast<std::size_t>(leave)])) {
          best = lim;
          leave = static_cast<long>(i);
          leave_to_upper = to_upper;
        }
      }
      double theta = best;
      if (cap_[col] < best - 1e-12 * std::max(1.0, best)) {
        theta = cap_[col];
        leave = -1;
      }
      if (!std::isfinite(theta)) return false;
      ++iterations_;

      for (std::size_t i = 0; i < m_; ++i) beta_[i] -= dir * theta * t_[i][col];
      if (leave < 0) {
        at_upper_[col] = !at_upper_[col];
        continue;
      }
      const std::size_t r = static_cast<std::size_t>(leave);
      const std::size_t out = basis_[r];
      const double entering_value = at_upper_[col] ? cap_[col] - theta : theta;
      at_upper_[out] = leave_to_upper;
      at_upper_[col] = false;
      pivot(r, col);
      beta_[r] = entering_value;
    }
  }
};

}  // namespace

LpResult solve_bounded_lp(const BoundedLp& lp, const SimplexOptions& options) {
  lp.check();
  const std::size_t n_orig = lp.num_variables();
  const std::size_t m = lp.num_rows();

  // Shift/flip/split every variable into nonnegative internal columns.
  std::vector<ColumnMap> map(n_orig);
  std::vector<double> caps;
  for (std::size_t j = 0; j < n_orig; ++j) {
    const double lo = lp.lower[j], hi = lp.upper[j];
    if (std::isfinite(lo)) {
      map[j].offset = lo;
      map[j].parts.push_back({caps.size(), 1.0});
      caps.push_back(hi - lo);
    } else if (std::isfinite(hi)) {
      map[j].offset = hi;
      map[j].parts.push_back({caps.size(), -1.0});
      caps.push_back(kInf);
    } else {
      map[j].parts.push_back({caps.size(), 1.0});
      caps.push_back(kInf);
      map[j].parts.push_back({caps.size(), -1.0});
      caps.push_back(kInf);
    }
  }
  const std::size_t n_struct = caps.size();
  const std::size_t n = n_struct + m;

  std::vector<std::vector<double>> a(m, std::vector<double>(n, 0.0));
  std::vector<double> b(m);
  std::vector<double> cost2(n, 0.0);
  for (std::size_t j = 0; j < n_orig; ++j)
    for (const auto& [col, sign] : map[j].parts) cost2[col] = sign * lp.objective[j];
  for (std::size_t i = 0; i < m; ++i) {
    double bi = lp.rhs[i];
    for (std::size_t j = 0; j < n_orig; ++j) {
      const double aij = lp.rows[i][j];
      if (aij == 0.0) continue;
      bi -= aij * map[j].offset;
      for (const auto& [col, sign] : map[j].parts) a[i][col] = aij * sign;
    }
    const double s = bi < 0.0 ? -1.0 : 1.0;
    for (std::size_t col = 0; col < n_struct; ++col) a[i][col] *= s;
    b[i] = s * bi;
    a[i][n_struct + i] = 1.0;
  }

  Tableau tab(m, n_struct, options);
  tab.b_ = b;
  tab.t_ = a;
  for (std::size_t j = 0; j < n_struct; ++j) tab.cap_[j] = caps[j];
  for (std::size_t i = 0; i < m; ++i) {
    tab.basis_[i] = n_struct + i;
    tab.in_basis_[n_struct + i] = static_cast<long>(i);
    tab.beta_[i] = b[i];
  }

  double bscale = 1.0;
  for (double v : b) bscale = std::max(bscale, std::fabs(v));

  LpResult result;
  // Phase 1: drive artificials to zero.
  std::vector<double> cost1(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) cost1[n_struct + i] = -1.0;
  std::vector<bool> eligible1(n, true);
  tab.optimize(cost1, eligible1);
  tab.refresh(a);
  double infeas = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis_[i] >= n_struct) infeas += std::fabs(tab.beta_[i]);
  if (infeas > options.feasibility_tol * bscale) {
    result.status = LpStatus::infeasible;
    result.iterations = tab.iterations_;
    return result;
  }
  // Pivot remaining zero-level artificials out where a structural column allows.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis_[i] < n_struct) continue;
    for (std::size_t j = 0; j < n_struct; ++j) {
      if (tab.in_basis_[j] >= 0) continue;
      if (std::fabs(tab.t_[i][j]) > 1e-7) {
        const double v = tab.nonbasic_value(j);
        tab.at_upper_[j] = false;
        tab.pivot(i, j);
        tab.beta_[i] = v;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    tab.cap_[n_struct + i] = 0.0;
    if (tab.in_basis_[n_struct + i] < 0) tab.at_upper_[n_struct + i] = false;
  }
  tab.refresh(a);

  // Phase 2.
  std::vector<bool> eligible2(n, true);
  for (std::size_t i = 0; i < m; ++i) eligible2[n_struct + i] = false;
  const bool bounded = tab.optimize(cost2, eligible2);
  result.iterations = tab.iterations_;
  if (!bounded) {
    result.status = LpStatus::unbounded;
    return result;
  }
  tab.refresh(a);

  std::vector<double> y(n_struct, 0.0);
  for (std::size_t j = 0; j < n_struct; ++j) {
    if (tab.in_basis_[j] >= 0) {
      double v = tab.beta_[static_cast<std::size_t>(tab.in_basis_[j])];
      // Snap round-off back into the box.
      v = std::max(0.0, v);
      if (std::isfinite(caps[j])) v = std::min(caps[j], v);
      y[j] = v;
    } else {
      y[j] = tab.nonbasic_value(j);
    }
  }
  result.x.assign(n_orig, 0.0);
  for (std::size_t j = 0; j < n_orig; ++j) {
    double v = map[j].offset;
    for (const auto& [col, sign] : map[j].parts) v += sign * y[col];
    result.x[j] = v;
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n_orig; ++j) result.objective += lp.objective[j] * result.x[j];
  result.status = LpStatus::optimal;
  return result;
}

}  // namespace bess
