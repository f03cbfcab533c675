#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bess {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// maximize c'x  subject to  A x = b,  lower <= x <= upper.
/// Bounds may be infinite. Inequalities are expressed with explicit slack
/// columns.
struct BoundedLp {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::vector<double>> rows;  // dense, one entry per variable
  std::vector<double> rhs;

  std::size_t add_variable(double lo, double hi, double cost = 0.0);
  /// Appends an equality row sum(coef * x[index]) == rhs. Columns added later
  /// get zero coefficients in this row.
  std::size_t add_row(const std::vector<std::pair<std::size_t, double>>& terms, double rhs);

  std::size_t num_variables() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }
  /// Throws std::invalid_argument on inconsistent dimensions or bounds.
  void check() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char* to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  std::size_t max_iterations = 10000;
};

class IterationLimitError : public std::runtime_error {
 public:
  explicit IterationLimitError(std::size_t iterations);
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  std::size_t iterations_;
};

/// Two-phase bounded-variable primal simplex, Bland's rule for both the
/// entering and the leaving choice.
LpResult solve_bounded_lp(const BoundedLp& lp, const SimplexOptions& options = {});

}  // namespace bess
