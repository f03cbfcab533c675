#pragma once

// Brute-force references used only by the tests. They share no code with the
// simplex solver: every candidate vertex is found by solving a square system
// with Eigen and checked for feasibility directly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bess/energy_flow.hpp"
#include "bess/lp.hpp"

namespace oracle {

// Calls fn(subset) for every k-subset of {0..n-1}.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// max c'x s.t. G x <= h, enumerating every vertex of a bounded polytope.
inline std::optional<double> max_over_vertices(const Eigen::MatrixXd& G, const Eigen::VectorXd& h,
                                               const Eigen::VectorXd& c) {
  const auto m = static_cast<std::size_t>(G.rows());
  const auto d = static_cast<std::size_t>(G.cols());
  std::optional<double> best;
  for_each_subset(m, d, [&](const std::vector<std::size_t>& act) {
    Eigen::MatrixXd A(d, d);
    Eigen::VectorXd b(d);
    for (std::size_t r = 0; r < d; ++r) {
      A.row(r) = G.row(act[r]);
      b(r) = h(act[r]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() < static_cast<Eigen::Index>(d)) return;
    const Eigen::VectorXd x = lu.solve(b);
    const Eigen::VectorXd slack = h - G * x;
    const double scale = 1.0 + h.cwiseAbs().maxCoeff();
    if (slack.minCoeff() < -1e-9 * scale) return;
    const double v = c.dot(x);
    if (!best || v > *best) best = v;
  });
  return best;
}

// Maximum string output of a series-string network. Infinite caps are
// replaced by the total capacity, which can never bind.
inline double max_output(const bess::FlowNetwork& net) {
  const std::size_t n = net.batteries.size();
  const std::size_t m = net.converter_edges.size();
  const std::size_t d = 1 + m;
  double total = 0.0;
  for (const auto& b : net.batteries) total += b.capacity;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n + 1 + 2 * m, d);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n + 1 + 2 * m);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  for (std::size_t j = 0; j < n; ++j) {
    G(j, 0) = net.batteries[j].voltage;
    h(j) = net.batteries[j].capacity;
    c(0) += net.batteries[j].voltage;
  }
  G(n, 0) = -1.0;
  for (std::size_t e = 0; e < m; ++e) {
    const auto& edge = net.converter_edges[e];
    G(edge.from_battery, 1 + e) += 1.0;
    G(edge.to_battery, 1 + e) -= 1.0;
    const double cap = std::isfinite(edge.energy_cap) ? edge.energy_cap : total;
    G(n + 1 + 2 * e, 1 + e) = 1.0;
    h(n + 1 + 2 * e) = cap;
    G(n + 2 + 2 * e, 1 + e) = -1.0;
    h(n + 2 + 2 * e) = cap;
  }
  return max_over_vertices(G, h, c).value_or(-1.0);
}

// Equality-form LP with finite bounds: basic solutions come from choosing
// rows() basic columns and fixing every other column at a bound.
inline std::optional<double> max_bounded_lp(const bess::BoundedLp& lp) {
  const std::size_t n = lp.num_variables();
  const std::size_t k = lp.num_rows();
  Eigen::MatrixXd A(k, n);
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < n; ++j) A(r, j) = lp.rows[r][j];
  Eigen::VectorXd b(k);
  for (std::size_t r = 0; r < k; ++r) b(r) = lp.rhs[r];
  std::optional<double> best;
  for_each_subset(n, k, [&](const std::vector<std::size_t>& basic) {
    std::vector<std::size_t> nonbasic;
    for (std::size_t j = 0, bi = 0; j < n; ++j) {
      if (bi < k && basic[bi] == j) {
        ++bi;
        continue;
      }
      nonbasic.push_back(j);
    }
    Eigen::MatrixXd B(k, k);
    for (std::size_t i = 0; i < k; ++i) B.col(i) = A.col(basic[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (lu.rank() < static_cast<Eigen::Index>(k)) return;
    const std::size_t free_count = nonbasic.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << free_count); ++mask) {
      std::vector<double> x(n, 0.0);
      Eigen::VectorXd rhs = b;
      for (std::size_t t = 0; t < free_count; ++t) {
        const std::size_t j = nonbasic[t];
        x[j] = (mask >> t) & 1 ? lp.upper[j] : lp.lower[j];
        rhs -= A.col(j) * x[j];
      }
      const Eigen::VectorXd xb = lu.solve(rhs);
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) {
        const std::size_t j = basic[i];
        x[j] = xb(i);
        const double tol = 1e-9 * (1.0 + std::fabs(x[j]));
        ok = x[j] >= lp.lower[j] - tol && x[j] <= lp.upper[j] + tol;
      }
      if (!ok) continue;
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * x[j];
      if (!best || v > *best) best = v;
    }
  });
  return best;
}

// Random series-string network with n batteries and m distinct edges.
inline bess::FlowNetwork random_network(std::mt19937_64& rng, std::size_t n, std::size_t m,
                                        bool equal_voltage = true) {
  std::uniform_real_distribution<double> cap(0.0, 50.0), volt(40.0, 60.0), ecap(0.0, 15.0);
  bess::FlowNetwork net;
  net.horizon = 1.0;
  for (std::size_t j = 0; j < n; ++j)
    net.batteries.push_back({j, cap(rng), equal_voltage ? 50.0 : volt(rng)});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  std::shuffle(pairs.begin(), pairs.end(), rng);
  m = std::min(m, pairs.size());
  for (std::size_t e = 0; e < m; ++e) {
    auto [a, b] = pairs[e];
    if (rng() & 1) std::swap(a, b);
    net.converter_edges.push_back({a, b, ecap(rng), 1});
  }
  return net;
}

}  // namespace oracle
