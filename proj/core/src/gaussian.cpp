#include "dppmix/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dppmix {

namespace {

void check_query(const Eigen::MatrixXd& L, int i, int j, Subset S) {
  if (L.rows() != L.cols()) throw std::invalid_argument("conditional stats: L must be square");
  const int n = static_cast<int>(L.rows());
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw std::invalid_argument("conditional stats: index out of range");
  if (S.bits() & ~full_mask(n))
    throw std::invalid_argument("conditional stats: S outside the index range");
  if (S.contains(i) || S.contains(j))
    throw std::invalid_argument("conditional stats: conditioned index queried");
}

// Solves L_S y = L(S, col) for the given columns; returns Var/Cov residuals.
// Computed with (i, j) in canonical order so that stats(i,j) == stats(j,i)
// bit for bit.
ConditionalPairStats pair_stats_impl(const Eigen::MatrixXd& L, int a, int b, Subset S) {
  const std::vector<int> idx = S.elements();
  const int m = static_cast<int>(idx.size());
  if (m == 0) {
    ConditionalPairStats st{L(a, a), L(b, b), L(a, b), 0.0};
    if (!(st.var_i > 0.0) || !(st.var_j > 0.0))
      throw std::domain_error("conditional stats: nonpositive variance (L not PD)");
    st.rho = st.cov / std::sqrt(st.var_i * st.var_j);
    return st;
  }

  Eigen::MatrixXd block(m, m);
  Eigen::MatrixXd rhs(m, 2);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) block(r, c) = L(idx[r], idx[c]);
    rhs(r, 0) = L(idx[r], a);
    rhs(r, 1) = L(idx[r], b);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(block);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("conditional stats: L_S is not positive definite");
  const Eigen::MatrixXd sol = llt.solve(rhs);

  ConditionalPairStats st{};
  st.var_i = L(a, a) - rhs.col(0).dot(sol.col(0));
  st.var_j = L(b, b) - rhs.col(1).dot(sol.col(1));
  st.cov = L(a, b) - rhs.col(0).dot(sol.col(1));
  if (!(st.var_i > 0.0) || !(st.var_j > 0.0))
    throw std::domain_error("conditional stats: nonpositive conditional variance");
  st.rho = st.cov / std::sqrt(st.var_i * st.var_j);
  return st;
}

}  // namespace

ConditionalPairStats conditional_pair_stats(const Eigen::MatrixXd& L, int i, int j, Subset S) {
  check_query(L, i, j, S);
  if (i == j) throw std::invalid_argument("conditional_pair_stats: indices must differ");
  if (i <= j) {
    return pair_stats_impl(L, i, j, S);
  }
  ConditionalPairStats st = pair_stats_impl(L, j, i, S);
  std::swap(st.var_i, st.var_j);
  return st;
}

double conditional_variance(const Eigen::MatrixXd& L, int i, Subset S) {
  check_query(L, i, i, S);
  const ConditionalPairStats st = pair_stats_impl(L, i, i, S);
  return st.var_i;
}

double conditional_covariance(const Eigen::MatrixXd& L, int i, int j, Subset S) {
  if (i == j) return conditional_variance(L, i, S);
  return conditional_pair_stats(L, i, j, S).cov;
}

double conditional_correlation(const Eigen::MatrixXd& L, int i, int j, Subset S) {
  if (i == j) return 1.0;
  return conditional_pair_stats(L, i, j, S).rho;
}

double conditional_mutual_information(const Eigen::MatrixXd& L, int i, int j, Subset S) {
  const double rho = conditional_correlation(L, i, j, S);
  const double one_minus = 1.0 - rho * rho;
  if (!(one_minus > 0.0))
    throw std::domain_error("conditional_mutual_information: |rho| >= 1");
  return -0.5 * std::log(one_minus);
}

}  // namespace dppmix
