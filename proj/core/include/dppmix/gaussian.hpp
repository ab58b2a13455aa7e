#pragma once

#include <Eigen/Dense>

#include "dppmix/subset.hpp"

namespace dppmix {

/// Conditional second-moment statistics of a Gaussian vector with covariance
/// L, conditioned on the coordinates in S. All functions require L positive
/// definite on the indexed block and i, j outside S.

/// Var(X_i | X_S) = L(i,i) - L(i,S) L_S^{-1} L(S,i).
double conditional_variance(const Eigen::MatrixXd& L, int i, Subset S);

/// Cov(X_i, X_j | X_S).
double conditional_covariance(const Eigen::MatrixXd& L, int i, int j, Subset S);

/// rho(i, j | S) = Cov(i,j|S) / sqrt(Var(i|S) Var(j|S)).
double conditional_correlation(const Eigen::MatrixXd& L, int i, int j, Subset S);

/// I(X_i; X_j | X_S) = -0.5 * log(1 - rho(i,j|S)^2).
double conditional_mutual_information(const Eigen::MatrixXd& L, int i, int j, Subset S);

/// One factorization serving all of the above for a fixed (i, j, S) query.
struct ConditionalPairStats {
  double var_i;
  double var_j;
  double cov;
  double rho;
};
ConditionalPairStats conditional_pair_stats(const Eigen::MatrixXd& L, int i, int j, Subset S);

}  // namespace dppmix
