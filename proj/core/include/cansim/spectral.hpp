#pragma once

#include <Eigen/Dense>

#include <vector>

#include "cansim/signed_graph.hpp"

namespace cansim {

/// Positive-definiteness threshold shared by every certificate in this
/// module, and the relative rank tolerance for null-space extraction.
/// Chosen to separate genuine zero modes from conditioning noise at the
/// problem sizes this toolkit targets (N <= 32).
inline constexpr double kTolPd = 1e-9;
inline constexpr double kTolRank = 1e-9;

/// Positive left null vector p of M(L) with p^T 1 = 1.
struct PerronData {
  Eigen::VectorXd p;
  Eigen::MatrixXd P() const { return Eigen::MatrixXd(p.asDiagonal()); }
};

/// Computes the Perron-like left vector of the comparison matrix of a
/// strongly connected component's Laplacian: p^T M(L) = 0, p > 0, p^T 1 = 1.
/// Strong connectivity of the off-diagonal pattern is checked; the null
/// space must be one-dimensional at relative tolerance kTolRank.
PerronData left_positive_vector(const Eigen::MatrixXd& laplacian);

/// a(L) = min { x^T Lbar x / x^T P x : x != 0, x^T G p = 0 } with
/// Lbar = (P L + L^T P) / 2. Requires a balanced strongly connected
/// component; the result is positive (anything else is reported as a
/// NumericalError because it signals an inconsistent upstream analysis).
double balance_gap(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& gauge,
                   const PerronData& perron);

/// Positive diagonal D (max entry 1) with D A + A^T D positive definite.
struct DiagonalStabilizer {
  Eigen::VectorXd diagonal;
  double lambda_min = 0.0;  // of D A + A^T D after normalization
};

/// Searches for a diagonal stabilizer by coordinate ascent on the smallest
/// eigenvalue, parameterized in log space so D stays positive, with seeded
/// random restarts. Eligible inputs are (a) matrices whose comparison matrix
/// has spectrum strictly in the right half plane and positive diagonal, or
/// (b) Laplacian-like matrices (zero comparison row sums) that are
/// themselves positive stable. The returned certificate is re-validated;
/// exhausting the budget raises NumericalError instead of silently passing.
DiagonalStabilizer diagonal_stabilizer(const Eigen::MatrixXd& a, unsigned seed = 0);

/// True if the eligibility precondition of diagonal_stabilizer holds.
bool stabilizer_eligible(const Eigen::MatrixXd& a);

/// Per-CSC gauge vectors and the follower combination weights
/// varpi_k = -L_F^{-1} L_FLk G_k 1. Unbalanced CSCs contribute G_k = I
/// (their limit state is zero). Column k of `varpi` belongs to CSC k; in the
/// quasi-strong case (one CSC) the single column is the zeta vector.
struct ContainmentWeights {
  std::vector<Eigen::VectorXd> csc_gauges;
  std::vector<bool> csc_balanced;
  Eigen::MatrixXd varpi;  // (N-K) x m
  Eigen::VectorXd zeta() const;
};

ContainmentWeights containment_weights(const LaplacianBlocks& blocks,
                                       const std::vector<BalanceVerdict>& csc_balance);

struct PositiveDefiniteness {
  bool positive_definite = false;
  double lambda_min = 0.0;
};

/// Symmetric eigenvalue test: positive definite iff lambda_min > kTolPd.
/// Inputs asymmetric beyond 1e-10 (relative to the largest entry) are
/// rejected.
PositiveDefiniteness is_positive_definite(const Eigen::MatrixXd& s);

/// Block test for [[s1, s2^T], [s2, s3]] via the Schur complement
/// s1 - s2^T s3^{-1} s2 with s3 positive definite.
PositiveDefiniteness schur_positive_definite(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2,
                                             const Eigen::MatrixXd& s3);

/// Quasi-strong coupling certificate. For a balanced leader block the
/// assembled matrix is
///   [ 2 a(L_L) Xi_L      rho L_FL^T Xi_F ]
///   [ rho Xi_F L_FL      rho S_F         ]
/// with S_F = Xi_F L_F + L_F^T Xi_F and rho picked at half the admissible
/// upper bound 2 a(L_L) lambda_min(Xi_L) / lambda_max(L_FL^T Xi_F S_F^{-1}
/// Xi_F L_FL). For an unbalanced leader block the top-left block is the
/// stabilized form Xi~_L L_L + L_L^T Xi~_L and the bound uses its smallest
/// eigenvalue instead.
struct Certificate {
  bool leader_balanced = false;
  double coupling = 0.0;        // rho actually used (half the bound)
  double coupling_bound = 0.0;  // admissible upper bound
  Eigen::MatrixXd matrix;       // assembled symmetric certificate matrix
  double lambda_min = 0.0;
};

Certificate quasi_strong_certificate(const LaplacianBlocks& blocks,
                                     const BalanceVerdict& leader_balance,
                                     const PerronData& leader_perron, unsigned seed = 0);

}  // namespace cansim
