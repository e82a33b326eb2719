#include "cansim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace cansim {

namespace {

// Strong connectivity of the sparsity pattern {l -> k : L(k,l) != 0}.
bool pattern_strongly_connected(const Eigen::MatrixXd& l) {
  const int n = static_cast<int>(l.rows());
  if (n <= 1) return true;
  auto reach_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < n; ++w) {
        double entry = transpose ? l(v, w) : l(w, v);
        if (w != v && entry != 0.0 && !seen[w]) {
          seen[w] = true;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

double lambda_min_sym(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double lambda_max_sym(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double min_real_eigenvalue(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  return es.eigenvalues().real().minCoeff();
}

}  // namespace

PerronData left_positive_vector(const Eigen::MatrixXd& laplacian) {
  const int n = static_cast<int>(laplacian.rows());
  if (n != laplacian.cols()) throw ValidationError("left_positive_vector: matrix must be square");
  if (!pattern_strongly_connected(laplacian))
    throw ValidationError("left_positive_vector: component is not strongly connected");

  PerronData out;
  if (n == 1) {
    out.p = Eigen::VectorXd::Ones(1);
    return out;
  }

  const Eigen::MatrixXd m = comparison_matrix(laplacian);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.transpose(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = sv(0);
  if (scale <= 0.0) throw NumericalError("left_positive_vector: zero matrix");
  if (sv(n - 1) > kTolRank * scale)
    throw NumericalError("left_positive_vector: comparison matrix has no null space");
  if (n >= 2 && sv(n - 2) <= kTolRank * scale)
    throw NumericalError("left_positive_vector: null space dimension exceeds one");

  Eigen::VectorXd p = svd.matrixV().col(n - 1);
  if (p.sum() < 0.0) p = -p;
  if (p.minCoeff() <= 0.0)
    throw NumericalError("left_positive_vector: null vector is not entrywise positive");
  p /= p.sum();

  const double residual = (p.transpose() * m).cwiseAbs().maxCoeff();
  if (residual > 1e-10)
    throw NumericalError("left_positive_vector: residual above tolerance");
  out.p = p;
  return out;
}

double balance_gap(const Eigen::MatrixXd& laplacian, const Eigen::VectorXd& gauge,
                   const PerronData& perron) {
  const int n = static_cast<int>(laplacian.rows());
  if (n < 2) throw ValidationError("balance_gap: needs at least two nodes");
  if (gauge.size() != n || perron.p.size() != n)
    throw ValidationError("balance_gap: dimension mismatch");

  const Eigen::MatrixXd p_diag = perron.P();
  const Eigen::MatrixXd lbar =
      0.5 * (p_diag * laplacian + laplacian.transpose() * p_diag);

  // Orthonormal basis of the subspace { x : x^T (G p) = 0 }.
  Eigen::VectorXd constraint = gauge.cwiseProduct(perron.p);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraint);
  Eigen::MatrixXd q_full = qr.householderQ();
  Eigen::MatrixXd basis = q_full.rightCols(n - 1);

  Eigen::MatrixXd a = basis.transpose() * lbar * basis;
  a = 0.5 * (a + a.transpose());
  Eigen::MatrixXd b = basis.transpose() * p_diag * basis;
  b = 0.5 * (b + b.transpose());

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, b, Eigen::EigenvaluesOnly);
  double gap = ges.eigenvalues().minCoeff();
  if (gap <= kTolPd)
    throw NumericalError("balance_gap: nonpositive gap (component not balanced?)");
  return gap;
}

bool stabilizer_eligible(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return false;
  const Eigen::MatrixXd m = comparison_matrix(a);
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if (min_real_eigenvalue(m) > kTolPd && a.diagonal().minCoeff() > 0.0) return true;
  // Laplacian-like: comparison rows sum to ~0 and A itself is positive
  // stable (the structurally unbalanced strong-component case).
  const double row_sum = (m * Eigen::VectorXd::Ones(a.rows())).cwiseAbs().maxCoeff();
  return row_sum <= 1e-9 * scale && min_real_eigenvalue(a) > kTolPd;
}

DiagonalStabilizer diagonal_stabilizer(const Eigen::MatrixXd& a, unsigned seed) {
  const int n = static_cast<int>(a.rows());
  if (n == 0 || a.rows() != a.cols())
    throw ValidationError("diagonal_stabilizer: matrix must be square and nonempty");
  if (!stabilizer_eligible(a))
    throw ValidationError(
        "diagonal_stabilizer: matrix fails the comparison-matrix eligibility test");

  // Scale-invariant objective: lambda_min(DA + A^T D) with max(D) = 1.
  auto objective = [&](const Eigen::VectorXd& log_d) {
    Eigen::VectorXd d = log_d.array().exp();
    d /= d.maxCoeff();
    Eigen::MatrixXd s = d.asDiagonal() * a;
    s += s.transpose().eval();
    return lambda_min_sym(s);
  };

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(n));
  {
    // M-matrix construction: with M w > 0 and M^T u > 0, diag(u./w) is a
    // strong candidate. Falls back silently if M is singular.
    Eigen::MatrixXd m = comparison_matrix(a);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.isInvertible()) {
      Eigen::VectorXd w = lu.solve(Eigen::VectorXd::Ones(n));
      Eigen::FullPivLU<Eigen::MatrixXd> lut(m.transpose());
      Eigen::VectorXd u = lut.solve(Eigen::VectorXd::Ones(n));
      if (w.minCoeff() > 0.0 && u.minCoeff() > 0.0)
        starts.push_back((u.array() / w.array()).log().matrix());
    }
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.5, 1.5);
  for (int r = 0; r < 8; ++r) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = unif(rng);
    starts.push_back(d);
  }

  Eigen::VectorXd best_log = starts.front();
  double best = objective(best_log);
  const int budget = 200 * n;

  for (const auto& start : starts) {
    Eigen::VectorXd log_d = start;
    double value = objective(log_d);
    double step = 0.5;
    int evals = 0;
    while (step > 1e-4 && evals < budget) {
      bool improved = false;
      for (int i = 0; i < n && evals < budget; ++i) {
        for (double delta : {step, -step}) {
          Eigen::VectorXd trial = log_d;
          trial(i) += delta;
          double trial_value = objective(trial);
          ++evals;
          if (trial_value > value) {
            value = trial_value;
            log_d = trial;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (value > best) {
      best = value;
      best_log = log_d;
    }
    // Comfortably positive already; remaining restarts add nothing.
    if (best > 1e-3) break;
  }

  DiagonalStabilizer out;
  Eigen::VectorXd d = best_log.array().exp();
  d /= d.maxCoeff();
  out.diagonal = d;
  Eigen::MatrixXd s = d.asDiagonal() * a;
  s += s.transpose().eval();
  out.lambda_min = lambda_min_sym(s);
  if (out.lambda_min < kTolPd) {
    std::ostringstream os;
    os << "diagonal_stabilizer: search budget exhausted (best lambda_min = " << out.lambda_min
       << ")";
    throw NumericalError(os.str());
  }
  return out;
}

Eigen::VectorXd ContainmentWeights::zeta() const {
  if (varpi.cols() != 1)
    throw ValidationError("ContainmentWeights::zeta: defined only for a single CSC");
  return varpi.col(0);
}

ContainmentWeights containment_weights(const LaplacianBlocks& blocks,
                                       const std::vector<BalanceVerdict>& csc_balance) {
  const int m = static_cast<int>(blocks.csc_sizes.size());
  if (static_cast<int>(csc_balance.size()) != m)
    throw ValidationError("containment_weights: one balance verdict per CSC required");
  const int followers = static_cast<int>(blocks.follower_block.rows());

  ContainmentWeights out;
  out.varpi.resize(followers, m);
  Eigen::FullPivLU<Eigen::MatrixXd> lu;
  if (followers > 0) {
    lu.compute(blocks.follower_block);
    if (!lu.isInvertible())
      throw NumericalError("containment_weights: singular follower block (connectivity "
                           "misclassified?)");
  }
  for (int k = 0; k < m; ++k) {
    const int size = blocks.csc_sizes[k];
    Eigen::VectorXd gauge;
    if (csc_balance[k].balanced) {
      gauge = csc_balance[k].gauge;
      if (gauge.size() != size)
        throw ValidationError("containment_weights: gauge size does not match CSC");
    } else {
      gauge = Eigen::VectorXd::Ones(size);  // limit is zero; G_k = I
    }
    out.csc_gauges.push_back(gauge);
    out.csc_balanced.push_back(csc_balance[k].balanced);
    if (followers > 0)
      out.varpi.col(k) = lu.solve(Eigen::VectorXd(-blocks.cross_blocks[k] * gauge));
  }

  for (int j = 0; j < followers; ++j) {
    if (out.varpi.row(j).cwiseAbs().sum() > 1.0 + 1e-9)
      throw NumericalError("containment_weights: follower row-sum bound violated");
  }
  return out;
}

PositiveDefiniteness is_positive_definite(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw ValidationError("is_positive_definite: matrix must be square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw ValidationError("is_positive_definite: matrix is not symmetric within tolerance");
  PositiveDefiniteness out;
  out.lambda_min = lambda_min_sym(s);
  out.positive_definite = out.lambda_min > kTolPd;
  return out;
}

PositiveDefiniteness schur_positive_definite(const Eigen::MatrixXd& s1, const Eigen::MatrixXd& s2,
                                             const Eigen::MatrixXd& s3) {
  auto s3_check = is_positive_definite(s3);
  if (!s3_check.positive_definite)
    return {false, s3_check.lambda_min};
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (s3 + s3.transpose()));
  Eigen::MatrixXd complement = s1 - s2.transpose() * llt.solve(s2);
  return is_positive_definite(0.5 * (complement + complement.transpose()));
}

Certificate quasi_strong_certificate(const LaplacianBlocks& blocks,
                                     const BalanceVerdict& leader_balance,
                                     const PerronData& leader_perron, unsigned seed) {
  if (blocks.csc_sizes.size() != 1)
    throw ValidationError("quasi_strong_certificate: graph must have exactly one CSC");
  const int k = blocks.leader_count;
  const int followers = static_cast<int>(blocks.follower_block.rows());
  if (k < 2)
    throw ValidationError("quasi_strong_certificate: requires at least two leaders (K >= 2)");
  if (followers < 1)
    throw ValidationError("quasi_strong_certificate: graph has no followers");

  const Eigen::MatrixXd& l_leader = blocks.leader_block;
  const Eigen::MatrixXd& l_follower = blocks.follower_block;
  const Eigen::MatrixXd& l_cross = blocks.cross_block;

  const Eigen::VectorXd xi_f = diagonal_stabilizer(l_follower, seed).diagonal;
  Eigen::MatrixXd s_f = xi_f.asDiagonal() * l_follower;
  s_f += s_f.transpose().eval();

  Eigen::MatrixXd weighted_cross = xi_f.asDiagonal() * l_cross;  // Xi_F L_FL
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (s_f + s_f.transpose()));
  Eigen::MatrixXd denom = weighted_cross.transpose() * llt.solve(weighted_cross);
  const double denom_max = lambda_max_sym(denom);
  if (denom_max <= 0.0)
    throw NumericalError("quasi_strong_certificate: follower coupling is degenerate");

  Certificate cert;
  cert.leader_balanced = leader_balance.balanced;

  Eigen::MatrixXd top_left;
  if (leader_balance.balanced) {
    const double gap = balance_gap(l_leader, leader_balance.gauge, leader_perron);
    const Eigen::VectorXd& xi_l = leader_perron.p;
    cert.coupling_bound = 2.0 * gap * xi_l.minCoeff() / denom_max;
    top_left = 2.0 * gap * Eigen::MatrixXd(xi_l.asDiagonal());
  } else {
    const Eigen::VectorXd xi_l = diagonal_stabilizer(l_leader, seed).diagonal;
    Eigen::MatrixXd stabilized = xi_l.asDiagonal() * l_leader;
    stabilized += stabilized.transpose().eval();
    cert.coupling_bound = lambda_min_sym(stabilized) / denom_max;
    top_left = stabilized;
  }
  cert.coupling = 0.5 * cert.coupling_bound;

  cert.matrix.resize(k + followers, k + followers);
  cert.matrix.topLeftCorner(k, k) = top_left;
  cert.matrix.topRightCorner(k, followers) = cert.coupling * weighted_cross.transpose();
  cert.matrix.bottomLeftCorner(followers, k) = cert.coupling * weighted_cross;
  cert.matrix.bottomRightCorner(followers, followers) = cert.coupling * s_f;
  cert.matrix = 0.5 * (cert.matrix + cert.matrix.transpose()).eval();

  auto pd = is_positive_definite(cert.matrix);
  cert.lambda_min = pd.lambda_min;
  if (!pd.positive_definite)
    throw NumericalError("quasi_strong_certificate: assembled matrix is not positive definite");
  return cert;
}

}  // namespace cansim
