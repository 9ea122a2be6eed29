#include "torusmin/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace torusmin {

namespace {

double residualNorm(const SpMat& A, const Eigen::VectorXd& m, const Eigen::VectorXd& x, double lambda) {
  Eigen::VectorXd r = A * x - lambda * m.cwiseProduct(x);
  return std::sqrt((r.array().square() / m.array()).sum());
}

// M-orthonormalize columns in place (modified Gram-Schmidt, two passes).
void orthonormalize(Eigen::MatrixXd& X, const Eigen::VectorXd& m) {
  for (int c = 0; c < X.cols(); ++c) {
    for (int pass = 0; pass < 2; ++pass)
      for (int p = 0; p < c; ++p) {
        double proj = (X.col(p).array() * m.array() * X.col(c).array()).sum();
        X.col(c) -= proj * X.col(p);
      }
    double nrm = std::sqrt((X.col(c).array().square() * m.array()).sum());
    if (nrm < 1e-300) {
      X.col(c).setZero();
      X(c % X.rows(), c) = 1.0;  // replace a collapsed direction
      nrm = std::sqrt(m[c % X.rows()]);
    }
    X.col(c) /= nrm;
  }
}

EigenResult denseSolve(const SpMat& A, const Eigen::VectorXd& m, int k) {
  const int n = static_cast<int>(A.rows());
  Eigen::MatrixXd Ad = Eigen::MatrixXd(A);
  Ad = 0.5 * (Ad + Ad.transpose());
  Eigen::MatrixXd Md = m.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ad, Md);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::SolverStalled, "dense generalized eigensolver failed");

  EigenResult out;
  out.eigenvalues = es.eigenvalues().head(k);
  out.eigenvectors = es.eigenvectors().leftCols(k);
  out.residuals.resize(k);
  for (int i = 0; i < k; ++i)
    out.residuals[i] = residualNorm(A, m, out.eigenvectors.col(i), out.eigenvalues[i]);
  out.converged = true;
  out.iterations = 1;
  out.method = "dense";
  (void)n;
  return out;
}

// Plain Lanczos (matvec only) on M^{-1/2} A M^{-1/2} to bracket the spectrum
// before choosing the shift-invert pole.
void lanczosBracket(const SpMat& A, const Eigen::VectorXd& m, uint64_t seed, int steps,
                    double& thetaMin, double& thetaMax) {
  const int n = static_cast<int>(A.rows());
  steps = std::min(steps, n);
  Eigen::VectorXd invSqrtM = m.array().rsqrt();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(rng);
  v /= v.norm();

  Eigen::MatrixXd V(n, steps);
  Eigen::VectorXd alpha(steps), beta(steps);
  Eigen::VectorXd w;
  int used = 0;
  for (int j = 0; j < steps; ++j) {
    V.col(j) = v;
    w = invSqrtM.asDiagonal() * (A * (invSqrtM.asDiagonal() * v));
    double a = v.dot(w);
    alpha[j] = a;
    w -= a * v;
    if (j > 0) w -= beta[j - 1] * V.col(j - 1);
    // full reorthogonalization
    w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
    double b = w.norm();
    used = j + 1;
    if (b < 1e-14) break;
    beta[j] = b;
    v = w / b;
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(used, used);
  for (int j = 0; j < used; ++j) {
    T(j, j) = alpha[j];
    if (j + 1 < used) T(j, j + 1) = T(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  thetaMin = es.eigenvalues().minCoeff();
  thetaMax = es.eigenvalues().maxCoeff();
}

}  // namespace

EigenResult smallestEigenpairs(const SpMat& A, const Eigen::VectorXd& m, int k,
                               const EigenOptions& opts) {
  const int n = static_cast<int>(A.rows());
  if (A.rows() != A.cols() || m.size() != n)
    throw Error(ErrorCode::ShapeMismatch, "operator/mass dimension mismatch");
  if (k < 1 || k >= n)
    throw Error(ErrorCode::ShapeMismatch, "requested eigenpair count must satisfy 1 <= k < n");
  if ((m.array() <= 0.0).any())
    throw Error(ErrorCode::InvalidArgument, "mass diagonal must be positive");

  const bool dense = opts.method == EigenOptions::Method::Dense ||
                     (opts.method == EigenOptions::Method::Auto && n <= opts.denseThreshold);
  if (dense) {
    EigenResult out = denseSolve(A, m, k);
    out.seed = opts.seed;
    return out;
  }

  // Shift placement. The convergence ratio of shift-invert subspace iteration
  // is (lambda_i - sigma)/(lambda_{q+1} - sigma), so the pole must sit close
  // below the target window, not a fixed fraction of the full spectrum.
  const double diagScale = (A.diagonal().array().abs() / m.array()).maxCoeff();
  double sigma, spread;
  if (std::isfinite(opts.shiftHint)) {
    sigma = opts.shiftHint;
    spread = std::max(diagScale - sigma, 1e-300);
  } else if (opts.psdHint) {
    sigma = -std::max(1e-8 * diagScale, 1e-300);
    spread = std::max(diagScale, 1e-300);
  } else {
    double thetaMin = 0.0, thetaMax = 1.0;
    lanczosBracket(A, m, opts.seed ^ 0x9e3779b97f4a7c15ULL, std::min(80, n - 1), thetaMin, thetaMax);
    spread = std::max(thetaMax - thetaMin, 1e-12 * std::abs(thetaMax) + 1e-300);
    sigma = thetaMin - 0.05 * spread;
  }

  const int q = std::min(n, k + std::max(8, k / 2));
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> dist;

  EigenResult out;
  out.seed = opts.seed;
  out.method = "shift-invert-subspace";

  Eigen::MatrixXd X(n, q);
  for (int c = 0; c < q; ++c)
    for (int r = 0; r < n; ++r) X(r, c) = dist(rng);
  orthonormalize(X, m);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(q);

  // The coarse pole resolves the bottom of the spectrum; once the target
  // window is located, refactoring with the pole just below it makes the
  // remaining convergence rapid. The subspace is reused across refactors.
  const int kMaxFactorizations = 5;
  int totalIterations = 0;
  for (int attempt = 0; attempt < kMaxFactorizations; ++attempt) {
    out.shift = sigma;
    SpMat K = A;
    for (int i = 0; i < n; ++i) K.coeffRef(i, i) -= sigma * m[i];
    K.makeCompressed();
    Eigen::SimplicialLDLT<SpMat> ldlt(K);
    if (ldlt.info() != Eigen::Success) {
      sigma -= spread;
      continue;
    }

    const int strict = (opts.strictCount <= 0 || opts.strictCount > k) ? k : opts.strictCount;
    const double relaxedTol = std::max(0.02, 1e4 * opts.tol);
    const int warmup = 8;
    bool refactor = false;
    while (totalIterations < opts.maxIterations) {
      ++totalIterations;
      out.iterations = totalIterations;
      Eigen::MatrixXd Y(n, q);
      for (int c = 0; c < q; ++c) Y.col(c) = ldlt.solve(m.cwiseProduct(X.col(c)));
      orthonormalize(Y, m);
      Eigen::MatrixXd Ar = Y.transpose() * (A * Y);
      Ar = 0.5 * (Ar + Ar.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ar);
      X = Y * es.eigenvectors();
      lambda = es.eigenvalues();

      if (lambda.minCoeff() < sigma) {
        // Spectrum extends below the pole: the bracket was wrong.
        sigma = lambda.minCoeff() - spread;
        refactor = true;
        break;
      }

      double scale = lambda.head(k).array().abs().maxCoeff();
      bool done = true;
      for (int i = 0; i < k && done; ++i) {
        double res = residualNorm(A, m, X.col(i), lambda[i]);
        double gate = (i < strict ? opts.tol : relaxedTol) * (std::abs(lambda[i]) + scale);
        if (res > gate) done = false;
      }
      if (done) {
        out.converged = true;
        break;
      }

      if (totalIterations % warmup == 0) {
        // Tighten the pole once the bottom of the window is roughly located.
        double res0 = residualNorm(A, m, X.col(0), lambda[0]);
        double width = std::max({lambda[k - 1] - lambda[0], 1e-3 * std::abs(lambda[k - 1]), 1e-300});
        double better = lambda[0] - 0.05 * width;
        bool bottomLocated = res0 <= 0.05 * (std::abs(lambda[0]) + scale);
        if (bottomLocated && better > sigma && (lambda[0] - better) < 0.25 * (lambda[0] - sigma)) {
          sigma = better;
          refactor = true;
          break;
        }
      }
    }
    if (out.converged || (!refactor && totalIterations >= opts.maxIterations)) break;
  }

  if (!out.converged && lambda.size() == 0)
    throw Error(ErrorCode::SolverStalled, "could not place a stable shift-invert pole");

  out.eigenvalues = lambda.head(k);
  out.eigenvectors = X.leftCols(k);
  out.residuals.resize(k);
  for (int i = 0; i < k; ++i)
    out.residuals[i] = residualNorm(A, m, X.col(i), lambda[i]);
  return out;
}

}  // namespace torusmin
