#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <Eigen/Sparse>

#include "torusmin/errors.hpp"

namespace torusmin {

using SpMat = Eigen::SparseMatrix<double>;

struct EigenOptions {
  double tol = 1e-10;
  int maxIterations = 400;
  uint64_t seed = 0x7075736575ULL;
  int denseThreshold = 3000;  // at or below: solve the full dense problem
  enum class Method { Auto, Dense, Iterative };
  Method method = Method::Auto;
  bool psdHint = false;      // operator known PSD: pole goes just below zero
  // Known strict lower bound on the spectrum (tighter than any probe);
  // overrides the probing when finite.
  double shiftHint = std::numeric_limits<double>::quiet_NaN();
  // Enforce the full tolerance on this many lowest pairs only; the rest of
  // the window converges to 2% (they serve as scale/gap estimates).
  // 0 = strict for all k.
  int strictCount = 0;
};

struct EigenResult {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, M-orthonormal
  Eigen::VectorXd residuals;     // ||A x - lambda M x||_{M^-1} per pair
  bool converged = false;
  int iterations = 0;
  double shift = 0.0;
  std::string method;
  uint64_t seed = 0;
};

/// k smallest eigenpairs of the generalized symmetric problem
/// A x = lambda M x with M diagonal positive. Dense solve at small sizes,
/// otherwise shift-invert subspace iteration with Rayleigh-Ritz.
EigenResult smallestEigenpairs(const SpMat& A, const Eigen::VectorXd& massDiag, int k,
                               const EigenOptions& opts = {});

}  // namespace torusmin
