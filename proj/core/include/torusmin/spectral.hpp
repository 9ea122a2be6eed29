#pragma once

#include "torusmin/eigensolve.hpp"
#include "torusmin/fields.hpp"
#include "torusmin/geometry.hpp"

namespace torusmin {

/// Discrete second-variation form A_Q = S - M diag(|A|^2) with its mass.
/// phi' A_Q phi is the quadratic form Q(phi,phi); the Morse index counts
/// negative eigenvalues of (A_Q, M).
struct JacobiPair {
  SpMat form;                 // S - B, sparse symmetric
  Eigen::VectorXd massDiag;
  VertexField a2;             // the |A|^2 field that built the potential term
};

JacobiPair assembleJacobi(const OperatorPair& ops, const VertexField& a2);

struct SpectrumReport {
  int requested = 0;
  Eigen::VectorXd eigenvalues;   // ascending, units 1/length^2
  Eigen::MatrixXd eigenvectors;  // M-orthonormal columns
  Eigen::VectorXd residuals;
  double zeroTolerance = 0.0;    // relative tolerance used by the index count
  int negativeCount = 0;
  bool converged = false;
  uint64_t seed = 0;
  std::string method;
};

SpectrumReport eigenLowest(const JacobiPair& pair, int count, const EigenOptions& opts = {});

struct MorseIndexResult {
  int index = 0;
  Eigen::VectorXd negativeEigenvalues;
  double nearestZeroGap = 0.0;   // distance from 0 to the closest eigenvalue outside the zero cluster
  double zeroClusterRadius = 0.0;
  double zeroGapRatio = 0.0;     // |closest counted negative| / zero-cluster radius
  bool ambiguous = false;
  int candidateLow = 0;          // #{lambda < -c}
  int candidateHigh = 0;         // #{lambda < 0}
  SpectrumReport spectrum;
};

/// Counts eigenvalues below -zeroTol*scale, widening the window until a
/// non-negative eigenvalue is certified. Sets `ambiguous` (IndexAmbiguous)
/// instead of throwing so callers can still inspect the spectrum.
MorseIndexResult morseIndex(const JacobiPair& pair, double zeroTol = 0.02,
                            const EigenOptions& opts = {});

struct TranslationResiduals {
  Eigen::Vector3d residuals = Eigen::Vector3d::Zero();  // Rayleigh quotients of <N, e_i>
  std::array<bool, 3> degenerate = {false, false, false};
};

/// Ambient translations generate Jacobi fields; their Rayleigh quotients
/// gauge the discretization quality (0 in the continuum).
TranslationResiduals translationFieldResidual(const PeriodicMesh& mesh,
                                              const VertexVectorField& normals,
                                              const JacobiPair& pair);

}  // namespace torusmin
