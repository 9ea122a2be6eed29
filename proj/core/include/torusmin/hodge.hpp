#pragma once

#include "torusmin/eigensolve.hpp"
#include "torusmin/fields.hpp"
#include "torusmin/geometry.hpp"

namespace torusmin {

/// One real per canonical undirected edge; the value negates when the edge is
/// traversed against its reference direction.
using OneFormCochain = Eigen::VectorXd;

enum class DualScheme { Barycentric, Circumcentric };

/// Incidence operators and diagonal Hodge stars of a valid closed mesh.
struct DecOperators {
  SpMat d0;                  // E x V
  SpMat d1;                  // F x E
  Eigen::VectorXd star0;     // V (dual vertex areas = lumped mass)
  Eigen::VectorXd star1;     // E (dual/primal length ratio)
  Eigen::VectorXd star2;     // F (1 / face area)
  SpMat formLaplacian;       // E x E weak 1-form Hodge Laplacian, SPSD
  DualScheme scheme = DualScheme::Barycentric;
  bool fellBackToBarycentric = false;  // circumcentric weights were not positive
};

DecOperators assembleFormLaplacian(const PeriodicMesh& mesh,
                                   DualScheme scheme = DualScheme::Barycentric);

struct HarmonicBasis {
  std::vector<OneFormCochain> members;  // star1-orthonormal
  Eigen::MatrixXd gram;                 // edge inner product Gram matrix
  double gramConditionNumber = 0.0;
  Eigen::VectorXd eigenvalues;          // the computed low spectrum of (L1, star1)
  Eigen::VectorXd residuals;            // form-Laplacian residuals of the members
  double nullspaceTolerance = 0.0;
  double gapRatio = 0.0;                // eigenvalue(b1+1) / eigenvalue(b1)
  int b1 = 0;
};

/// Nullspace of the 1-form Laplacian. b1 is detected by the spectral gap
/// (ratio >= gapRequirement) and cross-checked against 2 - chi; mismatches
/// throw BettiAmbiguous / TopologyMismatch.
HarmonicBasis harmonicBasis(const PeriodicMesh& mesh, const DecOperators& dec, double tol = 1e-8,
                            double gapRequirement = 100.0, const EigenOptions& opts = {});

/// Edge integrals of a constant (parallel) ambient 1-form: <c, edge vector>.
OneFormCochain restrictParallel(const PeriodicMesh& mesh, const Vec3& covector);

struct ParallelRankResult {
  int rank = 0;
  Eigen::VectorXd singularValues;            // of the harmonic projection coefficients
  Eigen::MatrixXd projectionCoefficients;    // 3 x b1, rows = ambient axes
};

/// Numerical rank of the harmonic projections of the three restricted
/// coordinate forms (Gram singular values above tol * sigma_max).
ParallelRankResult parallelRankCheck(const PeriodicMesh& mesh, const DecOperators& dec,
                                     const HarmonicBasis& basis, double tol = 1e-6);

/// Per-vertex tangent vector field with <omega_sharp, edge> matching the
/// cochain per face (Whitney reconstruction, area-weighted to vertices,
/// projected into the vertex tangent plane).
VertexVectorField sharpField(const PeriodicMesh& mesh, const VertexVectorField& normals,
                             const OneFormCochain& omega);

/// Per-face constant reconstruction of the cochain (tangent to each face).
FaceVectorField faceSharpField(const PeriodicMesh& mesh, const OneFormCochain& omega);

/// Discrete Hodge projection onto ker(formLaplacian): removes the exact part
/// (vertex Poisson solve) and the co-exact part (face Poisson solve).
OneFormCochain harmonicProjection(const PeriodicMesh& mesh, const DecOperators& dec,
                                  const OneFormCochain& omega);

/// Full Galerkin mass matrix of Whitney 1-forms (E x E, sparse SPD).
SpMat whitneyMassMatrix(const PeriodicMesh& mesh);

/// The unique closed representative of [omega] minimizing the Whitney mass
/// norm: omega - d0*alpha with S alpha = d0' Mw omega. Cohomology class is
/// unchanged; the result is co-closed in the edge-element (FEM) sense and,
/// unlike diagonal-star kernel vectors, converges pointwise under refinement.
OneFormCochain whitneyCoclosedRepresentative(const PeriodicMesh& mesh, const SpMat& whitneyMass,
                                             const OneFormCochain& omega);

std::string cochainToCsv(const PeriodicMesh& mesh, const OneFormCochain& omega);

}  // namespace torusmin
