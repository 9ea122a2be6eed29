#pragma once

#include <map>
#include <optional>

#include "torusmin/flow.hpp"
#include "torusmin/hodge.hpp"
#include "torusmin/spectral.hpp"

namespace torusmin {

/// The three antisymmetric test functions u_ij = N_i (omega#)_j - N_j (omega#)_i
/// for ambient axis pairs (i,j), i < j, at n = 2.
struct TestFunctionSet {
  static constexpr std::array<std::pair<int, int>, 3> kPairs = {{{0, 1}, {0, 2}, {1, 2}}};
  std::array<VertexField, 3> u;
};

TestFunctionSet testFunctions(const PeriodicMesh& mesh, const VertexVectorField& omegaSharp,
                              const VertexVectorField& normals);

/// u' (S - B) u, the discrete second-variation form.
double qForm(const JacobiPair& pair, const VertexField& u);

struct WedgeIdentityResult {
  double sum = 0.0;         // sum over pairs of Q(u_ij, u_ij); 0 in the continuum
  double normalizer = 0.0;  // sum of (u'Su + u'Bu)
  double ratio = 0.0;       // |sum| / normalizer (0 when normalizer vanishes)
};

/// Integrated identity of the index bound proof: for harmonic omega on a
/// minimal surface the Q-values of the test functions sum to zero.
WedgeIdentityResult wedgeIdentityResidual(const PeriodicMesh& mesh, const OneFormCochain& omega,
                                          const JacobiPair& pair, const VertexVectorField& normals);

struct PointwiseIdentityResult {
  VertexField residual;        // pointwise weak residual (mass-inverted)
  double l2Norm = 0.0;         // ||r||_L2
  double h1NormOfU = 0.0;      // ||u||_H1
  double relative = 0.0;       // l2 / h1
  double frameInvarianceError = 0.0;  // relative change under a rotated frame
};

/// Weak-form residual of the pointwise curvature identity
/// r = Laplace(u_ij) + |A|^2 u_ij + 2 sum_kl A(E_k,E_l) <E_l^b ^ grad_k omega, theta_i ^ theta_j>
/// assembled against vertex hat functions with per-face frames.
PointwiseIdentityResult pointwiseIdentityResidual(const PeriodicMesh& mesh,
                                                  const OneFormCochain& omega, int axisI, int axisJ,
                                                  const ShapeField& shape, const JacobiPair& pair);

struct PhiKernelResult {
  Eigen::MatrixXd phi;            // n(n+1)k/2 rows x b1 columns
  Eigen::VectorXd singularValues;
  int dimKer = 0;
  double gapRatio = 0.0;          // smallest kept / largest dropped (or threshold)
  bool ambiguous = false;
};

PhiKernelResult phiKernel(const PeriodicMesh& mesh, const VertexVectorField& normals,
                          const std::vector<OneFormCochain>& harmonicMembers,
                          const SpectrumReport& spectrum, int negativeCount,
                          const Eigen::VectorXd& massDiag, double tol = 1e-6,
                          double gapRequirement = 10.0);

struct BoundReport {
  double bound = 0.0;
  bool holds = false;
  bool sharp = false;
};

/// Exact rational evaluation of index >= 2/(n(n+1)) (b1 - (2n-1)).
BoundReport boundReport(int index, int b1, int n);

struct PipelineConfig {
  std::string surface = "flat";  // flat | P | D | G | file
  std::string meshPath;          // for surface == file
  int resolution = 64;
  FlowParams flow;
  double eigenTol = 1e-10;
  double zeroTol = 0.02;         // relative, morse index zero classification
  double bettiGap = 100.0;
  double identityTol = 0.05;     // integrated identity gate; pointwise gate is 2x
  double rankTol = 1e-6;
  uint64_t seed = 1;
  int threads = 1;
};

struct VerificationReport {
  int schemaVersion = 1;
  std::string meshId;
  int n = 2;
  int vertexCount = 0, edgeCount = 0, faceCount = 0;
  int eulerCharacteristic = 0;
  int b1 = 0;
  int morseIndex = 0;
  double zeroGapRatio = 0.0;
  bool indexAmbiguous = false;
  double bound = 0.0;
  bool boundHolds = false;
  bool boundSharp = false;
  std::vector<double> identityRatios;          // per harmonic basis member
  std::vector<double> pointwiseResiduals;      // per member, aggregated over pairs
  std::vector<double> frameInvarianceErrors;   // per member, max over pairs
  int dimKerPhi = 0;
  double phiGapRatio = 0.0;
  bool kernelBoundHolds = false;
  bool curvatureSeparation = false;
  double separationThreshold = 0.0;
  double maxSeparation = 0.0;
  int parallelRank = 0;
  bool betti12Holds = false;                   // b1 >= n+1 unless flat
  std::string betti12Branch;                   // "b1 >= n+1" or "flat totally geodesic"
  bool flowConverged = false;
  double flowFinalMaxH = 0.0;
  double area = 0.0;
  double meanEdgeLength = 0.0;
  Eigen::Vector3d translationResiduals = Eigen::Vector3d::Zero();
  std::vector<double> jacobiEigenvalues;
  std::map<std::string, double> tolerances;
  uint64_t seed = 0;
  int threads = 1;
  std::map<std::string, double> timings;       // seconds per stage
  std::map<std::string, std::string> configEcho;

  bool allVerdictsPass() const;
  std::vector<std::string> failedVerdicts() const;
};

std::string reportToJson(const VerificationReport& report);
VerificationReport reportFromJson(const std::string& text);

struct PipelineArtifacts {
  std::optional<PeriodicMesh> relaxedMesh;
  std::optional<FlowTrace> flowTrace;
  std::optional<SpectrumReport> spectrum;
};

/// generate -> minimize -> geometry -> spectrum -> hodge -> verify.
/// Errors carry their stage label; a non-converged flow still produces a
/// (partial) report with flowConverged = false.
VerificationReport fullPipeline(const PipelineConfig& config,
                                PipelineArtifacts* artifacts = nullptr);

std::string spectrumToJson(const SpectrumReport& report, double zeroGap);

}  // namespace torusmin
