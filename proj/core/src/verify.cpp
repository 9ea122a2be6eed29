#include "torusmin/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <type_traits>

#include <nlohmann/json.hpp>

#include "torusmin/generators.hpp"
#include "torusmin/mesh_io.hpp"

namespace torusmin {

using nlohmann::json;

TestFunctionSet testFunctions(const PeriodicMesh& mesh, const VertexVectorField& omegaSharp,
                              const VertexVectorField& normals) {
  const int V = mesh.numVertices();
  if (omegaSharp.rows() != V || normals.rows() != V)
    throw Error(ErrorCode::ShapeMismatch, "field sizes must match the vertex count");
  TestFunctionSet out;
  for (int p = 0; p < 3; ++p) {
    auto [i, j] = TestFunctionSet::kPairs[p];
    out.u[p] = normals.col(i).cwiseProduct(omegaSharp.col(j)) -
               normals.col(j).cwiseProduct(omegaSharp.col(i));
  }
  return out;
}

double qForm(const JacobiPair& pair, const VertexField& u) {
  if (u.size() != pair.massDiag.size()) throw Error(ErrorCode::ShapeMismatch, "field size mismatch");
  return u.dot(pair.form * u);
}

WedgeIdentityResult wedgeIdentityResidual(const PeriodicMesh& mesh, const OneFormCochain& omega,
                                          const JacobiPair& pair, const VertexVectorField& normals) {
  VertexVectorField sharp = sharpField(mesh, normals, omega);
  TestFunctionSet tf = testFunctions(mesh, sharp, normals);

  WedgeIdentityResult out;
  bool allZero = true;
  double massNorm = 0.0;
  for (int p = 0; p < 3; ++p) {
    const VertexField& u = tf.u[p];
    if (u.lpNorm<Eigen::Infinity>() > 0) allZero = false;
    double q = qForm(pair, u);
    double b = (u.array().square() * pair.massDiag.array() * pair.a2.array()).sum();
    out.sum += q;
    out.normalizer += q + 2.0 * b;  // u'Su + u'Bu with S = form + B
    massNorm += (u.array().square() * pair.massDiag.array()).sum();
  }
  if (allZero) throw Error(ErrorCode::DegenerateTestSet, "all test functions vanish identically");
  // Parallel test functions on a flat mesh make both sum and normalizer vanish
  // (0 = 0 exactly); report 0 instead of roundoff noise over roundoff noise.
  double h = mesh.meanEdgeLength();
  double floor = 1e-14 * massNorm / std::max(h * h, 1e-300);
  out.ratio = out.normalizer > floor ? std::abs(out.sum) / out.normalizer : 0.0;
  return out;
}

namespace {

// Weak integrals of the frame-contracted curvature term against hat functions.
VertexField curvatureCouplingTerm(const PeriodicMesh& mesh, const ShapeField& shape,
                                  const VertexVectorField& omegaSharp, int axisI, int axisJ,
                                  double frameAngle) {
  const int V = mesh.numVertices();
  VertexField out = VertexField::Zero(V);
  for (int f = 0; f < mesh.numFaces(); ++f) {
    const auto& fv = mesh.faces()[f];
    Vec3 e01 = mesh.faceEdgeVector(f, 0);
    Vec3 e12 = mesh.faceEdgeVector(f, 1);
    Vec3 n = e01.cross(e12);
    double doubleArea = n.norm();
    if (doubleArea == 0.0) throw Error(ErrorCode::DegenerateTriangle, "face " + std::to_string(f));
    n /= doubleArea;
    double area = 0.5 * doubleArea;

    // Orthonormal tangent frame, optionally rotated in the face plane.
    Vec3 E1 = e01.normalized();
    Vec3 E2 = n.cross(E1);
    if (frameAngle != 0.0) {
      Vec3 R1 = std::cos(frameAngle) * E1 + std::sin(frameAngle) * E2;
      Vec3 R2 = -std::sin(frameAngle) * E1 + std::cos(frameAngle) * E2;
      E1 = R1;
      E2 = R2;
    }

    // Face-averaged second fundamental form in the frame.
    Eigen::Matrix3d Abar = Eigen::Matrix3d::Zero();
    for (int c = 0; c < 3; ++c) Abar += shapeTensorAt(shape, fv[c]);
    Abar /= 3.0;
    Eigen::Matrix2d A;
    A(0, 0) = E1.dot(Abar * E1);
    A(1, 1) = E2.dot(Abar * E2);
    A(0, 1) = A(1, 0) = 0.5 * (E1.dot(Abar * E2) + E2.dot(Abar * E1));

    // Jacobian of the interpolated sharp field: hat gradients against corners.
    Vec3 x0 = Vec3::Zero(), x1 = e01, x2 = e01 + e12;
    const Vec3 corners[3] = {x0, x1, x2};
    Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
    for (int c = 0; c < 3; ++c) {
      Vec3 opposite = corners[(c + 2) % 3] - corners[(c + 1) % 3];
      Vec3 gradHat = n.cross(opposite) / doubleArea;
      G += Vec3(omegaSharp.row(fv[c]).transpose()) * gradHat.transpose();
    }

    const Vec3 frame[2] = {E1, E2};
    double term = 0.0;
    for (int k = 0; k < 2; ++k) {
      Vec3 dOmega = G * frame[k];           // derivative of omega# along E_k
      dOmega -= n.dot(dOmega) * n;          // tangential part (surface connection)
      for (int l = 0; l < 2; ++l) {
        double wedge = frame[l][axisI] * dOmega[axisJ] - frame[l][axisJ] * dOmega[axisI];
        term += A(k, l) * wedge;
      }
    }
    double third = area / 3.0;
    for (int c = 0; c < 3; ++c) out[fv[c]] += third * term;
  }
  return out;
}

}  // namespace

PointwiseIdentityResult pointwiseIdentityResidual(const PeriodicMesh& mesh,
                                                  const OneFormCochain& omega, int axisI, int axisJ,
                                                  const ShapeField& shape, const JacobiPair& pair) {
  if (axisI < 0 || axisJ > 2 || axisI >= axisJ)
    throw Error(ErrorCode::InvalidArgument, "axis pair must satisfy 0 <= i < j <= 2");
  VertexVectorField sharp = sharpField(mesh, shape.normals, omega);
  int pairIndex = (axisI == 0) ? (axisJ == 1 ? 0 : 1) : 2;
  TestFunctionSet tf = testFunctions(mesh, sharp, shape.normals);
  const VertexField& u = tf.u[pairIndex];

  VertexField tw = curvatureCouplingTerm(mesh, shape, sharp, axisI, axisJ, 0.0);
  VertexField twRot = curvatureCouplingTerm(mesh, shape, sharp, axisI, axisJ, 0.6);

  // Weak residual: <r, hat_v> = -(A_Q u)_v + 2 * tw_v.
  Eigen::VectorXd R = -(pair.form * u) + 2.0 * tw;
  PointwiseIdentityResult out;
  out.residual = R.array() / pair.massDiag.array();
  out.l2Norm = std::sqrt((R.array().square() / pair.massDiag.array()).sum());
  double uSu = qForm(pair, u) + (u.array().square() * pair.massDiag.array() * pair.a2.array()).sum();
  double uMu = (u.array().square() * pair.massDiag.array()).sum();
  out.h1NormOfU = std::sqrt(std::max(uSu, 0.0) + uMu);
  out.relative = out.h1NormOfU > 0 ? out.l2Norm / out.h1NormOfU : 0.0;

  double twScale = std::sqrt((tw.array().square() / pair.massDiag.array()).sum());
  double diff = std::sqrt(((tw - twRot).array().square() / pair.massDiag.array()).sum());
  out.frameInvarianceError = twScale > 0 ? diff / twScale : 0.0;
  return out;
}

PhiKernelResult phiKernel(const PeriodicMesh& mesh, const VertexVectorField& normals,
                          const std::vector<OneFormCochain>& harmonicMembers,
                          const SpectrumReport& spectrum, int negativeCount,
                          const Eigen::VectorXd& massDiag, double tol, double gapRequirement) {
  const int b1 = static_cast<int>(harmonicMembers.size());
  const int k = negativeCount;
  if (spectrum.eigenvectors.cols() < k)
    throw Error(ErrorCode::ShapeMismatch, "spectrum must contain all index eigenfunctions");

  PhiKernelResult out;
  out.phi.resize(3 * k, b1);
  for (int c = 0; c < b1; ++c) {
    VertexVectorField sharp = sharpField(mesh, normals, harmonicMembers[c]);
    TestFunctionSet tf = testFunctions(mesh, sharp, normals);
    for (int q = 0; q < k; ++q) {
      Eigen::VectorXd mphi = massDiag.cwiseProduct(spectrum.eigenvectors.col(q));
      for (int p = 0; p < 3; ++p) out.phi(3 * q + p, c) = tf.u[p].dot(mphi);
    }
  }

  if (k == 0) {
    out.dimKer = b1;
    out.gapRatio = std::numeric_limits<double>::infinity();
    return out;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.phi);
  out.singularValues = svd.singularValues();
  double smax = out.singularValues.size() ? out.singularValues[0] : 0.0;
  double threshold = tol * smax;
  int rank = 0;
  double smallestKept = std::numeric_limits<double>::infinity();
  double largestDropped = 0.0;
  for (int i = 0; i < out.singularValues.size(); ++i) {
    if (out.singularValues[i] > threshold) {
      ++rank;
      smallestKept = std::min(smallestKept, out.singularValues[i]);
    } else {
      largestDropped = std::max(largestDropped, out.singularValues[i]);
    }
  }
  out.dimKer = b1 - rank;
  double denom = std::max(largestDropped, threshold);
  out.gapRatio = rank > 0 ? smallestKept / std::max(denom, 1e-300)
                          : std::numeric_limits<double>::infinity();
  out.ambiguous = out.gapRatio < gapRequirement;
  if (out.ambiguous && largestDropped > 0 && smallestKept / largestDropped < gapRequirement)
    throw Error(ErrorCode::KernelAmbiguous, "no clear singular value gap for the kernel dimension");
  return out;
}

BoundReport boundReport(int index, int b1, int n) {
  if (index < 0 || b1 < 0 || n < 2)
    throw Error(ErrorCode::InvalidArgument, "boundReport requires index, b1 >= 0 and n >= 2");
  const long long num = 2LL * (b1 - (2LL * n - 1));  // bound = num / den
  const long long den = static_cast<long long>(n) * (n + 1);
  BoundReport out;
  out.bound = static_cast<double>(num) / static_cast<double>(den);
  out.holds = static_cast<long long>(index) * den >= num;
  if (num > 0) {
    long long ceilBound = (num + den - 1) / den;
    out.sharp = (index == ceilBound);
  }
  return out;
}

bool VerificationReport::allVerdictsPass() const { return failedVerdicts().empty(); }

std::vector<std::string> VerificationReport::failedVerdicts() const {
  std::vector<std::string> out;
  if (!boundHolds) out.push_back("index bound");
  if (!betti12Holds) out.push_back("b1 lower bound");
  if (!kernelBoundHolds) out.push_back("kernel bound");
  if (indexAmbiguous) out.push_back("index ambiguous");
  double tol = tolerances.count("identity") ? tolerances.at("identity") : 0.05;
  for (double r : identityRatios)
    if (r > tol) {
      out.push_back("integrated identity ratio");
      break;
    }
  for (double r : pointwiseResiduals)
    if (r > 2.0 * tol) {
      out.push_back("pointwise identity residual");
      break;
    }
  return out;
}

namespace {

class StageTimer {
public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}
  template <typename F>
  auto run(const std::string& stage, F&& fn) -> decltype(fn()) {
    auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        sink_[stage] += seconds(t0);
        return;
      } else {
        auto result = fn();
        sink_[stage] += seconds(t0);
        return result;
      }
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  }

private:
  static double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  std::map<std::string, double>& sink_;
};

}  // namespace

VerificationReport fullPipeline(const PipelineConfig& config, PipelineArtifacts* artifacts) {
  VerificationReport rep;
  rep.seed = config.seed;
  rep.threads = config.threads;
  rep.tolerances = {{"eigen", config.eigenTol}, {"zero", config.zeroTol},
                    {"betti_gap", config.bettiGap}, {"identity", config.identityTol},
                    {"rank", config.rankTol}, {"flow_target", config.flow.targetScaledResidual}};
  rep.configEcho = {{"surface", config.surface},
                    {"res", std::to_string(config.resolution)},
                    {"seed", std::to_string(config.seed)},
                    {"mesh", config.meshPath}};
  StageTimer timer(rep.timings);

  EigenOptions eigOpts;
  eigOpts.tol = config.eigenTol;
  eigOpts.seed = config.seed;

  // generate
  PeriodicMesh mesh = timer.run("generate", [&]() {
    if (config.surface == "flat") {
      int m = std::max(config.resolution, 3);
      return flatTorusMesh(makeCubicLattice(3, 1.0), 2, m);
    }
    if (config.surface == "file") {
      if (config.meshPath.empty()) throw Error(ErrorCode::UsageError, "surface=file needs --mesh PATH");
      return loadMeshJson(config.meshPath);
    }
    return tpmsNodalMesh(tpmsFamilyFromString(config.surface), config.resolution);
  });
  timer.run("generate", [&]() {
    MeshDiagnostics diag = validateMesh(mesh);
    if (!diag.ok()) throw Error(ErrorCode::TopologyMismatch, "input mesh invalid: " + diag.failures.front());
    if (diag.components != 1) throw Error(ErrorCode::TopologyMismatch, "mesh is not connected");
  });

  // minimize
  FlowResult flow = timer.run("minimize", [&]() { return minimizeArea(mesh, config.flow); });
  rep.flowConverged = flow.converged;
  rep.flowFinalMaxH = flow.trace.maxH.empty() ? 0.0 : flow.trace.maxH.back();
  const PeriodicMesh& relaxed = flow.mesh;
  if (artifacts) {
    artifacts->relaxedMesh = relaxed;
    artifacts->flowTrace = flow.trace;
  }

  rep.meshId = relaxed.id();
  rep.vertexCount = relaxed.numVertices();
  rep.edgeCount = relaxed.numEdges();
  rep.faceCount = relaxed.numFaces();
  rep.eulerCharacteristic = relaxed.numVertices() - relaxed.numEdges() + relaxed.numFaces();
  rep.area = relaxed.totalArea();
  rep.meanEdgeLength = relaxed.meanEdgeLength();

  // geometry
  struct Geo {
    VertexVectorField normals;
    ShapeField shape;
    OperatorPair ops;
  };
  Geo geo = timer.run("geometry", [&]() {
    Geo g;
    g.normals = vertexNormals(relaxed);
    g.shape = shapeField(relaxed, g.normals);
    g.ops = assembleLaplace(relaxed);
    return g;
  });

  rep.separationThreshold = 1e-3 / rep.meanEdgeLength;
  rep.maxSeparation = geo.shape.separation.maxCoeff();
  rep.curvatureSeparation = rep.maxSeparation > rep.separationThreshold;

  // spectrum
  JacobiPair jacobi = assembleJacobi(geo.ops, geo.shape.a2);
  MorseIndexResult morse = timer.run("spectrum", [&]() {
    return morseIndex(jacobi, config.zeroTol, eigOpts);
  });
  rep.morseIndex = morse.index;
  rep.zeroGapRatio = morse.zeroGapRatio;
  rep.indexAmbiguous = morse.ambiguous;
  rep.jacobiEigenvalues.assign(morse.spectrum.eigenvalues.data(),
                               morse.spectrum.eigenvalues.data() + morse.spectrum.eigenvalues.size());
  TranslationResiduals trans = translationFieldResidual(relaxed, geo.normals, jacobi);
  rep.translationResiduals = trans.residuals;
  if (artifacts) artifacts->spectrum = morse.spectrum;

  // hodge
  struct Hodge {
    DecOperators dec;
    HarmonicBasis basis;
    ParallelRankResult rank;
    std::vector<OneFormCochain> smoothMembers;
  };
  Hodge hodge = timer.run("hodge", [&]() {
    Hodge h;
    h.dec = assembleFormLaplacian(relaxed);
    h.basis = harmonicBasis(relaxed, h.dec, 1e-8, config.bettiGap, eigOpts);
    h.rank = parallelRankCheck(relaxed, h.dec, h.basis, config.rankTol);
    // Diagonal-star kernel vectors carry mesh-frequency noise on irregular
    // meshes; the pointwise constructions use the Whitney-mass co-closed
    // representative of each class instead.
    SpMat whitneyMass = whitneyMassMatrix(relaxed);
    for (const auto& omega : h.basis.members)
      h.smoothMembers.push_back(whitneyCoclosedRepresentative(relaxed, whitneyMass, omega));
    return h;
  });
  rep.b1 = hodge.basis.b1;
  rep.parallelRank = hodge.rank.rank;

  // verify
  timer.run("verify", [&]() {
    BoundReport bound = boundReport(rep.morseIndex, rep.b1, 2);
    rep.bound = bound.bound;
    rep.boundHolds = bound.holds;
    rep.boundSharp = bound.sharp;

    for (const auto& omega : hodge.smoothMembers) {
      WedgeIdentityResult w = wedgeIdentityResidual(relaxed, omega, jacobi, geo.normals);
      rep.identityRatios.push_back(w.ratio);
      double aggregateR2 = 0.0, aggregateH2 = 0.0, frameErr = 0.0;
      for (auto [i, j] : TestFunctionSet::kPairs) {
        PointwiseIdentityResult p =
            pointwiseIdentityResidual(relaxed, omega, i, j, geo.shape, jacobi);
        aggregateR2 += p.l2Norm * p.l2Norm;
        aggregateH2 += p.h1NormOfU * p.h1NormOfU;
        frameErr = std::max(frameErr, p.frameInvarianceError);
      }
      rep.pointwiseResiduals.push_back(aggregateH2 > 0 ? std::sqrt(aggregateR2 / aggregateH2) : 0.0);
      rep.frameInvarianceErrors.push_back(frameErr);
    }

    PhiKernelResult phi = phiKernel(relaxed, geo.normals, hodge.smoothMembers, morse.spectrum,
                                    rep.morseIndex, geo.ops.massDiag, config.rankTol);
    rep.dimKerPhi = phi.dimKer;
    rep.phiGapRatio = phi.gapRatio;
    rep.kernelBoundHolds = phi.dimKer <= 2 * 2 - 1;

    // b1 >= n+1 unless flat and totally geodesic.
    double a2scale = geo.shape.a2.maxCoeff() * rep.meanEdgeLength * rep.meanEdgeLength;
    bool flatBranch = !rep.curvatureSeparation && a2scale < 1e-6;
    rep.betti12Branch = flatBranch ? "flat totally geodesic" : "b1 >= n+1";
    rep.betti12Holds = flatBranch || rep.b1 >= 3;
  });

  return rep;
}

std::string reportToJson(const VerificationReport& r) {
  json j;
  j["schema_version"] = r.schemaVersion;
  j["mesh_id"] = r.meshId;
  j["n"] = r.n;
  j["counts"] = {{"vertices", r.vertexCount}, {"edges", r.edgeCount}, {"faces", r.faceCount}};
  j["euler_characteristic"] = r.eulerCharacteristic;
  j["b1"] = r.b1;
  j["morse_index"] = r.morseIndex;
  j["zero_gap_ratio"] = r.zeroGapRatio;
  j["index_ambiguous"] = r.indexAmbiguous;
  j["bound"] = r.bound;
  j["bound_holds"] = r.boundHolds;
  j["bound_sharp"] = r.boundSharp;
  j["identity_ratios"] = r.identityRatios;
  j["pointwise_residuals"] = r.pointwiseResiduals;
  j["frame_invariance_errors"] = r.frameInvarianceErrors;
  j["dim_ker_phi"] = r.dimKerPhi;
  j["phi_gap_ratio"] = std::isfinite(r.phiGapRatio) ? r.phiGapRatio : -1.0;
  j["kernel_bound_holds"] = r.kernelBoundHolds;
  j["curvature_separation"] = r.curvatureSeparation;
  j["separation_threshold"] = r.separationThreshold;
  j["max_separation"] = r.maxSeparation;
  j["parallel_rank"] = r.parallelRank;
  j["betti12_holds"] = r.betti12Holds;
  j["betti12_branch"] = r.betti12Branch;
  j["flow_converged"] = r.flowConverged;
  j["flow_final_max_h"] = r.flowFinalMaxH;
  j["area"] = r.area;
  j["mean_edge_length"] = r.meanEdgeLength;
  j["translation_residuals"] = {r.translationResiduals[0], r.translationResiduals[1],
                                r.translationResiduals[2]};
  j["jacobi_eigenvalues"] = r.jacobiEigenvalues;
  j["tolerances"] = r.tolerances;
  j["seed"] = r.seed;
  j["threads"] = r.threads;
  j["timings"] = r.timings;
  j["config"] = r.configEcho;
  j["verdicts_pass"] = r.allVerdictsPass();
  j["failed_verdicts"] = r.failedVerdicts();
  return j.dump(2);
}

VerificationReport reportFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::BadMeshFile, std::string("report parse: ") + e.what());
  }
  VerificationReport r;
  r.schemaVersion = j.value("schema_version", 1);
  r.meshId = j.value("mesh_id", "");
  r.n = j.value("n", 2);
  if (j.contains("counts")) {
    r.vertexCount = j["counts"].value("vertices", 0);
    r.edgeCount = j["counts"].value("edges", 0);
    r.faceCount = j["counts"].value("faces", 0);
  }
  r.eulerCharacteristic = j.value("euler_characteristic", 0);
  r.b1 = j.value("b1", 0);
  r.morseIndex = j.value("morse_index", 0);
  r.zeroGapRatio = j.value("zero_gap_ratio", 0.0);
  r.indexAmbiguous = j.value("index_ambiguous", false);
  r.bound = j.value("bound", 0.0);
  r.boundHolds = j.value("bound_holds", false);
  r.boundSharp = j.value("bound_sharp", false);
  r.identityRatios = j.value("identity_ratios", std::vector<double>{});
  r.pointwiseResiduals = j.value("pointwise_residuals", std::vector<double>{});
  r.frameInvarianceErrors = j.value("frame_invariance_errors", std::vector<double>{});
  r.dimKerPhi = j.value("dim_ker_phi", 0);
  r.phiGapRatio = j.value("phi_gap_ratio", 0.0);
  r.kernelBoundHolds = j.value("kernel_bound_holds", false);
  r.curvatureSeparation = j.value("curvature_separation", false);
  r.separationThreshold = j.value("separation_threshold", 0.0);
  r.maxSeparation = j.value("max_separation", 0.0);
  r.parallelRank = j.value("parallel_rank", 0);
  r.betti12Holds = j.value("betti12_holds", false);
  r.betti12Branch = j.value("betti12_branch", "");
  r.flowConverged = j.value("flow_converged", false);
  r.flowFinalMaxH = j.value("flow_final_max_h", 0.0);
  r.area = j.value("area", 0.0);
  r.meanEdgeLength = j.value("mean_edge_length", 0.0);
  if (j.contains("translation_residuals")) {
    auto t = j["translation_residuals"].get<std::vector<double>>();
    for (size_t i = 0; i < 3 && i < t.size(); ++i) r.translationResiduals[i] = t[i];
  }
  r.jacobiEigenvalues = j.value("jacobi_eigenvalues", std::vector<double>{});
  if (j.contains("tolerances"))
    r.tolerances = j["tolerances"].get<std::map<std::string, double>>();
  r.seed = j.value("seed", 0ULL);
  r.threads = j.value("threads", 1);
  if (j.contains("timings")) r.timings = j["timings"].get<std::map<std::string, double>>();
  if (j.contains("config")) r.configEcho = j["config"].get<std::map<std::string, std::string>>();
  return r;
}

std::string spectrumToJson(const SpectrumReport& report, double zeroGap) {
  json j;
  j["eigenvalues"] = std::vector<double>(report.eigenvalues.data(),
                                         report.eigenvalues.data() + report.eigenvalues.size());
  j["negative_count"] = report.negativeCount;
  j["zero_gap"] = zeroGap;
  j["residuals"] = std::vector<double>(report.residuals.data(),
                                       report.residuals.data() + report.residuals.size());
  j["seed"] = report.seed;
  j["method"] = report.method;
  j["converged"] = report.converged;
  return j.dump(2);
}

}  // namespace torusmin
