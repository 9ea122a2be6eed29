#include "torusmin/hodge.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

namespace torusmin {

DecOperators assembleFormLaplacian(const PeriodicMesh& mesh, DualScheme scheme) {
  const int V = mesh.numVertices();
  const int E = mesh.numEdges();
  const int F = mesh.numFaces();

  DecOperators dec;
  dec.scheme = scheme;

  std::vector<Eigen::Triplet<double>> t0, t1;
  t0.reserve(2 * E);
  for (int e = 0; e < E; ++e) {
    t0.emplace_back(e, mesh.edges()[e].tail, -1.0);
    t0.emplace_back(e, mesh.edges()[e].head, 1.0);
  }
  dec.d0.resize(E, V);
  dec.d0.setFromTriplets(t0.begin(), t0.end());

  t1.reserve(3 * F);
  for (int f = 0; f < F; ++f)
    for (int s = 0; s < 3; ++s)
      t1.emplace_back(f, mesh.faceEdges()[f][s], static_cast<double>(mesh.faceEdgeSigns()[f][s]));
  dec.d1.resize(F, E);
  dec.d1.setFromTriplets(t1.begin(), t1.end());

  dec.star0.setZero(V);
  dec.star2.setZero(F);
  Eigen::VectorXd dualLen = Eigen::VectorXd::Zero(E);
  Eigen::VectorXd primalLen(E);
  for (int e = 0; e < E; ++e) primalLen[e] = mesh.edgeVector(e).norm();

  for (int f = 0; f < F; ++f) {
    Vec3 x0 = Vec3::Zero();
    Vec3 x1 = mesh.faceEdgeVector(f, 0);
    Vec3 x2 = x1 + mesh.faceEdgeVector(f, 1);
    double area = 0.5 * (x1 - x0).cross(x2 - x0).norm();
    if (area <= 0.0) throw Error(ErrorCode::DegenerateTriangle, "zero-area face " + std::to_string(f));
    dec.star2[f] = 1.0 / area;
    const Vec3 corners[3] = {x0, x1, x2};
    Vec3 bary = (x0 + x1 + x2) / 3.0;
    for (int s = 0; s < 3; ++s) {
      dec.star0[mesh.faces()[f][s]] += area / 3.0;
      if (scheme == DualScheme::Barycentric) {
        Vec3 midpoint = 0.5 * (corners[s] + corners[(s + 1) % 3]);
        dualLen[mesh.faceEdges()[f][s]] += (bary - midpoint).norm();
      }
    }
  }

  if (scheme == DualScheme::Circumcentric) {
    // Cotan weights; fall back wholesale if any weight is non-positive.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(E);
    for (int f = 0; f < F; ++f) {
      Vec3 e0 = mesh.faceEdgeVector(f, 0);
      Vec3 e1 = mesh.faceEdgeVector(f, 1);
      Vec3 e2 = mesh.faceEdgeVector(f, 2);
      const Vec3* sides[3] = {&e0, &e1, &e2};
      for (int s = 0; s < 3; ++s) {
        int corner = (s + 2) % 3;
        Vec3 u = -*sides[(corner + 2) % 3];
        Vec3 vv = *sides[corner];
        w[mesh.faceEdges()[f][s]] += 0.5 * u.dot(vv) / u.cross(vv).norm();
      }
    }
    if ((w.array() <= 0.0).any()) {
      dec.fellBackToBarycentric = true;
      DecOperators bary = assembleFormLaplacian(mesh, DualScheme::Barycentric);
      bary.fellBackToBarycentric = true;
      bary.scheme = DualScheme::Circumcentric;
      return bary;
    }
    dec.star1 = w;
  } else {
    dec.star1 = dualLen.array() / primalLen.array();
  }

  // L1 = *1 d0 *0^-1 d0' *1 + d1' *2 d1
  SpMat left = dec.star1.asDiagonal() * dec.d0;  // E x V
  SpMat term1 = left * Eigen::VectorXd(dec.star0.cwiseInverse()).asDiagonal() * left.transpose();
  SpMat term2 = dec.d1.transpose() * dec.star2.asDiagonal() * dec.d1;
  dec.formLaplacian = term1 + term2;
  dec.formLaplacian.makeCompressed();
  return dec;
}

HarmonicBasis harmonicBasis(const PeriodicMesh& mesh, const DecOperators& dec, double tol,
                            double gapRequirement, const EigenOptions& optsIn) {
  const int E = mesh.numEdges();
  const int chi = mesh.numVertices() - E + mesh.numFaces();
  const int expected = 2 - chi;
  if (expected < 1 || expected >= E)
    throw Error(ErrorCode::TopologyMismatch, "2 - chi out of range for a harmonic basis");

  EigenOptions opts = optsIn;
  opts.psdHint = true;
  int k = std::min(E - 1, expected + 4);
  opts.strictCount = std::min(expected, k);
  EigenResult r = smallestEigenpairs(dec.formLaplacian, dec.star1, k, opts);
  if (!r.converged)
    throw Error(ErrorCode::SolverStalled, "1-form eigensolve did not converge");

  Eigen::VectorXd mu = r.eigenvalues.cwiseMax(0.0);
  const double scale = std::max(mu[k - 1], 1e-300);
  const double floorVal = 1e-14 * scale;

  // Split at the largest consecutive ratio.
  int split = 0;
  double bestRatio = 0.0;
  for (int i = 0; i + 1 < k; ++i) {
    double ratio = (mu[i + 1] + floorVal) / (mu[i] + floorVal);
    if (ratio > bestRatio) {
      bestRatio = ratio;
      split = i + 1;
    }
  }
  HarmonicBasis out;
  out.eigenvalues = r.eigenvalues;
  out.gapRatio = bestRatio;
  out.b1 = split;
  out.nullspaceTolerance = tol * mu[std::min(split, k - 1)];

  if (bestRatio < gapRequirement)
    throw Error(ErrorCode::BettiAmbiguous,
                "nullspace gap ratio " + std::to_string(bestRatio) + " below requirement");
  // Consistency with the threshold rule: everything below tol * first positive.
  int countBelow = 0;
  for (int i = 0; i < k; ++i)
    if (mu[i] < tol * mu[split]) ++countBelow;
  if (countBelow != split)
    throw Error(ErrorCode::BettiAmbiguous, "gap split and threshold rule disagree");
  if (split != expected)
    throw Error(ErrorCode::TopologyMismatch,
                "nullspace dimension " + std::to_string(split) + " != 2 - chi = " +
                    std::to_string(expected));

  out.members.reserve(split);
  for (int i = 0; i < split; ++i) out.members.push_back(r.eigenvectors.col(i));
  out.residuals.resize(split);
  for (int i = 0; i < split; ++i) {
    Eigen::VectorXd res = dec.formLaplacian * out.members[i];
    out.residuals[i] = std::sqrt((res.array().square() / dec.star1.array()).sum());
  }
  out.gram.resize(split, split);
  for (int i = 0; i < split; ++i)
    for (int j = 0; j < split; ++j)
      out.gram(i, j) = (out.members[i].array() * dec.star1.array() * out.members[j].array()).sum();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.gram);
  out.gramConditionNumber =
      svd.singularValues()[0] / std::max(svd.singularValues()[split - 1], 1e-300);
  return out;
}

OneFormCochain restrictParallel(const PeriodicMesh& mesh, const Vec3& covector) {
  OneFormCochain out(mesh.numEdges());
  for (int e = 0; e < mesh.numEdges(); ++e) out[e] = covector.dot(mesh.edgeVector(e));
  return out;
}

ParallelRankResult parallelRankCheck(const PeriodicMesh& mesh, const DecOperators& dec,
                                     const HarmonicBasis& basis, double tol) {
  const int b1 = basis.b1;
  Eigen::MatrixXd B(b1, 3);
  for (int axis = 0; axis < 3; ++axis) {
    OneFormCochain r = restrictParallel(mesh, Vec3::Unit(axis));
    for (int j = 0; j < b1; ++j)
      B(j, axis) = (basis.members[j].array() * dec.star1.array() * r.array()).sum();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(basis.gram);
  Eigen::MatrixXd Y = llt.matrixL().solve(B);  // Gram^{-1/2} coords, b1 x 3

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ParallelRankResult out;
  out.singularValues = svd.singularValues();
  double smax = out.singularValues.size() ? out.singularValues[0] : 0.0;
  out.rank = 0;
  for (int i = 0; i < out.singularValues.size(); ++i)
    if (out.singularValues[i] > tol * smax) ++out.rank;
  out.projectionCoefficients = llt.solve(B).transpose();  // 3 x b1
  return out;
}

FaceVectorField faceSharpField(const PeriodicMesh& mesh, const OneFormCochain& omega) {
  if (omega.size() != mesh.numEdges()) throw Error(ErrorCode::ShapeMismatch, "cochain size mismatch");
  const int F = mesh.numFaces();
  FaceVectorField out(F, 3);
  for (int f = 0; f < F; ++f) {
    Vec3 e01 = mesh.faceEdgeVector(f, 0);
    Vec3 e02 = -mesh.faceEdgeVector(f, 2);
    double c01 = mesh.faceEdgeSigns()[f][0] * omega[mesh.faceEdges()[f][0]];
    double c02 = -mesh.faceEdgeSigns()[f][2] * omega[mesh.faceEdges()[f][2]];
    double g11 = e01.dot(e01), g12 = e01.dot(e02), g22 = e02.dot(e02);
    double det = g11 * g22 - g12 * g12;
    if (det <= 0.0) throw Error(ErrorCode::DegenerateTriangle, "face " + std::to_string(f));
    double alpha = (c01 * g22 - c02 * g12) / det;
    double beta = (c02 * g11 - c01 * g12) / det;
    out.row(f) = (alpha * e01 + beta * e02).transpose();
  }
  return out;
}

VertexVectorField sharpField(const PeriodicMesh& mesh, const VertexVectorField& normals,
                             const OneFormCochain& omega) {
  FaceVectorField perFace = faceSharpField(mesh, omega);
  const int V = mesh.numVertices();
  VertexVectorField out = VertexVectorField::Zero(V, 3);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(V);
  for (int f = 0; f < mesh.numFaces(); ++f) {
    double third = mesh.faceArea(f) / 3.0;
    for (int s = 0; s < 3; ++s) {
      out.row(mesh.faces()[f][s]) += third * perFace.row(f);
      mass[mesh.faces()[f][s]] += third;
    }
  }
  for (int v = 0; v < V; ++v) {
    out.row(v) /= mass[v];
    out.row(v) -= out.row(v).dot(normals.row(v)) * normals.row(v);
  }
  return out;
}

OneFormCochain harmonicProjection(const PeriodicMesh& mesh, const DecOperators& dec,
                                  const OneFormCochain& omega) {
  if (omega.size() != mesh.numEdges()) throw Error(ErrorCode::ShapeMismatch, "cochain size mismatch");

  // Exact part: vertex Poisson solve (one dof pinned; both systems have
  // constant kernels and compatible right-hand sides, so the pin is exact).
  SpMat L0 = dec.d0.transpose() * dec.star1.asDiagonal() * dec.d0;
  double kappa0 = L0.diagonal().mean();
  L0.coeffRef(0, 0) += kappa0;
  L0.makeCompressed();
  Eigen::SimplicialLDLT<SpMat> solver0(L0);
  if (solver0.info() != Eigen::Success)
    throw Error(ErrorCode::SolverStalled, "vertex Poisson factorization failed");
  Eigen::VectorXd rhs0 = dec.d0.transpose() * dec.star1.asDiagonal() * omega;
  rhs0.array() -= rhs0.mean();  // enforce exact compatibility against rounding
  Eigen::VectorXd alpha = solver0.solve(rhs0);

  // Co-exact part: face Poisson solve for y with d1 *1^-1 d1' y = d1 omega.
  SpMat LF = dec.d1 * Eigen::VectorXd(dec.star1.cwiseInverse()).asDiagonal() * dec.d1.transpose();
  double kappaF = LF.diagonal().mean();
  LF.coeffRef(0, 0) += kappaF;
  LF.makeCompressed();
  Eigen::SimplicialLDLT<SpMat> solverF(LF);
  if (solverF.info() != Eigen::Success)
    throw Error(ErrorCode::SolverStalled, "face Poisson factorization failed");
  Eigen::VectorXd rhsF = dec.d1 * omega;
  rhsF.array() -= rhsF.mean();
  Eigen::VectorXd y = solverF.solve(rhsF);

  return omega - dec.d0 * alpha - dec.star1.cwiseInverse().asDiagonal() * (dec.d1.transpose() * y);
}

SpMat whitneyMassMatrix(const PeriodicMesh& mesh) {
  const int E = mesh.numEdges();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.numFaces()) * 9);
  for (int f = 0; f < mesh.numFaces(); ++f) {
    Vec3 e0 = mesh.faceEdgeVector(f, 0);
    Vec3 e1 = mesh.faceEdgeVector(f, 1);
    Vec3 n = e0.cross(e1);
    double dA = n.norm();
    if (dA == 0.0) throw Error(ErrorCode::DegenerateTriangle, "face " + std::to_string(f));
    n /= dA;
    double area = 0.5 * dA;
    const Vec3 corners[3] = {Vec3::Zero(), e0, e0 + e1};
    Vec3 grad[3];
    for (int k = 0; k < 3; ++k) {
      Vec3 opp = corners[(k + 2) % 3] - corners[(k + 1) % 3];
      grad[k] = n.cross(opp) / dA;
    }
    Eigen::Matrix3d G, I;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        G(a, b) = grad[a].dot(grad[b]);
        I(a, b) = area / 12.0 * (a == b ? 2.0 : 1.0);
      }
    // side s runs from local vertex s to s+1: W_s = l_s d l_{s+1} - l_{s+1} d l_s
    for (int s = 0; s < 3; ++s)
      for (int t = 0; t < 3; ++t) {
        int s1 = (s + 1) % 3, t1 = (t + 1) % 3;
        double val = I(s, t) * G(s1, t1) - I(s, t1) * G(s1, t) - I(s1, t) * G(s, t1) +
                     I(s1, t1) * G(s, t);
        val *= mesh.faceEdgeSigns()[f][s] * mesh.faceEdgeSigns()[f][t];
        trips.emplace_back(mesh.faceEdges()[f][s], mesh.faceEdges()[f][t], val);
      }
  }
  SpMat M(E, E);
  M.setFromTriplets(trips.begin(), trips.end());
  return M;
}

OneFormCochain whitneyCoclosedRepresentative(const PeriodicMesh& mesh, const SpMat& whitneyMass,
                                             const OneFormCochain& omega) {
  if (omega.size() != mesh.numEdges()) throw Error(ErrorCode::ShapeMismatch, "cochain size mismatch");
  const int E = mesh.numEdges();
  const int V = mesh.numVertices();

  SpMat d0(E, V);
  {
    std::vector<Eigen::Triplet<double>> t0;
    t0.reserve(2 * E);
    for (int e = 0; e < E; ++e) {
      t0.emplace_back(e, mesh.edges()[e].tail, -1.0);
      t0.emplace_back(e, mesh.edges()[e].head, 1.0);
    }
    d0.setFromTriplets(t0.begin(), t0.end());
  }
  // d0' Mw d0 is exactly the cotan stiffness; pin one dof (kernel = constants,
  // right-hand side compatible).
  SpMat S = d0.transpose() * whitneyMass * d0;
  double kappa = S.diagonal().mean();
  S.coeffRef(0, 0) += kappa;
  S.makeCompressed();
  Eigen::SimplicialLDLT<SpMat> solver(S);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::SolverStalled, "Whitney representative factorization failed");
  Eigen::VectorXd rhs = d0.transpose() * (whitneyMass * omega);
  rhs.array() -= rhs.mean();
  Eigen::VectorXd alpha = solver.solve(rhs);
  return omega - d0 * alpha;
}

std::string cochainToCsv(const PeriodicMesh& mesh, const OneFormCochain& omega) {
  std::ostringstream out;
  out.precision(17);
  out << "edge,tail,head,value\n";
  for (int e = 0; e < mesh.numEdges(); ++e)
    out << e << "," << mesh.edges()[e].tail << "," << mesh.edges()[e].head << "," << omega[e] << "\n";
  return out.str();
}

}  // namespace torusmin
