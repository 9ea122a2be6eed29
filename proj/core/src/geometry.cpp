#include "torusmin/geometry.hpp"

#include <cmath>
#include <vector>

namespace torusmin {

VertexVectorField vertexNormals(const PeriodicMesh& mesh) {
  MeshDiagnostics diag;  // cheap local checks; full validate is the caller's job
  if (!mesh.edgeTablesConsistent())
    throw Error(ErrorCode::NotOrientable, "faces are not consistently oriented");
  for (const auto& e : mesh.edges())
    if (e.face0 == -1 || e.face1 == -1)
      throw Error(ErrorCode::NotOrientable, "mesh is not closed");
  (void)diag;

  VertexVectorField normals = VertexVectorField::Zero(mesh.numVertices(), 3);
  for (int f = 0; f < mesh.numFaces(); ++f) {
    Vec3 e0 = mesh.faceEdgeVector(f, 0);
    Vec3 e1 = mesh.faceEdgeVector(f, 1);
    Vec3 e2 = mesh.faceEdgeVector(f, 2);
    Vec3 n = e0.cross(e1);
    double nn = n.norm();
    if (nn == 0.0) throw Error(ErrorCode::DegenerateTriangle, "zero-area face " + std::to_string(f));
    n /= nn;
    // Corner angles: tail corner of side s sits between side s and -side (s+2).
    const Vec3* sides[3] = {&e0, &e1, &e2};
    for (int s = 0; s < 3; ++s) {
      const Vec3& u = *sides[s];
      Vec3 v = -*sides[(s + 2) % 3];
      double angle = std::atan2(u.cross(v).norm(), u.dot(v));
      normals.row(mesh.faces()[f][s]) += angle * n.transpose();
    }
  }
  for (int v = 0; v < mesh.numVertices(); ++v) {
    double len = normals.row(v).norm();
    if (len == 0.0)
      throw Error(ErrorCode::DegenerateNeighborhood, "vertex " + std::to_string(v) + " has no area");
    normals.row(v) /= len;
  }
  return normals;
}

OperatorPair assembleLaplace(const PeriodicMesh& mesh) {
  const int V = mesh.numVertices();
  const int F = mesh.numFaces();

  std::vector<double> areas(F);
  double meanArea = 0.0;
  for (int f = 0; f < F; ++f) {
    areas[f] = mesh.faceArea(f);
    meanArea += areas[f];
  }
  meanArea /= std::max(F, 1);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(F) * 12);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(V);
  for (int f = 0; f < F; ++f) {
    if (areas[f] < 1e-14 * meanArea)
      throw Error(ErrorCode::DegenerateTriangle, "face " + std::to_string(f) + " area below threshold");
    Vec3 e0 = mesh.faceEdgeVector(f, 0);
    Vec3 e1 = mesh.faceEdgeVector(f, 1);
    Vec3 e2 = mesh.faceEdgeVector(f, 2);
    const auto& fv = mesh.faces()[f];
    const Vec3* sides[3] = {&e0, &e1, &e2};
    for (int s = 0; s < 3; ++s) {
      // cot of the angle at the corner opposite side s (corner s+2's vertex).
      int corner = (s + 2) % 3;
      Vec3 u = -*sides[(corner + 2) % 3];
      Vec3 w = *sides[corner];
      double cot = u.dot(w) / u.cross(w).norm();
      int a = fv[s], b = fv[(s + 1) % 3];
      double half = 0.5 * cot;
      trips.emplace_back(a, a, half);
      trips.emplace_back(b, b, half);
      trips.emplace_back(a, b, -half);
      trips.emplace_back(b, a, -half);
    }
    double third = areas[f] / 3.0;
    for (int s = 0; s < 3; ++s) mass[fv[s]] += third;
  }

  OperatorPair out;
  out.stiffness.resize(V, V);
  out.stiffness.setFromTriplets(trips.begin(), trips.end());
  out.massDiag = std::move(mass);
  out.totalArea = out.massDiag.sum();
  return out;
}

GaussDefect gaussDefect(const PeriodicMesh& mesh) {
  const int V = mesh.numVertices();
  GaussDefect out;
  out.defect = VertexField::Constant(V, 2.0 * M_PI);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(V);
  for (int f = 0; f < mesh.numFaces(); ++f) {
    Vec3 e0 = mesh.faceEdgeVector(f, 0);
    Vec3 e1 = mesh.faceEdgeVector(f, 1);
    Vec3 e2 = mesh.faceEdgeVector(f, 2);
    const Vec3* sides[3] = {&e0, &e1, &e2};
    double third = mesh.faceArea(f) / 3.0;
    for (int s = 0; s < 3; ++s) {
      const Vec3& u = *sides[s];
      Vec3 v = -*sides[(s + 2) % 3];
      out.defect[mesh.faces()[f][s]] -= std::atan2(u.cross(v).norm(), u.dot(v));
      mass[mesh.faces()[f][s]] += third;
    }
  }
  out.curvature = out.defect.array() / mass.array();
  out.total = out.defect.sum();
  return out;
}

namespace {

// Gathers ring neighbors (by hop count) with unwrapped relative positions.
void collectRing(const PeriodicMesh& mesh, int v, int hops, std::vector<int>& ids,
                 std::vector<Vec3>& rel) {
  ids.clear();
  rel.clear();
  std::vector<int> frontier = {v};
  std::vector<Vec3> frontierPos = {Vec3::Zero()};
  std::vector<int> seenIdx;  // parallel to ids
  auto known = [&](int u) {
    if (u == v) return true;
    for (int w : ids)
      if (w == u) return true;
    return false;
  };
  for (int hop = 0; hop < hops; ++hop) {
    std::vector<int> next;
    std::vector<Vec3> nextPos;
    for (size_t i = 0; i < frontier.size(); ++i) {
      int w = frontier[i];
      for (int j = mesh.vertexEdgeOffsets()[w]; j < mesh.vertexEdgeOffsets()[w + 1]; ++j) {
        auto [u, e] = mesh.vertexEdgeList()[j];
        if (known(u)) continue;
        Vec3 p = frontierPos[i] + mesh.edgeVector(e, mesh.edges()[e].tail != w);
        ids.push_back(u);
        rel.push_back(p);
        next.push_back(u);
        nextPos.push_back(p);
      }
    }
    frontier = std::move(next);
    frontierPos = std::move(nextPos);
  }
  (void)seenIdx;
}

bool fitQuadric(const std::vector<Vec3>& rel, const Vec3& t1, const Vec3& t2, const Vec3& n,
                Eigen::Matrix2d& secondForm, Eigen::Vector2d& grad) {
  const int s = static_cast<int>(rel.size());
  if (s < 5) return false;
  Eigen::MatrixXd A(s, 5);
  Eigen::VectorXd h(s);
  for (int i = 0; i < s; ++i) {
    double x = rel[i].dot(t1);
    double y = rel[i].dot(t2);
    A.row(i) << 0.5 * x * x, x * y, 0.5 * y * y, x, y;
    h[i] = rel[i].dot(n);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < 5) return false;
  Eigen::VectorXd c = qr.solve(h);
  secondForm << c[0], c[1], c[1], c[2];
  grad << c[3], c[4];
  return true;
}

}  // namespace

ShapeField shapeField(const PeriodicMesh& mesh, const VertexVectorField& normals) {
  const int V = mesh.numVertices();
  if (normals.rows() != V) throw Error(ErrorCode::ShapeMismatch, "normals size mismatch");

  ShapeField out;
  out.normals = normals;
  out.k1.resize(V);
  out.k2.resize(V);
  out.a2.resize(V);
  out.meanCurvature.resize(V);
  out.separation.resize(V);
  out.tensor.resize(V, 6);

  std::vector<int> ids;
  std::vector<Vec3> rel;
  for (int v = 0; v < V; ++v) {
    Vec3 n = normals.row(v).transpose();
    Vec3 t1 = n.cross(std::abs(n[0]) < 0.9 ? Vec3::UnitX() : Vec3::UnitY()).normalized();
    Vec3 t2 = n.cross(t1);

    Eigen::Matrix2d II;
    Eigen::Vector2d g;
    bool ok = false;
    for (int hops : {2, 3}) {
      collectRing(mesh, v, hops, ids, rel);
      if (fitQuadric(rel, t1, t2, n, II, g)) {
        ok = true;
        break;
      }
    }
    if (!ok)
      throw Error(ErrorCode::DegenerateNeighborhood,
                  "quadric fit rank-deficient at vertex " + std::to_string(v));

    // Monge-patch correction: first fundamental form of the graph and the
    // normalized second form.
    double w2 = 1.0 + g.squaredNorm();
    Eigen::Matrix2d I;
    I << 1.0 + g[0] * g[0], g[0] * g[1], g[0] * g[1], 1.0 + g[1] * g[1];
    Eigen::Matrix2d IInorm = II / std::sqrt(w2);

    // Generalized symmetric 2x2 eigenproblem (IInorm, I).
    Eigen::LLT<Eigen::Matrix2d> llt(I);
    Eigen::Matrix2d L = llt.matrixL();
    Eigen::Matrix2d C = L.triangularView<Eigen::Lower>().solve(
        L.triangularView<Eigen::Lower>().solve(IInorm).transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(C);
    Eigen::Vector2d k = es.eigenvalues();
    Eigen::Matrix2d R = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());

    // Chart basis of the graph and the ambient principal directions.
    Vec3 b1 = t1 + g[0] * n;
    Vec3 b2 = t2 + g[1] * n;
    Eigen::Matrix3d tensor = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 2; ++i) {
      Vec3 dir = R(0, i) * b1 + R(1, i) * b2;
      tensor += k[i] * dir * dir.transpose();
    }

    out.k1[v] = k[0];
    out.k2[v] = k[1];
    out.a2[v] = k[0] * k[0] + k[1] * k[1];
    out.meanCurvature[v] = k[0] + k[1];
    out.separation[v] = k[1] - k[0];
    out.tensor.row(v) << tensor(0, 0), tensor(1, 1), tensor(2, 2), tensor(0, 1), tensor(0, 2),
        tensor(1, 2);
  }
  out.minSeparation = out.separation.minCoeff();
  return out;
}

Eigen::Matrix3d shapeTensorAt(const ShapeField& shape, int vertex) {
  const auto& r = shape.tensor.row(vertex);
  Eigen::Matrix3d t;
  t << r[0], r[3], r[4], r[3], r[1], r[5], r[4], r[5], r[2];
  return t;
}

}  // namespace torusmin
