#include "torusmin/refine.hpp"

#include <cmath>

namespace torusmin {

SubdivisionResult subdivide(const PeriodicMesh& mesh) {
  const int V = mesh.numVertices();
  const int E = mesh.numEdges();
  const int F = mesh.numFaces();

  Eigen::Matrix<double, Eigen::Dynamic, 3> pos(V + E, 3);
  pos.topRows(V) = mesh.verticesLattice();

  // Canonical midpoint representative per edge, plus the wrap offset of the
  // midpoint relative to the canonical tail frame.
  std::vector<int> mid(E);
  std::vector<Eigen::RowVector3d> midValue(E);  // unwrapped value in the canonical frame
  std::vector<Vec3i> midWrap(E);
  for (int e = 0; e < E; ++e) {
    const auto& edge = mesh.edges()[e];
    Eigen::RowVector3d unwrapped = 0.5 * (mesh.verticesLattice().row(edge.tail) +
                                          mesh.verticesLattice().row(edge.head) +
                                          edge.shift.cast<double>().transpose());
    midValue[e] = unwrapped;
    Eigen::RowVector3d rep;
    Vec3i wrap;
    for (int c = 0; c < 3; ++c) {
      double fl = std::floor(unwrapped[c]);
      double r = unwrapped[c] - fl;
      if (r >= 1.0) {
        r -= 1.0;
        fl += 1.0;
      }
      rep[c] = r;
      wrap[c] = static_cast<int>(fl);
    }
    mid[e] = V + e;
    midWrap[e] = wrap;
    pos.row(V + e) = rep;
  }

  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<Vec3i, 3>> shifts;
  faces.reserve(4 * F);
  shifts.reserve(4 * F);

  for (int f = 0; f < F; ++f) {
    const auto& fv = mesh.faces()[f];
    const auto& fs = mesh.faceShifts()[f];
    // Corner offsets in the face frame.
    std::array<Vec3i, 3> sigma = {Vec3i::Zero(), fs[0], Vec3i(fs[0] + fs[1])};

    // Midpoint offsets in the face frame: the face-frame midpoint equals the
    // canonical unwrapped value plus an exact integer vector.
    std::array<int, 3> mv;      // midpoint vertex ids per side
    std::array<Vec3i, 3> rho;   // midpoint offsets in the face frame
    for (int s = 0; s < 3; ++s) {
      int e = mesh.faceEdges()[f][s];
      mv[s] = mid[e];
      Eigen::RowVector3d faceMid =
          0.5 * (mesh.verticesLattice().row(fv[s]) + sigma[s].cast<double>().transpose() +
                 mesh.verticesLattice().row(fv[(s + 1) % 3]) +
                 sigma[(s + 1) % 3].cast<double>().transpose());
      Eigen::RowVector3d rep = pos.row(mid[e]);
      Eigen::RowVector3d diff = faceMid - rep;
      Vec3i off;
      for (int c = 0; c < 3; ++c) {
        off[c] = static_cast<int>(std::lround(diff[c]));
        if (std::abs(diff[c] - off[c]) > 1e-9)
          throw Error(ErrorCode::InvalidArgument, "non-integer midpoint offset during subdivision");
      }
      rho[s] = off;
    }

    auto emit = [&](int a, const Vec3i& oa, int b, const Vec3i& ob, int c, const Vec3i& oc) {
      faces.push_back({a, b, c});
      shifts.push_back({Vec3i(ob - oa), Vec3i(oc - ob), Vec3i(oa - oc)});
    };
    // Corner triangles keep the parent orientation; the central one too.
    emit(fv[0], sigma[0], mv[0], rho[0], mv[2], rho[2]);
    emit(fv[1], sigma[1], mv[1], rho[1], mv[0], rho[0]);
    emit(fv[2], sigma[2], mv[2], rho[2], mv[1], rho[1]);
    emit(mv[0], rho[0], mv[1], rho[1], mv[2], rho[2]);
  }

  SubdivisionResult out{PeriodicMesh(mesh.lattice(), std::move(pos), std::move(faces), std::move(shifts)),
                        std::move(mid)};
  out.mesh.setId(mesh.id().empty() ? "subdivided" : mesh.id() + "-sub");
  return out;
}

Eigen::VectorXd prolongOneForm(const PeriodicMesh& coarse, const SubdivisionResult& sub,
                               const Eigen::VectorXd& coarseValues) {
  if (coarseValues.size() != coarse.numEdges())
    throw Error(ErrorCode::ShapeMismatch, "cochain size mismatch");
  const PeriodicMesh& fine = sub.mesh;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(fine.numEdges());

  auto setValue = [&](int tail, int head, double value) {
    int e = fine.edgeIdBetween(tail, head);
    out[e] = (fine.edges()[e].tail == tail) ? value : -value;
  };

  // Halves of coarse edges carry half the coarse integral.
  for (int e = 0; e < coarse.numEdges(); ++e) {
    const auto& edge = coarse.edges()[e];
    int m = sub.edgeMidpoint[e];
    setValue(edge.tail, m, 0.5 * coarseValues[e]);
    setValue(m, edge.head, 0.5 * coarseValues[e]);
  }
  // Interior edges: integral of the coarse Whitney form between side midpoints;
  // for the side cochain values (c01, c12, c20) of a face, the segment from
  // mid01 to mid12 integrates to (c01 + c12 - c20)/4, cyclically.
  for (int f = 0; f < coarse.numFaces(); ++f) {
    double c[3];
    for (int s = 0; s < 3; ++s)
      c[s] = coarse.faceEdgeSigns()[f][s] * coarseValues[coarse.faceEdges()[f][s]];
    int m[3];
    for (int s = 0; s < 3; ++s) m[s] = sub.edgeMidpoint[coarse.faceEdges()[f][s]];
    for (int s = 0; s < 3; ++s) {
      int sNext = (s + 1) % 3, sPrev = (s + 2) % 3;
      double value = 0.25 * (c[s] + c[sNext] - c[sPrev]);
      setValue(m[s], m[sNext], value);
    }
  }
  return out;
}

}  // namespace torusmin
