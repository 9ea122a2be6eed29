#include "torusmin/generators.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace torusmin {

TpmsFamily tpmsFamilyFromString(const std::string& s) {
  if (s == "P" || s == "p") return TpmsFamily::P;
  if (s == "D" || s == "d") return TpmsFamily::D;
  if (s == "G" || s == "g") return TpmsFamily::G;
  throw Error(ErrorCode::UsageError, "unknown surface family: " + s);
}

const char* tpmsFamilyName(TpmsFamily f) {
  switch (f) {
    case TpmsFamily::P: return "P";
    case TpmsFamily::D: return "D";
    case TpmsFamily::G: return "G";
  }
  return "?";
}

double nodalValue(TpmsFamily family, const Vec3& p) {
  const double x = p[0], y = p[1], z = p[2];
  switch (family) {
    case TpmsFamily::P:
      return std::cos(x) + std::cos(y) + std::cos(z);
    case TpmsFamily::D:
      return std::sin(x) * std::sin(y) * std::sin(z) + std::sin(x) * std::cos(y) * std::cos(z) +
             std::cos(x) * std::sin(y) * std::cos(z) + std::cos(x) * std::cos(y) * std::sin(z);
    case TpmsFamily::G:
      return std::sin(x) * std::cos(y) + std::sin(y) * std::cos(z) + std::sin(z) * std::cos(x);
  }
  return 0.0;
}

Lattice tpmsPrimitiveLattice(TpmsFamily family) {
  const double pi = M_PI;
  Eigen::Matrix3d B;
  switch (family) {
    case TpmsFamily::P:
      B = 2.0 * pi * Eigen::Matrix3d::Identity();
      break;
    case TpmsFamily::D:
      // FCC: columns (pi,pi,0), (pi,0,pi), (0,pi,pi).
      B << pi, pi, 0, pi, 0, pi, 0, pi, pi;
      break;
    case TpmsFamily::G:
      // BCC: columns (-pi,pi,pi), (pi,-pi,pi), (pi,pi,-pi).
      B << -pi, pi, pi, pi, -pi, pi, pi, pi, -pi;
      break;
  }
  return Lattice(B);
}

PeriodicMesh flatTorusMesh(const Lattice& lattice, int normalAxis, int resolution) {
  if (lattice.dimension() != 3)
    throw Error(ErrorCode::InvalidArgument, "flatTorusMesh needs a 3d lattice");
  if (normalAxis < 0 || normalAxis > 2)
    throw Error(ErrorCode::InvalidArgument, "normal axis must be 0, 1 or 2");
  if (resolution < 3) throw Error(ErrorCode::TooCoarse, "resolution must be >= 3");

  const Eigen::Matrix3d& B = lattice.basis();
  const int u = (normalAxis + 1) % 3;
  const int v = (normalAxis + 2) % 3;
  // The plane spanned by the two remaining basis vectors must be orthogonal to
  // the chosen Euclidean axis for the quotient torus to be totally geodesic
  // with constant normal.
  for (int c : {u, v})
    if (std::abs(B(normalAxis, c)) > 1e-12 * B.col(c).norm())
      throw Error(ErrorCode::InvalidArgument,
                  "lattice has no sublattice plane orthogonal to the chosen axis");

  const int m = resolution;
  Eigen::Matrix<double, Eigen::Dynamic, 3> verts(m * m, 3);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Eigen::RowVector3d p = Eigen::RowVector3d::Zero();
      p[u] = static_cast<double>(i) / m;
      p[v] = static_cast<double>(j) / m;
      verts.row(i * m + j) = p;
    }

  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<Vec3i, 3>> shifts;
  faces.reserve(2 * m * m);
  shifts.reserve(2 * m * m);
  auto vid = [&](int i, int j) { return ((i % m + m) % m) * m + ((j % m + m) % m); };
  auto offset = [&](int i, int j) {
    Vec3i s = Vec3i::Zero();
    s[u] = (i >= m) ? 1 : 0;
    s[v] = (j >= m) ? 1 : 0;
    return s;
  };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      // Cell corners in the unwrapped frame of (i, j).
      std::array<std::pair<int, int>, 4> c = {{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      auto addFace = [&](int a, int b, int d) {
        faces.push_back({vid(c[a].first, c[a].second), vid(c[b].first, c[b].second),
                         vid(c[d].first, c[d].second)});
        Vec3i oa = offset(c[a].first, c[a].second);
        Vec3i ob = offset(c[b].first, c[b].second);
        Vec3i od = offset(c[d].first, c[d].second);
        shifts.push_back({Vec3i(ob - oa), Vec3i(od - ob), Vec3i(oa - od)});
      };
      addFace(0, 1, 2);
      addFace(0, 2, 3);
    }

  PeriodicMesh mesh(lattice, std::move(verts), std::move(faces), std::move(shifts));
  mesh.setId("flat-m" + std::to_string(m) + "-axis" + std::to_string(normalAxis));
  return mesh;
}

namespace {

// Freudenthal 6-tet decomposition of the unit lattice cube: one tet per
// permutation, corners ordered along the main diagonal.
struct TetTable {
  std::array<std::array<Vec3i, 4>, 6> tets;
  TetTable() {
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int t = 0; t < 6; ++t) {
      Vec3i cur = Vec3i::Zero();
      tets[t][0] = cur;
      for (int s = 0; s < 3; ++s) {
        cur[perms[t][s]] += 1;
        tets[t][s + 1] = cur;
      }
    }
  }
};

uint64_t gridEdgeKey(const Vec3i& aw, const Vec3i& d, int /*m*/) {
  uint64_t key = 0;
  for (int i = 0; i < 3; ++i) key = (key << 12) | static_cast<uint64_t>(aw[i]);
  for (int i = 0; i < 3; ++i) key = (key << 2) | static_cast<uint64_t>(d[i] + 0);
  return key;
}

}  // namespace

PeriodicMesh marchingTetrahedra(const Lattice& lattice, int resolution,
                                const std::function<double(const Vec3&)>& f) {
  if (lattice.dimension() != 3)
    throw Error(ErrorCode::InvalidArgument, "marchingTetrahedra needs a 3d lattice");
  if (resolution < 16) throw Error(ErrorCode::TooCoarse, "resolution must be >= 16");
  if (resolution > 2048) throw Error(ErrorCode::InvalidArgument, "resolution too large");
  const int m = resolution;
  static const TetTable kTets;

  // Sample the periodic scalar field once per wrapped grid node.
  std::vector<double> values(static_cast<size_t>(m) * m * m);
  double maxAbs = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Vec3 q(static_cast<double>(i) / m, static_cast<double>(j) / m, static_cast<double>(k) / m);
        double val = f(lattice.basis() * q);
        values[(static_cast<size_t>(i) * m + j) * m + k] = val;
        maxAbs = std::max(maxAbs, std::abs(val));
      }
  if (maxAbs == 0.0) throw Error(ErrorCode::ExtractionFailed, "field is identically zero");

  // Samples sitting (numerically) on the level set would cap their grid node
  // with a micro-triangle. Snap them to a small positive value scaled by the
  // typical per-edge field increment so cut points stay a few percent of an
  // edge away from grid nodes.
  double medianDelta;
  {
    std::vector<double> deltas;
    deltas.reserve(3u * m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        size_t a = (static_cast<size_t>(i) * m + j) * m;
        for (int k = 0; k < m; ++k)
          deltas.push_back(std::abs(values[a + k] - values[a + (k + 1) % m]));
      }
    std::nth_element(deltas.begin(), deltas.begin() + deltas.size() / 2, deltas.end());
    medianDelta = std::max(deltas[deltas.size() / 2], 1e-12 * maxAbs);
  }
  const double snapEps = 0.05 * medianDelta;
  for (auto& v : values)
    if (std::abs(v) < snapEps) v = snapEps;

  auto value = [&](const Vec3i& node) {
    int i = ((node[0] % m) + m) % m;
    int j = ((node[1] % m) + m) % m;
    int k = ((node[2] % m) + m) % m;
    return values[(static_cast<size_t>(i) * m + j) * m + k];
  };

  std::unordered_map<uint64_t, int> vertexOf;
  std::vector<Eigen::RowVector3d> verts;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<Vec3i, 3>> faceShifts;

  // Vertex on the grid edge from absolute node a along direction d in {0,1}^3.
  // Returns (vertex id, lattice copy offset of the unwrapped instance).
  auto edgeVertex = [&](const Vec3i& a, const Vec3i& b, int& id, Vec3i& sigma) {
    Vec3i d = b - a;
    Vec3i aw(((a[0] % m) + m) % m, ((a[1] % m) + m) % m, ((a[2] % m) + m) % m);
    sigma = (a - aw) / m;
    uint64_t key = gridEdgeKey(aw, d, m);
    auto it = vertexOf.find(key);
    if (it == vertexOf.end()) {
      double fa = value(a), fb = value(b);
      double t = fa / (fa - fb);
      Eigen::RowVector3d p = (aw.cast<double>() + t * d.cast<double>()).transpose() / m;
      id = static_cast<int>(verts.size());
      vertexOf.emplace(key, id);
      verts.push_back(p);
    } else {
      id = it->second;
    }
  };

  auto emitTriangle = [&](const std::array<int, 3>& ids, const std::array<Vec3i, 3>& sig,
                          const std::array<Eigen::RowVector3d, 3>& unwrapped, const Vec3& grad) {
    // Orient so the normal points toward increasing field values.
    Vec3 e1 = lattice.basis() * (unwrapped[1] - unwrapped[0]).transpose();
    Vec3 e2 = lattice.basis() * (unwrapped[2] - unwrapped[0]).transpose();
    Vec3 n = e1.cross(e2);
    std::array<int, 3> tri = ids;
    std::array<Vec3i, 3> sg = sig;
    if (n.dot(grad) < 0) {
      std::swap(tri[1], tri[2]);
      std::swap(sg[1], sg[2]);
    }
    faces.push_back(tri);
    faceShifts.push_back({Vec3i(sg[1] - sg[0]), Vec3i(sg[2] - sg[1]), Vec3i(sg[0] - sg[2])});
  };

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Vec3i base(i, j, k);
        for (const auto& tet : kTets.tets) {
          std::array<Vec3i, 4> nodes;
          std::array<double, 4> fv;
          for (int c = 0; c < 4; ++c) {
            nodes[c] = base + tet[c];
            fv[c] = value(nodes[c]);
          }
          int pos[4], neg[4], np = 0, nn = 0;
          for (int c = 0; c < 4; ++c)
            (fv[c] > 0 ? pos[np++] : neg[nn++]) = c;
          if (np == 0 || nn == 0) continue;

          // Gradient of the linear interpolant on this tet (ambient coords):
          // solves <g, x_c - x_3> = f_c - f_3.
          Eigen::Matrix3d Dm;
          Eigen::Vector3d df;
          for (int c = 0; c < 3; ++c) {
            Dm.row(c) = ((nodes[c] - nodes[3]).cast<double>().transpose() / m) * lattice.basis().transpose();
            df[c] = fv[c] - fv[3];
          }
          Vec3 grad = Dm.partialPivLu().solve(df);

          // Tet corners are ordered along the diagonal, so normalizing lo/hi by
          // corner index makes the edge direction componentwise non-negative.
          auto corner = [&](int c0, int c1, int& id, Vec3i& sigma, Eigen::RowVector3d& uw) {
            if (c0 > c1) std::swap(c0, c1);
            edgeVertex(nodes[c0], nodes[c1], id, sigma);
            double fa = value(nodes[c0]), fb = value(nodes[c1]);
            double t = fa / (fa - fb);
            uw = (nodes[c0].cast<double>() + t * (nodes[c1] - nodes[c0]).cast<double>()).transpose() / m;
          };

          if (np == 1 || nn == 1) {
            int apex = (np == 1) ? pos[0] : neg[0];
            const int* other = (np == 1) ? neg : pos;
            std::array<int, 3> ids;
            std::array<Vec3i, 3> sig;
            std::array<Eigen::RowVector3d, 3> uw;
            for (int c = 0; c < 3; ++c) corner(apex, other[c], ids[c], sig[c], uw[c]);
            emitTriangle(ids, sig, uw, grad);
          } else {
            // Two positive, two negative corners: planar quad on four cut edges.
            int p0 = pos[0], p1 = pos[1], n0 = neg[0], n1 = neg[1];
            std::array<std::pair<int, int>, 4> quad = {{{p0, n0}, {p0, n1}, {p1, n1}, {p1, n0}}};
            std::array<int, 4> ids;
            std::array<Vec3i, 4> sig;
            std::array<Eigen::RowVector3d, 4> uw;
            for (int c = 0; c < 4; ++c) corner(quad[c].first, quad[c].second, ids[c], sig[c], uw[c]);
            emitTriangle({ids[0], ids[1], ids[2]}, {sig[0], sig[1], sig[2]}, {uw[0], uw[1], uw[2]}, grad);
            emitTriangle({ids[0], ids[2], ids[3]}, {sig[0], sig[2], sig[3]}, {uw[0], uw[2], uw[3]}, grad);
          }
        }
      }

  if (faces.empty()) throw Error(ErrorCode::ExtractionFailed, "level set does not intersect the cell");

  Eigen::Matrix<double, Eigen::Dynamic, 3> V(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i) V.row(i) = verts[i];
  PeriodicMesh mesh(lattice, std::move(V), std::move(faces), std::move(faceShifts));

  MeshDiagnostics diag = validateMesh(mesh);
  if (!diag.ok()) {
    std::string detail = diag.failures.front();
    if (!mesh.buildWarnings().empty()) detail += "; " + mesh.buildWarnings().front();
    throw Error(ErrorCode::ExtractionFailed,
                "extraction produced an invalid mesh (" + detail + "); try a higher resolution");
  }
  return mesh;
}

PeriodicMesh tpmsNodalMesh(TpmsFamily family, int resolution) {
  Lattice lattice = tpmsPrimitiveLattice(family);
  PeriodicMesh mesh = marchingTetrahedra(
      lattice, resolution, [family](const Vec3& p) { return nodalValue(family, p); });
  mesh.setId(std::string(tpmsFamilyName(family)) + "-res" + std::to_string(resolution));
  return mesh;
}

}  // namespace torusmin
