#include "torusmin/periodic_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <unordered_map>

namespace torusmin {

namespace {

// Packed key for an undirected edge (min vertex, max vertex, shift in the
// min->max direction). Shift components must stay within [-63, 63].
uint64_t edgeKey(int a, int b, const Vec3i& s) {
  uint64_t key = static_cast<uint64_t>(a);
  key = (key << 21) | static_cast<uint64_t>(b);
  for (int i = 0; i < 3; ++i) {
    int c = s[i] + 64;
    if (c < 0 || c > 127) throw Error(ErrorCode::InvalidArgument, "edge shift out of packable range");
    key = (key << 7) | static_cast<uint64_t>(c);
  }
  return key;
}

}  // namespace

PeriodicMesh::PeriodicMesh(Lattice lattice,
                           Eigen::Matrix<double, Eigen::Dynamic, 3> verticesLattice,
                           std::vector<std::array<int, 3>> faces,
                           std::vector<std::array<Vec3i, 3>> faceShifts)
    : lattice_(std::move(lattice)),
      verticesLattice_(std::move(verticesLattice)),
      faces_(std::move(faces)),
      faceShifts_(std::move(faceShifts)) {
  if (lattice_.dimension() != 3)
    throw Error(ErrorCode::InvalidArgument, "PeriodicMesh requires a 3-dimensional lattice");
  if (faceShifts_.size() != faces_.size())
    throw Error(ErrorCode::ShapeMismatch, "faceShifts size must match faces");
  const int v = numVertices();
  for (const auto& f : faces_)
    for (int k = 0; k < 3; ++k)
      if (f[k] < 0 || f[k] >= v) throw Error(ErrorCode::InvalidHandle, "face vertex index out of range");
  if (static_cast<uint64_t>(v) >= (1ull << 21))
    throw Error(ErrorCode::InvalidArgument, "vertex count exceeds packed-key capacity");
  buildEdgeTables();
}

void PeriodicMesh::buildEdgeTables() {
  std::unordered_map<uint64_t, int> index;
  index.reserve(faces_.size() * 2);
  faceEdges_.assign(faces_.size(), {-1, -1, -1});
  faceEdgeSigns_.assign(faces_.size(), {0, 0, 0});

  for (int f = 0; f < numFaces(); ++f) {
    for (int s = 0; s < 3; ++s) {
      int a = faces_[f][s];
      int b = faces_[f][(s + 1) % 3];
      Vec3i shift = faceShifts_[f][s];
      if (a == b) {
        buildWarnings_.push_back("face " + std::to_string(f) + " has a repeated vertex");
        edgeTablesConsistent_ = false;
        continue;
      }
      bool along = a < b;
      int tail = along ? a : b;
      int head = along ? b : a;
      Vec3i cshift = along ? shift : Vec3i(-shift);
      uint64_t key = edgeKey(tail, head, cshift);
      auto it = index.find(key);
      int e;
      if (it == index.end()) {
        e = static_cast<int>(edges_.size());
        index.emplace(key, e);
        Edge edge;
        edge.tail = tail;
        edge.head = head;
        edge.shift = cshift;
        edges_.push_back(edge);
      } else {
        e = it->second;
      }
      int& slot = along ? edges_[e].face0 : edges_[e].face1;
      if (slot != -1) {
        buildWarnings_.push_back("edge " + std::to_string(tail) + "->" + std::to_string(head) +
                                 " traversed twice in the same direction (face " + std::to_string(f) + ")");
        edgeTablesConsistent_ = false;
      } else {
        slot = f;
      }
      faceEdges_[f][s] = e;
      faceEdgeSigns_[f][s] = along ? 1 : -1;
    }
  }

  // CSR vertex -> (neighbor, edge) adjacency.
  std::vector<int> degree(numVertices(), 0);
  for (const auto& e : edges_) {
    ++degree[e.tail];
    ++degree[e.head];
  }
  vertexEdgeOffsets_.assign(numVertices() + 1, 0);
  for (int v = 0; v < numVertices(); ++v) vertexEdgeOffsets_[v + 1] = vertexEdgeOffsets_[v] + degree[v];
  vertexEdgeList_.resize(vertexEdgeOffsets_.back());
  std::vector<int> cursor(vertexEdgeOffsets_.begin(), vertexEdgeOffsets_.end() - 1);
  for (int e = 0; e < numEdges(); ++e) {
    vertexEdgeList_[cursor[edges_[e].tail]++] = {edges_[e].head, e};
    vertexEdgeList_[cursor[edges_[e].head]++] = {edges_[e].tail, e};
  }
}

Vec3 PeriodicMesh::position(int v) const {
  return lattice_.basis() * verticesLattice_.row(v).transpose();
}

Vec3 PeriodicMesh::edgeVector(int edgeId, bool reversed) const {
  if (edgeId < 0 || edgeId >= numEdges()) throw Error(ErrorCode::InvalidHandle, "edge id out of range");
  const Edge& e = edges_[edgeId];
  Vec3 d = lattice_.basis() * (verticesLattice_.row(e.head).transpose() -
                               verticesLattice_.row(e.tail).transpose() + e.shift.cast<double>());
  return reversed ? Vec3(-d) : d;
}

Vec3 PeriodicMesh::faceEdgeVector(int face, int side) const {
  const Edge& e = edges_[faceEdges_[face][side]];
  Vec3 d = lattice_.basis() * (verticesLattice_.row(e.head).transpose() -
                               verticesLattice_.row(e.tail).transpose() + e.shift.cast<double>());
  return faceEdgeSigns_[face][side] > 0 ? d : Vec3(-d);
}

int PeriodicMesh::edgeIdBetween(int tail, int head) const {
  if (tail < 0 || tail >= numVertices() || head < 0 || head >= numVertices())
    throw Error(ErrorCode::InvalidHandle, "vertex index out of range");
  int found = -1;
  for (int i = vertexEdgeOffsets_[tail]; i < vertexEdgeOffsets_[tail + 1]; ++i) {
    if (vertexEdgeList_[i].first == head) {
      if (found != -1) throw Error(ErrorCode::InvalidHandle, "multiple edges between vertex pair");
      found = vertexEdgeList_[i].second;
    }
  }
  if (found == -1) throw Error(ErrorCode::InvalidHandle, "no edge between vertex pair");
  return found;
}

Vec3 PeriodicMesh::edgeVectorBetween(int tail, int head) const {
  int e = edgeIdBetween(tail, head);
  return edgeVector(e, edges_[e].tail != tail);
}

double PeriodicMesh::faceArea(int f) const {
  Vec3 e0 = faceEdgeVector(f, 0);
  Vec3 e2 = faceEdgeVector(f, 2);
  return 0.5 * e0.cross(-e2).norm();
}

double PeriodicMesh::totalArea() const {
  double a = 0.0;
  for (int f = 0; f < numFaces(); ++f) a += faceArea(f);
  return a;
}

double PeriodicMesh::meanEdgeLength() const {
  if (numEdges() == 0) return 0.0;
  double s = 0.0;
  for (int e = 0; e < numEdges(); ++e) s += edgeVector(e).norm();
  return s / numEdges();
}

PeriodicMesh PeriodicMesh::withPositions(Eigen::Matrix<double, Eigen::Dynamic, 3> verticesLattice) const {
  if (verticesLattice.rows() != verticesLattice_.rows())
    throw Error(ErrorCode::ShapeMismatch, "vertex count mismatch");
  PeriodicMesh out(lattice_, std::move(verticesLattice), faces_, faceShifts_);
  out.id_ = id_;
  return out;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

MeshDiagnostics validateMesh(const PeriodicMesh& mesh) {
  MeshDiagnostics d;
  const int V = mesh.numVertices();
  const int E = mesh.numEdges();
  const int F = mesh.numFaces();

  d.domainValid = true;
  for (int v = 0; v < V; ++v)
    for (int c = 0; c < 3; ++c) {
      double x = mesh.verticesLattice()(v, c);
      if (!(x >= 0.0 && x < 1.0)) {
        d.domainValid = false;
        d.failures.push_back("vertex " + std::to_string(v) + " outside the half-open fundamental domain");
        goto domain_done;
      }
    }
domain_done:

  // Shift consistency: the three directed shifts of every face must sum to zero.
  d.shiftsConsistent = true;
  for (int f = 0; f < F; ++f) {
    Vec3i sum = mesh.faceShifts()[f][0] + mesh.faceShifts()[f][1] + mesh.faceShifts()[f][2];
    if (sum != Vec3i::Zero()) {
      d.shiftsConsistent = false;
      d.failures.push_back("face " + std::to_string(f) + " shift sum nonzero");
      break;
    }
  }

  // Closed + consistently oriented: every canonical edge must be traversed
  // exactly once in each direction.
  d.closed = true;
  bool oriented = mesh.edgeTablesConsistent();
  for (int e = 0; e < E; ++e) {
    const auto& edge = mesh.edges()[e];
    if (edge.face0 == -1 || edge.face1 == -1) {
      d.closed = false;
      break;
    }
  }
  if (!d.closed) d.failures.push_back("mesh has boundary or mismatched edge shifts (open edges)");
  if (!oriented) d.failures.push_back("faces are not consistently oriented or an edge has >2 incidences");
  d.orientable = oriented && d.closed;
  if (!d.orientable && d.closed && !oriented)
    d.failures.push_back("no globally consistent orientation");

  // Manifold: closed, consistent incidences, and one face cycle around each vertex.
  d.manifold = d.closed && oriented;
  if (d.manifold) {
    // Count incident faces per vertex, then walk the fan via edge adjacency.
    std::vector<int> faceCount(V, 0);
    for (int f = 0; f < F; ++f)
      for (int k = 0; k < 3; ++k) ++faceCount[mesh.faces()[f][k]];
    for (int v = 0; v < V && d.manifold; ++v) {
      // Find one incident corner by scanning the vertex's edges.
      int startFace = -1, startSide = -1;
      for (int i = mesh.vertexEdgeOffsets()[v]; i < mesh.vertexEdgeOffsets()[v + 1]; ++i) {
        int e = mesh.vertexEdgeList()[i].second;
        const auto& edge = mesh.edges()[e];
        int f = (edge.tail == v) ? edge.face0 : edge.face1;  // face with outgoing v->other
        if (f != -1) {
          for (int s = 0; s < 3; ++s)
            if (mesh.faces()[f][s] == v) {
              startFace = f;
              startSide = s;
              break;
            }
          break;
        }
      }
      if (startFace == -1) {
        if (faceCount[v] != 0) d.manifold = false;
        continue;
      }
      // Walk around v: cross the outgoing side edge into the neighbor face.
      int f = startFace, s = startSide, visited = 0;
      do {
        ++visited;
        int e = mesh.faceEdges()[f][s];
        const auto& edge = mesh.edges()[e];
        int next = (mesh.faceEdgeSigns()[f][s] > 0) ? edge.face1 : edge.face0;
        if (next == -1) break;
        f = next;
        s = -1;
        for (int k = 0; k < 3; ++k)
          if (mesh.faces()[f][k] == v) s = k;
        if (s == -1) break;
      } while (!(f == startFace && s == startSide) && visited <= faceCount[v] + 1);
      if (f != startFace || s != startSide || visited != faceCount[v]) d.manifold = false;
    }
    if (!d.manifold) d.failures.push_back("vertex link is not a single cycle");
  }

  // Components via edges.
  UnionFind uf(V);
  for (const auto& e : mesh.edges()) uf.unite(e.tail, e.head);
  std::vector<int> roots;
  for (int v = 0; v < V; ++v) roots.push_back(uf.find(v));
  std::sort(roots.begin(), roots.end());
  d.components = static_cast<int>(std::unique(roots.begin(), roots.end()) - roots.begin());

  d.eulerCharacteristic = V - E + F;
  if (d.eulerCharacteristic % 2 != 0)
    d.failures.push_back("odd Euler characteristic");
  if (d.orientable && d.manifold && d.components == 1)
    d.genus = (2 - d.eulerCharacteristic) / 2;

  return d;
}

}  // namespace torusmin
