#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "torusmin/lattice.hpp"

namespace torusmin {

using Vec3 = Eigen::Vector3d;
using Vec3i = Eigen::Vector3i;

/// Closed oriented triangle mesh living in the quotient torus R^3/Gamma.
/// Vertex positions are stored in lattice coordinates inside the half-open
/// fundamental domain [0,1)^3; every directed face edge carries an integer
/// lattice shift so that the geometric edge vector is
///   pos(head) + basis*shift - pos(tail).
/// Immutable after construction; connectivity tables are built once.
class PeriodicMesh {
public:
  struct Edge {
    int tail = -1;            // canonical orientation tail -> head
    int head = -1;
    Vec3i shift = Vec3i::Zero();
    int face0 = -1;           // face traversing tail->head
    int face1 = -1;           // face traversing head->tail
  };

  PeriodicMesh(Lattice lattice,
               Eigen::Matrix<double, Eigen::Dynamic, 3> verticesLattice,
               std::vector<std::array<int, 3>> faces,
               std::vector<std::array<Vec3i, 3>> faceShifts);

  int numVertices() const { return static_cast<int>(verticesLattice_.rows()); }
  int numFaces() const { return static_cast<int>(faces_.size()); }
  int numEdges() const { return static_cast<int>(edges_.size()); }

  const Lattice& lattice() const { return lattice_; }
  const Eigen::Matrix<double, Eigen::Dynamic, 3>& verticesLattice() const { return verticesLattice_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  const std::vector<std::array<Vec3i, 3>>& faceShifts() const { return faceShifts_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // edge ids per face side (side s = directed edge face[s] -> face[(s+1)%3]),
  // and +1/-1 depending on whether the side runs along the canonical direction.
  const std::vector<std::array<int, 3>>& faceEdges() const { return faceEdges_; }
  const std::vector<std::array<int8_t, 3>>& faceEdgeSigns() const { return faceEdgeSigns_; }

  // CSR one-ring: for vertex v, (neighbor vertex, canonical edge id) pairs.
  const std::vector<int>& vertexEdgeOffsets() const { return vertexEdgeOffsets_; }
  const std::vector<std::pair<int, int>>& vertexEdgeList() const { return vertexEdgeList_; }

  Vec3 position(int v) const;                          // ambient coordinates
  Vec3 edgeVector(int edgeId, bool reversed = false) const;
  Vec3 faceEdgeVector(int face, int side) const;       // true geometric side vector
  // Looks up the unique edge between two vertices; InvalidHandle if absent/ambiguous.
  Vec3 edgeVectorBetween(int tail, int head) const;
  int edgeIdBetween(int tail, int head) const;

  double faceArea(int f) const;
  double totalArea() const;
  double meanEdgeLength() const;

  // Returns a copy with new vertex positions (lattice coords, must be in [0,1)^3)
  // and identical connectivity/shifts.
  PeriodicMesh withPositions(Eigen::Matrix<double, Eigen::Dynamic, 3> verticesLattice) const;

  // Non-structural identity string (generator tag set by producers).
  const std::string& id() const { return id_; }
  void setId(std::string id) { id_ = std::move(id); }

  // Structural issues found while building edge tables (used by validate).
  const std::vector<std::string>& buildWarnings() const { return buildWarnings_; }
  bool edgeTablesConsistent() const { return edgeTablesConsistent_; }

private:
  Lattice lattice_;
  Eigen::Matrix<double, Eigen::Dynamic, 3> verticesLattice_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<std::array<Vec3i, 3>> faceShifts_;

  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> faceEdges_;
  std::vector<std::array<int8_t, 3>> faceEdgeSigns_;
  std::vector<int> vertexEdgeOffsets_;
  std::vector<std::pair<int, int>> vertexEdgeList_;
  std::vector<std::string> buildWarnings_;
  bool edgeTablesConsistent_ = true;
  std::string id_;

  void buildEdgeTables();
};

struct MeshDiagnostics {
  bool manifold = false;
  bool orientable = false;
  bool shiftsConsistent = false;
  bool closed = false;
  bool domainValid = false;   // vertex coords in [0,1)^3
  int components = 0;
  int eulerCharacteristic = 0;
  int genus = -1;             // (2 - chi)/2 when orientable and connected
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Checks all PeriodicMesh invariants; returns a structured failure list
/// instead of aborting.
MeshDiagnostics validateMesh(const PeriodicMesh& mesh);

}  // namespace torusmin
