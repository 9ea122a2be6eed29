#pragma once

#include "torusmin/periodic_mesh.hpp"

namespace torusmin {

struct SubdivisionResult {
  PeriodicMesh mesh;
  // Coarse edge id -> fine vertex id of its midpoint. Coarse vertices keep
  // their indices in the fine mesh.
  std::vector<int> edgeMidpoint;
};

/// 1->4 face split with midpoint shifts derived so every face shift-sum stays
/// zero; preserves the Euler characteristic.
SubdivisionResult subdivide(const PeriodicMesh& mesh);

/// Whitney prolongation of a 1-cochain (values on canonical coarse edges) to
/// the subdivided mesh: path integrals of the coarse Whitney form along the
/// fine edges. Preserves periods, hence the cohomology class.
Eigen::VectorXd prolongOneForm(const PeriodicMesh& coarse, const SubdivisionResult& sub,
                               const Eigen::VectorXd& coarseValues);

}  // namespace torusmin
