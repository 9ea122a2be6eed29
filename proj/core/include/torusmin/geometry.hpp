#pragma once

#include <Eigen/Sparse>

#include "torusmin/fields.hpp"
#include "torusmin/periodic_mesh.hpp"

namespace torusmin {

using SpMat = Eigen::SparseMatrix<double>;

/// Angle-weighted per-vertex unit normals from the oriented faces.
/// Throws NotOrientable if the mesh is not consistently oriented and closed.
VertexVectorField vertexNormals(const PeriodicMesh& mesh);

/// Pointwise extrinsic curvature data from a quadric fit over the 2-ring in
/// the normal frame. k1 <= k2 per vertex.
struct ShapeField {
  VertexVectorField normals;           // copy of the normals used for the fit
  VertexField k1, k2;                  // principal curvatures (1/length)
  VertexField a2;                      // |A|^2 = k1^2 + k2^2
  VertexField meanCurvature;           // H = k1 + k2
  VertexField separation;              // k2 - k1 >= 0
  // Ambient 3x3 shape tensor per vertex (symmetric, packed xx,yy,zz,xy,xz,yz);
  // eigenvalues are {k1, k2, 0} with the zero along the normal.
  Eigen::Matrix<double, Eigen::Dynamic, 6> tensor;
  double minSeparation = 0.0;
};

ShapeField shapeField(const PeriodicMesh& mesh, const VertexVectorField& normals);

Eigen::Matrix3d shapeTensorAt(const ShapeField& shape, int vertex);

/// Cotangent stiffness S (phi' S phi ~ integral |grad phi|^2) and barycentric
/// lumped mass M (diagonal; trace equals the total area).
struct OperatorPair {
  SpMat stiffness;
  Eigen::VectorXd massDiag;
  double totalArea = 0.0;
};

OperatorPair assembleLaplace(const PeriodicMesh& mesh);

/// Angle defect per vertex divided by the vertex mass (pointwise Gaussian
/// curvature); the raw defects sum to 2*pi*chi.
struct GaussDefect {
  VertexField defect;       // 2*pi - angle sum
  VertexField curvature;    // defect / vertex mass
  double total = 0.0;       // sum of defects
};

GaussDefect gaussDefect(const PeriodicMesh& mesh);

}  // namespace torusmin
