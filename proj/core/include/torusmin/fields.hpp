#pragma once

#include <Eigen/Dense>

#include "torusmin/errors.hpp"

namespace torusmin {

// One real per vertex / per face. Plain Eigen vectors with size checks at the
// operation boundaries.
using VertexField = Eigen::VectorXd;
using FaceField = Eigen::VectorXd;

// One ambient vector per vertex / per face (rows).
using VertexVectorField = Eigen::Matrix<double, Eigen::Dynamic, 3>;
using FaceVectorField = Eigen::Matrix<double, Eigen::Dynamic, 3>;

inline void requireSize(const Eigen::VectorXd& f, Eigen::Index n, const char* what) {
  if (f.size() != n) throw Error(ErrorCode::ShapeMismatch, what);
}

}  // namespace torusmin
