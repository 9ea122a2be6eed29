#include "torusmin/lattice.hpp"

#include <cmath>

namespace torusmin {

const char* errorCodeName(ErrorCode c) {
  switch (c) {
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::InvalidHandle: return "InvalidHandle";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::ExtractionFailed: return "ExtractionFailed";
    case ErrorCode::NotOrientable: return "NotOrientable";
    case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SolverStalled: return "SolverStalled";
    case ErrorCode::BettiAmbiguous: return "BettiAmbiguous";
    case ErrorCode::TopologyMismatch: return "TopologyMismatch";
    case ErrorCode::DegenerateTestSet: return "DegenerateTestSet";
    case ErrorCode::KernelAmbiguous: return "KernelAmbiguous";
    case ErrorCode::IndexAmbiguous: return "IndexAmbiguous";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::BadMeshFile: return "BadMeshFile";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

Lattice::Lattice(const Eigen::MatrixXd& basis) : basis_(basis) {
  if (basis.rows() != basis.cols() || basis.rows() < 2)
    throw Error(ErrorCode::InvalidArgument, "lattice basis must be square, dimension >= 2");
  const double det = basis.determinant();
  const double scale = basis.colwise().norm().maxCoeff();
  const int d = static_cast<int>(basis.rows());
  if (std::abs(det) <= 1e-12 * std::pow(std::max(scale, 1e-300), d))
    throw Error(ErrorCode::DegenerateLattice, "basis determinant vanishes");
  inverse_ = basis.inverse();
  cellVolume_ = std::abs(det);
}

Lattice::Wrapped Lattice::wrapLattice(const Eigen::VectorXd& q) const {
  const int d = dimension();
  Wrapped out;
  out.representativeLattice.resize(d);
  out.shift.resize(d);
  for (int i = 0; i < d; ++i) {
    double f = std::floor(q[i]);
    double r = q[i] - f;
    if (r >= 1.0) {  // rounding can push q - floor(q) up to 1.0
      r -= 1.0;
      f += 1.0;
    }
    out.representativeLattice[i] = r;
    out.shift[i] = static_cast<int>(f);
  }
  return out;
}

Lattice::Wrapped Lattice::wrapPoint(const Eigen::VectorXd& p) const {
  if (p.size() != dimension())
    throw Error(ErrorCode::ShapeMismatch, "point dimension mismatch");
  if (!p.allFinite())
    throw Error(ErrorCode::InvalidArgument, "non-finite point");
  return wrapLattice(toLattice(p));
}

Eigen::VectorXd Lattice::unwrap(const Eigen::VectorXd& rep, const Eigen::VectorXi& shift) const {
  return basis_ * (rep + shift.cast<double>());
}

Lattice makeCubicLattice(int dim, double edge) {
  return Lattice(edge * Eigen::MatrixXd::Identity(dim, dim));
}

}  // namespace torusmin
