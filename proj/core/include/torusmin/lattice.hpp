#pragma once

#include <Eigen/Dense>

#include "torusmin/errors.hpp"

namespace torusmin {

/// Full-rank lattice defining the flat torus R^d / Gamma. Columns of the
/// basis span Gamma. Immutable after construction.
class Lattice {
public:
  // Throws DegenerateLattice when |det| falls below a machine-scaled threshold.
  explicit Lattice(const Eigen::MatrixXd& basis);

  int dimension() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  const Eigen::MatrixXd& inverseBasis() const { return inverse_; }
  double cellVolume() const { return cellVolume_; }

  // Lattice coordinates of an ambient point (basis^-1 * p).
  Eigen::VectorXd toLattice(const Eigen::VectorXd& p) const { return inverse_ * p; }
  Eigen::VectorXd toAmbient(const Eigen::VectorXd& q) const { return basis_ * q; }

  // Wraps an ambient point into the half-open fundamental domain [0,1)^d in
  // lattice coordinates. p == toAmbient(representative) + basis*shift.
  struct Wrapped {
    Eigen::VectorXd representativeLattice;  // in [0,1)^d
    Eigen::VectorXi shift;
  };
  Wrapped wrapPoint(const Eigen::VectorXd& p) const;

  // Wrap already-lattice coordinates into [0,1)^d.
  Wrapped wrapLattice(const Eigen::VectorXd& latticeCoords) const;

  Eigen::VectorXd unwrap(const Eigen::VectorXd& representativeLattice,
                         const Eigen::VectorXi& shift) const;

private:
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd inverse_;
  double cellVolume_ = 0.0;
};

Lattice makeCubicLattice(int dim, double edge);

}  // namespace torusmin
