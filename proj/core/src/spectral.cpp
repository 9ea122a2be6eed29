#include "torusmin/spectral.hpp"

#include <cmath>

namespace torusmin {

JacobiPair assembleJacobi(const OperatorPair& ops, const VertexField& a2) {
  const Eigen::Index n = ops.massDiag.size();
  if (a2.size() != n) throw Error(ErrorCode::ShapeMismatch, "|A|^2 field size mismatch");
  if ((a2.array() < 0.0).any())
    throw Error(ErrorCode::InvalidArgument, "|A|^2 must be nonnegative");

  JacobiPair out;
  out.form = ops.stiffness;
  SpMat B(n, n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i)
    trips.emplace_back(static_cast<int>(i), static_cast<int>(i), ops.massDiag[i] * a2[i]);
  B.setFromTriplets(trips.begin(), trips.end());
  out.form -= B;
  out.massDiag = ops.massDiag;
  out.a2 = a2;
  return out;
}

SpectrumReport eigenLowest(const JacobiPair& pair, int count, const EigenOptions& opts) {
  const int n = static_cast<int>(pair.massDiag.size());
  if (count < 1 || count >= n)
    throw Error(ErrorCode::ShapeMismatch, "eigenpair count must satisfy 1 <= count < V");
  EigenResult r = smallestEigenpairs(pair.form, pair.massDiag, count, opts);

  SpectrumReport rep;
  rep.requested = count;
  rep.eigenvalues = r.eigenvalues;
  rep.eigenvectors = r.eigenvectors;
  rep.residuals = r.residuals;
  rep.converged = r.converged;
  rep.seed = r.seed;
  rep.method = r.method;
  return rep;
}

MorseIndexResult morseIndex(const JacobiPair& pair, double zeroTol, const EigenOptions& optsIn) {
  const int n = static_cast<int>(pair.massDiag.size());
  int count = std::min(n - 1, 12);

  // Rayleigh bound: (x'Sx - x'Bx)/x'Mx >= -max |A|^2, a strict lower bound
  // for the pole; with |A|^2 = 0 this degenerates to the PSD case.
  EigenOptions opts = optsIn;
  double diagScale = (pair.form.diagonal().array().abs() / pair.massDiag.array()).maxCoeff();
  opts.shiftHint = -1.05 * pair.a2.maxCoeff() - std::max(1e-8 * diagScale, 1e-300);

  MorseIndexResult out;
  for (;;) {
    opts.strictCount = std::max(count - 4, 1);
    out.spectrum = eigenLowest(pair, count, opts);
    const auto& ev = out.spectrum.eigenvalues;
    double scale = ev.array().abs().maxCoeff();
    double c = zeroTol * scale;
    // Certified non-negative eigenvalue inside the window?
    if (ev[ev.size() - 1] > c || count >= n - 1) break;
    count = std::min(n - 1, 2 * count);
  }

  const auto& ev = out.spectrum.eigenvalues;
  double scale = ev.array().abs().maxCoeff();
  double c = zeroTol * scale;
  out.spectrum.zeroTolerance = zeroTol;

  std::vector<double> negatives;
  double clusterRadius = 0.0;
  double nearestOutside = std::numeric_limits<double>::infinity();
  int below0 = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double l = ev[i];
    if (l < 0) ++below0;
    if (l < -c) {
      negatives.push_back(l);
      nearestOutside = std::min(nearestOutside, std::abs(l));
    } else if (std::abs(l) <= c) {
      clusterRadius = std::max(clusterRadius, std::abs(l));
    } else {
      nearestOutside = std::min(nearestOutside, l);
    }
  }
  out.index = static_cast<int>(negatives.size());
  out.spectrum.negativeCount = out.index;
  out.negativeEigenvalues = Eigen::Map<Eigen::VectorXd>(negatives.data(), negatives.size());
  out.zeroClusterRadius = clusterRadius;
  out.nearestZeroGap = std::isfinite(nearestOutside) ? nearestOutside : 0.0;
  out.candidateLow = out.index;
  out.candidateHigh = below0;

  // Separation between the zero cluster and everything else; an eigenvalue
  // within c of the cluster boundary flips under small tolerance changes.
  double separation = out.nearestZeroGap - clusterRadius;
  out.ambiguous = !negatives.empty() || clusterRadius > 0
                      ? (separation < c)
                      : false;
  if (!std::isfinite(nearestOutside)) out.ambiguous = true;

  double denom = std::max(clusterRadius, c > 0 ? c * 1e-6 : 1e-300);
  if (!negatives.empty()) {
    double closestNegative = std::abs(*std::max_element(negatives.begin(), negatives.end()));
    out.zeroGapRatio = closestNegative / std::max(denom, 1e-300);
  } else {
    out.zeroGapRatio = out.nearestZeroGap / std::max(denom, 1e-300);
  }
  return out;
}

TranslationResiduals translationFieldResidual(const PeriodicMesh& mesh,
                                              const VertexVectorField& normals,
                                              const JacobiPair& pair) {
  if (normals.rows() != mesh.numVertices() || pair.massDiag.size() != mesh.numVertices())
    throw Error(ErrorCode::ShapeMismatch, "normals/operator size mismatch");
  TranslationResiduals out;
  const double area = pair.massDiag.sum();
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd phi = normals.col(i);
    double mass2 = (phi.array().square() * pair.massDiag.array()).sum();
    if (mass2 <= 1e-24 * area) {
      out.degenerate[i] = true;
      out.residuals[i] = 0.0;
      continue;
    }
    double q = phi.dot(pair.form * phi);
    out.residuals[i] = std::abs(q) / mass2;
  }
  return out;
}

}  // namespace torusmin
