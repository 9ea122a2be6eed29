#include "torusmin/flow.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "torusmin/errors.hpp"

namespace torusmin {

std::string FlowTrace::toCsv() const {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,area,maxH,l2H\n";
  for (size_t i = 0; i < iteration.size(); ++i)
    out << iteration[i] << "," << area[i] << "," << maxH[i] << "," << l2H[i] << "\n";
  return out.str();
}

namespace {

using Mat3X = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Ambient-coordinate working copy; lattice wrapping is applied lazily since a
// vertex crosses the boundary only rarely during the flow.
struct WorkMesh {
  Eigen::Matrix3d B, Binv;
  Mat3X pos;  // ambient positions of the representatives (may drift off-cell)
  const std::vector<std::array<int, 3>>* faces;
  std::vector<std::array<Vec3i, 3>> shifts;
  Mat3X shiftAmb0, shiftAmb1;  // B * shift of face sides 0 and 1

  void refreshShiftCache() {
    const int F = static_cast<int>(shifts.size());
    shiftAmb0.resize(F, 3);
    shiftAmb1.resize(F, 3);
    for (int f = 0; f < F; ++f) {
      shiftAmb0.row(f) = (B * shifts[f][0].cast<double>()).transpose();
      shiftAmb1.row(f) = (B * shifts[f][1].cast<double>()).transpose();
    }
  }

  void corners(int f, Vec3& x0, Vec3& x1, Vec3& x2) const {
    const auto& fv = (*faces)[f];
    x0 = pos.row(fv[0]).transpose();
    x1 = pos.row(fv[1]).transpose() + shiftAmb0.row(f).transpose();
    x2 = pos.row(fv[2]).transpose() + shiftAmb0.row(f).transpose() + shiftAmb1.row(f).transpose();
  }

  double totalArea() const {
    double a = 0.0;
    Vec3 x0, x1, x2;
    for (size_t f = 0; f < faces->size(); ++f) {
      corners(static_cast<int>(f), x0, x1, x2);
      a += 0.5 * (x1 - x0).cross(x2 - x0).norm();
    }
    return a;
  }

  Mat3X latRep;  // lattice coordinates of the representatives, valid after wrap()

  // Wrap representatives back into the fundamental cell and update shifts.
  void wrap() {
    const int V = static_cast<int>(pos.rows());
    latRep.resize(V, 3);
    std::vector<Vec3i> offset(V, Vec3i::Zero());
    bool any = false;
    for (int v = 0; v < V; ++v) {
      Eigen::Vector3d lat = Binv * pos.row(v).transpose();
      Vec3i w = Vec3i::Zero();
      for (int c = 0; c < 3; ++c) {
        double fl = std::floor(lat[c]);
        double r = lat[c] - fl;
        if (r >= 1.0) {
          r -= 1.0;
          fl += 1.0;
        }
        lat[c] = r;
        w[c] = static_cast<int>(fl);
      }
      latRep.row(v) = lat.transpose();
      if (w != Vec3i::Zero()) {
        any = true;
        offset[v] = w;
        pos.row(v) = (B * lat).transpose();
      }
    }
    if (!any) return;
    for (size_t f = 0; f < faces->size(); ++f) {
      const auto& fv = (*faces)[f];
      shifts[f][0] += offset[fv[1]] - offset[fv[0]];
      shifts[f][1] += offset[fv[2]] - offset[fv[1]];
      shifts[f][2] += offset[fv[0]] - offset[fv[2]];
    }
    refreshShiftCache();
  }
};

struct GradientData {
  Mat3X areaGrad;    // cotangent area gradient K_v
  Mat3X normal;      // area-weighted unit vertex normals
  Mat3X centerPull;  // area-weighted centroid offset
  Eigen::VectorXd mass;
  double area = 0.0;
};

void assembleGradient(const WorkMesh& wm, GradientData& g) {
  const int V = static_cast<int>(wm.pos.rows());
  g.areaGrad.setZero(V, 3);
  g.normal.setZero(V, 3);
  g.centerPull.setZero(V, 3);
  g.mass.setZero(V);
  g.area = 0.0;

  Vec3 x[3];
  for (size_t f = 0; f < wm.faces->size(); ++f) {
    wm.corners(static_cast<int>(f), x[0], x[1], x[2]);
    Vec3 n = (x[1] - x[0]).cross(x[2] - x[0]);
    double doubleArea = n.norm();
    if (doubleArea == 0.0)
      throw Error(ErrorCode::DegenerateTriangle, "zero-area face during flow");
    Vec3 nhat = n / doubleArea;
    double area = 0.5 * doubleArea;
    g.area += area;
    const auto& fv = (*wm.faces)[f];
    for (int c = 0; c < 3; ++c) {
      int v = fv[c];
      Vec3 opp = x[(c + 2) % 3] - x[(c + 1) % 3];
      g.areaGrad.row(v) += (0.5 * nhat.cross(opp)).transpose();
      g.normal.row(v) += (area / 3.0) * nhat.transpose();
      g.mass[v] += area / 3.0;
      Vec3 toOthers = (x[(c + 1) % 3] - x[c]) + (x[(c + 2) % 3] - x[c]);
      g.centerPull.row(v) += (area / 3.0) * toOthers.transpose();
    }
  }
  for (int v = 0; v < V; ++v) {
    double nl = g.normal.row(v).norm();
    if (nl > 0) g.normal.row(v) /= nl;
    g.centerPull.row(v) /= std::max(g.mass[v], 1e-300) * 3.0;
  }
}

}  // namespace

FlowResult minimizeArea(const PeriodicMesh& mesh, const FlowParams& params) {
  if (params.targetScaledResidual < 0)
    throw Error(ErrorCode::InvalidArgument, "flow target must be nonnegative");
  if (params.initialStep < 0) throw Error(ErrorCode::InvalidArgument, "step size must be positive");

  WorkMesh wm;
  wm.B = mesh.lattice().basis();
  wm.Binv = mesh.lattice().inverseBasis();
  wm.pos = mesh.verticesLattice() * wm.B.transpose();
  wm.faces = &mesh.faces();
  wm.shifts = mesh.faceShifts();
  wm.refreshShiftCache();

  const double hMean = mesh.meanEdgeLength();
  double tau = params.initialStep > 0 ? params.initialStep : 0.25 * hMean * hMean;
  const double tauMin = 1e-12 * hMean * hMean;
  const double tauMax = 100.0 * hMean * hMean;

  GradientData g;
  FlowTrace trace;
  FlowResult out{mesh, {}, false, 0, ""};

  double bestMaxH = std::numeric_limits<double>::infinity();
  Mat3X bestPos;
  std::vector<std::array<Vec3i, 3>> bestShifts;

  int it = 0;
  std::string stallMessage;
  for (; it <= params.maxIterations; ++it) {
    assembleGradient(wm, g);

    // Mean curvature is the normal component of the mass-normalized area
    // gradient; the tangential component reflects vertex distribution, not
    // shape, and is handled by the tangential regularization.
    double maxH = 0.0, l2H = 0.0;
    for (int v = 0; v < wm.pos.rows(); ++v) {
      double h = std::abs(g.areaGrad.row(v).dot(g.normal.row(v))) / g.mass[v];
      maxH = std::max(maxH, h);
      l2H += g.mass[v] * h * h;
    }
    l2H = std::sqrt(l2H);
    trace.iteration.push_back(it);
    trace.area.push_back(g.area);
    trace.maxH.push_back(maxH);
    trace.l2H.push_back(l2H);

    if (maxH < bestMaxH) {
      bestMaxH = maxH;
      bestPos = wm.pos;
      bestShifts = wm.shifts;
    }
    if (maxH * hMean <= params.targetScaledResidual) {
      out.converged = true;
      break;
    }
    if (it == params.maxIterations) break;

    const int V = static_cast<int>(wm.pos.rows());
    Mat3X vel(V, 3);
    for (int v = 0; v < V; ++v) vel.row(v) = -g.areaGrad.row(v) / g.mass[v];
    if (params.volumeProjection) {
      double num = 0.0, den = 0.0;
      for (int v = 0; v < V; ++v) {
        num += g.mass[v] * vel.row(v).dot(g.normal.row(v));
        den += g.mass[v];
      }
      double c = num / den;
      for (int v = 0; v < V; ++v) vel.row(v) -= c * g.normal.row(v);
    }
    if (params.tangentialWeight > 0) {
      const double w = params.tangentialWeight / (hMean * hMean);
      for (int v = 0; v < V; ++v) {
        Eigen::RowVector3d t = g.centerPull.row(v);
        t -= t.dot(g.normal.row(v)) * g.normal.row(v);
        vel.row(v) += w * t;
      }
    }

    Mat3X savedPos = wm.pos;
    bool accepted = false;
    while (tau >= tauMin) {
      wm.pos = savedPos + tau * vel;
      double newArea = wm.totalArea();
      if (newArea <= g.area * (1.0 + 1e-15)) {
        accepted = true;
        break;
      }
      if (params.policy == FlowParams::StepPolicy::Fixed) break;
      tau *= 0.5;
    }
    if (!accepted) {
      wm.pos = savedPos;
      stallMessage = params.policy == FlowParams::StepPolicy::Fixed
                         ? "fixed step would increase area"
                         : "backtracking stalled";
      break;
    }
    if (it % 64 == 63) wm.wrap();
    if (params.policy == FlowParams::StepPolicy::Backtracking) tau = std::min(tau * 1.2, tauMax);
  }

  out.iterations = it;
  out.trace = std::move(trace);
  if (!out.converged) {
    out.message = stallMessage.empty() ? "iteration cap reached before target (NotConverged)"
                                       : stallMessage + " before target (NotConverged)";
    if (bestPos.rows() > 0) {
      wm.pos = bestPos;
      wm.shifts = bestShifts;
      wm.refreshShiftCache();
    }
  }
  wm.wrap();
  PeriodicMesh result(mesh.lattice(), wm.latRep, *wm.faces, wm.shifts);
  result.setId(mesh.id().empty() ? "relaxed" : mesh.id() + "-relaxed");
  out.mesh = std::move(result);
  return out;
}

}  // namespace torusmin
