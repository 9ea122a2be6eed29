#pragma once

#include <string>
#include <vector>

#include "torusmin/periodic_mesh.hpp"

namespace torusmin {

struct FlowParams {
  enum class StepPolicy { Backtracking, Fixed };
  StepPolicy policy = StepPolicy::Backtracking;
  double initialStep = 0.0;            // flow-time step (length^2); 0 = auto
  int maxIterations = 20000;
  double targetScaledResidual = 1e-3;  // stop when max|H| * mean edge length <= this
  double tangentialWeight = 0.1;
  // Projects the uniform-normal (enclosed volume) component out of each step.
  // The TPMS are index-1 saddles whose unstable direction is exactly that
  // mode; they are minima among volume-preserving variations.
  bool volumeProjection = true;
};

struct FlowTrace {
  std::vector<int> iteration;
  std::vector<double> area;
  std::vector<double> maxH;
  std::vector<double> l2H;

  std::string toCsv() const;  // header: iteration,area,maxH,l2H
};

struct FlowResult {
  PeriodicMesh mesh;
  FlowTrace trace;
  bool converged = false;     // false = NotConverged (best iterate returned)
  int iterations = 0;
  std::string message;
};

/// Gradient descent on total area along the cotangent area gradient
/// (mass-normalized), with backtracking so accepted steps never increase
/// area. Terminates when max|H| * meanEdgeLength <= target.
FlowResult minimizeArea(const PeriodicMesh& mesh, const FlowParams& params = {});

}  // namespace torusmin
