#pragma once

#include <stdexcept>
#include <string>

namespace torusmin {

enum class ErrorCode {
  DegenerateLattice,
  InvalidHandle,
  TooCoarse,
  ExtractionFailed,
  NotOrientable,
  DegenerateNeighborhood,
  DegenerateTriangle,
  ShapeMismatch,
  SolverStalled,
  BettiAmbiguous,
  TopologyMismatch,
  DegenerateTestSet,
  KernelAmbiguous,
  IndexAmbiguous,
  UsageError,
  BadMeshFile,
  IoError,
  InvalidArgument,
};

const char* errorCodeName(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// Errors crossing a pipeline stage boundary get the stage name prepended.
class StageError : public std::runtime_error {
public:
  StageError(const std::string& stage, const std::string& what)
      : std::runtime_error("[" + stage + "] " + what), stage_(stage) {}
  const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace torusmin
