#include "torusmin/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "torusmin/generators.hpp"
#include "torusmin/io_util.hpp"
#include "torusmin/mesh_io.hpp"

namespace torusmin {

namespace {

struct RawArgs {
  std::string surface = "flat";
  int res = 64;
  double flowTarget = 1e-3;
  int flowMaxIters = 20000;
  double eigenTol = 1e-10;
  double zeroTol = 0.02;
  double bettiGap = 100.0;
  double identityTol = 0.05;
  uint64_t seed = 1;
  int threads = 1;
  std::string out = ".";
  std::string mesh;
  std::string config;
  std::string reportPath;
};

const std::vector<std::string> kSurfaces = {"flat", "P", "D", "G", "file"};

void addCommonOptions(CLI::App* cmd, RawArgs& raw) {
  cmd->add_option("--surface", raw.surface, "Surface family: flat|P|D|G|file");
  cmd->add_option("--res", raw.res, "Grid resolution / flat-torus subdivision");
  cmd->add_option("--flow-target", raw.flowTarget, "Flow stop: max|H| * mean edge length");
  cmd->add_option("--flow-max-iters", raw.flowMaxIters, "Flow iteration cap");
  cmd->add_option("--eigen-tol", raw.eigenTol, "Eigensolver residual tolerance");
  cmd->add_option("--zero-tol", raw.zeroTol, "Relative zero classification for the index");
  cmd->add_option("--betti-gap", raw.bettiGap, "Required nullspace gap ratio");
  cmd->add_option("--identity-tol", raw.identityTol, "Integrated identity ratio gate");
  cmd->add_option("--seed", raw.seed, "Random seed (64-bit)");
  cmd->add_option("--threads", raw.threads, "Thread cap (recorded in reports)");
  cmd->add_option("--out", raw.out, "Output directory");
  cmd->add_option("--mesh", raw.mesh, "Mesh file path (surface=file)");
  cmd->add_option("--config", raw.config, "key=value config file; explicit flags win");
}

void applyConfigFile(const std::string& path, CLI::App* cmd, RawArgs& raw,
                     std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto notSpace = [](unsigned char c) { return !std::isspace(c); };
    line.erase(line.begin(), std::find_if(line.begin(), line.end(), notSpace));
    line.erase(std::find_if(line.rbegin(), line.rend(), notSpace).base(), line.end());
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::UsageError, "config line " + std::to_string(lineno) + " is not key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);

    auto setIfAbsent = [&](const std::string& flag, auto& slot) {
      bool provided = cmd->count("--" + flag) > 0;
      if (provided) {
        overrides.push_back(flag + "=" + value + " overridden by flag");
        return;
      }
      std::istringstream ss(value);
      ss >> slot;
      if (ss.fail()) throw Error(ErrorCode::UsageError, "bad value for config key " + key);
    };
    if (key == "surface") setIfAbsent(key, raw.surface);
    else if (key == "res") setIfAbsent(key, raw.res);
    else if (key == "flow-target") setIfAbsent(key, raw.flowTarget);
    else if (key == "flow-max-iters") setIfAbsent(key, raw.flowMaxIters);
    else if (key == "eigen-tol") setIfAbsent(key, raw.eigenTol);
    else if (key == "zero-tol") setIfAbsent(key, raw.zeroTol);
    else if (key == "betti-gap") setIfAbsent(key, raw.bettiGap);
    else if (key == "identity-tol") setIfAbsent(key, raw.identityTol);
    else if (key == "seed") setIfAbsent(key, raw.seed);
    else if (key == "threads") setIfAbsent(key, raw.threads);
    else if (key == "out") setIfAbsent(key, raw.out);
    else if (key == "mesh") setIfAbsent(key, raw.mesh);
    else throw Error(ErrorCode::UsageError, "unknown config key: " + key);
  }
}

}  // namespace

RunConfig parseConfig(const std::vector<std::string>& args) {
  CLI::App app{"torusmin: periodic minimal surfaces, their spectra and harmonic forms"};
  app.require_subcommand(1);
  RawArgs raw;

  CLI::App* generate = app.add_subcommand("generate", "Build a periodic mesh and write it out");
  CLI::App* minimize = app.add_subcommand("minimize", "Relax a mesh toward vanishing mean curvature");
  CLI::App* analyze = app.add_subcommand("analyze", "Geometry, spectrum and harmonic-form artifacts");
  CLI::App* verify = app.add_subcommand("verify", "Full pipeline with verdicts and report.json");
  CLI::App* report = app.add_subcommand("report", "Summarize an existing report.json");
  for (CLI::App* cmd : {generate, minimize, analyze, verify}) addCommonOptions(cmd, raw);
  report->add_option("path", raw.reportPath, "Path to report.json")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::UsageError, e.what());
  }

  RunConfig out;
  CLI::App* active = app.get_subcommands().front();
  out.command = active->get_name();
  if (out.command != "report" && !raw.config.empty())
    applyConfigFile(raw.config, active, raw, out.overrideLog);

  if (std::find(kSurfaces.begin(), kSurfaces.end(), raw.surface) == kSurfaces.end())
    throw Error(ErrorCode::UsageError, "unknown surface family: " + raw.surface);
  if (raw.eigenTol <= 0 || raw.zeroTol <= 0 || raw.bettiGap <= 0 || raw.identityTol <= 0)
    throw Error(ErrorCode::UsageError, "tolerances must be positive");
  if (raw.surface == "file" && out.command != "report" && raw.mesh.empty())
    throw Error(ErrorCode::UsageError, "surface=file requires --mesh PATH");

  out.pipeline.surface = raw.surface;
  out.pipeline.meshPath = raw.mesh;
  out.pipeline.resolution = raw.res;
  out.pipeline.flow.targetScaledResidual = raw.flowTarget;
  out.pipeline.flow.maxIterations = raw.flowMaxIters;
  out.pipeline.eigenTol = raw.eigenTol;
  out.pipeline.zeroTol = raw.zeroTol;
  out.pipeline.bettiGap = raw.bettiGap;
  out.pipeline.identityTol = raw.identityTol;
  out.pipeline.seed = raw.seed;
  out.pipeline.threads = raw.threads;
  out.outDir = raw.out;
  out.reportPath = raw.reportPath;
  return out;
}

namespace {

PeriodicMesh meshForConfig(const PipelineConfig& cfg) {
  if (cfg.surface == "flat") return flatTorusMesh(makeCubicLattice(3, 1.0), 2, std::max(cfg.resolution, 3));
  if (cfg.surface == "file") return loadMeshJson(cfg.meshPath);
  return tpmsNodalMesh(tpmsFamilyFromString(cfg.surface), cfg.resolution);
}

std::string joinPath(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int runGenerate(const RunConfig& cfg) {
  PeriodicMesh mesh = meshForConfig(cfg.pipeline);
  MeshDiagnostics diag = validateMesh(mesh);
  std::filesystem::create_directories(cfg.outDir);
  saveMeshJson(mesh, joinPath(cfg.outDir, "mesh.json"));
  saveMeshObj(mesh, joinPath(cfg.outDir, "mesh.obj"));
  std::cout << "generated " << mesh.id() << ": V=" << mesh.numVertices() << " E=" << mesh.numEdges()
            << " F=" << mesh.numFaces() << " chi=" << diag.eulerCharacteristic
            << " genus=" << diag.genus << "\n";
  return diag.ok() ? 0 : 1;
}

int runMinimize(const RunConfig& cfg) {
  PeriodicMesh mesh = meshForConfig(cfg.pipeline);
  FlowResult flow = minimizeArea(mesh, cfg.pipeline.flow);
  std::filesystem::create_directories(cfg.outDir);
  saveMeshJson(flow.mesh, joinPath(cfg.outDir, "mesh.json"));
  writeFileAtomic(joinPath(cfg.outDir, "trace.csv"), flow.trace.toCsv());
  std::cout << (flow.converged ? "converged" : "NotConverged") << " after " << flow.iterations
            << " iterations; final max|H|*h = "
            << (flow.trace.maxH.empty() ? 0.0 : flow.trace.maxH.back() * mesh.meanEdgeLength())
            << "\n";
  return flow.converged ? 0 : 1;
}

int runAnalyze(const RunConfig& cfg) {
  PeriodicMesh input = meshForConfig(cfg.pipeline);
  FlowResult flow = minimizeArea(input, cfg.pipeline.flow);
  const PeriodicMesh& mesh = flow.mesh;

  VertexVectorField normals = vertexNormals(mesh);
  ShapeField shape = shapeField(mesh, normals);
  OperatorPair ops = assembleLaplace(mesh);
  JacobiPair jacobi = assembleJacobi(ops, shape.a2);
  EigenOptions eig;
  eig.tol = cfg.pipeline.eigenTol;
  eig.seed = cfg.pipeline.seed;
  MorseIndexResult morse = morseIndex(jacobi, cfg.pipeline.zeroTol, eig);
  DecOperators dec = assembleFormLaplacian(mesh);
  HarmonicBasis basis = harmonicBasis(mesh, dec, 1e-8, cfg.pipeline.bettiGap, eig);

  std::filesystem::create_directories(cfg.outDir);
  saveMeshJson(mesh, joinPath(cfg.outDir, "mesh.json"));
  writeFileAtomic(joinPath(cfg.outDir, "trace.csv"), flow.trace.toCsv());
  writeFileAtomic(joinPath(cfg.outDir, "spectrum.json"),
                  spectrumToJson(morse.spectrum, morse.nearestZeroGap));
  {
    std::ostringstream csv;
    csv.precision(17);
    csv << "vertex,k1,k2,a2,H,separation,nx,ny,nz\n";
    for (int v = 0; v < mesh.numVertices(); ++v)
      csv << v << "," << shape.k1[v] << "," << shape.k2[v] << "," << shape.a2[v] << ","
          << shape.meanCurvature[v] << "," << shape.separation[v] << "," << normals(v, 0) << ","
          << normals(v, 1) << "," << normals(v, 2) << "\n";
    writeFileAtomic(joinPath(cfg.outDir, "fields.csv"), csv.str());
  }
  for (int i = 0; i < basis.b1; ++i)
    writeFileAtomic(joinPath(cfg.outDir, "harmonic_" + std::to_string(i) + ".csv"),
                    cochainToCsv(mesh, basis.members[i]));
  std::cout << "analyze: b1=" << basis.b1 << " index=" << morse.index
            << " maxSep=" << shape.separation.maxCoeff() << "\n";
  return 0;
}

int runVerify(const RunConfig& cfg) {
  PipelineArtifacts artifacts;
  VerificationReport rep = fullPipeline(cfg.pipeline, &artifacts);
  std::filesystem::create_directories(cfg.outDir);
  writeFileAtomic(joinPath(cfg.outDir, "report.json"), reportToJson(rep));
  if (artifacts.relaxedMesh) saveMeshJson(*artifacts.relaxedMesh, joinPath(cfg.outDir, "mesh.json"));
  if (artifacts.flowTrace)
    writeFileAtomic(joinPath(cfg.outDir, "trace.csv"), artifacts.flowTrace->toCsv());

  std::cout << "mesh " << rep.meshId << ": chi=" << rep.eulerCharacteristic << " b1=" << rep.b1
            << " index=" << rep.morseIndex << " bound=" << rep.bound
            << (rep.boundSharp ? " (sharp)" : "") << "\n";
  for (const auto& f : rep.failedVerdicts()) std::cout << "FAILED verdict: " << f << "\n";
  std::cout << (rep.allVerdictsPass() ? "all verdicts pass" : "verdict failure") << "; report at "
            << joinPath(cfg.outDir, "report.json") << "\n";
  return rep.allVerdictsPass() ? 0 : 2;
}

int runReport(const RunConfig& cfg) {
  VerificationReport rep = reportFromJson(readFile(cfg.reportPath));
  std::cout << "mesh " << rep.meshId << " (V=" << rep.vertexCount << ", F=" << rep.faceCount
            << ")\n";
  std::cout << "  b1 = " << rep.b1 << ", Morse index = " << rep.morseIndex
            << ", bound = " << rep.bound << ", holds = " << (rep.boundHolds ? "yes" : "no")
            << ", sharp = " << (rep.boundSharp ? "yes" : "no") << "\n";
  std::cout << "  branch: " << rep.betti12Branch << ", parallel rank = " << rep.parallelRank
            << ", dim ker Phi = " << rep.dimKerPhi << "\n";
  double worstIdentity = 0.0;
  for (double r : rep.identityRatios) worstIdentity = std::max(worstIdentity, r);
  std::cout << "  worst identity ratio = " << worstIdentity << "\n";
  for (const auto& f : rep.failedVerdicts()) std::cout << "  FAILED: " << f << "\n";
  return rep.allVerdictsPass() ? 0 : 2;
}

}  // namespace

int execute(const RunConfig& cfg) {
  Eigen::setNbThreads(std::max(cfg.pipeline.threads, 1));
  for (const auto& o : cfg.overrideLog) std::cout << "config override: " << o << "\n";
  try {
    if (cfg.command == "generate") return runGenerate(cfg);
    if (cfg.command == "minimize") return runMinimize(cfg);
    if (cfg.command == "analyze") return runAnalyze(cfg);
    if (cfg.command == "verify") return runVerify(cfg);
    if (cfg.command == "report") return runReport(cfg);
    throw Error(ErrorCode::UsageError, "unknown command " + cfg.command);
  } catch (const StageError& e) {
    std::cerr << "error " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::UsageError ? 1 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int cliMain(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return execute(parseConfig(args));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace torusmin
