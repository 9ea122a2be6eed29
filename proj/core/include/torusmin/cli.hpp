#pragma once

#include <string>
#include <vector>

#include "torusmin/verify.hpp"

namespace torusmin {

struct RunConfig {
  std::string command;  // generate | minimize | analyze | verify | report
  PipelineConfig pipeline;
  std::string outDir = ".";
  std::string reportPath;            // for the report command
  std::vector<std::string> overrideLog;  // config-file keys overridden by flags
};

/// Parses argv-style arguments (no program name). Defaults filled; an optional
/// `--config FILE` (plain key=value lines, keys named like the flags) is
/// applied first and explicit flags win, with each override logged.
RunConfig parseConfig(const std::vector<std::string>& args);

/// Dispatches the parsed command. Exit codes: 0 = success / all verdicts pass,
/// 2 = a verdict failed (report still written), 1 = execution error.
int execute(const RunConfig& config);

int cliMain(int argc, char** argv);

}  // namespace torusmin
