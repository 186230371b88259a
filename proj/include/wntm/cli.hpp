#pragma once

#include <string>
#include <vector>

namespace wntm::cli {

/// Runs one subcommand (ingest, build-net, reweight, train, infer, coherence,
/// wordsim, export-features). `args` excludes the program name. Results go to
/// standard output (or the requested files), progress and diagnostics to
/// standard error. Returns the process exit status.
int dispatch(std::vector<std::string> args);

}  // namespace wntm::cli
