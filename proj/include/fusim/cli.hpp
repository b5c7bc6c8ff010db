#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fusim/config.hpp"
#include "fusim/model.hpp"
#include "fusim/pipeline.hpp"

namespace fusim::cli {

/// Entry point for the `fusim` binary: dispatches one subcommand
/// (gen | train | eval | infer | mirror-demo | compare) and maps every
/// failure to a one-line `error: ...` on stderr with a nonzero exit code.
int run(int argc, const char* const* argv);

// The individual commands, exposed for reuse and testing. All return a
// process exit code (0 success; 1 error; 2 for a command whose checked
// claim does not hold, e.g. eval without a strict fusion lead).

struct GenArgs {
    std::string config_path;  // empty = defaults
    long long count = 0;
    std::uint64_t seed = 1;
    std::string out_path;
    std::optional<bool> background;  // override [scene] background
    std::optional<bool> noise;       // override [photon] noise
};
int cmd_gen(const GenArgs& args);

struct TrainArgs {
    std::string data_path;
    std::string config_path;
    std::string mode = "fusion";
    std::string out_model_path;
    std::string report_path;  // optional per-epoch CSV
};
int cmd_train(const TrainArgs& args);

struct EvalArgs {
    std::vector<std::string> model_paths;  // 1 to 3, distinct modes
    std::string data_path;
    std::string out_path;  // optional per-sample CSV
};
int cmd_eval(const EvalArgs& args);

struct InferArgs {
    std::string model_path;
    std::string histogram_csv;
    std::string profile_csv;  // optional for photon-only models
    std::string out_pgm;
    std::string out_csv;  // optional full-precision dump of the prediction
};
int cmd_infer(const InferArgs& args);

struct MirrorDemoArgs {
    std::string config_path;
    std::string out_dir;
    std::string photon_model_path;  // optional; trained on the spot if empty
    std::string fusion_model_path;
    std::uint64_t seed = 1;
};
int cmd_mirror_demo(const MirrorDemoArgs& args);

struct CompareArgs {
    std::string config_path;
    std::string out_dir;
    long long count = 2000;
    std::uint64_t seed = 1;
};
int cmd_compare(const CompareArgs& args);

}  // namespace fusim::cli
