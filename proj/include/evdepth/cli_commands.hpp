#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "evdepth/representations.hpp"
#include "evdepth/synthgen.hpp"
#include "evdepth/uncertainty.hpp"

namespace evdepth::cli {

// Defaults mirror the standard preprocessing configuration:
// 50 ms windows, K=3 / tau=5e4 us / tau'=150 us, lambda=0.25, retain=0.10.
struct RunConfig {
    // synth
    GenConfig gen;
    std::uint64_t window_us = 50000;
    bool emit_noisy_pred = false;
    double noise_base = 0.05;  // heteroscedastic scale for --emit-noisy-pred
    std::filesystem::path out_dir;

    // repr
    std::filesystem::path events_path;
    std::string repr_kind = "voxel";  // voxel | cstr | tore
    std::size_t bins = 5;
    ToreConfig tore;
    std::string normalize = "auto";  // auto | on | off
    std::size_t downsample_factor = 1;
    std::string downsample_mode = "auto";  // auto | nearest | bilinear | minpool
    bool flip = false;

    // eval
    std::filesystem::path gt_path;
    std::filesystem::path pred_path;
    std::filesystem::path unc_path;
    std::filesystem::path mask_path;
    double retain = 0.10;
    std::size_t fraction_count = 100;
    std::string report_prefix = "report";

    // fit
    std::filesystem::path samples_path;
    std::string model = "gaussian";
    std::size_t steps = 2000;
    double step_size = 0.05;
    double lambda = kDefaultPenaltyWeight;

    // gradcheck
    std::size_t trials = 1000;
    std::uint64_t check_seed = 1;
};

// Each command returns a process exit code (0 on success) and reports
// problems on stderr; callers may also receive thrown Error before any
// output file is touched.

// Writes events.evt1, per-window ground-truth depth gt_NNNN.tsr1, per-window
// event masks mask_NNNN.tsr1, and manifest.txt with window boundaries.
// With emit_noisy_pred also writes pred_NNNN.tsr1 / unc_NNNN.tsr1.
int cmd_synth(const RunConfig& cfg);

// One TSR1 tensor per window of the chosen representation.
int cmd_repr(const RunConfig& cfg);

// Writes <prefix>.txt, <prefix>.csv, and <prefix>_sparsification.csv.
int cmd_eval(const RunConfig& cfg);

// Fits one pointwise model to a sample file (one value per line) and writes
// the parameters plus final NLL to <out_dir>/fit.txt.
int cmd_fit(const RunConfig& cfg);

// Finite-difference gradient suites for all three models; prints the max
// relative error per model and fails (exit 3) above 1e-4.
int cmd_gradcheck(const RunConfig& cfg);

}  // namespace evdepth::cli
