#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rvfl/kernel.hpp"
#include "rvfl/lipschitz.hpp"
#include "rvfl/spectral.hpp"
#include "rvfl/targets.hpp"

namespace rvfl {

// Everything the pipeline needs, built from a sampled target: the
// recentered extension, the kernel, the spectral surrogate and the
// Minkowski-sum volume used by the concentration bound.
struct Pipeline {
    std::shared_ptr<const McShaneExtension> extension;
    std::shared_ptr<const SmoothingKernel> kernel;
    std::shared_ptr<const SpectralSurrogate> surrogate;
    double ktilde_volume = 0.0;
    std::vector<Eigen::VectorXd> sample_points;  // recentered domain points
    std::vector<double> sample_values;           // recentered values
};

Pipeline build_pipeline(const Target& target, double lambda, double theta, double sigma,
                        std::uint64_t volume_seed, double kernel_table_scale = 1.0);

// Tensor grid over the extension's support box, per_axis nodes per axis.
std::vector<Eigen::VectorXd> support_grid(const Extension& ext, int per_axis);

struct CheckResult {
    std::string check_id;
    std::string detail;
    double observed = 0.0;
    double bound = 0.0;
    double margin = 0.0;  // bound - observed; negative means failed
    bool pass = false;
    bool skipped = false;
};

struct ValidationConfig {
    int m = 1;
    std::string target = "tent";
    int resolution = 0;  // 0 = default_resolution(m)
    double sigma = 1.0;
    double lambda = 20.0;
    double theta = 0.05;
    int grid_points = 21;            // sup grids per axis
    std::uint64_t mc_samples = 200000;  // sampling-identity draws per point
    int seeds = 60;                  // concentration repetitions
    int network_n = 2000;
    std::uint64_t master_seed = 20240901;
    double kernel_table_scale = 1.0;  // != 1 corrupts the kernel table (negative control)
};

// Runs the full validation suite at the given configuration. Checks whose
// quadrature is infeasible at this m are marked skipped, not failed.
std::vector<CheckResult> run_validation(const ValidationConfig& config);

bool all_passed(const std::vector<CheckResult>& results);
std::string results_to_json(const std::vector<CheckResult>& results);

}  // namespace rvfl
