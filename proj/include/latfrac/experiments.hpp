#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "latfrac/atoms.hpp"
#include "latfrac/fracspec.hpp"
#include "latfrac/hardy.hpp"
#include "latfrac/operators.hpp"

namespace latfrac {

inline constexpr double kExperimentSlack = 1e-9;  // pass = measured <= bound * (1 + slack)
inline constexpr const char* kVersion = "0.1.0";

// Structured experiment record. CSV rows are pre-formatted strings so reruns
// with the same seed are byte-identical; wall time lives in the JSON metadata
// only.
struct ExperimentReport {
    std::string experiment;
    int schema = 1;
    std::uint64_t seed = 0;
    std::string bound_formula;  // exact formula behind the per-row bound column
    nlohmann::json params;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json summary;
    bool pass = true;
    double wall_ms = 0.0;
    int threads = 1;
};

std::string to_csv(const ExperimentReport& r);
nlohmann::json report_json(const ExperimentReport& r);

std::string fmt_g(double v);  // "%.17g", byte-stable
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// Honors the LATFRAC_THREADS environment variable.
void apply_thread_cap_from_env();

struct TailParams {
    std::vector<int> ns = {1, 2, 3};
    std::vector<double> eps = {0.5, 1.0, 2.0};
    std::vector<std::int64_t> Ns = {1, 2, 4, 8, 16};
    double point_budget = 2e7;
};
ExperimentReport exp_tail(const TailParams& p);

struct LplqParams {
    FractionalSpec spec;
    double p = 2.0;
    int trials = 8;
    std::vector<std::int64_t> radii = {8, 16, 32, 64};
    std::uint64_t seed = 1;
    double max_slope = 0.1;
};
ExperimentReport exp_lplq(const LplqParams& p);

struct AtomUniformParams {
    FractionalSpec spec;
    double p = 1.0;
    int atom_count = 100;  // total across cubes, split between origin and far centers
    std::vector<std::int64_t> Ns = {1, 2, 4, 8, 16, 32};
    std::uint64_t seed = 1;
    double slope_window = 0.3;
    double center_ratio_factor = 2.0;
};
ExperimentReport exp_atom_uniform(const AtomUniformParams& p);

struct MaximalBoundParams {
    int n = 1;
    double p = 2.0;
    double alpha = 0.5;
    int trials = 8;
    std::vector<std::int64_t> radii = {8, 16, 32, 64};
    std::uint64_t seed = 1;
    double max_slope = 0.1;
};
ExperimentReport exp_maximal_bound(const MaximalBoundParams& p);

struct DominationParams {
    FractionalSpec spec;
    double p = 1.0;
    int atoms_per_N = 4;
    std::vector<std::int64_t> Ns = {1, 2, 4, 8, 16, 32};
    int samples = 500;
    std::uint64_t seed = 1;
    double slope_window = 0.3;
    double stability_factor = 2.0;
};
ExperimentReport exp_domination(const DominationParams& p);

struct RegionsParams {
    FractionalSpec spec;  // alpha = 0, m = 2
    int trials = 200;
    std::uint64_t seed = 1;
    double p = 2.0;
};
ExperimentReport exp_regions(const RegionsParams& p);

// Built-in presets used across experiments and tests.
FractionalSpec preset_riesz_1d();  // n = 1, alpha = 1/2, m = 1, A = 1
FractionalSpec preset_sym_1d();    // n = 1, alpha = 0, m = 2, A = +-1, alpha_k = 1/2

}  // namespace latfrac
