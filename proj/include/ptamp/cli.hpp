#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptamp/ep.hpp"
#include "ptamp/signals.hpp"

namespace ptamp::cli {

// Exit codes: 0 success, 2 config error, 3 domain error (broken-PT
// region, singular coefficients), 4 accuracy failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitAccuracy = 4;

struct EpConfig {
    std::string source = "toy";  // "toy" | "numeric"
    double c1 = 4.0, c2 = 4.0;
    ep::ToyBranch branch = ep::ToyBranch::one_plus;
    ep::ToyVariant variant = ep::ToyVariant::signed_sin;
    double eta0 = 1.0;
    double t0 = 1.0, t1 = 10.0;
    double step = 1e-2;
};

struct Tolerances {
    double metric = 1e-10;
    double ode = 1e-10;
    double quad = 1e-10;
    double oracle = 1e-6;
};

// Schema-validated run description; unknown keys are rejected.
struct RunConfig {
    signals::AmplifierSpec spec;
    double kappa = 1.0;
    EpConfig ep;
    double cat_x0 = 5.0, cat_p0 = 5.0;
    std::vector<double> times{0.1, 1.0, 2.0, 100.0, 1000.0};
    int grid_nx = 101, grid_np = 101;
    int density_nx = 201, density_nt = 41;
    std::filesystem::path out_dir = "out";

    Tolerances tol;

    static RunConfig defaults();
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig load(const std::filesystem::path& file);
};

int cmd_pt_region(std::pair<double, double> alpha_range, std::pair<double, double> beta_range,
                  int n, const std::filesystem::path& out_file, std::ostream& log);

int cmd_metric_solve(const RunConfig& cfg, double t, std::ostream& log);

int cmd_ep(const RunConfig& cfg, std::ostream& log);

int cmd_evolve(const RunConfig& cfg, std::ostream& log);

int cmd_wigner(const RunConfig& cfg, bool oracle_check, std::ostream& log);

int cmd_figures(const RunConfig& cfg, std::ostream& log);

// Maps thrown errors onto the exit-code contract.
int run_guarded(const std::function<int()>& body, std::ostream& log);

}  // namespace ptamp::cli
