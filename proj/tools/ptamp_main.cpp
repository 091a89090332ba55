#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ptamp/cli.hpp"
#include "ptamp/errors.hpp"

namespace {

ptamp::cli::RunConfig load_config(const std::string& config_path, const std::string& out_dir,
                                  double tol_override) {
    auto cfg = config_path.empty() ? ptamp::cli::RunConfig::defaults()
                                   : ptamp::cli::RunConfig::load(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (tol_override > 0.0) {
        cfg.tol.metric = tol_override;
        cfg.tol.ode = tol_override;
        cfg.tol.quad = tol_override;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-dependent PT-symmetric parametric amplifier pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    double tol = -1.0;
    app.add_option("--config", config_path, "JSON run configuration")->capture_default_str();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--tol", tol, "override metric/ode/quad tolerances");

    // pt-region
    auto* pt = app.add_subcommand("pt-region", "boolean grid of the unbroken-symmetry region");
    double a_lo = 0.0, a_hi = 1.0, b_lo = 0.0, b_hi = 1.0;
    int n_grid = 201;
    pt->add_option("--alpha-min", a_lo)->capture_default_str();
    pt->add_option("--alpha-max", a_hi)->capture_default_str();
    pt->add_option("--beta-min", b_lo)->capture_default_str();
    pt->add_option("--beta-max", b_hi)->capture_default_str();
    pt->add_option("-n,--n", n_grid, "grid points per axis")->capture_default_str();

    // metric-solve
    auto* ms = app.add_subcommand("metric-solve", "solve the Hermitizing kappa0 constraint");
    double ms_t = 1.0;
    double ms_omega = 1.0, ms_alpha = 0.1, ms_beta = 0.2, ms_mass = 1.0, ms_kappa = 1.0;
    bool ms_inline = false;
    ms->add_option("-t,--time", ms_t)->capture_default_str();
    ms->add_flag("--inline", ms_inline, "use --omega/--alpha/--beta/--mass instead of --config");
    ms->add_option("--omega", ms_omega)->capture_default_str();
    ms->add_option("--alpha", ms_alpha)->capture_default_str();
    ms->add_option("--beta", ms_beta)->capture_default_str();
    ms->add_option("--mass", ms_mass)->capture_default_str();
    ms->add_option("--kappa", ms_kappa)->capture_default_str();

    // ep
    auto* epcmd = app.add_subcommand("ep", "solve the auxiliary equation");
    std::string ep_mode = "toy";
    epcmd->add_option("mode", ep_mode, "toy | solve")->capture_default_str();

    // evolve
    app.add_subcommand("evolve", "auxiliary solution, phases, density, covariance");

    // wigner
    auto* wg = app.add_subcommand("wigner", "phase-space grids and origin summary");
    bool oracle_check = false;
    wg->add_flag("--oracle-check", oracle_check, "verify closed form against the Fourier oracle");

    // figures
    app.add_subcommand("figures", "regenerate every figure's data with the defaults");

    CLI11_PARSE(app, argc, argv);

    return ptamp::cli::run_guarded(
        [&]() -> int {
            auto cfg = load_config(config_path, out_dir, tol);
            if (pt->parsed())
                return ptamp::cli::cmd_pt_region({a_lo, a_hi}, {b_lo, b_hi}, n_grid,
                                                 cfg.out_dir / "pt_region.csv", std::cout);
            if (ms->parsed()) {
                if (ms_inline) {
                    cfg.spec = ptamp::signals::AmplifierSpec{
                        ptamp::signals::ParameterSignal::constant(ms_omega),
                        ptamp::signals::ParameterSignal::constant(ms_alpha),
                        ptamp::signals::ParameterSignal::constant(ms_beta),
                        ptamp::signals::ParameterSignal::constant(ms_mass)};
                    cfg.kappa = ms_kappa;
                }
                return ptamp::cli::cmd_metric_solve(cfg, ms_t, std::cout);
            }
            if (epcmd->parsed()) {
                if (ep_mode == "solve") cfg.ep.source = "numeric";
                else if (ep_mode != "toy")
                    throw ptamp::ConfigError("ep mode: expected toy or solve");
                return ptamp::cli::cmd_ep(cfg, std::cout);
            }
            if (app.get_subcommand("evolve")->parsed())
                return ptamp::cli::cmd_evolve(cfg, std::cout);
            if (wg->parsed()) return ptamp::cli::cmd_wigner(cfg, oracle_check, std::cout);
            if (app.get_subcommand("figures")->parsed())
                return ptamp::cli::cmd_figures(cfg, std::cout);
            return ptamp::cli::kExitConfig;
        },
        std::cerr);
}
