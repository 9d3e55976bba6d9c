// Command-line driver: run a configured experiment, sweep the tube voltage,
// self-validate the propagator, or emit a starter config.
//
// Exit codes: 0 success, 1 configuration or I/O failure, 2 numerical blowup,
// 3 audit/probe failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "abtube/abtube.hpp"

namespace {

namespace fs = std::filesystem;

struct CliOptions {
    std::string output_dir;
    bool quiet = false;
    std::optional<double> dt_override;
};

fs::path resolve_output_dir(const CliOptions& opt) {
    if (!opt.output_dir.empty()) return opt.output_dir;
    if (const char* env = std::getenv("ABTUBE_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

abtube::RunConfig load_with_overrides(const std::string& path, const CliOptions& opt) {
    abtube::RunConfig cfg = abtube::load_config(path);
    if (opt.dt_override) {
        cfg.evolution.dt = *opt.dt_override;
        abtube::validate_or_throw(cfg);
    }
    return cfg;
}

int cmd_run(const std::string& config_path, const CliOptions& opt) {
    const abtube::RunConfig cfg = load_with_overrides(config_path, opt);
    const fs::path out_dir = resolve_output_dir(opt);
    fs::create_directories(out_dir);

    const abtube::SimulationReport rep = abtube::run_scenario(cfg);
    const abtube::AuditVerdict verdict = abtube::energy_audit(rep, cfg);
    abtube::write_report(rep, verdict, (out_dir / cfg.output.report_path).string());
    abtube::write_fringe_csv(rep, (out_dir / cfg.output.fringe_path).string());

    if (!opt.quiet) {
        std::cout << "mode                 " << abtube::to_string(cfg.mode) << "\n"
                  << "measured delta_phi   " << abtube::format_double(rep.measured_delta_phi)
                  << "\n"
                  << "analytic delta_phi   " << abtube::format_double(rep.analytic_delta_phi)
                  << "\n"
                  << "overlap modulus      " << abtube::format_double(rep.overlap_modulus)
                  << "\n"
                  << "deviation sup        " << abtube::format_double(rep.deviation_sup)
                  << "\n"
                  << "e2 - e1              " << abtube::format_double(rep.e2 - rep.e1) << "\n"
                  << "fringe shift         "
                  << abtube::format_double(rep.fringe_shift_periods) << " periods\n"
                  << "norm drift           " << abtube::format_double(rep.norm_drift) << "\n"
                  << "audit                " << (verdict.passed ? "pass" : "FAIL") << "\n"
                  << "report               " << (out_dir / cfg.output.report_path).string()
                  << "\n";
    }
    if (!verdict.passed) {
        std::cerr << "energy audit failed; see report\n";
        return 3;
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const CliOptions& opt) {
    const abtube::RunConfig cfg = load_with_overrides(config_path, opt);
    if (cfg.sweep_v0.empty())
        throw abtube::config_error("sweep_v0: config must list at least one voltage");
    const fs::path out_dir = resolve_output_dir(opt);
    fs::create_directories(out_dir);

    const std::vector<abtube::SweepRow> rows = abtube::sweep_voltage(cfg, cfg.sweep_v0);
    abtube::write_sweep_csv(rows, (out_dir / cfg.output.sweep_path).string());

    if (!opt.quiet) {
        std::cout << "v0, delta_phi_measured, delta_phi_analytic, fringe_shift_periods\n";
        for (const abtube::SweepRow& r : rows)
            std::cout << abtube::format_double(r.v0) << ", "
                      << abtube::format_double(r.delta_phi_measured) << ", "
                      << abtube::format_double(r.delta_phi_analytic) << ", "
                      << abtube::format_double(r.fringe_shift_periods) << "\n";
        std::cout << "sweep written to " << (out_dir / cfg.output.sweep_path).string()
                  << "\n";
    }
    return 0;
}

int cmd_validate(const std::string& config_path, const CliOptions& opt) {
    const abtube::RunConfig cfg = load_with_overrides(config_path, opt);
    const double dt = cfg.evolution.dt;
    const std::vector<abtube::ProbeResult> probes = abtube::run_validation_probes(dt);
    bool all_passed = true;
    for (const abtube::ProbeResult& p : probes) {
        all_passed = all_passed && p.passed;
        if (!opt.quiet)
            std::printf("%-18s %-5s value %-12.4g threshold %-8.2g (%s)\n", p.name.c_str(),
                        p.passed ? "pass" : "FAIL", p.value, p.threshold,
                        p.detail.c_str());
    }
    return all_passed ? 0 : 3;
}

int cmd_emit_example(const std::string& mode_name, const std::string& output_path) {
    const abtube::RunMode mode = abtube::run_mode_from_string(mode_name);
    const abtube::RunConfig cfg = abtube::example_config(mode);
    if (output_path.empty()) {
        std::cout << abtube::config_to_json(cfg).dump(2) << "\n";
    } else {
        abtube::save_config(cfg, output_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-tube wavepacket interferometry simulator"};
    app.require_subcommand(1);
    app.fallthrough(); // accept --output-dir etc. after the subcommand

    CliOptions opt;
    app.add_option("--output-dir", opt.output_dir,
                   "Directory for report and CSV files (env ABTUBE_OUTPUT_DIR honored)");
    app.add_flag("--quiet", opt.quiet, "Suppress the summary printout");
    double dt_value = 0.0;
    CLI::Option* dt_opt =
        app.add_option("--dt-override", dt_value, "Replace evolution.dt from the config");

    std::string run_config_path;
    CLI::App* run = app.add_subcommand("run", "Run one configured experiment");
    run->add_option("config", run_config_path, "Config file (JSON)")->required();

    std::string sweep_config_path;
    CLI::App* sweep = app.add_subcommand("sweep", "Run once per sweep_v0 entry");
    sweep->add_option("config", sweep_config_path, "Config file (JSON)")->required();

    std::string validate_config_path;
    CLI::App* validate =
        app.add_subcommand("validate", "Run propagator probes on a reduced grid");
    validate->add_option("config", validate_config_path, "Config file (JSON)")->required();

    std::string emit_mode;
    std::string emit_output;
    CLI::App* emit = app.add_subcommand("emit-example-config",
                                        "Print a ready-to-run example config");
    emit->add_option("mode", emit_mode, "single_particle or two_particle")->required();
    emit->add_option("--output", emit_output, "Write to a file instead of stdout");

    CLI11_PARSE(app, argc, argv);
    if (dt_opt->count() > 0) opt.dt_override = dt_value;

    try {
        if (run->parsed()) return cmd_run(run_config_path, opt);
        if (sweep->parsed()) return cmd_sweep(sweep_config_path, opt);
        if (validate->parsed()) return cmd_validate(validate_config_path, opt);
        if (emit->parsed()) return cmd_emit_example(emit_mode, emit_output);
    } catch (const abtube::blowup_error& e) {
        std::cerr << "numerical blowup: " << e.what() << "\n";
        return 2;
    } catch (const abtube::audit_error& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return 3;
    } catch (const abtube::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const abtube::io_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
