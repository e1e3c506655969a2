// cavqed_cli.cpp — command-line front end: simulate, compare, figure1, steady.
#include <CLI11.hpp>

#include <cavqed/cli.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

struct Flags {
    std::string config_path;
    std::string out_path;
    double t_max = 0.0;
    double dt_out = 0.0;
    double dt_int = 0.0;
    std::string frame;
    double tol = 0.0;
};

// Shared options; each returns the Option* so callers can test presence.
void add_config_flag(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "Key = value parameter file");
}

struct GridOptions {
    CLI::Option* t_max;
    CLI::Option* dt_out;
    CLI::Option* dt_int;
    CLI::Option* frame;
};

GridOptions add_grid_flags(CLI::App* sub, Flags& f) {
    GridOptions o;
    o.t_max = sub->add_option("--t-max", f.t_max, "Evolution horizon (units of 1/epsilon)");
    o.dt_out = sub->add_option("--dt-out", f.dt_out, "Output sampling interval");
    o.dt_int = sub->add_option("--dt-int", f.dt_int, "Integrator step");
    o.frame = sub->add_option("--frame", f.frame, "Reference frame: rotating or lab");
    return o;
}

// No config file: fall back to the reference parameter set. With one: the
// file is parsed over neutral defaults, then flags override either way.
cavqed::RunConfig build_config(const Flags& f, const GridOptions& o) {
    cavqed::RunConfig cfg = f.config_path.empty() ? cavqed::figure1_config()
                                                  : cavqed::parse_config_file(f.config_path);
    if (*o.t_max) cfg.t_max = f.t_max;
    if (*o.dt_out) cfg.dt_out = f.dt_out;
    if (*o.dt_int) cfg.dt_int = f.dt_int;
    if (*o.frame) cfg.params.frame = cavqed::parse_frame(f.frame);
    return cfg;
}

// CSV goes to --out when given, otherwise to stdout (with the run summary
// diverted to stderr so the data stays clean).
int write_csv_command(const std::string& out_path, const std::function<int(std::ostream&)>& body) {
    if (out_path.empty()) return body(std::cout);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw cavqed::config_error("cannot open output file '" + out_path + "'");
    return body(out);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two dipole-coupled atoms in a lossy cavity: dissipative dynamics toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    Flags sim_f;
    auto* sim = app.add_subcommand("simulate",
                                   "Integrate the master equation and emit observables as CSV");
    add_config_flag(sim, sim_f);
    sim->add_option("--out", sim_f.out_path, "CSV output path (default: stdout)");
    GridOptions sim_o = add_grid_flags(sim, sim_f);
    sim->callback([&] {
        cavqed::RunConfig cfg = build_config(sim_f, sim_o);
        rc = write_csv_command(sim_f.out_path, [&](std::ostream& csv) {
            return cavqed::cmd_simulate(cfg, csv, sim_f.out_path.empty() ? std::cerr : std::cout);
        });
    });

    Flags cmp_f;
    auto* cmp = app.add_subcommand(
        "compare", "Cross-validate integrator, closed form, exact propagator, rotated frame");
    add_config_flag(cmp, cmp_f);
    GridOptions cmp_o = add_grid_flags(cmp, cmp_f);
    auto* tol_opt =
        cmp->add_option("--tol", cmp_f.tol, "Override all three deviation tolerances");
    cmp->callback([&] {
        cavqed::RunConfig cfg = build_config(cmp_f, cmp_o);
        cavqed::CompareOptions opt;
        if (*tol_opt) opt = {cmp_f.tol, cmp_f.tol, cmp_f.tol};
        rc = cavqed::cmd_compare(cfg, opt, std::cout);
    });

    Flags fig_f;
    auto* fig = app.add_subcommand(
        "figure1", "Closed-form conditional concurrence curve at the reference parameters");
    fig->add_option("--out", fig_f.out_path, "CSV output path (default: stdout)");
    fig->callback([&] {
        rc = write_csv_command(fig_f.out_path,
                               [&](std::ostream& csv) { return cavqed::cmd_figure1(csv); });
    });

    Flags std_f;
    auto* std_c = app.add_subcommand(
        "steady", "Stationary manifold dimension, spectral gap, long-time fidelity");
    add_config_flag(std_c, std_f);
    GridOptions std_o = add_grid_flags(std_c, std_f);
    std_c->callback([&] {
        rc = cavqed::cmd_steady(build_config(std_f, std_o), std::cout);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const cavqed::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cavqed::unsupported_regime& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cavqed::integration_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
