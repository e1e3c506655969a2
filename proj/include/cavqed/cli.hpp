// cli.hpp — configuration parsing, simulation driving, CSV emission, and the
// command entry points behind the command-line tool.
#pragma once

#include <cavqed/analytic.hpp>
#include <cavqed/entangle.hpp>
#include <cavqed/lindblad.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavqed {

// Unreadable or inconsistent run configuration.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- configuration ----

// One run: physical parameters plus time grid (all times in units of 1/eps).
// dt_out is the output sampling interval, dt_int the integrator step.
struct RunConfig {
    SystemParams params;
    double t_max = 100.0;
    double dt_out = 0.05;
    double dt_int = 1e-3;
};

inline void check_config(const RunConfig& cfg) {
    check_params(cfg.params);
    if (!(cfg.t_max > 0.0)) throw config_error("check_config: t_max must be positive");
    if (!(cfg.dt_int > 0.0) || cfg.dt_int > cfg.dt_out)
        throw config_error("check_config: need 0 < dt_int <= dt_out");
}

namespace detail {

inline std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (strip(value.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw config_error("config: bad numeric value for '" + key + "': " + value);
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (strip(value.substr(pos)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw config_error("config: bad integer value for '" + key + "': " + value);
}

} // namespace detail

inline Frame parse_frame(const std::string& name) {
    if (name == "rotating") return Frame::rotating;
    if (name == "lab") return Frame::lab;
    throw config_error("config: frame must be 'rotating' or 'lab', got '" + name + "'");
}

// Flat key = value text, '#' starts a comment, later keys override earlier
// ones. Unknown keys are rejected so typos cannot silently revert a value to
// its default.
inline RunConfig parse_config_text(const std::string& text, RunConfig cfg = RunConfig{}) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw config_error("config: expected key = value: " + line);
        const std::string key = detail::strip(line.substr(0, eq));
        const std::string value = detail::strip(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("config: expected key = value: " + line);

        if (key == "epsilon") cfg.params.epsilon = detail::parse_double(key, value);
        else if (key == "eta") cfg.params.eta = detail::parse_double(key, value);
        else if (key == "kappa") cfg.params.kappa = detail::parse_double(key, value);
        else if (key == "gamma") cfg.params.gamma = detail::parse_double(key, value);
        else if (key == "f") cfg.params.f = detail::parse_double(key, value);
        else if (key == "delta") cfg.params.delta = detail::parse_double(key, value);
        else if (key == "omega0") cfg.params.omega0 = detail::parse_double(key, value);
        else if (key == "fock_cutoff") cfg.params.fock_cutoff = detail::parse_int(key, value);
        else if (key == "frame") cfg.params.frame = parse_frame(value);
        else if (key == "t_max") cfg.t_max = detail::parse_double(key, value);
        else if (key == "dt_out") cfg.dt_out = detail::parse_double(key, value);
        else if (key == "dt_int") cfg.dt_int = detail::parse_double(key, value);
        else throw config_error("config: unknown key '" + key + "'");
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path, RunConfig cfg = RunConfig{}) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot read '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), cfg);
}

// ---- simulation driver ----

inline std::vector<double> output_grid(double t_max, double dt_out) {
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double t = i * dt_out;
        if (t > t_max + 1e-9) break;
        grid.push_back(t);
    }
    if (grid.back() < t_max - 1e-9) grid.push_back(t_max);
    return grid;
}

// Propagate the configured system and attach the standard observables: the
// collective-basis block entries, mean excitation number, and both
// concurrence readings (block formula and Wootters on the conditional state).
// Concurrence columns are NaN where the conditioning probability vanishes.
inline Trajectory run_simulation(const RunConfig& cfg) {
    check_config(cfg);
    const HilbertLayout layout = layout_for(cfg.params);
    Superoperator l = assemble_liouvillian(build_hac(cfg.params, layout),
                                           build_dissipators(cfg.params, layout));
    Trajectory traj = evolve_rk(l, initial_state(layout), output_grid(cfg.t_max, cfg.dt_out),
                                cfg.dt_int);

    const Operator u = collective_unitary(layout);
    const Matrix n = excitation_number(layout).entries;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    static const char* keys[] = {"rho_tilde_11", "rho_tilde_22", "rho_tilde_33", "rho_tilde_44",
                                 "re_rho_tilde_24", "im_rho_tilde_24", "N_expect",
                                 "C_conditional", "C_wootters"};
    for (const char* k : keys) traj.observables[k].reserve(traj.states.size());

    for (const DensityMatrix& st : traj.states) {
        const Eigen::Matrix4cd rt =
            project_block4(Matrix(u.entries.adjoint() * st.op.entries * u.entries), layout);
        traj.observables["rho_tilde_11"].push_back(rt(0, 0).real());
        traj.observables["rho_tilde_22"].push_back(rt(1, 1).real());
        traj.observables["rho_tilde_33"].push_back(rt(2, 2).real());
        traj.observables["rho_tilde_44"].push_back(rt(3, 3).real());
        traj.observables["re_rho_tilde_24"].push_back(rt(1, 3).real());
        traj.observables["im_rho_tilde_24"].push_back(rt(1, 3).imag());
        traj.observables["N_expect"].push_back((n * st.op.entries).trace().real());
        double c_block = nan, c_woot = nan;
        try {
            c_block = conditional_concurrence(rt);
            c_woot = wootters_concurrence(conditional_state(st).first);
        } catch (const no_support_error&) {
        }
        traj.observables["C_conditional"].push_back(c_block);
        traj.observables["C_wootters"].push_back(c_woot);
    }
    return traj;
}

// ---- CSV emission ----

// Full-precision scientific notation (17 significant digits) so emitted files
// can serve as regression oracles; NaN is spelled "nan".
inline std::string format_field(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

inline void write_simulation_csv(std::ostream& out, const Trajectory& traj) {
    out << "t,rho_tilde_11,rho_tilde_22,rho_tilde_33,rho_tilde_44,"
           "re_rho_tilde_24,im_rho_tilde_24,N_expect,C_conditional,C_wootters\n";
    static const char* keys[] = {"rho_tilde_11", "rho_tilde_22", "rho_tilde_33", "rho_tilde_44",
                                 "re_rho_tilde_24", "im_rho_tilde_24", "N_expect",
                                 "C_conditional", "C_wootters"};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << format_field(traj.times[i]);
        for (const char* k : keys) out << ',' << format_field(traj.observables.at(k)[i]);
        out << '\n';
    }
}

// ---- commands ----

inline int cmd_simulate(const RunConfig& cfg, std::ostream& csv, std::ostream& log) {
    Trajectory traj = run_simulation(cfg);
    write_simulation_csv(csv, traj);
    log << "rows: " << traj.times.size() << "\n"
        << "final C_conditional: " << format_field(traj.observables.at("C_conditional").back())
        << "\n";
    return 0;
}

// Deviation tolerances for the three cross-checks of cmd_compare.
struct CompareOptions {
    double tol_analytic = 1e-6;
    double tol_expm = 1e-8;
    double tol_transform = 1e-10;
};

// Cross-validate the three propagation routes: fixed-step integration against
// the closed form, against the exact propagator, and against evolution under
// the rotated generator.
inline int cmd_compare(const RunConfig& cfg, const CompareOptions& opt, std::ostream& log) {
    check_config(cfg);
    if (cfg.params.delta != 0.0 || cfg.params.f != 1.0)
        throw config_error("compare: requires delta = 0 and f = 1");

    const HilbertLayout layout = layout_for(cfg.params);
    Superoperator l = assemble_liouvillian(build_hac(cfg.params, layout),
                                           build_dissipators(cfg.params, layout));
    const Operator u = collective_unitary(layout);
    const AnalyticSolution sol = solve_constants(cfg.params);
    const std::vector<double> grid = output_grid(cfg.t_max, cfg.dt_out);
    Trajectory traj = evolve_rk(l, initial_state(layout), grid, cfg.dt_int);

    double dev_analytic = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::Matrix4cd numeric = project_block4(
            Matrix(u.entries.adjoint() * traj.states[i].op.entries * u.entries), layout);
        dev_analytic =
            std::max(dev_analytic, max_abs(Matrix(numeric - rho_tilde(grid[i], sol))));
    }

    // Checkpoints for the propagator cross-checks: the grid points nearest to
    // t = 1, 10, 100, or just the endpoint for very short runs.
    std::vector<std::size_t> checkpoints;
    for (double t : {1.0, 10.0, 100.0})
        if (t <= cfg.t_max + 1e-9) {
            const auto i = static_cast<std::size_t>(std::lround(t / cfg.dt_out));
            checkpoints.push_back(std::min(i, grid.size() - 1));
        }
    if (checkpoints.empty()) checkpoints.push_back(grid.size() - 1);

    // Rotated generator: same cavity loss, one collective channel at twice
    // the atomic rate.
    Operator ht(layout,
                Matrix(u.entries.adjoint() * build_hac(cfg.params, layout).entries * u.entries));
    std::vector<LindbladTriple> rotated{
        {cfg.params.kappa, annihilator(layout), annihilator(layout)},
        {2.0 * cfg.params.gamma, sigma_minus(layout, 1), sigma_minus(layout, 1)}};
    Superoperator lt = assemble_liouvillian(ht, rotated);
    const DensityMatrix rho0 = initial_state(layout);
    const Matrix rt0 = u.entries.adjoint() * rho0.op.entries * u.entries;

    double dev_expm = 0.0, dev_transform = 0.0;
    for (std::size_t i : checkpoints) {
        const double t = grid[i];
        const Matrix exact = evolve_expm(l, rho0, t).op.entries;
        dev_expm = std::max(dev_expm, max_abs(traj.states[i].op.entries - exact));
        const Matrix via_original = u.entries.adjoint() * exact * u.entries;
        const Matrix via_rotated =
            evolve_expm(lt, DensityMatrix{Operator(layout, rt0)}, t).op.entries;
        dev_transform = std::max(
            dev_transform, max_abs(Matrix(project_block4(via_original, layout) -
                                          project_block4(via_rotated, layout))));
    }

    log << "numeric vs analytic:    " << format_field(dev_analytic) << " (tol "
        << format_field(opt.tol_analytic) << ")\n";
    log << "numeric vs exact:       " << format_field(dev_expm) << " (tol "
        << format_field(opt.tol_expm) << ")\n";
    log << "original vs rotated:    " << format_field(dev_transform) << " (tol "
        << format_field(opt.tol_transform) << ")\n";

    int failures = 0;
    if (dev_analytic > opt.tol_analytic) ++failures, log << "FAIL: numeric vs analytic\n";
    if (dev_expm > opt.tol_expm) ++failures, log << "FAIL: numeric vs exact\n";
    if (dev_transform > opt.tol_transform) ++failures, log << "FAIL: original vs rotated\n";
    return failures == 0 ? 0 : 4;
}

// Reference concurrence curve: eta = 0.5, kappa = 0.1, gamma = 0.01 (units of
// epsilon), t in [0, 100], closed-form evaluation.
inline RunConfig figure1_config() {
    RunConfig cfg;
    cfg.params.eta = 0.5;
    cfg.params.kappa = 0.1;
    cfg.params.gamma = 0.01;
    return cfg;
}

inline int cmd_figure1(std::ostream& csv) {
    const RunConfig cfg = figure1_config();
    const AnalyticSolution sol = solve_constants(cfg.params);
    csv << "t,C\n";
    for (double t : output_grid(cfg.t_max, cfg.dt_out))
        csv << format_field(t) << ',' << format_field(conditional_concurrence(rho_tilde(t, sol)))
            << '\n';
    return 0;
}

// Stationary structure: manifold dimension, Liouvillian spectral gap, and the
// fidelity of the long-time evolved state to the cooperative stationary
// mixture.
inline int cmd_steady(const RunConfig& cfg, std::ostream& log) {
    check_config(cfg);
    const HilbertLayout layout = layout_for(cfg.params);
    Superoperator l = assemble_liouvillian(build_hac(cfg.params, layout),
                                           build_dissipators(cfg.params, layout));
    StationaryManifold m = steady_states(l);
    log << "stationary manifold dimension: " << m.dimension << "\n";

    if (cfg.params.kappa == 0.0 && cfg.params.gamma == 0.0) {
        log << "no dissipation: spectral gap and long-time fidelity skipped\n";
        return 0;
    }

    Eigen::ComplexEigenSolver<Matrix> es(l.matrix, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("cmd_steady: eigensolver failed");
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double re = es.eigenvalues()(i).real();
        if (re < -1e-10) gap = std::min(gap, -re);
    }
    log << "spectral gap: " << format_field(gap) << "\n";

    const double horizon = std::max(cfg.t_max, 200.0);
    DensityMatrix late = evolve_expm(l, initial_state(layout), horizon);
    log << "fidelity to stationary mixture at t = " << format_field(horizon) << ": "
        << format_field(fidelity(late, asymptotic_state(layout))) << "\n";
    return 0;
}

} // namespace cavqed
