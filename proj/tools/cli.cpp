#include "cli.hpp"

#include "config.hpp"

#include "smf/blowup.hpp"
#include "smf/errors.hpp"
#include "smf/functional.hpp"
#include "smf/solver.hpp"
#include "smf/threshold.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

namespace smf::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::string dump_dir;
    std::string point;
    std::optional<double> rho;
    std::optional<int> steps;
    std::optional<double> eps;
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> margin;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Point parse_point(const std::string& s) {
    std::istringstream in(s);
    double x = 0.0, y = 0.0;
    char comma = 0;
    if (!(in >> x >> comma >> y) || comma != ',' || !(in >> std::ws).eof() || !std::isfinite(x) ||
        !std::isfinite(y))
        throw UsageError("--point: expected X,Y, got '" + s + "'");
    return wrap(Point{x, y});
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json value_json(const FunctionalValue& v) {
    return {{"dirichlet_half", v.dirichlet}, {"mean_term", v.mean_term}, {"constraint_mass", v.constraint_mass},
            {"j_value", v.j_value},          {"f_value", v.f_value},     {"mass_ok", v.mass_ok},
            {"saturated", v.saturated}};
}

json solve_json(const SolveReport& r) {
    json j = {{"rho", r.rho},
              {"converged", r.converged},
              {"aborted", r.aborted},
              {"status", r.status},
              {"iterations", r.iterations},
              {"residual_l2", r.residual_l2},
              {"gradient_sup", r.gradient_sup},
              {"lambda_max", r.lambda_max},
              {"mean_u", r.mean_u},
              {"dirichlet", r.dirichlet},
              {"mass_lower_bound", r.mass_lower_bound},
              {"mass_e", r.mass_e},
              {"recovered_start", r.recovered_start},
              {"f_monotone", r.f_monotone}};
    j.update(value_json(r.value));
    return j;
}

void put_all(json& dst, const json& src, const std::string& prefix = "") {
    for (const auto& [k, v] : src.items()) dst[prefix + k] = v;
}

json blowup_json(const BlowupReport& b) {
    json j = {{"lambda_max", b.diagnostics.lambda_max},
              {"mean_u", b.diagnostics.mean_u},
              {"dirichlet", b.diagnostics.dirichlet},
              {"argmax_node", b.diagnostics.argmax},
              {"argmax_point", point_json(b.argmax_point)},
              {"threshold", b.threshold},
              {"far_field_deviation", b.far_field_deviation},
              {"decomposition_note", b.decomposition_note}};
    json profile = json::array();
    for (const auto& s : b.mass_profile) profile.push_back({{"radius", s.radius}, {"mass", s.mass}});
    j["mass_profile"] = profile;
    const Concentration& c = b.concentration;
    put_all(j,
            {{"conclusive", c.conclusive},
             {"node", c.node},
             {"point", point_json(c.point)},
             {"lambda", c.lambda},
             {"primary_mass", c.primary_mass},
             {"second_mass", c.second_mass},
             {"second_point", point_json(c.second_point)},
             {"single", c.single},
             {"h_positive", c.h_positive},
             {"angle_minimal", c.angle_minimal}},
            "concentration_");
    const RescaledComparison& r = b.bubble;
    put_all(j,
            {{"conclusive", r.conclusive},
             {"reason", r.reason},
             {"lambda", r.lambda},
             {"r_k", r.r_k},
             {"r_k_flat", r.r_k_flat},
             {"H", r.H},
             {"deviation", r.deviation}},
            "bubble_");
    if (b.decomposition) {
        const EnergyDecomposition& d = *b.decomposition;
        put_all(j,
                {{"outer", d.outer},
                 {"neck", d.neck},
                 {"inner", d.inner},
                 {"capacity", d.capacity},
                 {"total", d.total},
                 {"inner_radius", d.inner_radius},
                 {"delta", d.delta}},
                "decomposition_");
    }
    return j;
}

json threshold_json(const ThresholdReport& t) {
    json cands = json::array();
    for (Point p : t.candidates) cands.push_back(point_json(p));
    json j = {{"alpha_bar", t.alpha_bar},
              {"rho_bar", t.rho_bar},
              {"candidates", cands},
              {"candidate_count", t.candidate_count},
              {"candidates_empty", t.candidates_empty},
              {"argmax_node", t.argmax_node},
              {"argmax_point", point_json(t.argmax_point)},
              {"grid_argmax_value", t.grid_argmax_value},
              {"argmax_value", t.argmax_value},
              {"lambda", t.lambda},
              {"verdict", to_string(t.verdict)}};
    j["inf_estimate"] = t.inf_estimate ? json(*t.inf_estimate) : json(nullptr);
    return j;
}

void dump_field(const std::string& dir, const std::string& name, const ScalarField& f) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    std::ofstream os(fs::path(dir) / (name + ".csv"));
    if (!os) throw UsageError("--dump-fields: cannot write to '" + dir + "'");
    const int n = f.n();
    os << "n=" << n << "\n";
    char buf[32];
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", f[static_cast<std::size_t>(i) * n + j]);
            os << (j ? "," : "") << buf;
        }
        os << "\n";
    }
}

std::string series_path(const std::string& out) {
    if (out.empty()) return "continue_series.csv";
    fs::path p(out);
    p.replace_extension();
    return p.string() + ".series.csv";
}

void write_series(const std::string& path, const ContinuationRun& run) {
    std::ofstream os(path);
    if (!os) throw UsageError("--out: cannot write series to '" + path + "'");
    os << "k,rho,lambda_max,mean_u,dirichlet,f_value,residual,blowup_flag\n";
    char buf[256];
    for (std::size_t k = 0; k < run.steps.size(); ++k) {
        const SolveReport& s = run.steps[k];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", k + 1, s.rho, s.lambda_max,
                      s.mean_u, s.dirichlet, s.value.f_value, s.residual_l2, s.aborted ? 1 : 0);
        os << buf;
    }
}

// lambda up, mean down, Dirichlet energy up over the final three steps.
bool indicators_joint(const ContinuationRun& run) {
    const auto& s = run.steps;
    if (s.size() < 3) return false;
    for (std::size_t k = s.size() - 2; k < s.size(); ++k)
        if (!(s[k].lambda_max > s[k - 1].lambda_max && s[k].mean_u < s[k - 1].mean_u &&
              s[k].dirichlet > s[k - 1].dirichlet))
            return false;
    return true;
}

SolveOptions solver_options(const ExperimentConfig& cfg) { return cfg.run.solver; }

int cmd_green(const ExperimentConfig& cfg, const Problem& pb, const Args& a, json& rep) {
    if (a.point.empty()) throw UsageError("--point: required for green");
    const Point p = parse_point(a.point);
    const std::size_t node = nearest_node(cfg.n, p);
    const GreenData gd = pb.green->green(node);
    rep["point"] = point_json(p);
    rep["pole"] = point_json(gd.pole);
    rep["pole_index"] = gd.pole_index;
    rep["robin"] = gd.robin;
    rep["robin_flat"] = gd.robin_flat;
    rep["flat_lattice_robin"] = pb.green->flat_robin();
    rep["shift"] = gd.shift;
    rep["pole_cell"] = gd.pole_cell;
    rep["integral"] = integrate(gd.field, *pb.grid);
    double lo = gd.field[0], hi = gd.field[0];
    for (std::size_t k = 0; k < gd.field.size(); ++k) {
        if (k == gd.pole_index) continue;
        lo = std::min(lo, gd.field[k]);
        hi = std::max(hi, gd.field[k]);
    }
    rep["min"] = lo;
    rep["max_off_pole"] = hi;
    dump_field(a.dump_dir, "green", gd.field);
    return kExitOk;
}

ScalarField start_field(const ExperimentConfig& cfg, std::optional<std::uint64_t> seed) {
    if (!cfg.run.random_start) return ScalarField(cfg.n, 0.0);
    if (!seed) throw UsageError("run.seed: required when run.random_start is true");
    std::mt19937_64 rng(*seed);
    return random_band_limited(cfg.n, 4, 10.0, rng);
}

int cmd_solve(const ExperimentConfig& cfg, const Problem& pb, const Args& a, json& rep) {
    const std::optional<double> rho = a.rho ? a.rho : cfg.run.rho;
    if (!rho) throw UsageError("--rho: required for solve (or run.rho)");
    if (!(*rho > 0.0 && *rho < pb.rho_bar))
        throw UsageError("--rho: must lie in (0, rho_bar = " + std::to_string(pb.rho_bar) + ")");
    const auto seed = a.seed ? a.seed : cfg.run.seed;
    const SolveReport r = minimize(pb, *rho, start_field(cfg, seed), solver_options(cfg));
    put_all(rep, solve_json(r));
    rep["rho_bar"] = pb.rho_bar;
    rep["alpha_bar"] = pb.alpha_bar;
    rep["random_start"] = cfg.run.random_start;
    rep["seed"] = seed ? json(*seed) : json(nullptr);
    rep["mass_bound_holds"] = r.mass_e >= r.mass_lower_bound - 1e-6;
    dump_field(a.dump_dir, "u", r.u);
    return r.converged ? kExitOk : kExitNumerical;
}

int cmd_continue(const ExperimentConfig& cfg, const Problem& pb, const Args& a, json& rep) {
    const std::optional<int> steps = a.steps ? a.steps : cfg.run.steps;
    if (!steps || *steps < 1 || *steps > 60) throw UsageError("--steps: required in [1, 60] (or run.steps)");
    const ContinuationRun run =
        continuation(pb, default_schedule(pb.rho_bar, *steps), solver_options(cfg), cfg.run.lambda_ceiling);
    rep["steps_requested"] = *steps;
    rep["steps_run"] = run.steps.size();
    rep["rho_bar"] = pb.rho_bar;
    rep["alpha_bar"] = pb.alpha_bar;
    rep["lambda_ceiling"] = cfg.run.lambda_ceiling;
    rep["blowup"] = run.blowup;
    json arr = json::array();
    bool ok = true;
    for (const auto& s : run.steps) {
        arr.push_back(solve_json(s));
        if (!s.converged && !s.aborted) ok = false;
    }
    rep["steps"] = arr;
    rep["indicators_joint"] = indicators_joint(run);
    if (run.blowup) {
        BlowupOptions bo;
        bo.ceiling = cfg.run.lambda_ceiling;
        put_all(rep, blowup_json(blowup_report(run.steps.back().u, pb, bo)), "blowup_");
    }
    rep["series_path"] = series_path(a.out);
    write_series(series_path(a.out), run);
    dump_field(a.dump_dir, "u_final", run.steps.back().u);
    return ok ? kExitOk : kExitNumerical;
}

int cmd_threshold(const ExperimentConfig& cfg, const Problem& pb, const Args& a, json& rep) {
    const double margin = a.margin.value_or(cfg.run.margin);
    if (!(margin >= 0.0)) throw UsageError("--margin: must be non-negative");
    ThresholdReport t = lambda_threshold(pb);
    const std::optional<int> steps = a.steps ? a.steps : cfg.run.steps;
    int code = kExitOk;
    if (steps && !t.candidates_empty) {
        const ContinuationRun run =
            continuation(pb, default_schedule(pb.rho_bar, *steps), solver_options(cfg), cfg.run.lambda_ceiling);
        double best = std::numeric_limits<double>::infinity();
        int used = 0;
        for (const auto& s : run.steps) {
            if (!s.converged) continue;
            const double f = evaluate(s.u, pb.rho_bar, pb).f_value;
            if (std::isfinite(f)) {
                best = std::min(best, f);
                ++used;
            }
        }
        if (used > 0) t.inf_estimate = best;
        rep["inf_steps_used"] = used;
        rep["inf_blowup"] = run.blowup;
    }
    t.verdict = existence_verdict(t, t.inf_estimate, margin);
    put_all(rep, threshold_json(t));
    rep["margin"] = margin;
    if (pb.alpha_bar == 0.0) dump_field(a.dump_dir, "robin", pb.green->robin_field());
    return code;
}

int cmd_testfn(const ExperimentConfig& cfg, const Problem& pb, const Args& a, json& rep) {
    if (!a.eps) throw UsageError("--eps: required for testfn");
    Point p;
    if (!a.point.empty()) {
        p = parse_point(a.point);
    } else {
        const ThresholdReport t = lambda_threshold(pb);
        if (t.candidates_empty) throw UsageError("--point: no threshold candidate; pass a point");
        p = t.argmax_point;
    }
    const TestFunctionData tf = build_test_function(*a.eps, p, pb);
    const TestFunctionEnergy e = test_function_energy(tf, pb, cfg.run.disk_radius);
    rep["epsilon"] = tf.epsilon;
    rep["center"] = point_json(tf.center);
    rep["center_node"] = tf.center_node;
    rep["beta"] = tf.beta;
    rep["gamma_eps"] = tf.gamma_eps;
    rep["r_eps"] = tf.r_eps;
    rep["r_eps_flat"] = tf.r_eps_flat;
    rep["c_eps"] = tf.c_eps;
    rep["robin"] = tf.robin;
    rep["robin_flat"] = tf.robin_flat;
    rep["interface_mismatch"] = tf.interface_mismatch;
    put_all(rep, value_json(e.value), "value_");
    rep["dirichlet"] = e.dirichlet;
    rep["dirichlet_predicted"] = e.dirichlet_predicted;
    rep["dirichlet_green"] = e.dirichlet_green;
    rep["mean"] = e.mean;
    rep["mean_predicted"] = e.mean_predicted;
    rep["mean_green"] = e.mean_green;
    rep["mass"] = e.mass;
    rep["mass_predicted"] = e.mass_predicted;
    rep["lambda"] = e.lambda;
    rep["gap"] = e.gap;
    rep["disk_radius"] = e.disk_radius;
    rep["quadrature_intervals"] = e.quadrature_intervals;
    rep["quadrature_converged"] = e.quadrature_converged;
    dump_field(a.dump_dir, "phi", tf.field);
    return kExitOk;
}

int cmd_mtprobe(const ExperimentConfig& cfg, const Problem& pb, const Args& a, json& rep) {
    if (!a.samples || *a.samples < 1) throw UsageError("--samples: required and positive for mtprobe");
    const auto seed = a.seed ? a.seed : cfg.run.seed;
    if (!seed) throw UsageError("--seed: required for mtprobe (or run.seed)");
    const double dirichlet = cfg.run.mt_dirichlet > 0.0 ? cfg.run.mt_dirichlet : 8.0 * std::numbers::pi;
    const MtProbe m = mt_probe(pb, *a.samples, *seed, dirichlet, cfg.run.mt_kmax);
    rep["samples"] = m.samples;
    rep["seed"] = m.seed;
    rep["dirichlet"] = m.dirichlet;
    rep["kmax"] = m.kmax;
    rep["alpha_bar"] = pb.alpha_bar;
    rep["d5_min"] = m.d5_min;
    rep["d5_max"] = m.d5_max;
    rep["d5_mean"] = m.d5_mean;
    rep["d5_argmin"] = m.d5_argmin;
    rep["d3_max"] = m.d3_max;
    rep["saturated"] = m.saturated;
    return kExitOk;
}

void emit(const json& rep, const std::string& out, std::ostream& os) {
    const std::string text = rep.dump(2) + "\n";
    if (out.empty()) {
        os << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw UsageError("--out: cannot write '" + out + "'");
    f << text;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mean field equation experiments on conformal tori"};
    app.require_subcommand(1);
    Args a;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", a.config, "JSON experiment config")->required();
        sub->add_option("--out", a.out, "report path (default stdout)");
        sub->add_option("--dump-fields", a.dump_dir, "directory for CSV field snapshots");
    };
    auto* green = app.add_subcommand("green", "Green function with pole at a point");
    common(green);
    green->add_option("--point", a.point, "X,Y")->required();
    auto* solve = app.add_subcommand("solve", "minimize J_rho");
    common(solve);
    solve->add_option("--rho", a.rho);
    solve->add_option("--seed", a.seed);
    auto* cont = app.add_subcommand("continue", "continuation rho_k = rho_bar (1 - 2^-k)");
    common(cont);
    cont->add_option("--steps", a.steps);
    auto* thr = app.add_subcommand("threshold", "threshold Lambda and existence verdict");
    common(thr);
    thr->add_option("--margin", a.margin);
    thr->add_option("--steps", a.steps, "continuation steps for the inf estimate");
    auto* tfn = app.add_subcommand("testfn", "test-function energy at rho_bar");
    common(tfn);
    tfn->add_option("--eps", a.eps)->required();
    tfn->add_option("--point", a.point, "X,Y (default: threshold argmax)");
    auto* mtp = app.add_subcommand("mtprobe", "Moser-Trudinger deficit on random fields");
    common(mtp);
    mtp->add_option("--samples", a.samples)->required();
    mtp->add_option("--seed", a.seed);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        const Experiment ex = load_experiment(a.config);
        const ExperimentConfig& cfg = ex.config;
        const Problem& pb = ex.problem;
        json rep;
        rep["schema_version"] = kSchemaVersion;
        rep["command"] = cmd;
        rep["config_digest"] = cfg.digest;
        int code = kExitOk;
        if (cmd == "green") code = cmd_green(cfg, pb, a, rep);
        else if (cmd == "solve") code = cmd_solve(cfg, pb, a, rep);
        else if (cmd == "continue") code = cmd_continue(cfg, pb, a, rep);
        else if (cmd == "threshold") code = cmd_threshold(cfg, pb, a, rep);
        else if (cmd == "testfn") code = cmd_testfn(cfg, pb, a, rep);
        else code = cmd_mtprobe(cfg, pb, a, rep);
        rep["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        emit(rep, a.out, out);
        if (code == kExitNumerical) err << cmd << ": numerical failure (see status in report)\n";
        return code;
    } catch (const ConfigError& e) {
        for (const auto& m : e.errors()) err << "config error: " << m << "\n";
        return kExitConfig;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace smf::cli
