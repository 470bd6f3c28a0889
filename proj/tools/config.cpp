#include "config.hpp"

#include "smf/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace smf::cli {

using nlohmann::json;

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string s;
    for (const auto& e : errors) s += (s.empty() ? "" : "\n") + e;
    return s;
}

// Collects errors against key paths instead of stopping at the first one.
class Reader {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
        if (!j.is_object()) {
            fail(path, "must be an object");
            return false;
        }
        for (const auto& [key, _] : j.items())
            if (!allowed.count(key)) fail(path + "." + key, "unknown key");
        return true;
    }

    std::optional<double> number(const json& j, const std::string& key, const std::string& path, bool required) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "missing");
            return std::nullopt;
        }
        const json& v = j.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "must be a number");
            return std::nullopt;
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            fail(path + "." + key, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<long long> integer(const json& j, const std::string& key, const std::string& path,
                                     bool required) {
        if (!j.contains(key)) {
            if (required) fail(path + "." + key, "missing");
            return std::nullopt;
        }
        const json& v = j.at(key);
        if (!v.is_number_integer()) {
            fail(path + "." + key, "must be an integer");
            return std::nullopt;
        }
        return v.get<long long>();
    }

    std::optional<bool> boolean(const json& j, const std::string& key, const std::string& path) {
        if (!j.contains(key)) return std::nullopt;
        if (!j.at(key).is_boolean()) {
            fail(path + "." + key, "must be true or false");
            return std::nullopt;
        }
        return j.at(key).get<bool>();
    }

    std::optional<Point> point(const json& j, const std::string& key, const std::string& path) {
        if (!j.contains(key)) return std::nullopt;
        const json& v = j.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            fail(path + "." + key, "must be [x, y]");
            return std::nullopt;
        }
        return Point{v[0].get<double>(), v[1].get<double>()};
    }
};

void parse_psi(Reader& r, const json& j, PsiSpec& psi) {
    const std::string path = "surface.psi";
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        r.fail(path + ".kind", "must be one of flat, gaussian_bump, cosine_mix");
        return;
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "flat") {
        r.object(j, path, {"kind"});
        psi = PsiSpec::flat();
    } else if (kind == "gaussian_bump") {
        r.object(j, path, {"kind", "amp", "sigma", "center"});
        const auto amp = r.number(j, "amp", path, true);
        const auto sigma = r.number(j, "sigma", path, true);
        const auto center = r.point(j, "center", path);
        if (sigma && !(*sigma > 0.0)) r.fail(path + ".sigma", "must be positive");
        psi = PsiSpec::gaussian_bump(amp.value_or(0.0), sigma.value_or(0.1), center.value_or(Point{0.5, 0.5}));
    } else if (kind == "cosine_mix") {
        r.object(j, path, {"kind", "modes"});
        std::vector<PsiSpec::Mode> modes;
        if (!j.contains("modes") || !j.at("modes").is_array()) {
            r.fail(path + ".modes", "must be a list");
        } else {
            for (std::size_t i = 0; i < j.at("modes").size(); ++i) {
                const json& m = j.at("modes")[i];
                const std::string mp = path + ".modes[" + std::to_string(i) + "]";
                if (!r.object(m, mp, {"kx", "ky", "amp", "phase"})) continue;
                PsiSpec::Mode mode;
                mode.kx = static_cast<int>(r.integer(m, "kx", mp, true).value_or(0));
                mode.ky = static_cast<int>(r.integer(m, "ky", mp, true).value_or(0));
                mode.amp = r.number(m, "amp", mp, true).value_or(0.0);
                mode.phase = r.number(m, "phase", mp, false).value_or(0.0);
                modes.push_back(mode);
            }
        }
        psi = PsiSpec::cosine_mix(std::move(modes));
    } else {
        r.fail(path + ".kind", "unknown kind '" + kind + "'");
    }
}

void parse_h(Reader& r, const json& j, HSpec& h) {
    if (j.is_number()) {
        h.constant = j.get<double>();
        h.terms.clear();
        return;
    }
    if (!r.object(j, "h", {"constant", "terms"})) return;
    h.constant = r.number(j, "constant", "h", false).value_or(0.0);
    h.terms.clear();
    if (!j.contains("terms")) return;
    if (!j.at("terms").is_array()) {
        r.fail("h.terms", "must be a list");
        return;
    }
    for (std::size_t i = 0; i < j.at("terms").size(); ++i) {
        const json& t = j.at("terms")[i];
        const std::string tp = "h.terms[" + std::to_string(i) + "]";
        if (!t.is_object() || !t.contains("type") || !t.at("type").is_string()) {
            r.fail(tp + ".type", "must be cosine or gaussian");
            continue;
        }
        const std::string type = t.at("type").get<std::string>();
        HTerm term;
        if (type == "cosine") {
            r.object(t, tp, {"type", "kx", "ky", "amp", "phase"});
            term.kind = HTerm::Kind::Cosine;
            term.kx = static_cast<int>(r.integer(t, "kx", tp, true).value_or(0));
            term.ky = static_cast<int>(r.integer(t, "ky", tp, true).value_or(0));
            term.amp = r.number(t, "amp", tp, true).value_or(0.0);
            term.phase = r.number(t, "phase", tp, false).value_or(0.0);
        } else if (type == "gaussian") {
            r.object(t, tp, {"type", "amp", "sigma", "center"});
            term.kind = HTerm::Kind::Gaussian;
            term.amp = r.number(t, "amp", tp, true).value_or(0.0);
            term.sigma = r.number(t, "sigma", tp, true).value_or(0.1);
            term.center = r.point(t, "center", tp).value_or(Point{0.5, 0.5});
            if (!(term.sigma > 0.0)) r.fail(tp + ".sigma", "must be positive");
        } else {
            r.fail(tp + ".type", "unknown type '" + type + "'");
            continue;
        }
        h.terms.push_back(term);
    }
}

void parse_run(Reader& r, const json& j, RunSpec& run) {
    if (!r.object(j, "run",
                  {"rho", "steps", "seed", "random_start", "lambda_ceiling", "margin", "disk_radius", "mt_dirichlet",
                   "mt_kmax", "solver"}))
        return;
    run.rho = r.number(j, "rho", "run", false);
    if (auto k = r.integer(j, "steps", "run", false)) {
        if (*k < 1 || *k > 60) r.fail("run.steps", "must be in [1, 60]");
        run.steps = static_cast<int>(*k);
    }
    if (auto s = r.integer(j, "seed", "run", false)) {
        if (*s < 0) r.fail("run.seed", "must be non-negative");
        run.seed = static_cast<std::uint64_t>(*s);
    }
    run.random_start = r.boolean(j, "random_start", "run").value_or(false);
    run.lambda_ceiling = r.number(j, "lambda_ceiling", "run", false).value_or(kBlowupCeiling);
    run.margin = r.number(j, "margin", "run", false).value_or(kDefaultMargin);
    run.disk_radius = r.number(j, "disk_radius", "run", false).value_or(0.4);
    run.mt_dirichlet = r.number(j, "mt_dirichlet", "run", false).value_or(0.0);
    run.mt_kmax = static_cast<int>(r.integer(j, "mt_kmax", "run", false).value_or(4));
    if (run.margin < 0.0) r.fail("run.margin", "must be non-negative");
    if (!(run.disk_radius > 0.0 && run.disk_radius <= 0.45)) r.fail("run.disk_radius", "must be in (0, 0.45]");
    if (run.mt_dirichlet < 0.0) r.fail("run.mt_dirichlet", "must be non-negative");
    if (run.mt_kmax < 1) r.fail("run.mt_kmax", "must be positive");
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (r.object(s, "run.solver", {"max_iters", "gradient_tol", "residual_tol", "precondition"})) {
            if (auto v = r.integer(s, "max_iters", "run.solver", false)) {
                if (*v < 0) r.fail("run.solver.max_iters", "must be non-negative");
                run.solver.max_iters = static_cast<int>(*v);
            }
            if (auto v = r.number(s, "gradient_tol", "run.solver", false)) {
                if (!(*v > 0.0)) r.fail("run.solver.gradient_tol", "must be positive");
                run.solver.gradient_tol = *v;
            }
            if (auto v = r.number(s, "residual_tol", "run.solver", false)) {
                if (!(*v > 0.0)) r.fail("run.solver.residual_tol", "must be positive");
                run.solver.residual_tol = *v;
            }
            if (auto v = r.boolean(s, "precondition", "run.solver")) run.solver.precondition = *v;
        }
    }
    if (run.random_start && !run.seed) r.fail("run.seed", "required when run.random_start is true");
}

double periodic_gaussian(Point p, Point c, double sigma) {
    double acc = 0.0;
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            const double dx = p.x - c.x - a, dy = p.y - c.y - b;
            acc += std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
        }
    return acc;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

ScalarField sample_h(const HSpec& h, int n) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    return sample(n, [&](Point p) {
        double v = h.constant;
        for (const auto& t : h.terms) {
            if (t.kind == HTerm::Kind::Cosine)
                v += t.amp * std::cos(kTwoPi * (t.kx * p.x + t.ky * p.y) + t.phase);
            else
                v += t.amp * periodic_gaussian(p, t.center, t.sigma);
        }
        return v;
    });
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

ExperimentConfig parse_collect(const json& j, std::vector<std::string>& errors) {
    Reader r;
    ExperimentConfig cfg;
    cfg.raw = j;
    cfg.digest = fnv1a_hex(j.dump());
    if (!r.object(j, "config", {"surface", "h", "sources", "run"})) {
        errors = r.errors;
        return cfg;
    }

    if (!j.contains("surface")) {
        r.fail("surface", "missing");
    } else if (r.object(j.at("surface"), "surface", {"n", "psi"})) {
        const json& s = j.at("surface");
        if (auto n = r.integer(s, "n", "surface", true)) {
            const bool pow2 = *n > 0 && (*n & (*n - 1)) == 0;
            if (!pow2 || *n < 32 || *n > 4096)
                r.fail("surface.n", "must be a power of two in [32, 4096], got " + std::to_string(*n));
            cfg.n = static_cast<int>(*n);
        }
        if (s.contains("psi")) parse_psi(r, s.at("psi"), cfg.psi);
    }

    if (j.contains("h")) parse_h(r, j.at("h"), cfg.h);

    if (j.contains("sources")) {
        const json& src = j.at("sources");
        if (!src.is_array()) {
            r.fail("sources", "must be a list");
        } else {
            for (std::size_t i = 0; i < src.size(); ++i) {
                const std::string sp = "sources[" + std::to_string(i) + "]";
                if (!r.object(src[i], sp, {"x", "y", "alpha"})) continue;
                const auto x = r.number(src[i], "x", sp, true);
                const auto y = r.number(src[i], "y", sp, true);
                const auto a = r.number(src[i], "alpha", sp, true);
                if (a && !(*a > -1.0)) r.fail(sp + ".alpha", "must exceed -1, got " + std::to_string(*a));
                cfg.sources.push_back({wrap(Point{x.value_or(0.0), y.value_or(0.0)}), a.value_or(0.0)});
            }
        }
    }

    if (j.contains("run")) parse_run(r, j.at("run"), cfg.run);
    errors = r.errors;
    return cfg;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"config: cannot read '" + path + "'"});
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("config: invalid JSON: ") + e.what()});
    }
}

bool valid_n(int n) { return n >= 32 && n <= 4096 && (n & (n - 1)) == 0; }

// Checks that need sampled fields.  With an invalid n they still run on a
// 64-grid so that every error is reported at once.
GridPtr check_problem(const ExperimentConfig& cfg, ScalarField& h, std::vector<std::string>& errors) {
    GridPtr grid;
    const int n = valid_n(cfg.n) ? cfg.n : 64;
    if (valid_n(cfg.n)) {
        try {
            grid = build_surface(cfg.n, cfg.psi);
        } catch (const PreconditionError& e) {
            errors.push_back(std::string("surface.psi: ") + e.what());
        }
    }
    h = sample_h(cfg.h, n);
    if (!h.all_finite()) errors.push_back("h: values are not finite");
    else if (!(h.max() > 0.0)) errors.push_back("h: h must be positive somewhere");
    for (std::size_t i = 0; i < cfg.sources.size(); ++i) {
        const std::size_t ki = nearest_node(n, cfg.sources[i].position);
        for (std::size_t j = 0; j < i; ++j)
            if (nearest_node(n, cfg.sources[j].position) == ki)
                errors.push_back("sources[" + std::to_string(j) + "], sources[" + std::to_string(i) +
                                 "]: positions coincide (distinct points required)");
    }
    return grid;
}


} // namespace

ExperimentConfig parse_config(const json& j) {
    std::vector<std::string> errors;
    ExperimentConfig cfg = parse_collect(j, errors);
    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) { return parse_config(read_json(path)); }

Problem build_problem(const ExperimentConfig& cfg) {
    std::vector<std::string> errors;
    ScalarField h;
    GridPtr grid = check_problem(cfg, h, errors);
    if (!errors.empty()) throw ConfigError(errors);
    try {
        return make_problem(grid, std::move(h), cfg.sources);
    } catch (const PreconditionError& e) {
        throw ConfigError({std::string("config: ") + e.what()});
    }
}

Experiment load_experiment(const std::string& path) {
    const json j = read_json(path);
    std::vector<std::string> errors;
    ExperimentConfig cfg = parse_collect(j, errors);
    ScalarField h;
    GridPtr grid = check_problem(cfg, h, errors);
    if (!errors.empty()) throw ConfigError(errors);
    try {
        Problem pb = make_problem(grid, std::move(h), cfg.sources);
        return {std::move(cfg), std::move(pb)};
    } catch (const PreconditionError& e) {
        throw ConfigError({std::string("config: ") + e.what()});
    }
}

Validated validate_config(const std::string& path) {
    Validated out;
    try {
        out.problem = load_experiment(path).problem;
    } catch (const ConfigError& e) {
        out.errors = e.errors();
    }
    return out;
}

} // namespace smf::cli
