#include "rflow/scenario.hpp"

#include "rflow/errors.hpp"
#include "rflow/io.hpp"
#include "rflow/residuals.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace rflow {

namespace {

using nlohmann::json;

// Typed access to the flat key space with bookkeeping of which keys were consumed.
class ConfigReader {
public:
    explicit ConfigReader(const json& doc) : doc_(doc) {
        if (!doc_.is_object()) {
            throw ConfigError("<root>", "scenario must be a JSON object");
        }
    }

    [[nodiscard]] bool has(const std::string& key) {
        used_.insert(key);
        return doc_.contains(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_number()) {
            throw ConfigError(key, "expected a number");
        }
        const double d = v.get<double>();
        if (!std::isfinite(d)) {
            throw ConfigError(key, "must be finite");
        }
        return d;
    }

    int integer(const std::string& key, int fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_number_integer()) {
            throw ConfigError(key, "expected an integer");
        }
        return v.get<int>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_boolean()) {
            throw ConfigError(key, "expected true or false");
        }
        return v.get<bool>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) {
            return fallback;
        }
        const json& v = doc_.at(key);
        if (!v.is_string()) {
            throw ConfigError(key, "expected a string");
        }
        return v.get<std::string>();
    }

    Vec3 vec3(const std::string& key, const Vec3& fallback) {
        if (!has(key)) {
            return fallback;
        }
        const std::vector<double> v = numbers(key);
        if (v.size() != 3) {
            throw ConfigError(key, "expected an array of 3 numbers");
        }
        return {v[0], v[1], v[2]};
    }

    std::vector<double> numbers(const std::string& key) {
        used_.insert(key);
        const json& v = doc_.at(key);
        if (v.is_number()) {
            return {v.get<double>()};
        }
        if (!v.is_array()) {
            throw ConfigError(key, "expected a number or an array of numbers");
        }
        std::vector<double> out;
        for (const json& e : v) {
            if (!e.is_number()) {
                throw ConfigError(key, "array entries must be numbers");
            }
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::string> strings(const std::string& key) {
        used_.insert(key);
        const json& v = doc_.at(key);
        if (v.is_string()) {
            return {v.get<std::string>()};
        }
        std::vector<std::string> out;
        if (!v.is_array()) {
            throw ConfigError(key, "expected a string or an array of strings");
        }
        for (const json& e : v) {
            if (!e.is_string()) {
                throw ConfigError(key, "array entries must be strings");
            }
            out.push_back(e.get<std::string>());
        }
        return out;
    }

    /// Keys present in the document starting with `prefix`.
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
        std::vector<std::string> out;
        for (const auto& [k, v] : doc_.items()) {
            if (k.rfind(prefix, 0) == 0) {
                out.push_back(k);
            }
        }
        return out;
    }

    void reject_unused() const {
        for (const auto& [k, v] : doc_.items()) {
            if (used_.count(k) == 0) {
                throw ConfigError(k, "unknown or unused key for this scenario kind");
            }
        }
    }

private:
    const json& doc_;
    std::set<std::string> used_;
};

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) {
        throw ConfigError(key, what);
    }
}

TangentConvention parse_convention(ConfigReader& r, const std::string& key,
                                   TangentConvention fallback) {
    const std::string v = r.text(key, fallback == TangentConvention::Corrected ? "corrected"
                                                                               : "as-printed");
    if (v == "corrected") {
        return TangentConvention::Corrected;
    }
    if (v == "as-printed") {
        return TangentConvention::AsPrinted;
    }
    throw ConfigError(key, "expected 'corrected' or 'as-printed'");
}

void parse_riccati(ConfigReader& r, Scenario& s) {
    s.state0.a = r.number("riccati.a0", 0.0);
    s.state0.b = r.number("riccati.b0", 0.0);
    s.gamma = r.number("riccati.gamma", 1.0);
    s.t0 = r.number("riccati.t0", 0.0);
    s.t1 = r.number("riccati.t1", 1.0);
    s.dt = r.number("riccati.dt", 1e-3);
    s.escape_bound = r.number("riccati.escape_bound", 1e12);
    s.w_vector = r.vec3("w.vector", {0.0, 0.0, 0.0});
    s.w_decay = r.number("w.decay", 0.0);
    require(s.t1 > s.t0, "riccati.t1", "must exceed riccati.t0");
    require(s.dt > 0.0, "riccati.dt", "must be positive");
    require(s.escape_bound > 0.0, "riccati.escape_bound", "must be positive");
}

void parse_closed_form(ConfigReader& r, Scenario& s) {
    const std::string c = r.text("closed_form.case", "tangent");
    if (c == "tangent") {
        s.closed_case = ClosedFormCase::Tangent;
    } else if (c == "circle") {
        s.closed_case = ClosedFormCase::Circle;
    } else {
        throw ConfigError("closed_form.case", "expected 'tangent' or 'circle'");
    }
    s.alpha = r.number("closed_form.alpha", 1.0);
    s.wbar = r.number("closed_form.wbar", 1.0);
    s.decay = r.number("closed_form.decay", 0.0);
    s.phase0 = r.number("closed_form.phase0", 0.0);
    s.convention = parse_convention(r, "closed_form.convention", TangentConvention::Corrected);
    s.gamma = r.number("closed_form.gamma", 1.0);
    s.t0 = r.number("closed_form.t0", 0.0);
    s.t1 = r.number("closed_form.t1", 1.0);
    s.samples = r.integer("closed_form.samples", 101);
    s.check_rk4 = r.boolean("closed_form.check_rk4", false);
    s.dt = r.number("closed_form.dt", 1e-4);
    require(s.closed_case != ClosedFormCase::Tangent || s.alpha != 0.0, "closed_form.alpha",
            "must be non-zero");
    require(s.t0 >= 0.0, "closed_form.t0", "must be non-negative");
    require(s.t1 > s.t0, "closed_form.t1", "must exceed closed_form.t0");
    require(s.samples >= 2, "closed_form.samples", "must be at least 2");
    require(s.dt > 0.0, "closed_form.dt", "must be positive");
    if (s.check_rk4 && s.tolerances.count("closed_form") == 0) {
        s.tolerances["closed_form"] = 1e-6;
    }
}

BeltramiABC parse_abc(ConfigReader& r, double beta) {
    BeltramiABC abc;
    abc.A = r.number("abc.A", 1.0);
    abc.B = r.number("abc.B", 1.0);
    abc.C = r.number("abc.C", 1.0);
    abc.kappa = r.number("abc.kappa", 1.0 / beta);
    require(abc.kappa > 0.0, "abc.kappa", "must be positive");
    require(std::fabs(abc.kappa * beta - 1.0) <= 1e-12, "abc.kappa",
            "helical binding needs abc.kappa * trkal.beta = 1");
    return abc;
}

void parse_flow(ConfigReader& r, Scenario& s) {
    FlowSolution& f = s.flow;
    f.nu = r.number("physics.nu", 0.1);
    f.rho = r.number("physics.rho", 1.0);
    require(f.nu > 0.0, "physics.nu", "must be positive");
    require(f.rho > 0.0, "physics.rho", "must be positive");
    f.potential.constant = r.number("potential.constant", 0.0);
    f.potential.linear = r.vec3("potential.linear", {});
    f.potential.quadratic = r.vec3("potential.quadratic", {});

    const bool want_solenoidal =
        s.kind == ScenarioKind::Trkal || r.boolean("assembled.solenoidal", false);
    if (want_solenoidal) {
        const double beta = r.number("trkal.beta", 1.0);
        require(beta > 0.0, "trkal.beta", "must be positive");
        f.solenoidal = SolenoidalPart{beta, VorticityFieldSpec{{parse_abc(r, beta)}, f.nu}};
    }
    const std::string closure = r.text("trkal.pressure", "bernoulli");
    if (closure == "bernoulli") {
        f.closure = PressureClosure::Bernoulli;
    } else if (closure == "zero") {
        f.closure = PressureClosure::Zero;
    } else {
        throw ConfigError("trkal.pressure", "expected 'bernoulli' or 'zero'");
    }

    if (s.kind == ScenarioKind::Assembled) {
        IrrotationalPart part;
        part.gamma.gamma0 = r.number("assembled.gamma0", 1.0);
        part.gamma.k = r.number("assembled.k", 2.0);
        part.gamma.alpha = r.number("assembled.alpha", 1.0);
        require(part.gamma.alpha != 0.0, "assembled.alpha", "must be non-zero");
        require(part.gamma.k != 0.0, "assembled.k", "must be non-zero");
        require(part.gamma.gamma0 != 0.0, "assembled.gamma0", "must be non-zero");
        part.wy_mode = HelmholtzPlaneMode::shear_y_of_z(r.number("assembled.wy_k", 1.0),
                                                        r.number("assembled.wy_amplitude", 1.0));
        const std::string src = r.text("assembled.source", "constraint-chain");
        if (src == "constraint-chain") {
            part.source = RiccatiSource::ConstraintChain;
        } else if (src == "tangent-evolution") {
            part.source = RiccatiSource::TangentEvolution;
        } else {
            throw ConfigError("assembled.source", "expected 'constraint-chain' or 'tangent-evolution'");
        }
        part.convention = parse_convention(r, "assembled.convention",
                                           part.source == RiccatiSource::ConstraintChain
                                               ? TangentConvention::AsPrinted
                                               : TangentConvention::Corrected);
        f.irrotational = part;
    }

    s.grid.origin = r.vec3("grid.origin", {-1.0, -1.0, -1.0});
    s.grid.h = r.number("grid.h", 0.05);
    require(s.grid.h > 0.0, "grid.h", "must be positive");
    if (r.has("grid.dims")) {
        const std::vector<double> d = r.numbers("grid.dims");
        require(d.size() == 3, "grid.dims", "expected an array of 3 integers");
        for (std::size_t i = 0; i < 3; ++i) {
            require(d[i] >= 1.0 && d[i] == std::floor(d[i]) && d[i] < 1e5, "grid.dims",
                    "entries must be positive integers");
            s.grid.dims[i] = static_cast<int>(d[i]);
        }
    } else {
        s.grid.dims = {41, 41, 41};
    }

    if (r.has("verify.times")) {
        s.times = r.numbers("verify.times");
        require(!s.times.empty(), "verify.times", "must not be empty");
    }
    s.dt_fd = r.number("verify.dt_fd", 0.0);
    require(s.dt_fd >= 0.0, "verify.dt_fd", "must be non-negative (0 selects the default)");
    for (double t : s.times) {
        require(t >= 0.0, "verify.times", "times must be non-negative");
        const double dt = s.dt_fd > 0.0 ? s.dt_fd : default_time_step(t);
        require(t - dt >= 0.0, "verify.times",
                "each time must be at least verify.dt_fd (central time difference)");
    }
    const int order = r.integer("verify.order", 2);
    require(order == 2 || order == 4, "verify.order", "must be 2 or 4");
    s.order = order == 2 ? FdOrder::Second : FdOrder::Fourth;

    s.levels = r.integer("convergence.levels", 3);
    require(s.levels >= 3 && s.levels <= 6, "convergence.levels", "must be between 3 and 6");
    s.order_min = r.number("convergence.order_min", static_cast<double>(order) - 0.2);
    s.order_max = r.number("convergence.order_max", static_cast<double>(order) + 0.2);
    require(s.order_max > s.order_min, "convergence.order_max", "must exceed convergence.order_min");
    if (r.has("convergence.residuals")) {
        s.convergence_residuals = r.strings("convergence.residuals");
        const std::set<std::string> known{"continuity", "momentum", "heat", "rotation", "curl_free"};
        for (const auto& name : s.convergence_residuals) {
            require(known.count(name) == 1, "convergence.residuals", "unknown residual '" + name + "'");
        }
    }

    try {
        f.validate();
    } catch (const PreconditionError& e) {
        throw ConfigError("trkal.beta", e.what());
    }

    if (s.kind == ScenarioKind::Trkal) {
        s.tolerances.try_emplace("continuity", 1e-6);
        s.tolerances.try_emplace("momentum", 5e-4);
        s.tolerances.try_emplace("heat", 5e-4);
    }
}

std::string kind_name(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::RiccatiTrajectory: return "riccati-trajectory";
    case ScenarioKind::ClosedForm: return "closed-form";
    case ScenarioKind::Trkal: return "trkal";
    case ScenarioKind::Assembled: return "assembled";
    }
    return "?";
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    ConfigReader r(doc);
    Scenario s;
    const std::string kind = r.text("kind", "");
    if (kind == "riccati-trajectory") {
        s.kind = ScenarioKind::RiccatiTrajectory;
    } else if (kind == "closed-form") {
        s.kind = ScenarioKind::ClosedForm;
    } else if (kind == "trkal") {
        s.kind = ScenarioKind::Trkal;
    } else if (kind == "assembled") {
        s.kind = ScenarioKind::Assembled;
    } else {
        throw ConfigError("kind", "expected riccati-trajectory, closed-form, trkal or assembled");
    }

    for (const std::string& key : r.keys_with_prefix("tolerance.")) {
        const double v = r.number(key, 0.0);
        require(v > 0.0, key, "tolerances must be positive");
        s.tolerances[key.substr(std::string("tolerance.").size())] = v;
    }
    s.write_csv = r.boolean("output.csv", true);
    s.write_vtk = r.boolean("output.vtk", true);
    s.write_timeseries = r.boolean("output.timeseries", true);

    switch (s.kind) {
    case ScenarioKind::RiccatiTrajectory: parse_riccati(r, s); break;
    case ScenarioKind::ClosedForm: parse_closed_form(r, s); break;
    case ScenarioKind::Trkal:
    case ScenarioKind::Assembled: parse_flow(r, s); break;
    }
    r.reject_unused();

    static const std::set<std::string> gates{"continuity", "momentum",        "heat",
                                             "rotation",   "curl_free",       "radius_identity",
                                             "closed_form"};
    for (const auto& [name, v] : s.tolerances) {
        require(gates.count(name) == 1, "tolerance." + name, "unknown gate");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("--config", "cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void check_command(const Scenario& s, Command cmd) {
    const bool flow = s.kind == ScenarioKind::Trkal || s.kind == ScenarioKind::Assembled;
    switch (cmd) {
    case Command::Simulate:
        require(s.kind == ScenarioKind::RiccatiTrajectory, "kind",
                "simulate needs kind riccati-trajectory, got " + kind_name(s.kind));
        return;
    case Command::ClosedForm:
        require(s.kind == ScenarioKind::ClosedForm, "kind",
                "closed-form needs kind closed-form, got " + kind_name(s.kind));
        return;
    case Command::Verify:
    case Command::Convergence:
        require(flow, "kind", "verify/convergence need kind trkal or assembled");
        try {
            require_stencil_fit(s.grid, s.order);
        } catch (const GridError& e) {
            throw ConfigError("grid.dims", e.what());
        }
        return;
    case Command::Export:
        require(flow, "kind", "export needs kind trkal or assembled");
        return;
    }
}

namespace {

class Summary {
public:
    void add(const std::string& key, double v) { items_.emplace_back(key, format_double(v)); }
    void add(const std::string& key, std::string v) { items_.emplace_back(key, std::move(v)); }
    void add(const std::string& key, std::size_t v) { items_.emplace_back(key, std::to_string(v)); }

    std::vector<std::pair<std::string, std::string>> take() { return std::move(items_); }

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

struct Gatekeeper {
    const std::map<std::string, double>& tolerances;
    double scale;
    Summary& summary;
    bool failed = false;

    void check(const std::string& gate, const std::string& label, double value) {
        const auto it = tolerances.find(gate);
        if (it == tolerances.end()) {
            return;
        }
        const double limit = it->second * scale;
        const bool ok = value <= limit; // false for NaN
        summary.add("gate." + label, std::string(ok ? "pass" : "fail"));
        failed = failed || !ok;
    }
};

std::filesystem::path write_text(const std::filesystem::path& path,
                                 const std::function<void(std::ostream&)>& body) {
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot write " + path.string());
    }
    body(os);
    if (!os) {
        throw Error("write failed for " + path.string());
    }
    return path;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / (n - 1);
    }
    return out;
}

// integral_0^t wbar exp(-decay s) ds
double decaying_integral(double wbar, double decay, double t) {
    return decay == 0.0 ? wbar * t : -wbar * std::expm1(-decay * t) / decay;
}

void run_simulate(const Scenario& s, const RunOptions& opt, RunResult& res, Summary& sum,
                  Gatekeeper& gate) {
    const VorticityHistory w = [v = s.w_vector, d = s.w_decay](double t) {
        return v * std::exp(-d * t);
    };
    const IntegrationResult ir = integrate(s.state0, w, s.t0, s.t1, {s.dt, s.escape_bound});
    const Trajectory& tr = ir.trajectory;
    sum.add("status", std::string(ir.completed() ? "completed" : "escaped"));
    sum.add("samples", tr.size());
    if (ir.escape_time) {
        sum.add("escape_time", *ir.escape_time);
    }
    sum.add("final_t", tr.times.back());
    sum.add("final_a", tr.states.back().a);
    sum.add("final_b", tr.states.back().b);

    double drift = 0.0;
    const auto rows = timeseries_from_trajectory(tr, s.gamma);
    for (const auto& row : rows) {
        drift = std::fmax(drift, std::fabs(norm(row.velocity) - std::fabs(s.gamma)));
    }
    sum.add("norm_drift", s.gamma != 0.0 ? drift / std::fabs(s.gamma) : drift);
    if (tr.size() >= 3) {
        const double r = radius_identity_residual(tr, w);
        sum.add("radius_identity_residual", r);
        gate.check("radius_identity", "radius_identity", r);
    }
    if (s.write_timeseries) {
        res.artifacts.push_back(write_text(opt.out_dir / "timeseries.csv", [&](std::ostream& os) {
            write_timeseries_csv(os, rows);
        }));
    }
}

void run_closed_form(const Scenario& s, const RunOptions& opt, RunResult& res, Summary& sum,
                     Gatekeeper& gate) {
    std::function<RiccatiState(double)> solution;
    VorticityHistory w;
    if (s.closed_case == ClosedFormCase::Tangent) {
        solution = [&s](double t) {
            const double a = tangent_solution(s.alpha, decaying_integral(s.wbar, s.decay, t),
                                              s.phase0, s.convention);
            return RiccatiState{a, s.alpha * a};
        };
        w = [&s](double t) {
            const double wy = s.wbar * std::exp(-s.decay * t);
            return Vec3{-s.alpha * wy, wy, 0.0};
        };
    } else {
        solution = [&s](double t) {
            return circle_solution(decaying_integral(s.wbar, s.decay, t), s.phase0);
        };
        w = [&s](double t) { return Vec3{0.0, 0.0, s.wbar * std::exp(-s.decay * t)}; };
    }

    const std::vector<double> times = linspace(s.t0, s.t1, s.samples);
    const auto rows = timeseries_from_closed_form(solution, times, s.gamma);
    sum.add("case", std::string(s.closed_case == ClosedFormCase::Tangent ? "tangent" : "circle"));
    sum.add("final_t", rows.back().t);
    sum.add("final_a", rows.back().state.a);
    sum.add("final_U", rows.back().velocity.x);

    if (s.closed_case == ClosedFormCase::Tangent && s.decay > 0.0) {
        // Finite total integral wbar / decay gives a plateau of U.
        const double a_inf = tangent_solution(s.alpha, s.wbar / s.decay, s.phase0, s.convention);
        const PotentialVelocity u_inf = stereographic_velocity({a_inf, s.alpha * a_inf}, s.gamma);
        sum.add("limit_a", a_inf);
        sum.add("limit_U", u_inf.x);
    }

    if (s.check_rk4) {
        double worst = 0.0;
        RiccatiState state = solution(times.front());
        for (std::size_t i = 1; i < times.size(); ++i) {
            const IntegrationResult ir =
                integrate(state, w, times[i - 1], times[i], {s.dt, 1e12});
            if (!ir.completed()) {
                worst = std::numeric_limits<double>::infinity();
                break;
            }
            state = ir.trajectory.states.back();
            const RiccatiState ref = rows[i].state;
            worst = std::fmax(worst, std::fmax(std::fabs(state.a - ref.a), std::fabs(state.b - ref.b)));
        }
        sum.add("rk4_max_error", worst);
        gate.check("closed_form", "closed_form", worst);
    }
    if (s.write_timeseries) {
        res.artifacts.push_back(write_text(opt.out_dir / "closed_form.csv", [&](std::ostream& os) {
            write_timeseries_csv(os, rows);
        }));
    }
}

void export_fields(const Scenario& s, const RunOptions& opt, RunResult& res, Summary& sum,
                   std::size_t i, double t) {
    const SampledFields fields = sample_grid(s.flow, s.grid, t);
    const std::string tag = "t" + std::to_string(i);
    sum.add(tag + ".points", fields.velocity.size());
    sum.add(tag + ".inadmissible_points", fields.failures.size());
    if (s.write_csv) {
        res.artifacts.push_back(write_text(opt.out_dir / ("fields_" + tag + ".csv"),
                                           [&](std::ostream& os) { write_fields_csv(os, fields); }));
    }
    if (s.write_vtk) {
        res.artifacts.push_back(write_text(opt.out_dir / ("fields_" + tag + ".vtk"), [&](std::ostream& os) {
            write_fields_vtk(os, fields, kind_name(s.kind) + " t=" + format_double(t));
        }));
    }
}

void run_verify(const Scenario& s, const RunOptions& opt, RunResult& res, Summary& sum,
                Gatekeeper& gate) {
    const FlowFields fields = fields_of(s.flow);
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const double t = s.times[i];
        const ResidualReport rep = verify(fields, s.grid, t, {s.order, s.dt_fd});
        const std::string tag = "t" + std::to_string(i);
        sum.add(tag + ".time", t);
        sum.add(tag + ".dt_fd", rep.dt_fd);
        sum.add(tag + ".continuity.max", rep.continuity.max);
        sum.add(tag + ".continuity.l2", rep.continuity.l2);
        const std::pair<const char*, const ComponentNorms*> groups[] = {
            {"momentum", &rep.momentum}, {"heat", &rep.heat},
            {"rotation", &rep.rotation}, {"curl_free", &rep.curl_free}};
        for (const auto& [name, norms] : groups) {
            const char* axes[] = {"x", "y", "z"};
            for (std::size_t c = 0; c < 3; ++c) {
                sum.add(tag + "." + name + "." + axes[c] + ".max", (*norms)[c].max);
                sum.add(tag + "." + name + "." + axes[c] + ".l2", (*norms)[c].l2);
            }
        }
        gate.check("continuity", tag + ".continuity", rep.continuity.max);
        gate.check("momentum", tag + ".momentum", max_of(rep.momentum));
        gate.check("heat", tag + ".heat", max_of(rep.heat));
        gate.check("rotation", tag + ".rotation", max_of(rep.rotation));
        gate.check("curl_free", tag + ".curl_free", max_of(rep.curl_free));
        if (s.write_csv || s.write_vtk) {
            export_fields(s, opt, res, sum, i, t);
        }
    }
}

void run_convergence(const Scenario& s, Summary& sum, bool& failed) {
    const FlowFields fields = fields_of(s.flow);
    std::vector<Grid> grids{s.grid};
    for (int l = 1; l < s.levels; ++l) {
        grids.push_back(grids.back().refined());
    }
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        const auto study = convergence_study(fields, grids, s.times[i], {s.order, s.dt_fd});
        const std::string tag = "t" + std::to_string(i);
        sum.add(tag + ".time", s.times[i]);
        for (const auto& series : study) {
            const std::string key = tag + "." + series.residual;
            for (std::size_t l = 0; l < series.h.size(); ++l) {
                sum.add(key + ".h" + std::to_string(l), series.h[l]);
                sum.add(key + ".max" + std::to_string(l), series.max_norm[l]);
            }
            sum.add(key + ".order", series.exact ? std::string("exact") : format_double(series.order));
            const bool gated = std::find(s.convergence_residuals.begin(), s.convergence_residuals.end(),
                                         series.residual) != s.convergence_residuals.end();
            if (gated) {
                const bool ok = series.exact ||
                                (series.order >= s.order_min && series.order <= s.order_max);
                sum.add("gate." + key + ".order", std::string(ok ? "pass" : "fail"));
                failed = failed || !ok;
            }
        }
    }
}

} // namespace

RunResult run_scenario(const Scenario& s, Command cmd, const RunOptions& opt) {
    check_command(s, cmd);
    std::filesystem::create_directories(opt.out_dir);
    RunResult res;
    Summary sum;
    sum.add("kind", kind_name(s.kind));
    Gatekeeper gate{s.tolerances, opt.tolerance_scale, sum};

    switch (cmd) {
    case Command::Simulate: run_simulate(s, opt, res, sum, gate); break;
    case Command::ClosedForm: run_closed_form(s, opt, res, sum, gate); break;
    case Command::Verify: run_verify(s, opt, res, sum, gate); break;
    case Command::Convergence: run_convergence(s, sum, gate.failed); break;
    case Command::Export:
        for (std::size_t i = 0; i < s.times.size(); ++i) {
            export_fields(s, opt, res, sum, i, s.times[i]);
        }
        break;
    }
    sum.add("result", std::string(gate.failed ? "fail" : "pass"));
    res.exit_code = gate.failed ? 1 : 0;
    res.summary = sum.take();

    res.artifacts.push_back(write_text(opt.out_dir / "summary.txt", [&](std::ostream& os) {
        for (const auto& [k, v] : res.summary) {
            os << k << '=' << v << '\n';
        }
    }));
    return res;
}

int run_command(Command cmd, const std::filesystem::path& config, const RunOptions& options,
                std::ostream& out, std::ostream& err) {
    if (!(options.tolerance_scale > 0.0) || !std::isfinite(options.tolerance_scale)) {
        err << "error: --tolerance-scale must be positive\n";
        return 2;
    }
    Scenario s;
    try {
        s = load_scenario(config);
        check_command(s, cmd);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    }
    try {
        const RunResult res = run_scenario(s, cmd, options);
        for (const auto& [k, v] : res.summary) {
            out << k << '=' << v << '\n';
        }
        return res.exit_code;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace rflow
