// Command-line front end for the exponential-activation control toolkit:
// curve tabulation, functional construction reports, closed-loop simulation,
// the verification suite, and parameter sweeps. Every file output is paired
// with a manifest that reproduces it bit-identically through `replay`.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "expact/expact.hpp"

using namespace expact;
using io::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_runtime = 3;

// ---------------------------------------------------------------------------
// Case construction shared by every subcommand.

struct CaseOptions {
    double c = 2.0;
    std::string name = "identity";
    double alpha = 0.5;            // power case only
    std::vector<double> weights;   // additive case only
};

// Gain schedule used by the scheduled case and the sweep demo row: a small
// exponent (relay-like, fast) near the origin, growing to linear by |S| = 2.
ScheduledExp demo_schedule() { return ScheduledExp{{{0.0, 0.1}, {1.0, 0.5}, {2.0, 1.0}}}; }

ExponentSpec build_spec(const CaseOptions& opt) {
    if (opt.name == "identity") return IdentityExp{};
    if (opt.name == "sqrt") return SqrtExp{};
    if (opt.name == "reciprocal") return ReciprocalExp{};
    if (opt.name == "power") return PowerExp{opt.alpha};
    if (opt.name == "additive") {
        if (opt.weights.size() != 2)
            throw DomainError(
                "additive case takes exactly two weights (exponent w1*sqrt(|S|) + w2*|S|); "
                "pass --weights w1,w2");
        AdditiveExp add;
        add.terms.push_back({opt.weights[0], SqrtExp{}});
        add.terms.push_back({opt.weights[1], IdentityExp{}});
        return ExponentSpec{add};
    }
    if (opt.name == "scheduled") return ExponentSpec{demo_schedule()};
    throw DomainError("unknown case: " + opt.name +
                      " (expected identity|sqrt|reciprocal|power|additive|scheduled)");
}

void case_to_json(const CaseOptions& opt, ordered_json& out) {
    out["case"] = opt.name;
    out["c"] = opt.c;
    if (opt.name == "power") out["alpha"] = opt.alpha;
    if (opt.name == "additive") out["weights"] = opt.weights;
}

CaseOptions case_from_json(const ordered_json& j) {
    CaseOptions opt;
    if (j.contains("case")) opt.name = j.at("case").get<std::string>();
    if (j.contains("c")) opt.c = j.at("c").get<double>();
    if (j.contains("alpha")) opt.alpha = j.at("alpha").get<double>();
    if (j.contains("weights")) opt.weights = j.at("weights").get<std::vector<double>>();
    return opt;
}

// ---------------------------------------------------------------------------
// Small shared helpers.

std::vector<double> split_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = std::min(s.find(',', pos), s.size());
        const std::string item = s.substr(pos, comma - pos);
        if (!item.empty()) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(item, &used);
            } catch (...) {
                throw DomainError(what + ": bad number: " + item);
            }
            if (used != item.size()) throw DomainError(what + ": bad number: " + item);
            out.push_back(v);
        }
        pos = comma + 1;
        if (comma == s.size()) break;
    }
    return out;
}

std::vector<double> doubles_from_json(const ordered_json& v, const std::string& key) {
    if (v.is_array()) return v.get<std::vector<double>>();
    if (v.is_string())  // accept the flag syntax "1,0.5" too
        return split_doubles(v.get<std::string>(), "config: " + key);
    throw DomainError("config: " + key + " must be an array of numbers or a comma-joined string");
}

ToleranceOverrides parse_tolerances(const std::vector<std::string>& kvs) {
    ToleranceOverrides out;
    for (const auto& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw DomainError("--tolerance expects NAME=VALUE, got: " + kv);
        double value = 0.0;
        try {
            value = std::stod(kv.substr(eq + 1));
        } catch (...) {
            throw DomainError("--tolerance: bad value in: " + kv);
        }
        out[kv.substr(0, eq)] = value;
    }
    return out;
}

bool provided(const CLI::App& sub, const std::string& flag) { return sub.count(flag) > 0; }

// Applies config-file values (same keys as the long flags) to every option
// the user did not pass on the command line; flags win. Unknown keys are
// rejected so typos cannot silently change a run.
using ConfigSetters = std::map<std::string, std::function<void(const ordered_json&)>>;

void apply_config(const CLI::App& sub, const std::string& config_path, const ConfigSetters& set) {
    if (config_path.empty()) return;
    ordered_json cfg;
    try {
        cfg = ordered_json::parse(io::read_file(config_path));
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw DomainError("config: cannot parse " + config_path + ": " + e.what());
    }
    if (!cfg.is_object()) throw DomainError("config: top level must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const auto setter = set.find(it.key());
        if (setter == set.end()) throw DomainError("config: unknown key: " + it.key());
        if (provided(sub, "--" + it.key())) continue;  // flags win
        setter->second(it.value());
    }
}

double require_number(std::optional<double> v, const std::string& flag) {
    if (!v) throw DomainError(flag + " is required (flag or config)");
    return *v;
}

std::string require_text(const std::string& v, const std::string& flag) {
    if (v.empty()) throw DomainError(flag + " is required (flag or config)");
    return v;
}

// Composite trapezoid of a per-sample quantity over a uniformly sampled
// trajectory (same half-weight convention as the cost accumulator).
template <class F>
double trapezoid_over(const Trajectory& traj, F&& sample) {
    const std::size_t n = traj.size();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        sum += w * sample(i);
    }
    return sum * (traj.times.back() - traj.times.front()) / static_cast<double>(n - 1);
}

void write_plot_script(const std::string& script_path, const std::string& body) {
    io::write_file(script_path, body);
}

std::string plot_script_path(const std::string& out) { return out + ".plot.py"; }

// ---------------------------------------------------------------------------
// tabulate: curve CSV over a uniform grid, singular points as empty cells.

struct TabulateParams {
    std::string curve;  // g | G | F | U
    CaseOptions cs;
    std::string baseline = "none";  // none | equilibrium, F curve only
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
    bool plot_script = false;
    std::string out;
};

ordered_json tabulate_params_json(const TabulateParams& p) {
    ordered_json j;
    j["curve"] = p.curve;
    case_to_json(p.cs, j);
    j["baseline"] = p.baseline;
    j["from"] = p.from;
    j["to"] = p.to;
    j["step"] = p.step;
    j["plot-script"] = p.plot_script;
    return j;
}

TabulateParams tabulate_params_from_json(const ordered_json& j, const std::string& out) {
    TabulateParams p;
    p.curve = j.at("curve").get<std::string>();
    p.cs = case_from_json(j);
    if (j.contains("baseline")) p.baseline = j.at("baseline").get<std::string>();
    p.from = j.at("from").get<double>();
    p.to = j.at("to").get<double>();
    p.step = j.at("step").get<double>();
    if (j.contains("plot-script")) p.plot_script = j.at("plot-script").get<bool>();
    p.out = out;
    return p;
}

std::string build_tabulate_csv(const TabulateParams& p) {
    const ControlParams params = validate(p.cs.c);
    const FunctionalForm form = make_form(params, build_spec(p.cs));
    if (!(p.step > 0.0)) throw DomainError("tabulate: --step must be positive");
    if (!(p.to >= p.from)) throw DomainError("tabulate: --to must be >= --from");
    if (p.curve != "g" && p.curve != "G" && p.curve != "F" && p.curve != "U")
        throw DomainError("tabulate: --curve must be one of g|G|F|U");
    if (p.baseline != "none" && p.baseline != "equilibrium")
        throw DomainError("tabulate: --baseline must be none|equilibrium");

    const double base =
        (p.curve == "F" && p.baseline == "equilibrium") ? equilibrium_baseline(form) : 0.0;
    FStateEvaluator f_of(form);

    io::CsvBuilder csv({"x", "value"});
    for (long long k = 0;; ++k) {
        const double x = p.from + static_cast<double>(k) * p.step;
        if (x > p.to + p.step * 1e-9) break;
        std::string cell;
        try {
            double v = 0.0;
            if (p.curve == "g")
                v = conjugate_g(params, x);
            else if (p.curve == "G")
                v = g_cost(params, x);
            else if (p.curve == "F")
                v = f_of(x) - base;
            else
                v = control_u(params, form.spec, x);
            cell = io::format_double(v);
        } catch (const SingularityError&) {
            // singular point: emit the grid row with an empty value cell
        }
        csv.row({io::format_double(x), cell});
    }
    return csv.text();
}

int run_tabulate(const TabulateParams& p) {
    const std::string csv = build_tabulate_csv(p);
    std::vector<std::string> outputs = {p.out};
    if (p.plot_script) outputs.push_back(plot_script_path(p.out));
    io::write_file(p.out, csv);
    if (p.plot_script)
        write_plot_script(plot_script_path(p.out),
                          "#!/usr/bin/env python3\n"
                          "# Plots the paired curve CSV (empty cells are singular points).\n"
                          "import csv\n"
                          "import matplotlib.pyplot as plt\n"
                          "\n"
                          "xs, ys = [], []\n"
                          "with open(\"" + p.out + "\") as f:\n"
                          "    for row in csv.DictReader(f):\n"
                          "        if not row[\"value\"]:\n"
                          "            continue\n"
                          "        xs.append(float(row[\"x\"]))\n"
                          "        ys.append(float(row[\"value\"]))\n"
                          "plt.plot(xs, ys)\n"
                          "plt.xlabel(\"x\")\n"
                          "plt.ylabel(\"" + p.curve + "\")\n"
                          "plt.grid(True)\n"
                          "plt.savefig(\"" + p.out + ".png\", dpi=150)\n");
    io::write_manifest(io::make_manifest("tabulate", tabulate_params_json(p), outputs), p.out);
    std::cout << "wrote " << p.out << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// construct: JSON report of the functional built for a case.

struct ConstructParams {
    CaseOptions cs;
    std::string out;  // empty: print to stdout, no manifest
};

ordered_json construct_params_json(const ConstructParams& p) {
    ordered_json j;
    case_to_json(p.cs, j);
    return j;
}

ConstructParams construct_params_from_json(const ordered_json& j, const std::string& out) {
    ConstructParams p;
    p.cs = case_from_json(j);
    p.out = out;
    return p;
}

std::string build_construct_report(const ConstructParams& p) {
    const ControlParams params = validate(p.cs.c);
    const FunctionalForm form = make_form(params, build_spec(p.cs));
    const FormDescription d = describe_form(form);
    ordered_json report;
    report["case"] = d.case_name;
    report["C"] = params.C;
    report["C1"] = params.C1;
    if (p.cs.name == "power") report["alpha"] = p.cs.alpha;
    if (p.cs.name == "additive") report["weights"] = p.cs.weights;
    report["f_closed_form"] = d.f_text;
    report["g_closed_form"] = d.g_text;
    report["closed_form_valid"] = d.closed_form_valid;
    report["validity_reason"] = d.validity_reason;
    report["special_functions_used"] = d.special_functions_used;
    return report.dump(2) + "\n";
}

int run_construct(const ConstructParams& p) {
    const std::string report = build_construct_report(p);
    if (p.out.empty()) {
        std::cout << report;
        return exit_ok;
    }
    io::write_file(p.out, report);
    io::write_manifest(io::make_manifest("construct", construct_params_json(p), {p.out}), p.out);
    std::cout << "wrote " << p.out << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// simulate: closed-loop run to CSV `t,S,U,F,G,Jcum`.

struct SimulateParams {
    CaseOptions cs;
    std::string law = "exponential";   // exponential | power (reaching family)
    std::string plant = "integrator";  // integrator | double
    double s0 = 1.0;
    double t = 1.0;
    double dt = 1e-4;
    std::uint64_t seed = 0;
    std::string baseline = "none";
    bool plot_script = false;
    std::string out;
};

ordered_json simulate_params_json(const SimulateParams& p) {
    ordered_json j;
    case_to_json(p.cs, j);
    j["law"] = p.law;
    if (p.law == "power" && !j.contains("alpha")) j["alpha"] = p.cs.alpha;
    j["plant"] = p.plant;
    j["s0"] = p.s0;
    j["t"] = p.t;
    j["dt"] = p.dt;
    j["seed"] = p.seed;
    j["baseline"] = p.baseline;
    j["plot-script"] = p.plot_script;
    return j;
}

SimulateParams simulate_params_from_json(const ordered_json& j, const std::string& out) {
    SimulateParams p;
    p.cs = case_from_json(j);
    if (j.contains("law")) p.law = j.at("law").get<std::string>();
    if (j.contains("plant")) p.plant = j.at("plant").get<std::string>();
    if (j.contains("s0")) p.s0 = j.at("s0").get<double>();
    if (j.contains("t")) p.t = j.at("t").get<double>();
    if (j.contains("dt")) p.dt = j.at("dt").get<double>();
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("baseline")) p.baseline = j.at("baseline").get<std::string>();
    if (j.contains("plot-script")) p.plot_script = j.at("plot-script").get<bool>();
    p.out = out;
    return p;
}

std::string simulate_plot_script(const std::string& out) {
    return "#!/usr/bin/env python3\n"
           "# Plots the paired closed-loop CSV: surface S and control U over time.\n"
           "import csv\n"
           "import matplotlib.pyplot as plt\n"
           "\n"
           "ts, ss, us = [], [], []\n"
           "with open(\"" + out + "\") as f:\n"
           "    for row in csv.DictReader(f):\n"
           "        ts.append(float(row[\"t\"]))\n"
           "        ss.append(float(row[\"S\"]))\n"
           "        us.append(float(row[\"U\"]))\n"
           "plt.plot(ts, ss, label=\"S\")\n"
           "plt.plot(ts, us, label=\"U\")\n"
           "plt.xlabel(\"t\")\n"
           "plt.legend()\n"
           "plt.grid(True)\n"
           "plt.savefig(\"" + out + ".png\", dpi=150)\n";
}

int run_simulate(const SimulateParams& p) {
    if (p.baseline != "none" && p.baseline != "equilibrium")
        throw DomainError("simulate: --baseline must be none|equilibrium");
    if (p.law != "exponential" && p.law != "power")
        throw DomainError("simulate: --law must be exponential|power");

    // The exponential law carries the constructed functional; the power
    // reaching family has none, so its cost columns are the quadratic
    // samples S^2 and U^2 (matching the sweep columns).
    std::function<double(double)> law;
    std::optional<FunctionalForm> form;
    double base = 0.0;
    if (p.law == "exponential") {
        const ControlParams params = validate(p.cs.c);
        const ExponentSpec spec = build_spec(p.cs);
        form = make_form(params, spec);
        base = p.baseline == "equilibrium" ? equilibrium_baseline(*form) : 0.0;
        law = [params, spec](double s) { return control_u(params, spec, s); };
    } else {
        if (p.baseline == "equilibrium")
            throw DomainError("simulate: --baseline equilibrium applies to the exponential law");
        const PowerLawParams family = validate(PowerLawParams{p.cs.alpha});
        law = [family](double s) { return power_control(family, s); };
    }

    PlantModel plant;
    SimConfig cfg;
    cfg.dt = p.dt;
    cfg.horizon = p.t;
    cfg.seed = p.seed;
    if (p.plant == "integrator") {
        plant = ScalarIntegrator{};
        cfg.x0 = {p.s0};
    } else if (p.plant == "double") {
        plant = DoubleIntegrator{1.0};
        cfg.x0 = {p.s0, 0.0};  // surface S = x1 + x2 starts at s0
    } else {
        throw DomainError("simulate: --plant must be integrator|double");
    }

    ordered_json failure;  // absent on success
    Trajectory traj;
    try {
        traj = simulate_closed_loop(plant, law, cfg);
    } catch (const DivergenceError& e) {
        failure["kind"] = "divergence";
        failure["time"] = e.time();
        // Retain the prefix: rerun up to the last completed step (the grid is
        // deterministic, so this reproduces exactly the samples taken before
        // the failure).
        const double t_ok = e.time() - cfg.dt;
        if (t_ok > 0.0) {
            cfg.horizon = t_ok;
            traj = simulate_closed_loop(plant, law, cfg);
        }
    }

    io::CsvBuilder csv({"t", "S", "U", "F", "G", "Jcum"});
    std::optional<FStateEvaluator> f_of;
    if (form) f_of.emplace(*form);
    double interior = 0.0;   // running trapezoid of (F - base) + G
    double prev_i = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double s = traj.s_values[i];
        const double u = traj.u_values[i];
        double f = 0.0;
        try {
            f = form ? (*f_of)(s) - base : s * s;
        } catch (const SingularityError& e) {
            // The state term has no finite value at this sample (origin-
            // singular case arriving at S = 0): keep the rows so far.
            failure["kind"] = "singularity";
            failure["message"] = e.what();
            failure["time"] = traj.times[i];
            break;
        }
        const double g = form ? g_cost(form->params, u) : u * u;
        const double integrand_i = f + g;
        if (i > 0) interior += 0.5 * (prev_i + integrand_i) * cfg.dt;
        prev_i = integrand_i;
        csv.row({io::format_double(traj.times[i]), io::format_double(s), io::format_double(u),
                 io::format_double(f), io::format_double(g), io::format_double(interior)});
    }

    std::vector<std::string> outputs = {p.out};
    if (p.plot_script) outputs.push_back(plot_script_path(p.out));
    ordered_json manifest = io::make_manifest("simulate", simulate_params_json(p), outputs);
    if (!failure.is_null()) manifest["failure"] = failure;
    io::write_file(p.out, csv.text());
    if (p.plot_script) write_plot_script(plot_script_path(p.out), simulate_plot_script(p.out));
    io::write_manifest(manifest, p.out);

    if (!failure.is_null()) {
        std::cerr << "simulate: run aborted (" << failure["kind"].get<std::string>()
                  << "); partial output retained in " << p.out << "\n";
        return exit_runtime;
    }
    std::cout << "wrote " << p.out;
    if (traj.reached_origin_at)
        std::cout << " (origin reached at t = " << io::format_double(*traj.reached_origin_at) << ")";
    std::cout << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify: the acceptance suite, one entry per criterion.

struct VerifyParams {
    bool json = false;
    ToleranceOverrides tolerances;
    std::string out;  // optional report file
};

ordered_json verify_params_json(const VerifyParams& p) {
    ordered_json j;
    j["json"] = p.json;
    ordered_json tols = ordered_json::object();
    for (const auto& [name, value] : p.tolerances) tols[name] = value;
    j["tolerance"] = tols;
    return j;
}

VerifyParams verify_params_from_json(const ordered_json& j, const std::string& out) {
    VerifyParams p;
    if (j.contains("json")) p.json = j.at("json").get<bool>();
    if (j.contains("tolerance"))
        for (auto it = j.at("tolerance").begin(); it != j.at("tolerance").end(); ++it)
            p.tolerances[it.key()] = it.value().get<double>();
    p.out = out;
    return p;
}

ordered_json results_to_json(const std::vector<CheckResult>& results) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results) {
        ordered_json e;
        e["criterion"] = r.criterion;
        e["name"] = r.name;
        e["tolerance"] = r.tolerance;
        e["observed"] = r.observed;
        e["pass"] = r.pass;
        e["detail"] = r.detail;
        arr.push_back(e);
    }
    return arr;
}

// The determinism criterion, probed in-process: the suite serialized twice
// must agree byte-for-byte, and re-rendering a representative tabulation and
// construction report must reproduce identical bytes (the property manifest
// replay relies on).
CheckResult check_determinism(const std::vector<CheckResult>& first,
                              const ToleranceOverrides& tolerances) {
    CheckResult r;
    r.criterion = 9;
    r.name = "determinism_and_replay";
    r.tolerance = 0.0;

    const auto second = run_verification(tolerances);
    const bool reports_equal =
        results_to_json(first).dump(2) == results_to_json(second).dump(2);

    TabulateParams probe;
    probe.curve = "G";
    probe.from = -2.0;
    probe.to = 2.0;
    probe.step = 0.05;
    const bool tabulate_equal = build_tabulate_csv(probe) == build_tabulate_csv(probe);

    ConstructParams cprobe;
    cprobe.cs.name = "reciprocal";
    const bool construct_equal = build_construct_report(cprobe) == build_construct_report(cprobe);

    r.pass = reports_equal && tabulate_equal && construct_equal;
    r.observed = r.pass ? 0.0 : 1.0;
    r.detail = std::string("suite rerun ") + (reports_equal ? "identical" : "DIFFERS") +
               "; tabulation re-render " + (tabulate_equal ? "identical" : "DIFFERS") +
               "; construction re-render " + (construct_equal ? "identical" : "DIFFERS");
    return r;
}

int run_verify(const VerifyParams& p) {
    auto results = run_verification(p.tolerances);
    results.push_back(check_determinism(results, p.tolerances));
    const bool ok = all_pass(results);

    const ordered_json report = results_to_json(results);
    if (p.json) {
        std::cout << report.dump(2) << "\n";
    } else {
        for (const auto& r : results) {
            std::cout << "[" << r.criterion << "] " << r.name << ": "
                      << (r.pass ? "pass" : "FAIL") << " (tolerance "
                      << io::format_double(r.tolerance) << ", observed "
                      << io::format_double(r.observed) << ")\n    " << r.detail << "\n";
        }
        std::cout << (ok ? "all checks passed" : "verification FAILED") << "\n";
    }
    if (!p.out.empty()) {
        io::write_file(p.out, report.dump(2) + "\n");
        io::write_manifest(io::make_manifest("verify", verify_params_json(p), {p.out}), p.out);
    }
    return ok ? exit_ok : exit_verify_failed;
}

// ---------------------------------------------------------------------------
// sweep: law-family sweeps to CSV `param,reach_time,j_total,j_energy`.

struct SweepParams {
    std::string kind;  // alpha | C
    std::vector<double> values;
    CaseOptions cs;  // C sweep: the case swept over bases
    double s0 = 1.0;
    double t = 11.0;  // covers the slow end of the supported ranges from s0 = 1
    double dt = 1e-4;
    std::string baseline = "none";
    bool adaptive_demo = false;
    bool plot_script = false;
    std::string out;
};

ordered_json sweep_params_json(const SweepParams& p) {
    ordered_json j;
    j["sweep"] = p.kind;
    j["values"] = p.values;
    case_to_json(p.cs, j);
    j["s0"] = p.s0;
    j["t"] = p.t;
    j["dt"] = p.dt;
    j["baseline"] = p.baseline;
    j["adaptive-demo"] = p.adaptive_demo;
    j["plot-script"] = p.plot_script;
    return j;
}

SweepParams sweep_params_from_json(const ordered_json& j, const std::string& out) {
    SweepParams p;
    p.kind = j.at("sweep").get<std::string>();
    p.values = doubles_from_json(j.at("values"), "values");
    p.cs = case_from_json(j);
    if (j.contains("s0")) p.s0 = j.at("s0").get<double>();
    if (j.contains("t")) p.t = j.at("t").get<double>();
    if (j.contains("dt")) p.dt = j.at("dt").get<double>();
    if (j.contains("baseline")) p.baseline = j.at("baseline").get<std::string>();
    if (j.contains("adaptive-demo")) p.adaptive_demo = j.at("adaptive-demo").get<bool>();
    if (j.contains("plot-script")) p.plot_script = j.at("plot-script").get<bool>();
    p.out = out;
    return p;
}

std::string sweep_plot_script(const std::string& out) {
    return "#!/usr/bin/env python3\n"
           "# Plots the paired sweep CSV: arrival time against the swept parameter.\n"
           "import csv\n"
           "import matplotlib.pyplot as plt\n"
           "\n"
           "xs, ys = [], []\n"
           "with open(\"" + out + "\") as f:\n"
           "    for row in csv.DictReader(f):\n"
           "        try:\n"
           "            x = float(row[\"param\"])\n"
           "        except ValueError:\n"
           "            continue  # demo rows carry a label instead of a number\n"
           "        if not row[\"reach_time\"]:\n"
           "            continue\n"
           "        xs.append(x)\n"
           "        ys.append(float(row[\"reach_time\"]))\n"
           "plt.plot(xs, ys, marker=\"o\")\n"
           "plt.xlabel(\"param\")\n"
           "plt.ylabel(\"reach_time\")\n"
           "plt.grid(True)\n"
           "plt.savefig(\"" + out + ".png\", dpi=150)\n";
}

int run_sweep(const SweepParams& p) {
    if (p.kind != "alpha" && p.kind != "C")
        throw DomainError("sweep: --sweep must be alpha|C");
    if (p.values.empty()) throw DomainError("sweep: --values must be a non-empty list");
    if (p.baseline != "none" && p.baseline != "equilibrium")
        throw DomainError("sweep: --baseline must be none|equilibrium");
    if (p.adaptive_demo && p.kind != "alpha")
        throw DomainError("sweep: --adaptive-demo applies to alpha sweeps only");

    // Validate every swept value before simulating anything, so parameter
    // errors cannot leave a half-written table behind.
    if (p.kind == "alpha") {
        for (double a : p.values) validate(PowerLawParams{a});
    } else {
        for (double c : p.values) {
            const FunctionalForm form = make_form(validate(c), build_spec(p.cs));
            if (p.baseline == "equilibrium") equilibrium_baseline(form);
        }
    }

    SimConfig cfg;
    cfg.dt = p.dt;
    cfg.horizon = p.t;
    cfg.x0 = {p.s0};
    const PlantModel plant = ScalarIntegrator{};

    io::CsvBuilder csv({"param", "reach_time", "j_total", "j_energy"});
    auto emit_row = [&](const std::string& param, const Trajectory& traj, double j_total,
                        double j_energy) {
        csv.row({param,
                 traj.reached_origin_at ? io::format_double(*traj.reached_origin_at) : "",
                 io::format_double(j_total), io::format_double(j_energy)});
    };

    if (p.kind == "alpha") {
        // The power family carries no base C, so the costs are the plain
        // quadratic ones: j_energy = integral of U^2, j_total adds S^2.
        auto quadratic_costs = [&](const Trajectory& traj) {
            const double je = trapezoid_over(traj, [&](std::size_t i) {
                return traj.u_values[i] * traj.u_values[i];
            });
            const double jt = je + trapezoid_over(traj, [&](std::size_t i) {
                                  return traj.s_values[i] * traj.s_values[i];
                              });
            return std::pair<double, double>{jt, je};
        };
        for (double a : p.values) {
            const PowerLawParams law{a};
            const Trajectory traj = simulate_closed_loop(
                plant, [&law](double s) { return power_control(law, s); }, cfg);
            const auto [jt, je] = quadratic_costs(traj);
            emit_row(io::format_double(a), traj, jt, je);
        }
        if (p.adaptive_demo) {
            const ScheduledExp sched = demo_schedule();
            const Trajectory traj = simulate_closed_loop(
                plant, [&sched](double s) { return scheduled_power_control(sched, s); }, cfg);
            const auto [jt, je] = quadratic_costs(traj);
            emit_row("scheduled", traj, jt, je);
        }
    } else {
        for (double c : p.values) {
            const ControlParams params = validate(c);
            const ExponentSpec spec = build_spec(p.cs);
            const FunctionalForm form = make_form(params, spec);
            const std::optional<double> base =
                p.baseline == "equilibrium" ? std::optional<double>(equilibrium_baseline(form))
                                            : std::nullopt;
            const Trajectory traj = simulate_closed_loop(
                plant, [&params, &spec](double s) { return control_u(params, spec, s); }, cfg);
            const JBreakdown j = j_along_trajectory(form, traj, base);
            emit_row(io::format_double(c), traj, j.j_total, j.j_energy);
        }
    }

    std::vector<std::string> outputs = {p.out};
    if (p.plot_script) outputs.push_back(plot_script_path(p.out));
    io::write_file(p.out, csv.text());
    if (p.plot_script) write_plot_script(plot_script_path(p.out), sweep_plot_script(p.out));
    io::write_manifest(io::make_manifest("sweep", sweep_params_json(p), outputs), p.out);
    std::cout << "wrote " << p.out << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// replay: re-run the command recorded in a manifest, writing to the same
// outputs. Deterministic computation + fixed formatting = identical bytes.

int run_replay(const std::string& manifest_file) {
    ordered_json m;
    try {
        m = ordered_json::parse(io::read_file(manifest_file));
    } catch (const IoError&) {
        throw;
    } catch (const std::exception& e) {
        throw DomainError("replay: cannot parse manifest " + manifest_file + ": " + e.what());
    }
    for (const char* key : {"command", "version", "parameters", "outputs"})
        if (!m.contains(key)) throw DomainError("replay: manifest lacks the field: " + std::string(key));
    const std::string recorded = m.at("version").get<std::string>();
    if (recorded != version)
        throw DomainError("replay: manifest was written by version " + recorded +
                          ", this tool is " + version +
                          "; bit-identical reproduction is not guaranteed");
    const std::string command = m.at("command").get<std::string>();
    const auto& params = m.at("parameters");
    const auto outputs = m.at("outputs").get<std::vector<std::string>>();
    if (outputs.empty()) throw DomainError("replay: manifest lists no outputs");

    if (command == "tabulate") return run_tabulate(tabulate_params_from_json(params, outputs[0]));
    if (command == "construct") return run_construct(construct_params_from_json(params, outputs[0]));
    if (command == "simulate") return run_simulate(simulate_params_from_json(params, outputs[0]));
    if (command == "verify") return run_verify(verify_params_from_json(params, outputs[0]));
    if (command == "sweep") return run_sweep(sweep_params_from_json(params, outputs[0]));
    throw DomainError("replay: unknown command in manifest: " + command);
}

// ---------------------------------------------------------------------------

void add_case_flags(CLI::App* sub, CaseOptions& cs) {
    sub->add_option("--c", cs.c, "activation base C (> 0, != 1)");
    sub->add_option("--case", cs.name,
                    "exponent case: identity|sqrt|reciprocal|power|additive|scheduled");
    sub->add_option("--alpha", cs.alpha, "power-case exponent (nonzero)");
    sub->add_option("--weights", cs.weights,
                    "additive-case weights w1,w2 for w1*sqrt(|S|) + w2*|S|")
        ->delimiter(',');
}

ConfigSetters case_setters(CaseOptions& cs) {
    return {
        {"c", [&cs](const ordered_json& v) { cs.c = v.get<double>(); }},
        {"case", [&cs](const ordered_json& v) { cs.name = v.get<std::string>(); }},
        {"alpha", [&cs](const ordered_json& v) { cs.alpha = v.get<double>(); }},
        {"weights", [&cs](const ordered_json& v) { cs.weights = doubles_from_json(v, "weights"); }},
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exponential-activation control toolkit"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    // --- tabulate
    TabulateParams tab;
    std::optional<double> tab_from, tab_to, tab_step;
    std::string tab_config;
    auto* tab_cmd = app.add_subcommand("tabulate", "write a curve CSV over a uniform grid");
    tab_cmd->add_option("--curve", tab.curve, "curve to tabulate: g|G|F|U");
    add_case_flags(tab_cmd, tab.cs);
    tab_cmd->add_option("--baseline", tab.baseline,
                        "F-curve baseline: none|equilibrium (subtract the origin value)");
    tab_cmd->add_option("--from", tab_from, "grid start");
    tab_cmd->add_option("--to", tab_to, "grid end (inclusive)");
    tab_cmd->add_option("--step", tab_step, "grid step (> 0)");
    tab_cmd->add_flag("--plot-script", tab.plot_script, "also write <out>.plot.py");
    tab_cmd->add_option("--out", tab.out, "output CSV path");
    tab_cmd->add_option("--config", tab_config, "JSON config (same keys as flags; flags win)");

    // --- construct
    ConstructParams con;
    std::string con_config;
    auto* con_cmd = app.add_subcommand("construct", "report the functional built for a case");
    add_case_flags(con_cmd, con.cs);
    con_cmd->add_option("--out", con.out, "output JSON path (default: stdout)");
    con_cmd->add_option("--config", con_config, "JSON config (same keys as flags; flags win)");

    // --- simulate
    SimulateParams sim;
    std::string sim_config;
    auto* sim_cmd = app.add_subcommand("simulate", "closed-loop run to CSV t,S,U,F,G,Jcum");
    add_case_flags(sim_cmd, sim.cs);
    sim_cmd->add_option("--law", sim.law,
                        "control family: exponential (constructed functional) | power "
                        "(reaching law -|S|^alpha*sign(S); quadratic cost columns)");
    sim_cmd->add_option("--plant", sim.plant, "plant model: integrator|double");
    sim_cmd->add_option("--s0", sim.s0, "initial surface value");
    sim_cmd->add_option("--t", sim.t, "horizon");
    sim_cmd->add_option("--dt", sim.dt, "step size");
    sim_cmd->add_option("--seed", sim.seed, "random seed (recorded; nominal runs ignore it)");
    sim_cmd->add_option("--baseline", sim.baseline,
                        "F baseline: none|equilibrium (subtract the origin value)");
    sim_cmd->add_flag("--plot-script", sim.plot_script, "also write <out>.plot.py");
    sim_cmd->add_option("--out", sim.out, "output CSV path");
    sim_cmd->add_option("--config", sim_config, "JSON config (same keys as flags; flags win)");

    // --- verify
    VerifyParams ver;
    std::vector<std::string> ver_tols;
    std::string ver_config;
    auto* ver_cmd = app.add_subcommand("verify", "run the acceptance suite");
    ver_cmd->add_flag("--json", ver.json, "emit the machine-readable report");
    ver_cmd->add_option("--tolerance", ver_tols, "override a check tolerance, NAME=VALUE")
        ->take_all();
    ver_cmd->add_option("--out", ver.out, "also write the JSON report to this path");
    ver_cmd->add_option("--config", ver_config, "JSON config (same keys as flags; flags win)");

    // --- sweep
    SweepParams swp;
    std::string swp_config;
    std::string swp_values_text;
    auto* swp_cmd =
        app.add_subcommand("sweep", "law-family sweep to CSV param,reach_time,j_total,j_energy");
    swp_cmd->add_option("--sweep", swp.kind, "swept parameter: alpha|C");
    swp_cmd->add_option("--values", swp_values_text, "swept values v1,v2,...");
    add_case_flags(swp_cmd, swp.cs);
    swp_cmd->add_option("--s0", swp.s0, "initial surface value");
    swp_cmd->add_option("--t", swp.t, "horizon");
    swp_cmd->add_option("--dt", swp.dt, "step size");
    swp_cmd->add_option("--baseline", swp.baseline, "C-sweep cost baseline: none|equilibrium");
    swp_cmd->add_flag("--adaptive-demo", swp.adaptive_demo,
                      "append the variable-exponent demo row (alpha sweeps)");
    swp_cmd->add_flag("--plot-script", swp.plot_script, "also write <out>.plot.py");
    swp_cmd->add_option("--out", swp.out, "output CSV path");
    swp_cmd->add_option("--config", swp_config, "JSON config (same keys as flags; flags win)");

    // --- replay
    std::string replay_manifest;
    auto* rep_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
    rep_cmd->add_option("--manifest", replay_manifest, "manifest path (<out>.manifest.json)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (tab_cmd->parsed()) {
            ConfigSetters set = case_setters(tab.cs);
            set["curve"] = [&](const ordered_json& v) { tab.curve = v.get<std::string>(); };
            set["baseline"] = [&](const ordered_json& v) { tab.baseline = v.get<std::string>(); };
            set["from"] = [&](const ordered_json& v) { tab_from = v.get<double>(); };
            set["to"] = [&](const ordered_json& v) { tab_to = v.get<double>(); };
            set["step"] = [&](const ordered_json& v) { tab_step = v.get<double>(); };
            set["plot-script"] = [&](const ordered_json& v) { tab.plot_script = v.get<bool>(); };
            set["out"] = [&](const ordered_json& v) { tab.out = v.get<std::string>(); };
            apply_config(*tab_cmd, tab_config, set);
            tab.curve = require_text(tab.curve, "--curve");
            tab.from = require_number(tab_from, "--from");
            tab.to = require_number(tab_to, "--to");
            tab.step = require_number(tab_step, "--step");
            tab.out = require_text(tab.out, "--out");
            return run_tabulate(tab);
        }
        if (con_cmd->parsed()) {
            ConfigSetters set = case_setters(con.cs);
            set["out"] = [&](const ordered_json& v) { con.out = v.get<std::string>(); };
            apply_config(*con_cmd, con_config, set);
            return run_construct(con);
        }
        if (sim_cmd->parsed()) {
            ConfigSetters set = case_setters(sim.cs);
            set["law"] = [&](const ordered_json& v) { sim.law = v.get<std::string>(); };
            set["plant"] = [&](const ordered_json& v) { sim.plant = v.get<std::string>(); };
            set["s0"] = [&](const ordered_json& v) { sim.s0 = v.get<double>(); };
            set["t"] = [&](const ordered_json& v) { sim.t = v.get<double>(); };
            set["dt"] = [&](const ordered_json& v) { sim.dt = v.get<double>(); };
            set["seed"] = [&](const ordered_json& v) { sim.seed = v.get<std::uint64_t>(); };
            set["baseline"] = [&](const ordered_json& v) { sim.baseline = v.get<std::string>(); };
            set["plot-script"] = [&](const ordered_json& v) { sim.plot_script = v.get<bool>(); };
            set["out"] = [&](const ordered_json& v) { sim.out = v.get<std::string>(); };
            apply_config(*sim_cmd, sim_config, set);
            sim.out = require_text(sim.out, "--out");
            return run_simulate(sim);
        }
        if (ver_cmd->parsed()) {
            ConfigSetters set;
            set["json"] = [&](const ordered_json& v) { ver.json = v.get<bool>(); };
            set["tolerance"] = [&](const ordered_json& v) {
                for (auto it = v.begin(); it != v.end(); ++it)
                    ver.tolerances[it.key()] = it.value().get<double>();
            };
            set["out"] = [&](const ordered_json& v) { ver.out = v.get<std::string>(); };
            apply_config(*ver_cmd, ver_config, set);
            // flags win per name: parse after config so explicit overrides replace
            for (const auto& [name, value] : parse_tolerances(ver_tols))
                ver.tolerances[name] = value;
            return run_verify(ver);
        }
        if (swp_cmd->parsed()) {
            ConfigSetters set = case_setters(swp.cs);
            set["sweep"] = [&](const ordered_json& v) { swp.kind = v.get<std::string>(); };
            set["values"] = [&](const ordered_json& v) {
                swp.values = doubles_from_json(v, "values");
            };
            set["s0"] = [&](const ordered_json& v) { swp.s0 = v.get<double>(); };
            set["t"] = [&](const ordered_json& v) { swp.t = v.get<double>(); };
            set["dt"] = [&](const ordered_json& v) { swp.dt = v.get<double>(); };
            set["baseline"] = [&](const ordered_json& v) { swp.baseline = v.get<std::string>(); };
            set["adaptive-demo"] = [&](const ordered_json& v) {
                swp.adaptive_demo = v.get<bool>();
            };
            set["plot-script"] = [&](const ordered_json& v) { swp.plot_script = v.get<bool>(); };
            set["out"] = [&](const ordered_json& v) { swp.out = v.get<std::string>(); };
            apply_config(*swp_cmd, swp_config, set);
            if (provided(*swp_cmd, "--values"))
                swp.values = split_doubles(swp_values_text, "--values");
            swp.kind = require_text(swp.kind, "--sweep");
            swp.out = require_text(swp.out, "--out");
            return run_sweep(swp);
        }
        if (rep_cmd->parsed()) {
            replay_manifest = require_text(replay_manifest, "--manifest");
            return run_replay(replay_manifest);
        }
    } catch (const SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const NotClosedFormError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_usage;  // no subcommand matched (require_subcommand should prevent this)
}
