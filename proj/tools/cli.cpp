#include "cli.hpp"

#include <chrono>
#include <functional>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ruinlab/errors.hpp"
#include "ruinlab/format.hpp"
#include "ruinlab/piterbarg.hpp"

namespace ruinlab::cli {

using nlohmann::json;

json to_json(const ModelParams& p) {
    return json{{"u", p.u},     {"c", p.c}, {"sigma", p.sigma},
                {"delta", p.delta}, {"S", p.S}, {"T_scaled", p.T_scaled}};
}

json to_json(const Estimate& e) {
    return json{{"value", e.value},
                {"std_error", e.std_error},
                {"ci95", json::array({e.ci_lo, e.ci_hi})},
                {"n", e.n},
                {"meta", e.meta}};
}

json to_json(const RunRecord& r) {
    return json{{"command", r.command},        {"params", r.params}, {"result", r.result},
                {"seed", r.seed},              {"tool_version", r.tool_version},
                {"wall_time", r.wall_time}};
}

RunRecord record_from_json(const json& j) {
    RunRecord r;
    r.command = j.at("command").get<std::string>();
    r.params = j.at("params");
    r.result = j.at("result");
    r.seed = j.at("seed").get<std::uint64_t>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.wall_time = j.at("wall_time").get<double>();
    return r;
}

std::string serialize(const RunRecord& r) { return to_json(r).dump(); }

RunRecord parse_record(std::string_view line) { return record_from_json(json::parse(line)); }

void write_study_csv(std::ostream& os, std::span<const StudyRow> rows) {
    os << "u,mc,se,asymptotic,ratio\n";
    for (const auto& row : rows) {
        os << format_g17(row.u) << ',' << format_g17(row.mc.value) << ',' << format_g17(row.mc.std_error) << ','
           << format_g17(row.asymptotic) << ',' << (row.ratio ? format_g17(*row.ratio) : std::string{}) << '\n';
    }
}

void write_tail_csv(std::ostream& os, const RuinTimeTail& tail) {
    os << "x,empirical_tail,theory_tail\n";
    for (const auto& row : tail.rows)
        os << format_g17(row.x) << ',' << format_g17(row.empirical_tail) << ',' << format_g17(row.theory_tail) << '\n';
}

namespace {

struct Flags {
    double u = 0.0;
    double c = 1.0;
    double sigma = 1.0;
    double delta = 0.0;
    double S = 1.0;
    double T = 0.0;
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    double base_step = 1e-3;
    double fine_step = 1e-3;
    std::optional<double> fine_window;
    std::size_t variance_steps = 0;
    unsigned threads = 1;
    std::string out;

    std::optional<double> piterbarg_value;
    std::vector<double> xs{0.0, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> us;
    std::vector<double> lambdas;
    double step = 5e-3;
    std::string mode = "parisian";
    std::string csv;
};

ModelParams model(const Flags& f) { return ModelParams{f.u, f.c, f.sigma, f.delta, f.S, f.T}; }

McConfig mc_config(const Flags& f, const ModelParams& p) {
    McConfig cfg;
    cfg.params = p;
    cfg.grid = GridSpec{f.base_step, f.fine_step, f.fine_window, f.variance_steps};
    cfg.paths = f.paths;
    cfg.seed = f.seed;
    cfg.threads = f.threads;
    cfg.validate();
    return cfg;
}

json grid_json(const GridSpec& g) {
    json j{{"base_step", g.base_step}, {"fine_step", g.fine_step}, {"variance_steps", g.variance_steps}};
    j["fine_window"] = g.fine_window ? json(*g.fine_window) : json(nullptr);
    return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Piterbarg value for the Parisian asymptotic: the flag, or the exact P(0) = 2
// when the window vanishes.
double resolve_piterbarg(const Flags& f) {
    if (f.piterbarg_value) return *f.piterbarg_value;
    if (f.T == 0.0) return 2.0;
    throw ConfigError("--piterbarg is required when T > 0 (P(0) = 2 is only exact at T = 0)");
}

RunRecord cmd_formulas(const Flags& f) {
    const ModelParams p = model(f);
    p.validate();
    const double piterbarg = f.piterbarg_value.value_or(2.0);
    if (!(piterbarg > 0.0)) throw DomainError("--piterbarg must be > 0");
    RunRecord r;
    r.command = "formulas";
    r.params = to_json(p);
    r.params["piterbarg_value"] = piterbarg;
    r.params["xs"] = f.xs;
    const auto ab = asymptotic_params(p);
    json res;
    res["psi_inf"] = psi_inf(p);
    res["psi_S_exact"] = p.delta == 0.0 ? json(psi_S_zero_exact(p)) : json(nullptr);
    res["a"] = ab.a;
    res["b"] = ab.b;
    res["ruin_time_rate"] = ruin_time_rate(p);
    res["piterbarg_argument"] = ruin_time_rate(p) * p.T_scaled;
    res["threshold"] = parisian_threshold(p);
    res["parisian_asymptotic"] = p.u > 0.0 ? json(parisian_asymptotic(p, piterbarg)) : json(nullptr);
    json tails = json::array();
    for (double x : f.xs) tails.push_back({{"x", x}, {"tail", ruin_time_tail_asymptotic(p, x)}});
    res["ruin_time_tail"] = tails;
    r.result = res;
    return r;
}

RunRecord cmd_estimate(const Flags& f) {
    const McConfig cfg = mc_config(f, model(f));
    if (f.mode != "classical" && f.mode != "parisian") throw ConfigError("--mode must be classical or parisian");
    const RuinMode mode = f.mode == "classical" ? RuinMode::classical : RuinMode::parisian;
    RunRecord r;
    r.command = "estimate";
    r.seed = f.seed;
    r.params = to_json(cfg.params);
    r.params["grid"] = grid_json(cfg.grid);
    r.params["paths"] = cfg.paths;
    r.params["mode"] = f.mode;
    r.result = to_json(estimate_ruin_prob(cfg, mode));
    return r;
}

RunRecord cmd_piterbarg(const Flags& f) {
    PiterbargConfig base;
    base.T = f.T;
    base.step = f.step;
    base.paths = f.paths;
    base.seed = f.seed;
    base.threads = f.threads;
    const auto ex = extrapolate_piterbarg(f.T, f.lambdas, base);
    RunRecord r;
    r.command = "piterbarg";
    r.seed = f.seed;
    r.params = json{{"T", f.T}, {"lambdas", f.lambdas}, {"step", f.step}, {"paths", f.paths}};
    json rows = json::array();
    for (std::size_t i = 0; i < ex.lambdas.size(); ++i)
        rows.push_back({{"lambda", ex.lambdas[i]}, {"estimate", to_json(ex.estimates[i])}});
    r.result = json{{"rows", rows},
                    {"increments", ex.increments},
                    {"increment_se", ex.increment_se},
                    {"final", ex.value},
                    {"converged", ex.converged},
                    {"increments_shrinking", ex.increments_shrinking},
                    {"warnings", ex.warnings}};
    return r;
}

void write_csv_file(const std::string& path, const std::function<void(std::ostream&)>& writer, std::ostream& out) {
    if (path.empty()) return;
    if (path == "-") {
        writer(out);
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    writer(os);
}

RunRecord cmd_study(const Flags& f, std::ostream& out) {
    if (f.us.empty()) throw ConfigError("--us must list at least one u value");
    ModelParams p = model(f);
    p.u = f.us.front();
    const McConfig cfg = mc_config(f, p);
    const double piterbarg = resolve_piterbarg(f);
    const auto rows = convergence_study(cfg, f.us, piterbarg);
    RunRecord r;
    r.command = "study";
    r.seed = f.seed;
    r.params = to_json(p);
    r.params.erase("u");
    r.params["us"] = f.us;
    r.params["grid"] = grid_json(cfg.grid);
    r.params["paths"] = cfg.paths;
    r.params["piterbarg_value"] = piterbarg;
    json table = json::array();
    for (const auto& row : rows) {
        table.push_back({{"u", row.u},
                         {"mc", row.mc.value},
                         {"se", row.mc.std_error},
                         {"asymptotic", row.asymptotic},
                         {"ratio", optional_json(row.ratio)},
                         {"ratio_se", optional_json(row.ratio_se)},
                         {"exact", optional_json(row.exact)},
                         {"grid_nodes", row.grid_nodes}});
    }
    r.result = json{{"rows", table}};
    write_csv_file(f.csv, [&](std::ostream& os) { write_study_csv(os, rows); }, out);
    return r;
}

RunRecord cmd_ruin_time(const Flags& f, std::ostream& out, std::ostream& err) {
    const McConfig cfg = mc_config(f, model(f));
    const auto tail = estimate_ruin_time_tail(cfg, f.xs);
    RunRecord r;
    r.command = "ruin-time";
    r.seed = f.seed;
    r.params = to_json(cfg.params);
    r.params["grid"] = grid_json(cfg.grid);
    r.params["paths"] = cfg.paths;
    r.params["xs"] = f.xs;
    json rows = json::array();
    for (const auto& row : tail.rows)
        rows.push_back({{"x", row.x},
                        {"empirical_tail", row.empirical_tail},
                        {"theory_tail", row.theory_tail},
                        {"se", row.estimate.std_error}});
    r.result = json{{"paths", tail.paths},
                    {"ruined", tail.ruined},
                    {"rows", rows},
                    {"sup_distance", tail.sup_distance},
                    {"diagnostic", tail.diagnostic}};
    if (!tail.diagnostic.empty()) err << "warning: " << tail.diagnostic << '\n';
    write_csv_file(f.csv, [&](std::ostream& os) { write_tail_csv(os, tail); }, out);
    return r;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    CLI::App app{"Ruin probabilities of the Brownian risk model with constant force of interest", "ruinlab"};
    app.set_config("--config", "", "TOML/INI file with flag values; command-line flags take precedence");
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    app.add_option("--u", f.u, "initial reserve u >= 0");
    app.add_option("--c", f.c, "premium rate c > 0")->capture_default_str();
    app.add_option("--sigma", f.sigma, "volatility sigma > 0")->capture_default_str();
    app.add_option("--delta", f.delta, "force of interest delta >= 0")->capture_default_str();
    app.add_option("--S", f.S, "horizon S > 0")->capture_default_str();
    app.add_option("--T", f.T, "Parisian window constant: T_u = T / u^2")->capture_default_str();
    app.add_option("--paths", f.paths, "Monte Carlo paths")->capture_default_str();
    app.add_option("--seed", f.seed, "random seed")->capture_default_str();
    app.add_option("--base-step", f.base_step, "grid step before the fine window")->capture_default_str();
    app.add_option("--fine-step", f.fine_step, "grid step inside the fine window")->capture_default_str();
    app.add_option("--fine-window", f.fine_window, "fine window width before S (default min(S, max(10/u^2, S/20)))");
    app.add_option("--variance-steps", f.variance_steps,
                   "use N equal-variance steps on [0, S] instead of base/fine steps");
    app.add_option("--threads", f.threads, "worker threads; results do not depend on it")->capture_default_str();
    app.add_option("--out", f.out, "append the JSON record to this file");

    auto* formulas = app.add_subcommand("formulas", "closed-form and asymptotic values");
    formulas->add_option("--piterbarg", f.piterbarg_value, "Piterbarg constant P(aT) or P(bT) (default 2)");
    formulas->add_option("--xs", f.xs, "points x for the ruin-time tail")->delimiter(',');

    auto* estimate = app.add_subcommand("estimate", "Monte Carlo ruin probability");
    estimate->add_option("--mode", f.mode, "classical or parisian")
        ->check(CLI::IsMember({"classical", "parisian"}))
        ->capture_default_str();

    auto* piterbarg = app.add_subcommand("piterbarg", "generalized Piterbarg constant P(T)");
    piterbarg->add_option("--lambdas", f.lambdas, "increasing lambda schedule, e.g. 2,5,10")
        ->delimiter(',')
        ->required();
    piterbarg->add_option("--step", f.step, "grid step")->capture_default_str();

    auto* study = app.add_subcommand("study", "Monte Carlo against the large-u asymptotic over a u schedule");
    study->add_option("--us", f.us, "increasing u schedule, e.g. 0.5,1,1.5,2")->delimiter(',')->required();
    study->add_option("--piterbarg", f.piterbarg_value, "Piterbarg constant (default 2 when T = 0)");
    study->add_option("--csv", f.csv, "write the table as CSV ('-' for stdout)");

    auto* ruin_time = app.add_subcommand("ruin-time", "conditional law of the scaled ruin time");
    ruin_time->add_option("--xs", f.xs, "points x")->delimiter(',');
    ruin_time->add_option("--csv", f.csv, "write the table as CSV ('-' for stdout)");

    for (auto* sub : {formulas, estimate, piterbarg, study, ruin_time}) sub->fallthrough();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        auto* u_opt = app.get_option("--u");
        if ((formulas->parsed() || estimate->parsed() || ruin_time->parsed()) && u_opt->count() == 0)
            throw CLI::RequiredError("--u");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitUsage;
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        RunRecord record;
        if (formulas->parsed()) record = cmd_formulas(f);
        else if (estimate->parsed()) record = cmd_estimate(f);
        else if (piterbarg->parsed()) record = cmd_piterbarg(f);
        else if (study->parsed()) record = cmd_study(f, out);
        else record = cmd_ruin_time(f, out, err);
        record.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        const std::string line = serialize(record);
        out << line << '\n';
        if (!f.out.empty()) {
            std::ofstream os(f.out, std::ios::app | std::ios::binary);
            if (!os) throw std::runtime_error("cannot open " + f.out + " for writing");
            os << line << '\n';
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace ruinlab::cli
