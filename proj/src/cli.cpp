#include "isac/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "isac/bounds.hpp"
#include "isac/fisher.hpp"
#include "isac/rate.hpp"
#include "isac/twoband_analytics.hpp"

namespace isac::cli {

namespace {

using json = nlohmann::json;

/// Strict view of one JSON object: every key must be consumed or declared.
class Section {
public:
    Section(const json& doc, std::string path, std::set<std::string> allowed)
        : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        for (const auto& [key, value] : doc_.items())
            if (!allowed.count(key)) throw ConfigError(field(key), "unknown field");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return doc_.contains(key); }
    const json& at(const std::string& key) const { return doc_.at(key); }

    void read(const std::string& key, double& out) const {
        if (!has(key)) return;
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw ConfigError(field(key), "must be finite");
    }
    void read(const std::string& key, std::string& out) const {
        if (!has(key)) return;
        if (!at(key).is_string()) throw ConfigError(field(key), "expected a string");
        out = at(key).get<std::string>();
    }
    void read(const std::string& key, bool& out) const {
        if (!has(key)) return;
        if (!at(key).is_boolean()) throw ConfigError(field(key), "expected a boolean");
        out = at(key).get<bool>();
    }
    void read_count(const std::string& key, std::size_t& out) const {
        if (!has(key)) return;
        if (!at(key).is_number_unsigned()) throw ConfigError(field(key), "expected a nonnegative integer");
        out = at(key).get<std::size_t>();
    }
    void read(const std::string& key, std::uint64_t& out) const {
        if (!has(key)) return;
        if (!at(key).is_number_unsigned()) throw ConfigError(field(key), "expected a nonnegative integer");
        out = at(key).get<std::uint64_t>();
    }
    void read(const std::string& key, int& out) const {
        if (!has(key)) return;
        if (!at(key).is_number_integer()) throw ConfigError(field(key), "expected an integer");
        out = at(key).get<int>();
    }
    template <class T>
    void read_list(const std::string& key, std::vector<T>& out) const {
        if (!has(key)) return;
        const json& v = at(key);
        if (!v.is_array() || v.empty()) throw ConfigError(field(key), "expected a nonempty array");
        out.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string f = field(key) + "[" + std::to_string(i) + "]";
            if constexpr (std::is_same_v<T, double>) {
                if (!v[i].is_number()) throw ConfigError(f, "expected a number");
            } else {
                if (!v[i].is_number_unsigned()) throw ConfigError(f, "expected a nonnegative integer");
            }
            out.push_back(v[i].get<T>());
        }
    }
    std::optional<Section> child(const std::string& key, std::set<std::string> allowed) const {
        if (!has(key)) return std::nullopt;
        return Section(at(key), field(key), std::move(allowed));
    }

private:
    const json& doc_;
    std::string path_;
};

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw ConfigError(path, what);
}

nlohmann::ordered_json model_metadata(const RunConfig& c) {
    nlohmann::ordered_json m;
    m["family"] = c.model.family;
    m["a"] = c.model.a;
    m["b"] = c.model.b;
    m["P"] = c.model.power;
    m["sigma2"] = c.model.sigma2;
    m["modulation"] = c.model.modulation;
    m["t1"] = c.design.t1;
    return m;
}

std::string fmt(double v) { return format_cell(v); }

CommandResult run_fisher(const RunConfig& c) {
    const TwoBandModel model = build_model(c);
    const FisherProfile profile(model.channel(), model.design(c.design.t1), model.prior());
    const std::size_t band2_label = model.constellation().points().size();
    const double t2 = 1.0 - c.design.t1;

    CommandResult r;
    r.table.columns = {"s", "j_band1", "j_band2", "j_band2_numeric", "mixture",
                       "mixture_closed_form", "prior_term"};
    for (double s : c.fisher.states)
        r.table.add_row({s, profile.per_symbol(0, s), profile.per_symbol(band2_label, s),
                         per_symbol_fisher(model.channel(), band2_label, s,
                                           FisherMethod::finite_difference),
                         profile.mixture(s), closed_form::mixture_fisher(t2, s, model.sigma2()),
                         profile.prior_term(s)});
    const double e_lp =
        expected_prior_fisher(model.prior());
    r.table.metadata["model"] = model_metadata(c);
    r.table.metadata["expected_prior_term"] = e_lp;
    r.summary = "fisher: " + std::to_string(c.fisher.states.size()) + " states, t1 = " +
                fmt(c.design.t1) + ", E_S[L_P] = " + fmt(e_lp);
    return r;
}

CommandResult run_bounds(const RunConfig& c) {
    const TwoBandModel model = build_model(c);
    const FisherProfile profile(model.channel(), model.design(c.design.t1), model.prior());
    const double a_at = alpha_atbcrb(profile);
    const double a_bc = alpha_bcrb(profile);

    CommandResult r;
    r.table.columns = {"n", "bcrb", "atbcrb", "n_times_bcrb", "n_times_atbcrb", "alpha_bcrb",
                       "alpha_atbcrb"};
    for (double n : c.bounds.n_list) {
        const double b = bcrb_finite(profile, n);
        const double t = atbcrb_finite(profile, n);
        r.table.add_row({n, b, t, n * b, n * t, a_bc, a_at});
    }
    r.table.metadata["model"] = model_metadata(c);
    r.table.metadata["alpha_atbcrb_closed_form"] =
        closed_form::alpha_atbcrb(1.0 - c.design.t1, c.model.a, c.model.sigma2);
    r.summary = "bounds: alpha_atbcrb = " + fmt(a_at) + " (closed form " +
                fmt(closed_form::alpha_atbcrb(1.0 - c.design.t1, c.model.a, c.model.sigma2)) +
                "), alpha_bcrb = " + fmt(a_bc);
    return r;
}

CommandResult run_rate(const RunConfig& c) {
    const TwoBandModel model = build_model(c);
    const RateBreakdown ends = two_band_rate(model, 0.0);
    CommandResult r;
    r.table.columns = {"t1", "h2", "c1", "c2_worst", "total"};
    double best_t = 0.0, best = -1.0;
    for (double t1 : sweep_grid(c.sweep)) {
        const RateBreakdown b = two_band_rate(t1, ends.c1, ends.c2_worst);
        r.table.add_row({b.t1, b.h2, b.c1, b.c2_worst, b.total});
        if (b.total > best) {
            best = b.total;
            best_t = t1;
        }
    }
    const double t_star = 1.0 / (1.0 + std::exp2(ends.c2_worst - ends.c1));
    r.table.metadata["model"] = model_metadata(c);
    r.table.metadata["c1"] = ends.c1;
    r.table.metadata["c2_worst"] = ends.c2_worst;
    r.table.metadata["t1_stationary"] = t_star;
    r.summary = "rate: C1 = " + fmt(ends.c1) + ", C2(worst) = " + fmt(ends.c2_worst) +
                ", max rate " + fmt(best) + " at t1 = " + fmt(best_t) + " (stationary t1* = " +
                fmt(t_star) + ")";
    return r;
}

CommandResult run_region(const RunConfig& c) {
    const TwoBandModel model = build_model(c);
    const RegionCurve curve = sweep_tradeoff(model, c.sweep, c.sim.workers);
    const OperatingPoints op = operating_points(curve);

    CommandResult r;
    r.table.columns = {"t1",           "t2",         "rate_bits",      "alpha_atbcrb",
                       "alpha_bcrb",   "is_comm_optimal", "is_est_optimal"};
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        const auto& p = curve.points[i];
        r.table.add_row({p.t1, p.t2(), p.rate_bits, p.alpha_atbcrb, p.alpha_bcrb,
                         i == op.communication, i == op.estimation});
    }
    const auto& m = curve.metadata;
    r.table.metadata["model"] = model_metadata(c);
    r.table.metadata["sweep"] = {{"t_min", m.sweep.t_min}, {"t_max", m.sweep.t_max},
                                 {"steps", m.sweep.steps}};
    r.table.metadata["c1"] = m.c1;
    r.table.metadata["c2_worst"] = m.c2_worst;
    const auto& cp = curve.points[op.communication];
    const auto& ep = curve.points[op.estimation];
    r.summary = "region: communication-optimal t1 = " + fmt(cp.t1) + " (R = " + fmt(cp.rate_bits) +
                ", alpha = " + fmt(cp.alpha_atbcrb) + "); estimation-optimal t1 = " + fmt(ep.t1) +
                " (R = " + fmt(ep.rate_bits) + ", alpha = " + fmt(ep.alpha_atbcrb) + ")";
    return r;
}

CommandResult run_simulate(const RunConfig& c) {
    const TwoBandModel model = build_model(c);
    SimConfig sim = c.sim;
    sim.t1 = c.design.t1;
    const SimReport report = empirical_mse(model, sim);

    CommandResult r;
    r.table.columns = {"n",          "trials",          "mse",           "n_mse",
                       "stderr",     "alpha_atbcrb",    "alpha_bcrb",    "n_atbcrb_finite",
                       "n_bcrb_finite", "estimator",    "fast_path"};
    for (const auto& row : report.rows)
        r.table.add_row({static_cast<std::int64_t>(row.n), static_cast<std::int64_t>(row.trials),
                         row.mse, row.n_mse, row.stderr_mse, row.alpha_atbcrb, row.alpha_bcrb,
                         row.n_atbcrb_finite, row.n_bcrb_finite, to_string(row.estimator),
                         row.fast_path});
    r.table.metadata["model"] = model_metadata(c);
    r.table.metadata["seed"] = sim.seed;
    const auto& last = report.rows.back();
    r.summary = "simulate: n = " + std::to_string(last.n) + ", n*MSE = " + fmt(last.n_mse) +
                " +/- " + fmt(static_cast<double>(last.n) * last.stderr_mse) +
                " (alpha_atbcrb = " + fmt(last.alpha_atbcrb) +
                ", alpha_bcrb = " + fmt(last.alpha_bcrb) + ")";
    return r;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
    if (name == "fisher") return Command::fisher;
    if (name == "bounds") return Command::bounds;
    if (name == "rate") return Command::rate;
    if (name == "region") return Command::region;
    if (name == "simulate") return Command::simulate;
    return std::nullopt;
}

std::string to_string(Command c) {
    switch (c) {
        case Command::fisher: return "fisher";
        case Command::bounds: return "bounds";
        case Command::rate: return "rate";
        case Command::region: return "region";
        case Command::simulate: return "simulate";
    }
    return "?";
}

RunConfig parse_config(const json& doc) {
    RunConfig c;
    const Section root(doc, "", {"model", "design", "sweep", "fisher", "bounds", "sim", "output"});

    if (auto s = root.child("model", {"family", "a", "b", "P", "sigma2", "modulation"})) {
        s->read("family", c.model.family);
        s->read("a", c.model.a);
        s->read("b", c.model.b);
        s->read("P", c.model.power);
        s->read("sigma2", c.model.sigma2);
        s->read("modulation", c.model.modulation);
    }
    require(c.model.family == "two_band_gaussian", "model.family", "only \"two_band_gaussian\" is supported");
    require(c.model.a > 2.0, "model.a", "must be > 2 for the regularity conditions");
    require(c.model.b == c.model.a, "model.b", "must equal model.a (symmetric beta prior)");
    require(c.model.power > 0.0, "model.P", "must be positive");
    require(c.model.sigma2 > 0.0, "model.sigma2", "must be positive");
    require(c.model.modulation == "bpsk" || c.model.modulation == "4pam", "model.modulation",
            "must be \"bpsk\" or \"4pam\"");

    if (auto s = root.child("design", {"t1"})) s->read("t1", c.design.t1);
    require(c.design.t1 >= 0.0 && c.design.t1 < 1.0, "design.t1", "must lie in [0, 1)");

    if (auto s = root.child("sweep", {"t_min", "t_max", "steps"})) {
        s->read("t_min", c.sweep.t_min);
        s->read("t_max", c.sweep.t_max);
        s->read_count("steps", c.sweep.steps);
    }
    require(c.sweep.t_min > 0.0, "sweep.t_min", "must be > 0");
    require(c.sweep.t_max < 1.0, "sweep.t_max", "must be < 1");
    require(c.sweep.t_min < c.sweep.t_max, "sweep.t_max", "must exceed sweep.t_min");
    require(c.sweep.steps >= 2, "sweep.steps", "must be >= 2");

    if (auto s = root.child("fisher", {"states"})) s->read_list("states", c.fisher.states);
    for (std::size_t i = 0; i < c.fisher.states.size(); ++i)
        require(c.fisher.states[i] > kBoundaryGuard && c.fisher.states[i] < 1.0 - kBoundaryGuard,
                "fisher.states[" + std::to_string(i) + "]", "must lie strictly inside (0, 1)");

    if (auto s = root.child("bounds", {"n_list"})) s->read_list("n_list", c.bounds.n_list);
    for (std::size_t i = 0; i < c.bounds.n_list.size(); ++i)
        require(c.bounds.n_list[i] >= 1.0, "bounds.n_list[" + std::to_string(i) + "]", "must be >= 1");

    if (auto s = root.child("sim", {"n_list", "trials", "seed", "estimator", "fast_path", "workers"})) {
        s->read_list("n_list", c.sim.n_list);
        s->read_count("trials", c.sim.trials);
        s->read("seed", c.sim.seed);
        std::string est = to_string(c.sim.estimator);
        s->read("estimator", est);
        require(est == "ml" || est == "map", "sim.estimator", "must be \"ml\" or \"map\"");
        c.sim.estimator = est == "ml" ? Estimator::ml : Estimator::map;
        s->read("fast_path", c.sim.fast_path);
        s->read("workers", c.sim.workers);
    }
    for (std::size_t i = 0; i < c.sim.n_list.size(); ++i)
        require(c.sim.n_list[i] >= 1, "sim.n_list[" + std::to_string(i) + "]", "must be >= 1");
    require(c.sim.trials >= 1, "sim.trials", "must be >= 1");
    require(c.sim.workers >= 0, "sim.workers", "must be >= 0 (0 selects the OpenMP default)");
    c.sim.t1 = c.design.t1;

    if (auto s = root.child("output", {"format", "path"})) {
        s->read("format", c.output.format);
        s->read("path", c.output.path);
    }
    require(c.output.format == "csv" || c.output.format == "json", "output.format",
            "must be \"csv\" or \"json\"");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

TwoBandModel build_model(const RunConfig& c) {
    const auto kind =
        c.model.modulation == "4pam" ? Constellation::Kind::pam4 : Constellation::Kind::bpsk;
    return TwoBandModel(c.model.sigma2, Constellation::make(kind, c.model.power),
                        StatePrior::beta(c.model.a, c.model.b, true));
}

CommandResult run(Command command, const RunConfig& config) {
    switch (command) {
        case Command::fisher: return run_fisher(config);
        case Command::bounds: return run_bounds(config);
        case Command::rate: return run_rate(config);
        case Command::region: return run_region(config);
        case Command::simulate: return run_simulate(config);
    }
    throw Error("cli", "unknown command");
}

std::string render(const Table& table, const RunConfig& config) {
    std::ostringstream os;
    if (config.output.format == "json")
        write_json(table, os);
    else
        write_csv(table, os);
    return os.str();
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rate versus MSE-decay tradeoff toolkit for sensing a fixed random state"};
    std::string command, config_path, out_path;
    std::optional<std::uint64_t> seed;
    app.add_option("command", command, "fisher | bounds | rate | region | simulate")
        ->required()
        ->check(CLI::IsMember({"fisher", "bounds", "rate", "region", "simulate"}));
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_path, "output file (overrides output.path)");
    app.add_option("--seed", seed, "simulation seed (overrides sim.seed)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    RunConfig config;
    try {
        config = config_path.empty() ? parse_config(json::object()) : load_config(config_path);
        if (!out_path.empty()) config.output.path = out_path;
        if (seed) config.sim.seed = *seed;
    } catch (const ConfigError& e) {
        err << "config error at " << e.path() << ": " << e.what() << '\n';
        return 2;
    }

    CommandResult result;
    try {
        result = run(*parse_command(command), config);
    } catch (const Error& e) {
        err << "error in " << e.module() << ": " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        err << "config error at " << e.path() << ": " << e.what() << '\n';
        return 2;
    }

    const std::string body = render(result.table, config);
    if (config.output.path.empty()) {
        out << body;
        err << result.summary << '\n';
    } else {
        std::ofstream file(config.output.path, std::ios::binary);
        if (!(file << body)) {
            err << "config error at output.path: cannot write " << config.output.path << '\n';
            return 2;
        }
        out << result.summary << '\n';
    }
    return 0;
}

}  // namespace isac::cli
