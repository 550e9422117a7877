#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isac/cli.hpp"

using namespace isac;
using nlohmann::json;

namespace {

struct Invocation {
    int code;
    std::string out, err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "isac_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

std::string config_error_path(const std::string& text) {
    try {
        cli::parse_config(json::parse(text));
    } catch (const cli::ConfigError& e) {
        return e.path();
    }
    return "";
}

}  // namespace

TEST_CASE("configuration defaults") {
    const auto c = cli::parse_config(json::object());
    CHECK(c.model.a == 3.0);
    CHECK(c.model.b == 3.0);
    CHECK(c.model.power == 2.0);
    CHECK(c.model.sigma2 == 0.5);
    CHECK(c.model.modulation == "bpsk");
    CHECK(c.sweep.steps == 99);
    CHECK(c.sim.trials == 20000);
    CHECK(c.output.format == "csv");
    const auto m = cli::build_model(c);
    CHECK(m.sigma2() == 0.5);
}

TEST_CASE("strict parsing reports dotted field paths") {
    CHECK(config_error_path(R"({"model": {"a": 3, "colour": "red"}})") == "model.colour");
    CHECK(config_error_path(R"({"extra": 1})") == "extra");
    CHECK(config_error_path(R"({"model": {"a": 2}})") == "model.a");
    CHECK(config_error_path(R"({"model": {"a": 4}})") == "model.b");
    CHECK(config_error_path(R"({"model": {"sigma2": -1}})") == "model.sigma2");
    CHECK(config_error_path(R"({"model": {"modulation": "qam"}})") == "model.modulation");
    CHECK(config_error_path(R"({"sim": {"trials": "many"}})") == "sim.trials");
    CHECK(config_error_path(R"({"sweep": {"t_min": 0.0}})") == "sweep.t_min");
    CHECK(config_error_path(R"({"design": {"t1": 1.0}})") == "design.t1");
    CHECK(config_error_path(R"({"output": {"format": "xml"}})") == "output.format");
    CHECK(config_error_path(R"({"model": {"a": 4, "b": 4}, "sim": {"seed": 7}})") == "");
    CHECK(cli::parse_command("region") == cli::Command::region);
    CHECK_FALSE(cli::parse_command("plot").has_value());
}

TEST_CASE("exit codes") {
    CHECK(invoke({"region", "--config", write_temp("isac_bad.json", R"({"model": {"colour": 1}})")}).code == 2);
    CHECK(invoke({"region", "--config", "/nonexistent/isac.json"}).code == 2);
    CHECK(invoke({"plot"}).code == 2);
    const auto bad = invoke({"simulate", "--config",
                             write_temp("isac_numeric.json",
                                        R"({"design": {"t1": 0.99}, "sim": {"n_list": [1], "trials": 10}})")});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("unidentifiable") != std::string::npos);
}

TEST_CASE("region and bounds with defaults") {
    const auto r = invoke({"region"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("t1,t2,rate_bits,alpha_atbcrb,alpha_bcrb,is_comm_optimal,is_est_optimal\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 100);
    CHECK(r.out.find("0.56,0.44,") != std::string::npos);

    const auto res = cli::run(cli::Command::bounds, cli::parse_config(json::object()));
    REQUIRE(res.table.rows.size() == 4);
    CHECK(std::get<double>(res.table.rows[0][0]) == 100);
    CHECK(std::get<double>(res.table.rows[3][6]) == doctest::Approx(2.0714285714285714).epsilon(1e-10));
}

TEST_CASE("simulate output is byte-identical across runs and workers") {
    auto cfg = cli::parse_config(json::parse(R"({"sim": {"n_list": [100, 1000], "trials": 500}})"));
    const std::string a = cli::render(cli::run(cli::Command::simulate, cfg).table, cfg);
    const std::string b = cli::render(cli::run(cli::Command::simulate, cfg).table, cfg);
    cfg.sim.workers = 4;
    const std::string c = cli::render(cli::run(cli::Command::simulate, cfg).table, cfg);
    CHECK(a == b);
    CHECK(a == c);
    cfg.sim.seed = 2;
    CHECK(cli::render(cli::run(cli::Command::simulate, cfg).table, cfg) != a);
}

TEST_CASE("JSON output and file output") {
    const auto path = (std::filesystem::temp_directory_path() / "isac_rate.json").string();
    const auto cfg = write_temp("isac_json.json", R"({"output": {"format": "json"}, "sweep": {"steps": 5}})");
    const auto r = invoke({"rate", "--config", cfg, "--out", path});
    REQUIRE(r.code == 0);
    CHECK_FALSE(r.out.empty());
    std::ifstream in(path);
    const json doc = json::parse(in);
    CHECK(doc.at("rows").size() == 5);
    CHECK(doc.at("columns")[0] == "t1");
    CHECK(doc.at("rows")[0].contains("total"));
    std::filesystem::remove(path);

    const auto f = invoke({"fisher"});
    REQUIRE(f.code == 0);
    CHECK(f.err.find("E_S[L_P] = 40") != std::string::npos);
}
