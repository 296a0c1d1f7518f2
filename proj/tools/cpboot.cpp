// cpboot command line tool: changepoint detection, the CI-length hypothesis
// test, and power curves, with machine-readable JSON reports.

#include "cpboot/bootstrap.hpp"
#include "cpboot/null_models.hpp"
#include "cpboot/power.hpp"
#include "cpboot/scan.hpp"
#include "cpboot/series.hpp"
#include "cpboot/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;

std::string hex64(std::uint64_t value) {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

std::string shortest_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

// Report serialization: numbers carry 17 significant digits so reruns are
// comparable byte for byte and values round-trip exactly.
void dump_json(const json& node, std::string& out) {
    if (node.is_object()) {
        out += '{';
        bool first = true;
        for (auto it = node.begin(); it != node.end(); ++it) {
            if (!first) out += ',';
            first = false;
            out += json(it.key()).dump();
            out += ':';
            dump_json(it.value(), out);
        }
        out += '}';
    } else if (node.is_array()) {
        out += '[';
        bool first = true;
        for (const auto& item : node) {
            if (!first) out += ',';
            first = false;
            dump_json(item, out);
        }
        out += ']';
    } else if (node.is_number_float()) {
        const double value = node.get<double>();
        if (!std::isfinite(value)) {
            out += "null";
        } else {
            char buffer[64];
            std::snprintf(buffer, sizeof(buffer), "%.17g", value);
            out += buffer;
        }
    } else {
        out += node.dump();  // strings (escaped), integers, booleans, null
    }
}

std::string render_report(const json& manifest, const json& result) {
    json report;
    report["manifest"] = manifest;
    report["result"] = result;
    std::string text;
    dump_json(report, text);
    text += '\n';
    return text;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open file for writing: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing: " + path);
    }
}

void emit(const std::string& text, const std::string& out_path) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (!out_path.empty()) {
        write_file(out_path, text);
    }
}

struct CommonFlags {
    std::uint64_t seed = 0;
    std::size_t min_segment = cpboot::k_default_min_segment;
    std::size_t b_inner = 1000;
    std::size_t r_outer = 200;
    double alpha_ci = 0.05;
    double alpha_test = 0.05;
    cpboot::NullMethod null_method = cpboot::NullMethod::demean;
    std::string out_path;
};

int run_detect(const std::string& input, const CommonFlags& flags, bool with_bootstrap) {
    const cpboot::TimeSeries series = cpboot::load_csv(input);
    cpboot::validate(series, flags.min_segment);
    const cpboot::ScanResult scan = cpboot::scan_changepoint(series, flags.min_segment);

    json manifest;
    manifest["command"] = "detect";
    manifest["version"] = std::string(cpboot::k_version);
    manifest["input"] = input;
    manifest["input_digest"] = hex64(series.digest());
    manifest["seed"] = flags.seed;
    manifest["min_segment"] = flags.min_segment;
    manifest["bootstrap_ci"] = with_bootstrap;
    manifest["b_inner"] = flags.b_inner;
    manifest["alpha_ci"] = flags.alpha_ci;

    json result;
    result["n"] = series.size();
    result["c_hat"] = scan.c_hat;
    result["max_statistic"] = scan.max_statistic;
    result["split_first"] = scan.min_segment;
    result["statistic"] = scan.statistic;
    if (with_bootstrap) {
        cpboot::BootstrapConfig config;
        config.b_inner = flags.b_inner;
        config.alpha_ci = flags.alpha_ci;
        config.seed = flags.seed;
        config.min_segment = flags.min_segment;
        const cpboot::BootstrapDistribution dist =
            cpboot::bootstrap_changepoint_distribution(series, config,
                                                       cpboot::RngStream(flags.seed));
        const cpboot::ConfidenceInterval ci = cpboot::percentile_interval(dist, flags.alpha_ci);
        json interval;
        interval["lower"] = ci.lower;
        interval["upper"] = ci.upper;
        interval["lambda"] = ci.length;
        interval["level"] = ci.level;
        result["ci"] = interval;
    }

    emit(render_report(manifest, result), flags.out_path);
    return 0;
}

int run_test(const std::string& input, const CommonFlags& flags) {
    const cpboot::TimeSeries series = cpboot::load_csv(input);

    cpboot::TestConfig config;
    config.bootstrap.b_inner = flags.b_inner;
    config.bootstrap.r_outer = flags.r_outer;
    config.bootstrap.alpha_ci = flags.alpha_ci;
    config.bootstrap.seed = flags.seed;
    config.bootstrap.min_segment = flags.min_segment;
    config.alpha_test = flags.alpha_test;
    config.null_method = flags.null_method;

    const cpboot::TestReport report =
        cpboot::ci_length_test(series, config, cpboot::RngStream(flags.seed));

    json manifest;
    manifest["command"] = "test";
    manifest["version"] = std::string(cpboot::k_version);
    manifest["input"] = input;
    manifest["input_digest"] = hex64(series.digest());
    manifest["seed"] = flags.seed;
    manifest["min_segment"] = flags.min_segment;
    manifest["b_inner"] = flags.b_inner;
    manifest["r_outer"] = flags.r_outer;
    manifest["alpha_ci"] = flags.alpha_ci;
    manifest["alpha_test"] = flags.alpha_test;
    manifest["null_method"] = std::string(cpboot::to_string(flags.null_method));

    json result;
    result["n"] = series.size();
    result["c_hat"] = report.c_hat;
    result["null_method"] = std::string(cpboot::to_string(flags.null_method));
    result["t_star"] = report.t_star;
    result["lambda1_point"] = report.lambda1_point;
    result["q_hat"] = report.q_hat;
    result["reject"] = report.reject;
    result["power"] = report.power;
    result["lambda1_samples"] = report.lambda1_samples;
    result["lambda0_samples"] = report.lambda0_samples;

    emit(render_report(manifest, result), flags.out_path);
    return 0;
}

int run_power(const std::vector<double>& grid, std::size_t n, double sigma, std::size_t repeats,
              const CommonFlags& flags, const std::string& csv_path) {
    cpboot::TestConfig config;
    config.bootstrap.b_inner = flags.b_inner;
    config.bootstrap.r_outer = flags.r_outer;
    config.bootstrap.alpha_ci = flags.alpha_ci;
    config.bootstrap.seed = flags.seed;
    config.bootstrap.min_segment = flags.min_segment;
    config.alpha_test = flags.alpha_test;
    config.null_method = flags.null_method;

    const cpboot::PowerCurve curve =
        cpboot::power_curve(grid, n, sigma, config, cpboot::RngStream(flags.seed), repeats);

    std::string csv = "effect_m,power\n";
    for (std::size_t i = 0; i < curve.effect_grid.size(); ++i) {
        csv += shortest_double(curve.effect_grid[i]);
        csv += ',';
        csv += shortest_double(curve.power[i]);
        csv += '\n';
    }
    std::fwrite(csv.data(), 1, csv.size(), stdout);
    if (!csv_path.empty()) {
        write_file(csv_path, csv);
    }

    if (!flags.out_path.empty()) {
        json manifest;
        manifest["command"] = "power";
        manifest["version"] = std::string(cpboot::k_version);
        manifest["seed"] = flags.seed;
        manifest["min_segment"] = flags.min_segment;
        manifest["b_inner"] = flags.b_inner;
        manifest["r_outer"] = flags.r_outer;
        manifest["alpha_ci"] = flags.alpha_ci;
        manifest["alpha_test"] = flags.alpha_test;
        manifest["null_method"] = std::string(cpboot::to_string(flags.null_method));
        manifest["grid"] = grid;
        manifest["n"] = n;
        manifest["sigma"] = sigma;
        manifest["repeats"] = repeats;

        json result;
        result["effect_grid"] = curve.effect_grid;
        result["power"] = curve.power;
        result["n"] = curve.n;
        result["sigma"] = curve.sigma;
        result["c0"] = curve.c0;
        result["null_method"] = std::string(cpboot::to_string(curve.null_method));
        result["seed"] = curve.seed;
        result["repeats"] = curve.repeats;

        write_file(flags.out_path, render_report(manifest, result));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Changepoint detection and bootstrap CI-length inference"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cpboot::k_version));

    CommonFlags flags;
    std::string input;
    std::string csv_path;
    std::string null_name = "demean";
    std::vector<double> grid;
    std::size_t n = 100;
    double sigma = 1.0;
    std::size_t repeats = 1;

    auto add_common = [&](CLI::App* cmd, bool with_test_flags) {
        cmd->add_option("--seed", flags.seed, "random seed")->capture_default_str();
        cmd->add_option("--min-segment", flags.min_segment, "smallest admissible segment")
            ->capture_default_str();
        cmd->add_option("--alpha-ci", flags.alpha_ci, "percentile interval level")
            ->capture_default_str();
        cmd->add_option("--out", flags.out_path, "write the JSON report to this path");
        if (with_test_flags) {
            cmd->add_option("--outer", flags.r_outer, "outer repetitions R")
                ->capture_default_str();
            cmd->add_option("--alpha-test", flags.alpha_test, "test level")
                ->capture_default_str();
            cmd->add_option("--null", null_name, "null construction: demean or permute")
                ->check(CLI::IsMember({"demean", "permute"}))
                ->capture_default_str();
        }
    };

    CLI::App* detect = app.add_subcommand("detect", "scan a CSV series for its changepoint");
    detect->add_option("input", input, "input CSV with header t,y")->required();
    CLI::Option* detect_bootstrap =
        detect->add_option("--bootstrap", flags.b_inner,
                           "compute a percentile CI from this many bootstrap replicates");
    add_common(detect, false);

    CLI::App* test = app.add_subcommand("test", "run the CI-length changepoint test");
    test->add_option("input", input, "input CSV with header t,y")->required();
    test->add_option("--bootstrap", flags.b_inner, "bootstrap replicates B")
        ->capture_default_str();
    add_common(test, true);

    CLI::App* power = app.add_subcommand("power", "power curve over synthetic effect sizes");
    power->add_option("--grid", grid, "comma-separated effect sizes in multiples of sigma")
        ->required()
        ->delimiter(',');
    power->add_option("--n", n, "series length")->capture_default_str();
    power->add_option("--sigma", sigma, "noise standard deviation")->capture_default_str();
    power->add_option("--repeats", repeats, "fresh datasets averaged per grid point")
        ->capture_default_str();
    power->add_option("--bootstrap", flags.b_inner, "bootstrap replicates B")
        ->capture_default_str();
    power->add_option("--csv", csv_path, "write the effect_m,power rows to this path");
    add_common(power, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    flags.null_method =
        null_name == "permute" ? cpboot::NullMethod::permute : cpboot::NullMethod::demean;

    try {
        if (detect->parsed()) {
            return run_detect(input, flags, detect_bootstrap->count() > 0);
        }
        if (test->parsed()) {
            return run_test(input, flags);
        }
        if (grid.empty()) {
            std::cerr << "error: --grid must contain at least one effect size\n";
            return 2;
        }
        return run_power(grid, n, sigma, repeats, flags, csv_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
