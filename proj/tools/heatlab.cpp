// heatlab <experiment> --config <path> --out <dir> [--threads k] [--seed s]
//
// Exit status: 0 when the experiment ran (a refuting or inconclusive verdict
// is reported through the "flagged" field), 2 for an invalid configuration,
// 3 for numerical failures, range errors and failed validate checks, 1 for
// I/O problems.

#include <heatlab/heatlab.h>

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int exit_code(heatlab_status s)
{
    switch (s) {
    case HEATLAB_OK: return 0;
    case HEATLAB_INVALID_ARGUMENT: return 2;
    case HEATLAB_RANGE_ERROR:
    case HEATLAB_NUMERICAL_FAILURE: return 3;
    default: return 1;
    }
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
            out += ch;
        } else if (static_cast<unsigned char>(ch) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", ch);
            out += buf;
        } else {
            out += ch;
        }
    }
    return out;
}

// The library formats its own failures; this covers the ones caught here.
std::string error_record(heatlab_status s, const std::string& message)
{
    std::ostringstream os;
    os << "{\n  \"error\": \"" << heatlab_status_name(s) << "\",\n  \"message\": \""
       << escape(message) << "\",\n  \"status\": " << static_cast<int>(s) << "\n}\n";
    return os.str();
}

bool write_file(const fs::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    return static_cast<bool>(f);
}

// The validate CSV is check,value,tolerance,pass.
void print_checks(const std::string& csv)
{
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        std::istringstream cells(line);
        std::string name, value, tol, pass;
        std::getline(cells, name, ',');
        std::getline(cells, value, ',');
        std::getline(cells, tol, ',');
        std::getline(cells, pass, ',');
        std::printf("%-4s  %-34s %-16s <= %s\n", pass == "1" ? "pass" : "FAIL", name.c_str(),
                    value.c_str(), tol.c_str());
    }
}

int fail(heatlab_status s, const std::string& record, const fs::path& out_dir,
         const std::string& experiment)
{
    std::cerr << record;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!ec)
        write_file(out_dir / (experiment + ".error.json"), record);
    return exit_code(s);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Heat-semigroup total variation lab on radial weighted manifolds"};
    app.set_version_flag("--version", std::string(heatlab_version()));
    std::string experiment;
    std::string config_path;
    std::string out_dir;
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    app.add_option("experiment", experiment, "degiorgi | completeness | blowup | comparison | tail | validate")
        ->required()
        ->check(CLI::IsMember({"degiorgi", "completeness", "blowup", "comparison", "tail",
                               "validate"}));
    app.add_option("--config", config_path, "JSON configuration (optional for validate)");
    app.add_option("--out", out_dir, "Output directory")->required();
    app.add_option("--threads", threads, "Worker threads (default: $HEATLAB_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "Overrides the configuration seed");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (!threads) {
        if (const char* env = std::getenv("HEATLAB_THREADS"); env && *env) {
            char* end = nullptr;
            const unsigned long v = std::strtoul(env, &end, 10);
            if (*end != '\0' || v == 0 || v > 4096)
                return fail(HEATLAB_INVALID_ARGUMENT,
                            error_record(HEATLAB_INVALID_ARGUMENT,
                                         std::string("HEATLAB_THREADS='") + env
                                             + "' is not a positive integer"),
                            out_dir, experiment);
            threads = static_cast<unsigned>(v);
        }
    }

    std::string config_text = "{}";
    if (!config_path.empty()) {
        std::ifstream f(config_path, std::ios::binary);
        if (!f)
            return fail(HEATLAB_INVALID_ARGUMENT,
                        error_record(HEATLAB_INVALID_ARGUMENT,
                                     "cannot read config file '" + config_path + "'"),
                        out_dir, experiment);
        std::ostringstream ss;
        ss << f.rdbuf();
        config_text = ss.str();
    } else if (experiment != "validate") {
        return fail(HEATLAB_INVALID_ARGUMENT,
                    error_record(HEATLAB_INVALID_ARGUMENT,
                                 "--config is required for " + experiment),
                    out_dir, experiment);
    }

    heatlab_report* report = nullptr;
    const heatlab_status s = heatlab_run(config_text.c_str(), experiment.c_str(),
                                         threads.value_or(1), seed ? &*seed : nullptr, &report);
    if (s != HEATLAB_OK)
        return fail(s, heatlab_last_error_json(), out_dir, experiment);

    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    const bool ok = !ec && write_file(dir / (experiment + ".csv"), heatlab_report_csv(report))
                    && write_file(dir / (experiment + ".report.json"), heatlab_report_json(report))
                    && write_file(dir / (experiment + ".timing.json"),
                                  heatlab_report_timing_json(report));
    if (!ok) {
        heatlab_report_destroy(report);
        return fail(HEATLAB_IO_ERROR,
                    error_record(HEATLAB_IO_ERROR, "cannot write outputs under '" + out_dir + "'"),
                    out_dir, experiment);
    }
    const bool flagged = heatlab_report_flagged(report) != 0;
    if (experiment == "validate")
        print_checks(heatlab_report_csv(report));
    std::cout << experiment << ": " << heatlab_report_verdict(report)
              << (flagged ? " (flagged)" : "") << '\n';
    heatlab_report_destroy(report);
    // A failed property check is a defect of the build, not a measurement.
    return experiment == "validate" && flagged ? 3 : 0;
}
