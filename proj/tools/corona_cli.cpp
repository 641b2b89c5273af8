#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "corona/kernels.hpp"
#include "corona/report.hpp"

namespace {

using namespace corona;

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << body;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_verify(const RunConfig& cfg, bool self_check) {
    std::vector<SuiteResult> results;
    try {
        results = run_suites(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    bool ok = true;
    for (const SuiteResult& sr : results)
        for (const CheckRecord& c : sr.checks) {
            std::printf("[%s] %s/%s measured=%.6g tolerance=%.6g\n", c.status.c_str(),
                        sr.suite.c_str(), c.id.c_str(), c.measured, c.tolerance);
            if (c.status == "fail") ok = false;
        }
    std::filesystem::create_directories(cfg.out_dir);
    nlohmann::ordered_json rep = report_json(cfg, results);
    write_text(cfg.out_dir + "/verify_report.json", rep.dump(2) + "\n");
    write_text(cfg.out_dir + "/verify_timings.json", timings_json(results).dump(2) + "\n");
    if (self_check) {
        nlohmann::ordered_json schema =
            nlohmann::ordered_json::parse(slurp(report_schema_path()));
        std::vector<std::string> errs = validate_json(rep, schema);
        for (const std::string& e : errs)
            std::fprintf(stderr, "schema violation: %s\n", e.c_str());
        if (!errs.empty()) return 1;
        std::printf("report validates against %s\n", report_schema_path().c_str());
    }
    std::printf("%s\n", ok ? "all suites pass" : "FAILURES present");
    return ok ? 0 : 1;
}

int cmd_solve(const RunConfig& cfg) {
    SolveArtifacts art = run_solve(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/solve_report.json", art.report.dump(2) + "\n");
    if (art.exit_code == 0) {
        write_text(cfg.out_dir + "/solve_samples.csv", art.csv);
        std::printf("residual_bezout=%.6g residual_dbar=%.6g (%s/solve_samples.csv)\n",
                    art.report["residual_bezout"].get<double>(),
                    art.report["residual_dbar"].get<double>(), cfg.out_dir.c_str());
    } else {
        std::fprintf(stderr, "infeasible: %s\n",
                     art.report["message"].get<std::string>().c_str());
    }
    return art.exit_code;
}

int cmd_schur(const RunConfig& cfg) {
    SchurArtifacts art = run_schur(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    write_text(cfg.out_dir + "/schur_frontier.csv", art.csv);
    write_text(cfg.out_dir + "/schur_report.json", art.report.dump(2) + "\n");
    std::printf("%s\n", art.summary.c_str());
    return 0;
}

int cmd_calibrate(const RunConfig& cfg, int level) {
    ConstantsTable tbl;
    try {
        tbl = calibrate_constants(level, level);
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::string path = cfg.out_dir + "/constants_table.txt";
    tbl.save(path);
    std::printf("wrote %s (%zu rows)\n", path.c_str(), tbl.rows.size());
    return 0;
}

int cmd_kernels_dump(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "# kernel coefficient dump v1\n";
    Rng rng(substream(cfg.seed, "kernels-dump"));
    for (int n = 1; n <= 3; ++n) {
        CVec wv(n), zv(n);
        for (int j = 0; j < n; ++j) {
            wv[j] = cplx(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
            zv[j] = cplx(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
        }
        BallPoint w(wv), z(zv);
        for (int q = 0; q < n; ++q) {
            KernelCoeff kc = kernel_c0q(n, q, w, z);
            out << "\nn=" << n << " q=" << q << "\nw=";
            for (int j = 0; j < n; ++j) out << " " << wv[j].real() << "+" << wv[j].imag() << "i";
            out << "\nz=";
            for (int j = 0; j < n; ++j) out << " " << zv[j].real() << "+" << zv[j].imag() << "i";
            out << "\ncommon_factor= " << kc.common_factor.real() << " "
                << kc.common_factor.imag() << "\n";
            for (const auto& [key, val] : kc.coeffs) {
                out << "J={";
                for (size_t i = 0; i < key.first.size(); ++i)
                    out << (i ? "," : "") << key.first[i];
                out << "} k=" << key.second << "  " << val.real() << " " << val.imag() << "\n";
            }
        }
    }
    std::filesystem::create_directories(cfg.out_dir);
    std::string path = cfg.out_dir + "/kernels_dump.txt";
    write_text(path, out.str());
    std::printf("wrote %s\n", path.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for the ball corona construction"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    std::vector<std::string> suite_args;
    long long seed = -1;
    int level = -1;
    bool self_check = false;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--seed", seed, "RNG seed override");
    app.add_option("--level", level, "quadrature level override");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--suite", suite_args, "suite selection")->delimiter(',');

    CLI::App* verify = app.add_subcommand("verify", "run the identity suites");
    verify->add_flag("--self-check", self_check, "validate the emitted report against the schema");
    CLI::App* solve = app.add_subcommand("solve", "solve a corona problem");
    CLI::App* schur = app.add_subcommand("schur", "frontier sweep for the kernel operators");
    CLI::App* calibrate = app.add_subcommand("calibrate", "regenerate the constants table");
    CLI::App* kdump = app.add_subcommand("kernels-dump", "dump kernel coefficient tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    corona::RunConfig cfg;
    if (!config_path.empty()) {
        try {
            cfg = corona::config_from_json(nlohmann::ordered_json::parse(slurp(config_path)));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
    }
    if (seed >= 0) cfg.seed = static_cast<uint64_t>(seed);
    if (level > 0) cfg.level = level;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!suite_args.empty()) cfg.suites = suite_args;
    if (cfg.n < 1 || cfg.n > 3) {
        std::fprintf(stderr, "config error: unsupported n=%d\n", cfg.n);
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(cfg, self_check);
        if (solve->parsed()) return cmd_solve(cfg);
        if (schur->parsed()) return cmd_schur(cfg);
        if (calibrate->parsed()) return cmd_calibrate(cfg, level > 0 ? level : 4);
        if (kdump->parsed()) return cmd_kernels_dump(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
