#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "circlepack/bench.hpp"
#include "circlepack/driver.hpp"
#include "circlepack/vacancy.hpp"

namespace {

using namespace packing;

int cmd_gen(const std::string& family, int n, const std::string& out) {
    const auto parsed = parse_family(family);
    if (!parsed) {
        std::cerr << "unknown family: " << family << "\n";
        return 2;
    }
    const Instance instance = generate_instance(*parsed, n);
    write_instance(instance, out);
    std::printf("wrote %s (n=%d, family=%s)\n", out.c_str(), instance.n(),
                family_name(*parsed).c_str());
    return 0;
}

int cmd_solve(const std::string& instance_path, double time_limit, uint64_t seed,
              const std::string& out, const std::string& svg, bool no_core,
              uint64_t iter_budget) {
    const Instance instance = read_instance(instance_path);
    SolverParams params;
    params.enable_shs_core = !no_core;

    SolveOptions options;
    options.seed = seed;
    if (iter_budget > 0) {
        options.iteration_budget = iter_budget;
        options.time_limit_seconds = std::numeric_limits<double>::infinity();
    } else {
        options.time_limit_seconds = time_limit;
    }

    const RunResult result = solve(instance, params, options);
    write_solution(instance, result.best_configuration, out);
    if (!svg.empty()) {
        std::ofstream svg_file(svg);
        if (!svg_file) {
            std::cerr << "cannot write " << svg << "\n";
            return 2;
        }
        svg_file << render_svg(instance, result.best_configuration);
    }
    std::printf("%s: R = %.15g in %.3f s (seed %llu, %llu layout optimizations)\n",
                instance.name.c_str(), result.best_radius, result.elapsed_seconds,
                static_cast<unsigned long long>(result.seed),
                static_cast<unsigned long long>(result.counters.layout_optimizations));
    if (result.used_fallback) {
        std::cerr << "warning: best result came from the inflation fallback\n";
        return 1;
    }
    return 0;
}

// Solution radii must match the instance; files store 15 significant digits.
bool radii_match(const Instance& instance, const Solution& solution) {
    if (static_cast<int>(solution.radii.size()) != instance.n()) return false;
    for (int i = 0; i < instance.n(); ++i) {
        const double a = instance.radii[i];
        const double b = solution.radii[i];
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) return false;
    }
    return true;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               double tol) {
    const Instance instance = read_instance(instance_path);
    const Solution solution = read_solution(solution_path);
    if (!radii_match(instance, solution)) {
        std::cerr << "solution radii do not match the instance\n";
        return 2;
    }
    const FeasibilityReport report = verify_solution(instance, solution.config, tol);
    std::printf("R = %.15g\n", solution.config.container_radius);
    std::printf("max pair depth = %.6g\n", report.max_pair_depth);
    std::printf("max boundary depth = %.6g\n", report.max_boundary_depth);
    std::printf("%s (tol %.3g)\n", report.feasible ? "feasible" : "infeasible", tol);
    return report.feasible ? 0 : 1;
}

int cmd_render(const std::string& instance_path, const std::string& solution_path,
               const std::string& out) {
    const Instance instance = read_instance(instance_path);
    const Solution solution = read_solution(solution_path);
    std::ofstream file(out);
    if (!file) {
        std::cerr << "cannot write " << out << "\n";
        return 2;
    }
    file << render_svg(instance, solution.config);
    return 0;
}

int cmd_vacancies(const std::string& instance_path, const std::string& solution_path,
                  const std::string& out) {
    const Instance instance = read_instance(instance_path);
    const Solution solution = read_solution(solution_path);
    const LbfgsConfig lbfgs;
    const std::vector<VacancyCircle> found =
        detect_all(instance, solution.config, solution.config.container_radius, lbfgs);

    std::ofstream file;
    std::ostream* sink = &std::cout;
    if (!out.empty()) {
        file.open(out);
        if (!file) {
            std::cerr << "cannot write " << out << "\n";
            return 2;
        }
        sink = &file;
    }
    *sink << "center_x,center_y,radius\n";
    char buf[128];
    for (const VacancyCircle& v : found) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", v.center.x, v.center.y,
                      v.radius);
        *sink << buf;
    }
    return 0;
}

int cmd_bench(const std::string& family, int n_min, int n_max, int runs,
              double time_limit, int threads, const std::string& csv,
              const std::string& log, bool no_core) {
    const auto parsed = parse_family(family);
    if (!parsed) {
        std::cerr << "unknown family: " << family << "\n";
        return 2;
    }
    if (n_max < n_min) {
        std::cerr << "--n-max must be >= --n-min\n";
        return 2;
    }
    std::vector<Instance> instances;
    for (int n = n_min; n <= n_max; ++n) instances.push_back(generate_instance(*parsed, n));

    BenchOptions options;
    options.runs = runs;
    options.time_limit_seconds = time_limit;
    options.threads = threads;
    options.enable_shs_core = !no_core;

    const BenchReport report = bench_run(instances, options);
    write_bench_csv(report.rows, csv);
    if (!log.empty()) write_run_log_csv(report.log, log);

    std::printf("%-20s %5s %14s %14s %14s %6s %10s\n", "instance", "runs", "best", "avg",
                "worst", "SR", "t_final");
    for (const BenchSummary& s : report.summaries)
        std::printf("%-20s %5d %14.8f %14.8f %14.8f %6.2f %10.3f\n", s.instance.c_str(),
                    s.runs, s.best, s.avg, s.worst, s.success_rate, s.mean_time_to_final);
    return 0;
}

int cmd_rtd(const std::string& log, double target, int n_runs, const std::string& out) {
    const std::vector<RunLogRow> rows = read_run_log_csv(log);
    const RtdCurve curve = rtd(success_times_from_log(rows, target), n_runs);

    std::ofstream file(out);
    if (!file) {
        std::cerr << "cannot write " << out << "\n";
        return 2;
    }
    file << "t_seconds,p\n";
    char buf[96];
    for (size_t i = 0; i < curve.times.size(); ++i) {
        if (i + 1 < curve.times.size() && curve.times[i + 1] == curve.times[i]) continue;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", curve.times[i],
                      curve.value(curve.times[i]));
        file << buf;
    }
    std::printf("%zu of %d runs reached %.15g\n", curve.times.size(), n_runs, target);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unequal circle packing: minimal enclosing container search"};
    app.require_subcommand(1);

    std::string gen_family, gen_out;
    int gen_n = 0;
    CLI::App* gen = app.add_subcommand("gen", "generate a radius family instance");
    gen->add_option("--family", gen_family,
                    "linear | inv_sqrt | sqrt | inv_two_thirds | inv_fifth")
        ->required();
    gen->add_option("--n", gen_n, "circle count")->required()->check(CLI::PositiveNumber);
    gen->add_option("--out", gen_out, "instance file to write")->required();

    std::string solve_instance, solve_out, solve_svg;
    double solve_time_limit = 0.0;
    uint64_t solve_seed = 0, solve_iter_budget = 0;
    bool solve_no_core = false;
    CLI::App* solve = app.add_subcommand("solve", "search for a dense packing");
    solve->add_option("--instance", solve_instance)->required();
    solve->add_option("--time-limit", solve_time_limit, "wall clock budget in seconds")
        ->required()
        ->check(CLI::PositiveNumber);
    solve->add_option("--seed", solve_seed, "random seed")->required();
    solve->add_option("--out", solve_out, "solution file to write")->required();
    solve->add_option("--svg", solve_svg, "also render the result");
    solve->add_flag("--no-shs-core", solve_no_core,
                    "disable the hash-deduplicated core search (greedy only)");
    solve->add_option("--iter-budget", solve_iter_budget,
                      "deterministic budget: stop after this many layout "
                      "optimizations instead of the wall clock");

    std::string verify_instance, verify_solution_path;
    double verify_tol = 1e-9;
    CLI::App* verify = app.add_subcommand("verify", "check a solution file");
    verify->add_option("--instance", verify_instance)->required();
    verify->add_option("--solution", verify_solution_path)->required();
    verify->add_option("--tol", verify_tol, "max permitted overlap depth");

    std::string render_instance, render_solution, render_out;
    CLI::App* render = app.add_subcommand("render", "draw a solution as SVG");
    render->add_option("--instance", render_instance)->required();
    render->add_option("--solution", render_solution)->required();
    render->add_option("--out", render_out)->required();

    std::string vac_instance, vac_solution, vac_out;
    CLI::App* vacancies =
        app.add_subcommand("vacancies", "list largest empty circles of a solution");
    vacancies->add_option("--instance", vac_instance)->required();
    vacancies->add_option("--solution", vac_solution)->required();
    vacancies->add_option("--out", vac_out, "CSV to write (default: stdout)");

    std::string bench_family, bench_csv, bench_log;
    int bench_n_min = 0, bench_n_max = 0, bench_runs = 0, bench_threads = 1;
    double bench_time_limit = 0.0;
    bool bench_no_core = false;
    CLI::App* bench = app.add_subcommand("bench", "multi seed campaign over a family");
    bench->add_option("--family", bench_family)->required();
    bench->add_option("--n-min", bench_n_min)->required()->check(CLI::PositiveNumber);
    bench->add_option("--n-max", bench_n_max)->required()->check(CLI::PositiveNumber);
    bench->add_option("--runs", bench_runs)->required()->check(CLI::PositiveNumber);
    bench->add_option("--time-limit", bench_time_limit, "seconds per run")
        ->required()
        ->check(CLI::PositiveNumber);
    bench->add_option("--threads", bench_threads, "parallel solves")
        ->check(CLI::PositiveNumber);
    bench->add_option("--csv", bench_csv, "per run results")->required();
    bench->add_option("--log", bench_log, "also write the improvement event log");
    bench->add_flag("--no-shs-core", bench_no_core,
                    "disable the hash-deduplicated core search in every run");

    std::string rtd_log, rtd_out;
    double rtd_target = 0.0;
    int rtd_runs = 0;
    CLI::App* rtd_cmd =
        app.add_subcommand("rtd", "run time distribution from an improvement log");
    rtd_cmd->add_option("--log", rtd_log, "improvement event CSV")->required();
    rtd_cmd->add_option("--target", rtd_target, "radius counted as success")->required();
    rtd_cmd->add_option("--n-runs", rtd_runs, "total runs behind the log")
        ->required()
        ->check(CLI::PositiveNumber);
    rtd_cmd->add_option("--out", rtd_out, "step function CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_family, gen_n, gen_out);
        if (solve->parsed())
            return cmd_solve(solve_instance, solve_time_limit, solve_seed, solve_out,
                             solve_svg, solve_no_core, solve_iter_budget);
        if (verify->parsed())
            return cmd_verify(verify_instance, verify_solution_path, verify_tol);
        if (render->parsed()) return cmd_render(render_instance, render_solution, render_out);
        if (vacancies->parsed()) return cmd_vacancies(vac_instance, vac_solution, vac_out);
        if (bench->parsed())
            return cmd_bench(bench_family, bench_n_min, bench_n_max, bench_runs,
                             bench_time_limit, bench_threads, bench_csv, bench_log,
                             bench_no_core);
        if (rtd_cmd->parsed())
            return cmd_rtd(rtd_log, rtd_target, rtd_runs, rtd_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
