// Command-line front end: design search, synthesis, baseline generation,
// regression-recovery evaluation, and coverage reports over a workspace.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "covdesign/baselines.hpp"
#include "covdesign/design_search.hpp"
#include "covdesign/eval.hpp"
#include "covdesign/generators.hpp"
#include "covdesign/gp.hpp"
#include "covdesign/io.hpp"
#include "covdesign/synthesis.hpp"
#include "covdesign/workspace.hpp"

namespace fs = std::filesystem;
using namespace covdesign;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNumerical = 4;

struct GlobalArgs {
    std::string workspace;
    std::string config_file;
    std::uint64_t seed = 1;
    io::RunConfig config;

    io::Workspace open_workspace() const { return io::Workspace(workspace); }
};

std::string join_args(int argc, char** argv) {
    std::string joined;
    for (int i = 0; i < argc; ++i) {
        if (i) joined += ' ';
        joined += argv[i];
    }
    return joined;
}

PcfFamily parse_family(const std::string& name) {
    if (name == "pds") return PcfFamily::kPds;
    if (name == "sfsd") return PcfFamily::kSfsd;
    if (name == "proposed") return PcfFamily::kProposed;
    throw std::invalid_argument("unknown family: " + name);
}

// "2..8" or a single value
std::vector<int> parse_d_range(const std::string& text) {
    const auto dots = text.find("..");
    std::vector<int> dims;
    if (dots == std::string::npos) {
        dims.push_back(std::stoi(text));
        return dims;
    }
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("empty dimension range: " + text);
    for (int d = lo; d <= hi; ++d) dims.push_back(d);
    return dims;
}

std::string design_stem(const std::string& family, int n, int d) {
    return "design_" + family + "_n" + std::to_string(n) + "_d" + std::to_string(d);
}

int cmd_design(const GlobalArgs& global, int n, int d, const std::string& family_name,
               const std::string& original_command) {
    DesignSpec spec{n, d};
    const PcfFamily family = parse_family(family_name);
    const auto report =
        search_design(spec, family, global.config.p0_grid(),
                      global.config.oscillation_defaults(),
                      global.config.search_options());

    auto workspace = global.open_workspace();
    const std::string stem = design_stem(family_name, n, d);
    const fs::path params_path = workspace.reports() / (stem + ".params");
    io::write_coverage_report(params_path, report, spec);

    const auto grid = default_radial_grid(spec, global.config.integer("radial.m"));
    const auto profile = pcf_profile(report.params, grid);
    const fs::path pcf_path = workspace.profiles() / (stem + "_pcf.csv");
    io::write_profile_csv(pcf_path, profile);

    const auto k_grid =
        default_spectral_grid(spec, global.config.integer("spectral.m_k"));
    const auto psd = pcf_to_psd(profile, spec.n, spec.d, k_grid);
    const fs::path psd_path = workspace.profiles() / (stem + "_psd.csv");
    io::write_spectrum_csv(psd_path, psd);

    workspace.log(original_command, global.seed, {params_path, pcf_path, psd_path});
    std::cout << "family=" << family_name << " r_min=" << io::format_double(report.params.r_min)
              << " rho=" << io::format_double(report.rho)
              << " feasible=" << (report.feasible ? "true" : "false") << "\n";
    if (!report.feasible) return kExitInfeasible;
    return 0;
}

void write_point_outputs(const io::Workspace& workspace, const std::string& stem,
                         const PointSet& points, const std::string& extra_meta,
                         std::vector<fs::path>& outputs) {
    const fs::path csv_path = workspace.designs() / (stem + ".csv");
    io::write_points_csv(csv_path, points);
    std::string meta;
    meta += "n = " + std::to_string(points.n) + "\n";
    meta += "d = " + std::to_string(points.d) + "\n";
    meta += "method = " + points.meta.method + "\n";
    meta += "seed = " + std::to_string(points.meta.seed) + "\n";
    if (points.n >= 2)
        meta += "min_distance = " + io::format_double(min_pairwise_distance(points)) +
                "\n";
    meta += extra_meta;
    const fs::path meta_path = workspace.designs() / (stem + ".meta");
    io::write_text(meta_path, meta);
    outputs.push_back(csv_path);
    outputs.push_back(meta_path);
}

int cmd_synthesize(const GlobalArgs& global, const std::string& params_file,
                   int iters, const std::string& schedule,
                   const std::string& original_command) {
    const auto stored = io::read_design_params(params_file);
    validate(stored.spec);
    const auto grid =
        default_radial_grid(stored.spec, global.config.integer("radial.m"));
    const auto target = pcf_profile(stored.params, grid);

    SynthesisConfig cfg;
    cfg.t_max = iters > 0 ? iters : global.config.integer("synth.t_max");
    cfg.schedule = schedule == "clr" ? Schedule::kClr : Schedule::kAlr;
    cfg.clr_rate = global.config.number("synth.clr_rate");
    cfg.seed = global.seed;
    cfg.estimator.sigma =
        global.config.number("synth.sigma_scale") * grid.spacing();
    cfg.full_refresh_every = global.config.integer("synth.refresh_every");

    auto [points, trace] = synthesize(target, stored.spec, cfg);

    auto workspace = global.open_workspace();
    const std::string stem = design_stem(family_name(stored.params.family),
                                         stored.spec.n, stored.spec.d) +
                             "_" + schedule + "_seed" + std::to_string(global.seed);
    std::vector<fs::path> outputs;
    std::string extra;
    extra += "r_min_target = " + io::format_double(stored.params.r_min) + "\n";
    extra += "final_objective = " + io::format_double(trace.objective.back()) + "\n";
    extra += "schedule = " + schedule + "\n";
    extra += "iterations = " + std::to_string(cfg.t_max) + "\n";
    write_point_outputs(workspace, stem, points, extra, outputs);

    std::string trace_body = "iter,objective,coverage_objective\n";
    for (std::size_t t = 0; t < trace.objective.size(); ++t) {
        trace_body += std::to_string(t + 1);
        trace_body += ',';
        trace_body += io::format_double(trace.objective[t]);
        trace_body += ',';
        trace_body += io::format_double(trace.coverage_objective[t]);
        trace_body += '\n';
    }
    const fs::path trace_path = workspace.designs() / (stem + "_trace.csv");
    io::write_text(trace_path, trace_body);
    outputs.push_back(trace_path);

    workspace.log(original_command, global.seed, outputs);
    std::cout << "synthesized " << points.n << " points, min_distance="
              << io::format_double(min_pairwise_distance(points))
              << " final_objective=" << io::format_double(trace.objective.back())
              << "\n";
    return 0;
}

int cmd_generate(const GlobalArgs& global, const std::string& method_text, int n,
                 int d, double r_min, int skip, const std::string& original_command) {
    const DesignMethod method = parse_method(method_text);
    DesignSpec spec{n, d};
    validate(spec);

    GeneratorOptions options;
    options.sobol_skip = skip;
    options.dart_r_min = r_min;
    options.dart_max_failures = global.config.integer("dart.max_failures");
    options.synth_iters = global.config.integer("synth.t_max");
    options.search = global.config.search_options();
    options.oscillation = global.config.oscillation_defaults();

    PointSet points;
    if (method == DesignMethod::kSobol) {
        points = sobol(spec, skip);
    } else {
        points = make_generator(method, options)(spec, global.seed);
    }

    auto workspace = global.open_workspace();
    const std::string stem = std::string(method_name(method)) + "_n" +
                             std::to_string(n) + "_d" + std::to_string(d) +
                             "_seed" + std::to_string(global.seed);
    std::vector<fs::path> outputs;
    std::string extra;
    if (method == DesignMethod::kPdsDart && r_min > 0.0)
        extra += "r_min = " + io::format_double(r_min) + "\n";
    if (method == DesignMethod::kSobol)
        extra += "skip = " + std::to_string(skip) + "\n";
    write_point_outputs(workspace, stem, points, extra, outputs);
    workspace.log(original_command, global.seed, outputs);
    std::cout << "generated " << points.n << " points -> " << outputs.front()
              << "\n";
    return 0;
}

int cmd_eval(const GlobalArgs& global, const std::string& kind,
             const std::string& function_name, const std::string& method_text,
             int n, int d, int trials, int init_n, int budget,
             const std::string& original_command) {
    if (trials < 1) throw std::invalid_argument("eval: trials must be >= 1");
    const auto f = make_benchmark(function_name, d);
    const DesignMethod method = parse_method(method_text);

    GeneratorOptions gen_options;
    gen_options.search = global.config.search_options();
    gen_options.oscillation = global.config.oscillation_defaults();
    gen_options.synth_iters = global.config.integer("synth.t_max");
    gen_options.dart_max_failures = global.config.integer("dart.max_failures");
    const auto generator = make_generator(method, gen_options);

    OracleConfig oracle;
    oracle.kind = OracleKind::kKnn;
    oracle.k = global.config.integer("eval.knn_k");
    oracle.trees = global.config.integer("eval.trees");
    oracle.max_depth = global.config.integer("eval.tree_depth");

    auto workspace = global.open_workspace();
    std::vector<fs::path> outputs;
    std::string stem = "eval_" + kind + "_" + function_name + "_" + method_text +
                       "_n" + std::to_string(n) + "_d" + std::to_string(d);

    EvalResult result;
    if (kind == "blind") {
        EvalConfig cfg;
        cfg.oracle = oracle;
        cfg.test_target = global.config.integer("eval.test_target");
        cfg.base_seed = global.seed;
        result = blind_eval(generator, f, n, trials, cfg);
    } else if (kind == "seqopt") {
        SequentialConfig cfg;
        cfg.init_n = init_n;
        cfg.budget = budget;
        cfg.candidate_pool = global.config.integer("seqopt.candidate_pool");
        cfg.gp.length_scale = global.config.number("gp.length_scale");
        cfg.gp.signal_variance = global.config.number("gp.signal_variance");
        cfg.gp.noise_variance = global.config.number("gp.noise_variance");
        cfg.oracle = oracle;
        cfg.test_target = global.config.integer("eval.test_target");
        cfg.base_seed = global.seed;
        const auto outcome = sequential_eval(generator, f, trials, cfg);
        result = outcome.recovery;
        for (int t = 0; t < trials; ++t) {
            std::string body = "iter,best_value\n";
            for (std::size_t i = 0; i < outcome.traces[t].size(); ++i) {
                body += std::to_string(i + 1);
                body += ',';
                body += io::format_double(outcome.traces[t][i]);
                body += '\n';
            }
            const fs::path trace_path =
                workspace.reports() / (stem + "_trial" + std::to_string(t) +
                                       "_trace.csv");
            io::write_text(trace_path, body);
            outputs.push_back(trace_path);
        }
    } else {
        throw std::invalid_argument("eval: kind must be blind or seqopt");
    }

    std::string body = "method,function,d,n,trials,mse_mean,mse_std\n";
    body += method_text + "," + function_name + "," + std::to_string(d) + "," +
            std::to_string(n) + "," + std::to_string(result.trials) + "," +
            io::format_double(result.mse_mean) + "," +
            io::format_double(result.mse_std) + "\n";
    const fs::path result_path = workspace.reports() / (stem + ".csv");
    io::write_text(result_path, body);
    outputs.insert(outputs.begin(), result_path);

    std::string trial_body = "trial,mse\n";
    for (int t = 0; t < result.trials; ++t) {
        trial_body += std::to_string(t);
        trial_body += ',';
        trial_body += io::format_double(result.per_trial[t]);
        trial_body += '\n';
    }
    const fs::path trials_path = workspace.reports() / (stem + "_trials.csv");
    io::write_text(trials_path, trial_body);
    outputs.push_back(trials_path);

    workspace.log(original_command, global.seed, outputs);
    std::cout << "mse_mean=" << io::format_double(result.mse_mean)
              << " mse_std=" << io::format_double(result.mse_std) << "\n";
    return 0;
}

int cmd_report(const GlobalArgs& global, int n, const std::string& d_range,
               const std::string& original_command) {
    const auto dims = parse_d_range(d_range);
    const auto p0_grid = global.config.p0_grid();
    const auto osc = global.config.oscillation_defaults();
    const auto options = global.config.search_options();

    std::string body = "family,d,n,r_min,rho,feasible\n";
    for (const char* family_text : {"pds", "sfsd", "proposed"}) {
        const PcfFamily family = parse_family(family_text);
        for (int d : dims) {
            DesignSpec spec{n, d};
            const auto report = search_design(spec, family, p0_grid, osc, options);
            body += std::string(family_text) + "," + std::to_string(d) + "," +
                    std::to_string(n) + "," +
                    io::format_double(report.params.r_min) + "," +
                    io::format_double(report.rho) + "," +
                    (report.feasible ? "true" : "false") + "\n";
        }
    }
    auto workspace = global.open_workspace();
    const fs::path table_path =
        workspace.reports() /
        ("coverage_n" + std::to_string(n) + "_d" + d_range + ".csv");
    io::write_text(table_path, body);
    workspace.log(original_command, global.seed, {table_path});
    std::cout << body;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverage-based sample designs: search, synthesis, evaluation"};
    app.require_subcommand(1);

    GlobalArgs global;
    const char* env_ws = std::getenv("COVDESIGN_WORKSPACE");
    global.workspace = env_ws ? env_ws : "covdesign-ws";
    app.add_option("--workspace", global.workspace, "workspace directory");
    app.add_option("--config", global.config_file, "run configuration file");
    app.add_option("--seed", global.seed, "base seed");

    auto* design = app.add_subcommand("design", "search optimal family parameters");
    int n = 0, d = 0;
    std::string family = "proposed";
    design->add_option("--n", n, "sample count")->required();
    design->add_option("--d", d, "dimension")->required();
    design->add_option("--family", family, "pds|sfsd|proposed");

    auto* synth = app.add_subcommand("synthesize", "synthesize points for a design");
    std::string params_file;
    int iters = 0;
    std::string schedule = "alr";
    synth->add_option("--params", params_file, "design parameter file")
        ->required()
        ->check(CLI::ExistingFile);
    synth->add_option("--iters", iters, "gradient iterations");
    synth->add_option("--schedule", schedule, "alr|clr")
        ->check(CLI::IsMember({"alr", "clr"}));

    auto* generate = app.add_subcommand("generate", "generate a point set");
    std::string method = "random";
    double r_min = -1.0;
    int skip = 1;
    generate->add_option("--method", method,
                         "random|lhs|sobol|pds-dart|sfsd|proposed")
        ->required();
    generate->add_option("--n", n, "sample count")->required();
    generate->add_option("--d", d, "dimension")->required();
    generate->add_option("--r-min", r_min, "disk radius for pds-dart");
    generate->add_option("--skip", skip, "sobol burn-in");

    auto* eval = app.add_subcommand("eval", "regression-recovery evaluation");
    std::string kind = "blind";
    std::string function_name = "alpine1";
    int trials = 20;
    int init_n = 50;
    int budget = 150;
    eval->add_option("--kind", kind, "blind|seqopt")->required();
    eval->add_option("--function", function_name, "alpine1|ackley");
    eval->add_option("--method", method, "design under test");
    eval->add_option("--n", n, "sample count (blind)");
    eval->add_option("--d", d, "dimension")->required();
    eval->add_option("--trials", trials, "independent realizations");
    eval->add_option("--init", init_n, "initial budget (seqopt)");
    eval->add_option("--budget", budget, "sequential additions (seqopt)");

    auto* report = app.add_subcommand("report", "coverage table across dimensions");
    bool coverage = false;
    std::string d_range = "2..8";
    report->add_flag("--coverage", coverage, "emit the coverage table");
    report->add_option("--n", n, "sample count")->required();
    report->add_option("--d", d_range, "dimension or range lo..hi");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    const std::string command_line = join_args(argc, argv);
    try {
        if (!global.config_file.empty()) global.config.load(global.config_file);
        if (design->parsed()) return cmd_design(global, n, d, family, command_line);
        if (synth->parsed())
            return cmd_synthesize(global, params_file, iters, schedule, command_line);
        if (generate->parsed())
            return cmd_generate(global, method, n, d, r_min, skip, command_line);
        if (eval->parsed())
            return cmd_eval(global, kind, function_name, method, n, d, trials,
                            init_n, budget, command_line);
        if (report->parsed()) {
            if (!coverage)
                throw std::invalid_argument("report: --coverage is required");
            return cmd_report(global, n, d_range, command_line);
        }
    } catch (const infeasible_design_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const partial_design_error& e) {
        std::cerr << "partial design (" << e.achieved() << " points): " << e.what()
                  << "\n";
        return kExitInfeasible;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
