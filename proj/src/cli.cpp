#include "singfde/cli.hpp"

#include "singfde/config.hpp"
#include "singfde/criteria.hpp"
#include "singfde/sharpness.hpp"
#include "singfde/solver.hpp"
#include "singfde/weighted.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

namespace singfde::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRefused = 2;
constexpr int kExitNotConverged = 3;

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError(0, "cannot write to '" + path + "'");
    out << content;
}

void write_json(const std::string& path, const ordered_json& j)
{
    write_file(path, j.dump(2) + "\n");
}

std::string solution_csv(const GridFunction& x)
{
    std::string out = "t,x\n";
    for (Eigen::Index i = 0; i < x.node_count(); ++i)
        out += fmt(x.mesh().node(i)) + "," + fmt(x.value(i)) + "\n";
    return out;
}

ordered_json report_json(const SolveReport& report)
{
    ordered_json j;
    j["converged"] = report.converged;
    j["refused"] = report.refused;
    j["residual"] = report.residual_l1;
    j["iterations"] = report.iterations;
    j["used_collocation"] = report.used_collocation;
    if (std::isnan(report.min_singular_value))
        j["min_singular_value"] = nullptr;
    else
        j["min_singular_value"] = report.min_singular_value;
    switch (report.space.kind) {
    case SpaceTag::Kind::d_plus:
        j["space"] = "D+";
        break;
    case SpaceTag::Kind::d_minus:
        j["space"] = "D-";
        break;
    case SpaceTag::Kind::weighted_linf:
        j["space"] = "weighted-Linf";
        break;
    default:
        j["space"] = "AC";
        break;
    }
    j["k"] = report.space.k;
    j["diagnostic"] = report.diagnostic;
    return j;
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<int> mesh_n;
    std::optional<double> grading;
    std::optional<double> tol;
};

void apply_overrides(ProblemConfig& cfg, const CommonFlags& flags)
{
    if (flags.mesh_n)
        cfg.mesh_n = *flags.mesh_n;
    if (flags.grading)
        cfg.grading = *flags.grading;
    if (flags.tol)
        cfg.tol = *flags.tol;
    if (!flags.out_path.empty())
        cfg.out_solution = flags.out_path;
}

SolveReport dispatch_solve(const ProblemConfig& cfg)
{
    GradedMesh mesh = config_mesh(cfg);
    SingularCoefficient p = config_coefficient(cfg);
    RegularOperator T = config_operator(cfg);
    GridFunction f = config_data(cfg, mesh);
    std::optional<WeightFunction> nu = config_weight(cfg);

    if (nu) {
        WeightedProblem prob{cfg.k, p, *nu, T, f, cfg.c.value_or(0.0), cfg.nu_on_operator};
        if (cfg.mode == SolveMode::collocation)
            throw ConfigError(0, "collocation mode is not available for weighted problems");
        if (cfg.k > 0.0) {
            if (cfg.c)
                throw ConfigError(0, "c is not allowed for k > 0");
            return solve_weighted_plus(prob, cfg.tol);
        }
        double alpha = cfg.alpha ? *cfg.alpha : largest_admissible_alpha(prob);
        if (alpha <= 0.0) {
            SolveReport report{GridFunction::zero(mesh)};
            report.refused = true;
            report.diagnostic = "no admissible alpha found";
            return report;
        }
        return solve_weighted_minus(prob, alpha, cfg.tol);
    }

    if (cfg.alpha)
        throw ConfigError(0, "alpha requires a weighted problem (set nu)");
    if (cfg.k > 0.0) {
        if (cfg.c)
            throw ConfigError(0, "c is not allowed for k > 0");
        return solve_cauchy_plus(cfg.k, p, T, f, cfg.tol, cfg.mode);
    }
    if (!cfg.c)
        throw ConfigError(0, "k < 0 needs the right endpoint value c");
    return solve_bvp_minus(cfg.k, p, T, f, *cfg.c, cfg.tol, cfg.mode);
}

int cmd_solve(const CommonFlags& flags)
{
    ProblemConfig cfg = load_config(flags.config_path);
    apply_overrides(cfg, flags);
    SolveReport report = dispatch_solve(cfg);

    if (!cfg.out_solution.empty() && !report.refused) {
        if (flags.format == "json") {
            ordered_json j = ordered_json::array();
            for (Eigen::Index i = 0; i < report.solution.node_count(); ++i)
                j.push_back({{"t", report.solution.mesh().node(i)},
                             {"x", report.solution.value(i)}});
            write_json(cfg.out_solution, j);
        } else {
            write_file(cfg.out_solution, solution_csv(report.solution));
        }
    }
    if (!cfg.out_report.empty())
        write_json(cfg.out_report, report_json(report));

    if (report.refused) {
        std::cerr << "refused: " << report.diagnostic << "\n";
        return kExitRefused;
    }
    if (!report.converged) {
        std::cerr << "not converged: residual " << report.residual_l1 << "\n";
        return kExitNotConverged;
    }
    return kExitOk;
}

int cmd_check(const CommonFlags& flags)
{
    ProblemConfig cfg = load_config(flags.config_path);
    SingularCoefficient p = config_coefficient(cfg);
    RegularOperator T = config_operator(cfg);
    std::optional<WeightFunction> nu = config_weight(cfg);

    auto norms = part_norms(T);
    ordered_json j;
    j["k"] = cfg.k;
    j["norm_plus"] = norms.first;
    j["norm_minus"] = norms.second;
    switch (classify_volterra(T)) {
    case VolterraClass::volterra:
        j["volterra"] = "volterra";
        break;
    case VolterraClass::anti_volterra:
        j["volterra"] = "anti_volterra";
        break;
    case VolterraClass::both:
        j["volterra"] = "both";
        break;
    case VolterraClass::neither:
        j["volterra"] = "neither";
        break;
    }
    CriterionVerdict verdict =
        cfg.k > 0.0 ? solvable_plus(norms.first, norms.second)
                    : solvable_minus(norms.first, norms.second);
    j["criterion"] = {{"case", cfg.k > 0.0 ? "plus" : "minus"},
                      {"solvable_for_all", verdict.solvable_for_all},
                      {"boundary", verdict.boundary},
                      {"margin", verdict.margin}};
    if (nu) {
        ExtendedReal gain = weighted_gain(T, *nu);
        CriterionVerdict wv = solvable_weighted(gain, cfg.k);
        j["weighted"] = {{"gain", gain.is_finite() ? ordered_json(gain.value()) : ordered_json(nullptr)},
                         {"solvable", wv.solvable_for_all},
                         {"margin", wv.margin}};
    }
    if (!flags.out_path.empty())
        write_json(flags.out_path, j);
    else
        std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_region(const std::string& case_name, int samples, const std::string& out,
               const std::string& format)
{
    CriterionCase which;
    if (case_name == "plus")
        which = CriterionCase::plus;
    else if (case_name == "minus")
        which = CriterionCase::minus;
    else if (case_name == "nonsingular")
        which = CriterionCase::nonsingular;
    else
        throw ConfigError(0, "unknown case '" + case_name + "'");
    auto boundary = region_boundary(which, samples);

    if (format == "json") {
        ordered_json j = ordered_json::array();
        for (const auto& [tp, tm] : boundary)
            j.push_back({{"t_plus", tp}, {"t_minus", tm}, {"case", case_name}});
        if (!out.empty())
            write_json(out, j);
        else
            std::cout << j.dump(2) << "\n";
        return kExitOk;
    }
    std::string csv = "t_plus,t_minus,case\n";
    for (const auto& [tp, tm] : boundary)
        csv += fmt(tp) + "," + fmt(tm) + "," + case_name + "\n";
    if (!out.empty())
        write_file(out, csv);
    else
        std::cout << csv;
    return kExitOk;
}

ordered_json config_to_json(const TwoPointConfig& cfg)
{
    return {{"t1", cfg.t1},
            {"t2", cfg.t2},
            {"mass_plus_1", cfg.mass_plus_1},
            {"mass_plus_2", cfg.mass_plus_2},
            {"mass_minus_1", cfg.mass_minus_1},
            {"mass_minus_2", cfg.mass_minus_2},
            {"conc_plus", cfg.conc_plus},
            {"conc_minus", cfg.conc_minus}};
}

int cmd_sharpness(const std::string& case_name, double t_plus, double t_minus, int resolution,
                  const std::string& out)
{
    if (case_name != "plus" && case_name != "minus")
        throw ConfigError(0, "sharpness case must be plus or minus");
    const ProblemSign sign = case_name == "plus" ? ProblemSign::plus : ProblemSign::minus;
    const double k = sign == ProblemSign::plus ? 1.0 : -1.0;
    if (t_plus < 0.0 || t_minus < 0.0)
        throw ConfigError(0, "norms must be nonnegative");
    if (resolution < 8)
        throw ConfigError(0, "resolution must be at least 8");

    Delta1Minimum minimum = minimize_delta1(sign, k, t_plus, t_minus, resolution);
    const double closed_form = sign == ProblemSign::plus
                                   ? 1.0 - t_plus - 0.25 * t_minus * t_minus
                                   : 1.0 - t_minus - 0.25 * t_plus * t_plus;

    ordered_json j;
    j["case"] = case_name;
    j["norm_plus"] = t_plus;
    j["norm_minus"] = t_minus;
    j["resolution"] = resolution;
    j["closed_form_minimum"] = closed_form;
    j["searched_minimum"] = minimum.value;
    j["gap"] = std::abs(minimum.value - closed_form);
    j["argmin"] = config_to_json(minimum.argmin);

    // Conditioning of the discretized problem against the concentrated
    // extremal placement, for a shrinking family of bump widths.
    TwoPointConfig extremal = extremal_config(sign, t_plus, t_minus);
    ordered_json table = ordered_json::array();
    GradedMesh mesh = GradedMesh::graded(256, 2.0);
    for (double eps : {0.1, 0.05, 0.025}) {
        WitnessOperator witness = build_witness(sign, k, extremal, eps);
        auto diag = collocation_diagnostic(sign, k, SingularCoefficient::power_law(1.0),
                                           witness.op, mesh);
        double dfull = delta_full(sign, k, witness.p1, witness.p2, witness.t1, witness.t2);
        table.push_back({{"eps", eps},
                         {"delta_full", dfull},
                         {"min_singular_value", diag.min_singular_value},
                         {"matrix_dim", diag.matrix_dim}});
    }
    j["witness_conditioning"] = table;

    if (!out.empty())
        write_json(out, j);
    else
        std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_converge(const CommonFlags& flags, std::vector<int> mesh_list)
{
    if (mesh_list.size() < 3)
        throw ConfigError(0, "converge needs at least 3 mesh sizes");
    ProblemConfig cfg = load_config(flags.config_path);
    if (cfg.nu_kind != ProblemConfig::NuKind::none)
        throw ConfigError(0, "converge supports unweighted problems only");

    std::sort(mesh_list.begin(), mesh_list.end());

    // Reference on a mesh 4x finer than the largest request.
    ProblemConfig ref_cfg = cfg;
    ref_cfg.mesh_n = mesh_list.back() * 4;
    SolveReport ref = dispatch_solve(ref_cfg);
    if (!ref.converged)
        throw ConfigError(0, "reference solve did not converge");

    const int probes = 1001;
    std::vector<double> errors;
    for (int n : mesh_list) {
        ProblemConfig run_cfg = cfg;
        run_cfg.mesh_n = n;
        SolveReport run = dispatch_solve(run_cfg);
        double err = 0.0;
        for (int i = 0; i <= probes - 1; ++i) {
            double t = static_cast<double>(i) / (probes - 1);
            err = std::max(err, std::abs(run.solution(t) - ref.solution(t)));
        }
        errors.push_back(err);
    }

    std::string csv = "N,error,order\n";
    for (size_t i = 0; i < mesh_list.size(); ++i) {
        csv += std::to_string(mesh_list[i]) + "," + fmt(errors[i]) + ",";
        if (i > 0 && errors[i] > 0.0 && errors[i - 1] > 0.0) {
            double order = std::log(errors[i - 1] / errors[i])
                           / std::log(static_cast<double>(mesh_list[i]) / mesh_list[i - 1]);
            csv += fmt(order);
        }
        csv += "\n";
    }
    if (!flags.out_path.empty())
        write_file(flags.out_path, csv);
    else
        std::cout << csv;
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv)
{
    CLI::App app{"singular functional differential equation toolkit"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string case_name = "plus";
    int samples = 33;
    int resolution = 128;
    double t_plus = 0.0, t_minus = 0.0;
    std::string mesh_list_text = "64,128,256,512";

    auto add_common = [&](CLI::App* cmd, bool with_config) {
        if (with_config)
            cmd->add_option("--config", flags.config_path, "problem description file")->required();
        cmd->add_option("--out", flags.out_path, "output path");
        cmd->add_option("--format", flags.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--mesh", flags.mesh_n, "mesh segment count override");
        cmd->add_option("--grading", flags.grading, "mesh grading override");
        cmd->add_option("--tol", flags.tol, "tolerance override");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve the configured problem");
    add_common(solve, true);

    CLI::App* check = app.add_subcommand("check", "criteria and gain without solving");
    add_common(check, true);

    CLI::App* region = app.add_subcommand("region", "solvability frontier samples");
    region->add_option("--case", case_name, "plus, minus or nonsingular")->required();
    region->add_option("--samples", samples, "number of frontier samples");
    region->add_option("--out", flags.out_path, "output path");
    region->add_option("--format", flags.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* sharp = app.add_subcommand("sharpness", "extremal determinant search");
    sharp->add_option("--case", case_name, "plus or minus")->required();
    sharp->add_option("--tplus", t_plus, "positive part norm")->required();
    sharp->add_option("--tminus", t_minus, "negative part norm")->required();
    sharp->add_option("--resolution", resolution, "grid resolution");
    sharp->add_option("--out", flags.out_path, "output path");

    CLI::App* converge = app.add_subcommand("converge", "empirical convergence table");
    add_common(converge, true);
    converge->add_option("--meshes", mesh_list_text, "comma-separated mesh sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (solve->parsed())
            return cmd_solve(flags);
        if (check->parsed())
            return cmd_check(flags);
        if (region->parsed()) {
            if (samples < 2)
                throw ConfigError(0, "samples must be at least 2");
            return cmd_region(case_name, samples, flags.out_path, flags.format);
        }
        if (sharp->parsed())
            return cmd_sharpness(case_name, t_plus, t_minus, resolution, flags.out_path);
        if (converge->parsed()) {
            std::vector<int> meshes;
            std::istringstream iss(mesh_list_text);
            std::string item;
            while (std::getline(iss, item, ','))
                if (!item.empty())
                    meshes.push_back(std::stoi(item));
            return cmd_converge(flags, std::move(meshes));
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

} // namespace singfde::cli
