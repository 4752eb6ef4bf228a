#pragma once

#include "singfde/coefficient.hpp"
#include "singfde/mesh.hpp"
#include "singfde/operators.hpp"
#include "singfde/solver.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace singfde {

/// Configuration error with the 1-based line it was found on (0 when the
/// error is not tied to a line).
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line)
    {
    }

    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Sum of coeff * t^power monomials; the restricted expression grammar of
/// the config format (constants, t, t^r and their linear combinations).
struct Expression {
    struct Monomial {
        double coeff = 0.0;
        double power = 0.0;
    };
    std::vector<Monomial> monomials;

    double operator()(double t) const;
    std::string text() const;

    static Expression parse(const std::string& text, int line = 0);
};

struct PointTermSpec {
    std::string q;  // expression or table(path)
    std::string h;  // constant or expression
};

struct KernelTermSpec {
    std::string table; // path of the kernel table file
};

/// Parsed problem description (file format documented in the README):
/// bracketed sections with key = value lines; unknown keys are errors.
struct ProblemConfig {
    // [equation]
    double k = 0.0;
    double p_mu = 1.0;
    std::string p_table;     // empty for the power-law coefficient
    double p_eps = 0.0;      // table split point
    double p_tail_mu = 1.0;  // table tail exponent
    enum class NuKind { none, power, log } nu_kind = NuKind::none;
    double nu_power = 1.0;
    bool nu_on_operator = true;

    // [operator]
    std::vector<PointTermSpec> point_terms;
    std::vector<KernelTermSpec> kernel_terms;

    // [data]
    std::string f = "0";
    std::optional<double> c;

    // [solver]
    int mesh_n = 512;
    double grading = 2.0;
    double tol = 1e-8;
    SolveMode mode = SolveMode::automatic;
    std::optional<double> alpha;

    // [output]
    std::string out_solution;
    std::string out_report;
};

ProblemConfig parse_config(const std::string& text);
ProblemConfig load_config(const std::string& path);
std::string serialize_config(const ProblemConfig& cfg);

GradedMesh config_mesh(const ProblemConfig& cfg);
SingularCoefficient config_coefficient(const ProblemConfig& cfg);
std::optional<WeightFunction> config_weight(const ProblemConfig& cfg);
RegularOperator config_operator(const ProblemConfig& cfg);
GridFunction config_data(const ProblemConfig& cfg, const GradedMesh& mesh);

} // namespace singfde
