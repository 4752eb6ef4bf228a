#include "singfde/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace singfde {

namespace {

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& s, int line)
{
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size())
            throw ConfigError(line, "trailing characters after number '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + s + "'");
    }
}

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_table_ref(const std::string& s)
{
    return s.rfind("table(", 0) == 0 && s.back() == ')';
}

std::string table_path(const std::string& s)
{
    return s.substr(6, s.size() - 7);
}

GridFunction load_table(const std::string& path, int line)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(line, "cannot open table file '" + path + "'");
    std::vector<double> ts, vs;
    std::string row;
    while (std::getline(in, row)) {
        row = trim(row);
        if (row.empty() || row[0] == '#')
            continue;
        std::replace(row.begin(), row.end(), ',', ' ');
        std::istringstream iss(row);
        double t, v;
        if (!(iss >> t >> v))
            throw ConfigError(line, "bad row in table file '" + path + "'");
        ts.push_back(t);
        vs.push_back(v);
    }
    if (ts.size() < 2)
        throw ConfigError(line, "table file '" + path + "' needs at least 2 rows");
    Eigen::VectorXd nodes = Eigen::Map<Eigen::VectorXd>(ts.data(), static_cast<Eigen::Index>(ts.size()));
    Eigen::VectorXd values = Eigen::Map<Eigen::VectorXd>(vs.data(), static_cast<Eigen::Index>(vs.size()));
    try {
        return GridFunction(GradedMesh::with_nodes(nodes), values);
    } catch (const std::exception& e) {
        throw ConfigError(line, std::string("table file '") + path + "': " + e.what());
    }
}

KernelTerm load_kernel_table(const std::string& path, int line)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(line, "cannot open kernel table '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string row;
    while (std::getline(in, row)) {
        row = trim(row);
        if (row.empty() || row[0] == '#')
            continue;
        std::replace(row.begin(), row.end(), ',', ' ');
        std::istringstream iss(row);
        std::vector<double> vals;
        double v;
        while (iss >> v)
            vals.push_back(v);
        if (!vals.empty())
            rows.push_back(std::move(vals));
    }
    if (rows.size() < 3)
        throw ConfigError(line, "kernel table '" + path + "' needs a node row and a square matrix");
    size_t n = rows[0].size();
    if (rows.size() != n + 1)
        throw ConfigError(line, "kernel table '" + path + "': expected " + std::to_string(n)
                                    + " matrix rows after the node row");
    Eigen::VectorXd nodes(n);
    for (size_t j = 0; j < n; ++j)
        nodes[static_cast<Eigen::Index>(j)] = rows[0][j];
    Eigen::MatrixXd values(n, n);
    for (size_t i = 0; i < n; ++i) {
        if (rows[i + 1].size() != n)
            throw ConfigError(line, "kernel table '" + path + "': ragged matrix row");
        for (size_t j = 0; j < n; ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i + 1][j];
    }
    try {
        return KernelTerm(GradedMesh::with_nodes(nodes), values);
    } catch (const std::exception& e) {
        throw ConfigError(line, std::string("kernel table '") + path + "': " + e.what());
    }
}

} // namespace

double Expression::operator()(double t) const
{
    double v = 0.0;
    for (const auto& m : monomials)
        v += m.power == 0.0 ? m.coeff : m.coeff * std::pow(t, m.power);
    return v;
}

std::string Expression::text() const
{
    if (monomials.empty())
        return "0";
    std::string out;
    for (size_t i = 0; i < monomials.size(); ++i) {
        const auto& m = monomials[i];
        double c = m.coeff;
        if (i == 0) {
            if (c < 0.0) {
                out += "-";
                c = -c;
            }
        } else {
            out += c < 0.0 ? " - " : " + ";
            c = std::abs(c);
        }
        if (m.power == 0.0) {
            out += format_number(c);
        } else {
            if (c != 1.0)
                out += format_number(c) + "*";
            out += m.power == 1.0 ? "t" : "t^" + format_number(m.power);
        }
    }
    return out;
}

Expression Expression::parse(const std::string& text, int line)
{
    std::string s;
    for (char ch : text)
        if (ch != ' ' && ch != '\t')
            s += ch;
    if (s.empty())
        throw ConfigError(line, "empty expression");

    Expression expr;
    size_t pos = 0;
    while (pos < s.size()) {
        double sign = 1.0;
        while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-')
                sign = -sign;
            ++pos;
        }
        size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-')
            ++end;
        // keep an exponent's sign with its term: "t^-0.5"
        while (end < s.size() && end > 0 && s[end - 1] == '^')
            { ++end; while (end < s.size() && s[end] != '+' && s[end] != '-') ++end; }
        std::string term = s.substr(pos, end - pos);
        pos = end;
        if (term.empty())
            throw ConfigError(line, "dangling sign in expression '" + text + "'");

        Expression::Monomial m;
        m.coeff = sign;
        size_t tpos = term.find('t');
        if (tpos == std::string::npos) {
            m.coeff *= parse_number(term, line);
            m.power = 0.0;
        } else {
            std::string coeff_part = term.substr(0, tpos);
            if (!coeff_part.empty()) {
                if (coeff_part.back() != '*')
                    throw ConfigError(line, "expected '*' before t in '" + term + "'");
                m.coeff *= parse_number(coeff_part.substr(0, coeff_part.size() - 1), line);
            }
            std::string rest = term.substr(tpos + 1);
            if (rest.empty()) {
                m.power = 1.0;
            } else if (rest[0] == '^') {
                m.power = parse_number(rest.substr(1), line);
            } else {
                throw ConfigError(line, "unexpected characters after t in '" + term + "'");
            }
        }
        expr.monomials.push_back(m);
    }
    return expr;
}

namespace {

struct Parser {
    ProblemConfig cfg;
    std::string section;
    bool have_k = false;

    void handle(const std::string& key, const std::string& value, int line)
    {
        if (section == "equation")
            equation(key, value, line);
        else if (section == "operator")
            op(key, value, line);
        else if (section == "data")
            data(key, value, line);
        else if (section == "solver")
            solver(key, value, line);
        else if (section == "output")
            output(key, value, line);
        else
            throw ConfigError(line, "key outside any section");
    }

    void equation(const std::string& key, const std::string& value, int line)
    {
        if (key == "k") {
            cfg.k = parse_number(value, line);
            have_k = true;
        } else if (key == "p") {
            std::istringstream iss(value);
            std::string kind;
            iss >> kind;
            if (kind == "power") {
                std::string mu;
                if (!(iss >> mu))
                    throw ConfigError(line, "p = power needs an exponent");
                cfg.p_mu = parse_number(mu, line);
            } else if (is_table_ref(kind)) {
                cfg.p_table = table_path(kind);
                std::string word;
                while (iss >> word) {
                    if (word == "eps") {
                        std::string v;
                        iss >> v;
                        cfg.p_eps = parse_number(v, line);
                    } else if (word == "tail") {
                        std::string v;
                        iss >> v;
                        cfg.p_tail_mu = parse_number(v, line);
                    } else {
                        throw ConfigError(line, "unknown p option '" + word + "'");
                    }
                }
                if (cfg.p_eps <= 0.0)
                    throw ConfigError(line, "tabulated p needs eps > 0");
            } else {
                throw ConfigError(line, "p must be 'power <mu>' or 'table(path) eps E tail M'");
            }
        } else if (key == "nu") {
            std::istringstream iss(value);
            std::string kind;
            iss >> kind;
            if (kind == "log") {
                cfg.nu_kind = ProblemConfig::NuKind::log;
            } else if (kind == "power") {
                std::string r;
                if (!(iss >> r))
                    throw ConfigError(line, "nu = power needs an exponent");
                cfg.nu_kind = ProblemConfig::NuKind::power;
                cfg.nu_power = parse_number(r, line);
            } else {
                throw ConfigError(line, "nu must be 'power <r>' or 'log'");
            }
        } else if (key == "nu_on_operator") {
            if (value == "true")
                cfg.nu_on_operator = true;
            else if (value == "false")
                cfg.nu_on_operator = false;
            else
                throw ConfigError(line, "nu_on_operator must be true or false");
        } else {
            throw ConfigError(line, "unknown [equation] key '" + key + "'");
        }
    }

    void op(const std::string& key, const std::string& value, int line)
    {
        if (key == "point") {
            // point q = <expr|table> h = <const|expr>
            size_t qpos = value.find("q=");
            size_t hpos = value.find("h=");
            if (qpos == std::string::npos || hpos == std::string::npos || hpos < qpos)
                throw ConfigError(line, "point term needs 'q = ... h = ...'");
            PointTermSpec spec;
            spec.q = trim(value.substr(qpos + 2, hpos - qpos - 2));
            spec.h = trim(value.substr(hpos + 2));
            if (spec.q.empty() || spec.h.empty())
                throw ConfigError(line, "empty q or h in point term");
            cfg.point_terms.push_back(std::move(spec));
        } else if (key == "kernel") {
            size_t kpos = value.find("K=");
            std::string ref = trim(kpos == std::string::npos ? value : value.substr(kpos + 2));
            if (!is_table_ref(ref))
                throw ConfigError(line, "kernel term needs 'K = table(path)'");
            cfg.kernel_terms.push_back(KernelTermSpec{table_path(ref)});
        } else {
            throw ConfigError(line, "unknown [operator] key '" + key + "'");
        }
    }

    void data(const std::string& key, const std::string& value, int line)
    {
        if (key == "f") {
            if (!is_table_ref(value))
                Expression::parse(value, line); // validate now
            cfg.f = value;
        } else if (key == "c") {
            cfg.c = parse_number(value, line);
        } else {
            throw ConfigError(line, "unknown [data] key '" + key + "'");
        }
    }

    void solver(const std::string& key, const std::string& value, int line)
    {
        if (key == "N") {
            cfg.mesh_n = static_cast<int>(parse_number(value, line));
            if (cfg.mesh_n < 2)
                throw ConfigError(line, "N must be at least 2");
        } else if (key == "gamma") {
            cfg.grading = parse_number(value, line);
            if (cfg.grading < 1.0)
                throw ConfigError(line, "gamma must be at least 1");
        } else if (key == "tol") {
            cfg.tol = parse_number(value, line);
            if (!(cfg.tol > 0.0))
                throw ConfigError(line, "tol must be positive");
        } else if (key == "mode") {
            if (value == "auto")
                cfg.mode = SolveMode::automatic;
            else if (value == "picard")
                cfg.mode = SolveMode::picard;
            else if (value == "collocation")
                cfg.mode = SolveMode::collocation;
            else
                throw ConfigError(line, "mode must be auto, picard or collocation");
        } else if (key == "alpha") {
            cfg.alpha = parse_number(value, line);
            if (!(*cfg.alpha > 0.0 && *cfg.alpha <= 1.0))
                throw ConfigError(line, "alpha must lie in (0, 1]");
        } else {
            throw ConfigError(line, "unknown [solver] key '" + key + "'");
        }
    }

    void output(const std::string& key, const std::string& value, int line)
    {
        if (key == "solution")
            cfg.out_solution = value;
        else if (key == "report")
            cfg.out_report = value;
        else
            throw ConfigError(line, "unknown [output] key '" + key + "'");
    }
};

} // namespace

ProblemConfig parse_config(const std::string& text)
{
    Parser parser;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = trim(line.substr(0, hash));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(line_no, "unterminated section header");
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name != "equation" && name != "operator" && name != "data" && name != "solver" &&
                name != "output")
                throw ConfigError(line_no, "unknown section [" + name + "]");
            parser.section = name;
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        // point terms contain '=' inside the value; re-split on the first
        // token instead.
        if (parser.section == "operator") {
            std::istringstream iss(line);
            std::string first;
            iss >> first;
            if (first == "point" || first == "kernel") {
                std::string rest = trim(line.substr(first.size()));
                std::string packed;
                for (char ch : rest)
                    if (ch != ' ' && ch != '\t')
                        packed += ch;
                parser.handle(first, packed, line_no);
                continue;
            }
        }
        if (key.empty() || value.empty())
            throw ConfigError(line_no, "expected 'key = value'");
        parser.handle(key, value, line_no);
    }
    if (!parser.have_k)
        throw ConfigError(0, "[equation] must set k");
    if (parser.cfg.k == 0.0)
        throw ConfigError(0, "k must be nonzero");
    return parser.cfg;
}

ProblemConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ProblemConfig& cfg)
{
    std::ostringstream out;
    out << "[equation]\n";
    out << "k = " << format_number(cfg.k) << "\n";
    if (cfg.p_table.empty())
        out << "p = power " << format_number(cfg.p_mu) << "\n";
    else
        out << "p = table(" << cfg.p_table << ") eps " << format_number(cfg.p_eps) << " tail "
            << format_number(cfg.p_tail_mu) << "\n";
    if (cfg.nu_kind == ProblemConfig::NuKind::log)
        out << "nu = log\n";
    else if (cfg.nu_kind == ProblemConfig::NuKind::power)
        out << "nu = power " << format_number(cfg.nu_power) << "\n";
    if (cfg.nu_kind != ProblemConfig::NuKind::none)
        out << "nu_on_operator = " << (cfg.nu_on_operator ? "true" : "false") << "\n";

    if (!cfg.point_terms.empty() || !cfg.kernel_terms.empty()) {
        out << "[operator]\n";
        for (const auto& t : cfg.point_terms)
            out << "point q = " << t.q << " h = " << t.h << "\n";
        for (const auto& t : cfg.kernel_terms)
            out << "kernel K = table(" << t.table << ")\n";
    }

    out << "[data]\n";
    out << "f = " << cfg.f << "\n";
    if (cfg.c)
        out << "c = " << format_number(*cfg.c) << "\n";

    out << "[solver]\n";
    out << "N = " << cfg.mesh_n << "\n";
    out << "gamma = " << format_number(cfg.grading) << "\n";
    out << "tol = " << format_number(cfg.tol) << "\n";
    out << "mode = "
        << (cfg.mode == SolveMode::automatic
                ? "auto"
                : cfg.mode == SolveMode::picard ? "picard" : "collocation")
        << "\n";
    if (cfg.alpha)
        out << "alpha = " << format_number(*cfg.alpha) << "\n";

    if (!cfg.out_solution.empty() || !cfg.out_report.empty()) {
        out << "[output]\n";
        if (!cfg.out_solution.empty())
            out << "solution = " << cfg.out_solution << "\n";
        if (!cfg.out_report.empty())
            out << "report = " << cfg.out_report << "\n";
    }
    return out.str();
}

GradedMesh config_mesh(const ProblemConfig& cfg)
{
    return GradedMesh::graded(cfg.mesh_n, cfg.grading);
}

SingularCoefficient config_coefficient(const ProblemConfig& cfg)
{
    if (cfg.p_table.empty())
        return SingularCoefficient::power_law(cfg.p_mu);
    GridFunction table = load_table(cfg.p_table, 0);
    return SingularCoefficient::tabulated(table, cfg.p_eps, cfg.p_tail_mu);
}

std::optional<WeightFunction> config_weight(const ProblemConfig& cfg)
{
    switch (cfg.nu_kind) {
    case ProblemConfig::NuKind::none:
        return std::nullopt;
    case ProblemConfig::NuKind::log:
        return WeightFunction::log_weight();
    case ProblemConfig::NuKind::power:
        return WeightFunction::power(cfg.nu_power);
    }
    return std::nullopt;
}

namespace {

GridFunction grid_from_source(const std::string& source, const GradedMesh& mesh)
{
    if (is_table_ref(source))
        return load_table(table_path(source), 0);
    Expression expr = Expression::parse(source, 0);
    return GridFunction::sample(mesh, [&](double t) { return expr(t); });
}

} // namespace

RegularOperator config_operator(const ProblemConfig& cfg)
{
    GradedMesh mesh = config_mesh(cfg);
    std::vector<PointTerm> points;
    for (const auto& spec : cfg.point_terms) {
        GridFunction q = grid_from_source(spec.q, mesh);
        // A bare number is a constant deviation; anything else is sampled.
        bool numeric = spec.h.find('t') == std::string::npos && !is_table_ref(spec.h);
        if (numeric) {
            double theta = parse_number(spec.h, 0);
            if (theta < 0.0 || theta > 1.0)
                throw ConfigError(0, "point deviation must lie in [0, 1]");
            points.push_back(PointTerm{std::move(q), theta});
        } else {
            GridFunction h = grid_from_source(spec.h, mesh);
            for (Eigen::Index j = 0; j < h.node_count(); ++j)
                if (h.value(j) < 0.0 || h.value(j) > 1.0)
                    throw ConfigError(0, "point deviation must map into [0, 1]");
            points.push_back(PointTerm{std::move(q), std::move(h)});
        }
    }
    std::vector<KernelTerm> kernels;
    for (const auto& spec : cfg.kernel_terms)
        kernels.push_back(load_kernel_table(spec.table, 0));
    return RegularOperator(std::move(points), std::move(kernels));
}

GridFunction config_data(const ProblemConfig& cfg, const GradedMesh& mesh)
{
    return grid_from_source(cfg.f, mesh);
}

} // namespace singfde
