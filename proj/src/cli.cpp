#include "starpde/cli.hpp"

#include "starpde/catalog.hpp"
#include "starpde/finder.hpp"
#include "starpde/generate.hpp"
#include "starpde/parser.hpp"
#include "starpde/series.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace starpde {

namespace {

using nlohmann::json;

struct Emit {
    std::ostream& out;
    std::ostream& err;
    bool as_text = false;

    void report(const json& j, const std::string& summary) const {
        if (as_text) {
            out << summary << "\n";
        } else {
            out << j.dump(2) << "\n";
            err << summary << "\n";
        }
    }
};

struct LoadedSystem {
    std::string source;
    SystemSpec sys;
};

LoadedSystem load_system(const std::string& ref) {
    std::ifstream file(ref);
    if (file.good()) {
        std::ostringstream text;
        text << file.rdbuf();
        SystemDocument doc = parse_system(text.str());
        return {ref, std::move(doc.sys)};
    }
    std::string name = ref;
    bool broken = false;
    if (auto pos = name.rfind(":broken"); pos != std::string::npos && pos + 7 == name.size()) {
        name = name.substr(0, pos);
        broken = true;
    }
    Fixture f = broken ? load_broken_fixture(name) : load_fixture(name);
    if (!f.sys)
        throw Error("fixture " + name + " is numeric-only and has no symbolic system");
    return {ref, std::move(*f.sys)};
}

PointMap parse_point(const std::string& text) {
    PointMap point;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error("point entries look like name=value");
        std::string key = item.substr(0, eq);
        point[key] = std::stod(item.substr(eq + 1));
    }
    if (point.empty()) throw Error("empty point");
    return point;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

json residuals_json(const ResidualForms& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json jr = json::array();
        for (const auto& e : row) jr.push_back(e.str());
        rows.push_back(jr);
    }
    return rows;
}

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

int cmd_check(const std::string& system_ref, const Emit& emit) {
    Timer timer;
    LoadedSystem loaded = load_system(system_ref);
    AdmissibilityVerdict verdict = admissibility(loaded.sys);
    json j{{"schema_version", 1},
           {"command", "check"},
           {"inputs", {{"system", loaded.source}, {"z", loaded.sys.z().as_mu_poly().str()}}},
           {"verdict", verdict.admits}};
    std::string summary;
    if (verdict.admits) {
        summary = "admits *-multiplication: yes";
    } else {
        j["witness"] = {{"row", verdict.row},
                        {"col", verdict.col},
                        {"value", verdict.witness->str()}};
        summary = "admits *-multiplication: no; residual entry (" +
                  std::to_string(verdict.row) + ", " + std::to_string(verdict.col) +
                  ") = " + verdict.witness->str();
    }
    j["timings_ms"] = {{"total", timer.ms()}};
    emit.report(j, summary);
    return verdict.admits ? 0 : 1;
}

int cmd_mul(const std::string& system_ref, const std::string& lhs, const std::string& rhs,
            const Emit& emit) {
    Timer timer;
    LoadedSystem loaded = load_system(system_ref);
    MuPoly a = parse_mu_expression(lhs, loaded.sys.coords());
    MuPoly b = parse_mu_expression(rhs, loaded.sys.coords());
    MuPoly p = star_mul(a, b, loaded.sys.z());
    SolutionVec col = to_solution_vec(p, loaded.sys.z());
    json j{{"schema_version", 1},
           {"command", "mul"},
           {"inputs", {{"system", loaded.source}, {"lhs", lhs}, {"rhs", rhs}}},
           {"values", {{"product", p.str()}, {"column", print_solution(col)}}},
           {"timings_ms", {{"total", timer.ms()}}}};
    emit.report(j, "product: " + print_solution(col));
    return 0;
}

int cmd_pow(const std::string& system_ref, const std::string& base, long exponent,
            const Emit& emit) {
    Timer timer;
    LoadedSystem loaded = load_system(system_ref);
    MuPoly b = parse_mu_expression(base, loaded.sys.coords());
    MuPoly p = star_pow(b, exponent, loaded.sys.z());
    SolutionVec col = to_solution_vec(p, loaded.sys.z());
    json j{{"schema_version", 1},
           {"command", "pow"},
           {"inputs", {{"system", loaded.source}, {"base", base}, {"exp", exponent}}},
           {"values", {{"power", p.str()}, {"column", print_solution(col)}}},
           {"timings_ms", {{"total", timer.ms()}}}};
    emit.report(j, "power: " + print_solution(col));
    return 0;
}

int cmd_verify(const std::string& system_ref, const std::string& solution, const Emit& emit) {
    Timer timer;
    LoadedSystem loaded = load_system(system_ref);
    std::vector<std::string> parts = split(solution, ';');
    if (parts.size() != loaded.sys.m())
        throw Error("expected " + std::to_string(loaded.sys.m()) +
                    " semicolon-separated entries");
    SolutionVec v{{}};
    for (const auto& part : parts)
        v.entries.push_back(parse_rf_expression(part, loaded.sys.coords()));
    ResidualForms r = residuals(loaded.sys, v);
    bool ok = r.all_zero();
    json j{{"schema_version", 1},
           {"command", "verify"},
           {"inputs", {{"system", loaded.source}, {"solution", solution}}},
           {"verdict", ok},
           {"values", {{"residuals", residuals_json(r)}}},
           {"timings_ms", {{"total", timer.ms()}}}};
    emit.report(j, ok ? "solution verified" : "not a solution (nonzero residual forms)");
    return ok ? 0 : 1;
}

int cmd_series(const std::string& system_ref, const std::string& kind,
               const std::string& point_text, const std::string& coeffs_text, double ratio,
               const std::string& mode, double tolerance, const Emit& emit) {
    Timer timer;
    LoadedSystem loaded = load_system(system_ref);
    SeriesSpec spec;
    if (kind == "exp") {
        spec = SeriesSpec::exponential();
    } else if (kind == "sin") {
        spec = SeriesSpec::sine();
    } else if (kind == "cos") {
        spec = SeriesSpec::cosine();
    } else if (kind == "geometric") {
        spec = SeriesSpec::geometric(ratio);
    } else if (kind == "explicit") {
        std::vector<double> cs;
        for (const auto& c : split(coeffs_text, ',')) cs.push_back(std::stod(c));
        spec = SeriesSpec::explicit_coeffs(std::move(cs));
    } else {
        throw Error("unknown series kind '" + kind + "'");
    }
    SeriesOptions opts;
    opts.mode = mode == "relaxed" ? ConvergenceMode::Relaxed : ConvergenceMode::Strict;
    if (tolerance > 0) {
        opts.route_tol = tolerance;
        opts.residual_tol = tolerance;
    }
    PointMap point = parse_point(point_text);
    SpectrumAtPoint s = roots_at_point(loaded.sys.z(), point, opts);
    std::vector<double> value = series_eval(spec, loaded.sys.z(), point, opts);

    json roots = json::array();
    for (const auto& r : s.roots)
        roots.push_back({{"re", r.value.real()},
                         {"im", r.value.imag()},
                         {"multiplicity", r.multiplicity}});
    json j{{"schema_version", 1},
           {"command", "series"},
           {"inputs", {{"system", loaded.source}, {"kind", kind}, {"point", point_text}}},
           {"values", {{"vector", value}, {"roots", roots}}},
           {"convergence",
            {{"mode", mode.empty() ? "strict" : mode},
             {"jordan_ok", s.jordan_ok},
             {"radius", std::isfinite(spec.radius()) ? json(spec.radius()) : json("inf")}}},
           {"timings_ms", {{"total", timer.ms()}}}};
    if (opts.mode == ConvergenceMode::Relaxed) j["convergence"]["regime"] = "unproved";
    std::ostringstream summary;
    summary << "series value: (";
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) summary << ", ";
        summary << value[i];
    }
    summary << ")";
    emit.report(j, summary.str());
    return 0;
}

int cmd_find(const std::string& z_text, const std::string& coords_text, std::size_t k,
             const Emit& emit) {
    Timer timer;
    std::vector<std::string> names = split(coords_text, ',');
    VarsPtr coords = make_vars(names);
    MuPoly zp = parse_mu_expression(z_text, coords);
    if (zp.degree() < 1 ||
        !(zp.coeff(static_cast<std::size_t>(zp.degree())) == RationalFunction::one(coords)))
        throw Error("Z must be monic of degree at least 1");
    std::vector<RationalFunction> lower;
    for (int i = 0; i < zp.degree(); ++i) lower.push_back(zp.coeff(static_cast<std::size_t>(i)));
    MonicZ z(coords, std::move(lower));
    TensorFamily fam = find_A(z, coords->size(), k, coords);

    json basis = json::array();
    std::ostringstream dsl;
    for (std::size_t m = 0; m < fam.basis.size(); ++m) {
        json mats = json::array();
        dsl << "# basis element f" << (m + 1) << "\n";
        for (std::size_t d = 0; d <= fam.k; ++d) {
            json rows = json::array();
            dsl << "A" << d << ": [";
            for (std::size_t r = 0; r < fam.n; ++r) {
                if (r) dsl << ", ";
                dsl << "[";
                json row = json::array();
                for (std::size_t c = 0; c < fam.n; ++c) {
                    if (c) dsl << ", ";
                    row.push_back(fam.basis[m].mat(d).at(r, c).str());
                    dsl << fam.basis[m].mat(d).at(r, c).str();
                }
                dsl << "]";
                rows.push_back(row);
            }
            dsl << "];\n";
            mats.push_back(rows);
        }
        basis.push_back(mats);
    }
    json free_slots = json::array();
    for (std::size_t m = 0; m < fam.dimension(); ++m)
        free_slots.push_back("f" + std::to_string(m + 1));
    json j{{"schema_version", 1},
           {"command", "find"},
           {"inputs", {{"z", z_text}, {"coords", coords_text}, {"k", k}}},
           {"values",
            {{"dimension", fam.dimension()},
             {"free_slots", free_slots},
             {"basis", basis},
             {"dsl", "coords: " + coords_text + ";\nZ: " + z.as_mu_poly().str() + ";\n" +
                         dsl.str()}}},
           {"timings_ms", {{"total", timer.ms()}}}};
    emit.report(j, "family dimension: " + std::to_string(fam.dimension()));
    return 0;
}

int cmd_catalog(const std::string& name, bool broken, const Emit& emit) {
    Timer timer;
    if (name.empty()) {
        json names = json::array();
        for (const auto& n : catalog_names()) names.push_back(n);
        json j{{"schema_version", 1},
               {"command", "catalog"},
               {"values", {{"fixtures", names}}},
               {"timings_ms", {{"total", timer.ms()}}}};
        std::ostringstream summary;
        summary << "fixtures:";
        for (const auto& n : catalog_names()) summary << " " << n;
        emit.report(j, summary.str());
        return 0;
    }
    Fixture f = broken ? load_broken_fixture(name) : load_fixture(name);
    if (!f.sys)
        throw Error("fixture " + name +
                    " is numeric-only (radical coefficients); no DSL form exists");
    std::string header = name + (broken ? "_broken" : "");
    for (auto& c : header)
        if (c == '-') c = '_';
    std::string dsl = print_system(*f.sys, header);
    json solutions = json::array();
    for (const auto& [label, sol] : f.known_solutions)
        solutions.push_back({{"label", label}, {"column", print_solution(sol)}});
    json j{{"schema_version", 1},
           {"command", "catalog"},
           {"inputs", {{"fixture", name}, {"broken", broken}}},
           {"values", {{"dsl", dsl}, {"known_solutions", solutions}}},
           {"timings_ms", {{"total", timer.ms()}}}};
    emit.report(j, dsl);
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact *-multiplication engine for overdetermined linear PDE systems"};
    app.require_subcommand(1);

    std::string format = "json";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

    std::string system_ref, lhs, rhs, base, solution, kind = "exp", point_text, coeffs_text;
    std::string mode = "strict", zxpr, coords_text, fixture_name;
    long exponent = 0;
    double ratio = 1.0, tolerance = 0.0;
    std::size_t kdeg = 1;
    bool broken = false;

    auto* check = app.add_subcommand("check", "decide admissibility of *-multiplication");
    check->add_option("--system", system_ref, "system file or fixture name")->required();

    auto* mul = app.add_subcommand("mul", "star product of two mu-polynomials");
    mul->add_option("--system", system_ref)->required();
    mul->add_option("--lhs", lhs)->required();
    mul->add_option("--rhs", rhs)->required();

    auto* powc = app.add_subcommand("pow", "star power of a mu-polynomial");
    powc->add_option("--system", system_ref)->required();
    powc->add_option("--base", base)->required();
    powc->add_option("--exp", exponent)->required();

    auto* verify = app.add_subcommand("verify", "verify a candidate solution");
    verify->add_option("--system", system_ref)->required();
    verify->add_option("--solution", solution, "semicolon-separated entries")->required();

    auto* series = app.add_subcommand("series", "evaluate a star power series at a point");
    series->add_option("--system", system_ref)->required();
    series->add_option("--kind", kind, "exp|sin|cos|geometric|explicit");
    series->add_option("--point", point_text, "x=0.2,y=0.9")->required();
    series->add_option("--coeffs", coeffs_text, "comma-separated, explicit kind");
    series->add_option("--ratio", ratio, "geometric ratio");
    series->add_option("--mode", mode)->check(CLI::IsMember({"strict", "relaxed"}));
    series->add_option("--tolerance", tolerance, "numeric tolerance override");

    auto* find = app.add_subcommand("find", "solve for admissible tensor families");
    find->add_option("--z", zxpr, "monic mu-polynomial")->required();
    find->add_option("--coords", coords_text, "comma-separated coordinates")->required();
    find->add_option("--k", kdeg, "tensor degree");

    auto* cat = app.add_subcommand("catalog", "list fixtures or emit one as DSL");
    cat->add_option("name", fixture_name, "fixture name");
    cat->add_flag("--broken", broken, "emit the perturbed variant");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    Emit emit{out, err, format == "text"};
    try {
        if (app.got_subcommand(check)) return cmd_check(system_ref, emit);
        if (app.got_subcommand(mul)) return cmd_mul(system_ref, lhs, rhs, emit);
        if (app.got_subcommand(powc)) return cmd_pow(system_ref, base, exponent, emit);
        if (app.got_subcommand(verify)) return cmd_verify(system_ref, solution, emit);
        if (app.got_subcommand(series))
            return cmd_series(system_ref, kind, point_text, coeffs_text, ratio, mode, tolerance,
                              emit);
        if (app.got_subcommand(find)) return cmd_find(zxpr, coords_text, kdeg, emit);
        if (app.got_subcommand(cat)) return cmd_catalog(fixture_name, broken, emit);
        err << "no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        json j{{"schema_version", 1}, {"error", {{"message", e.what()}}}};
        if (format == "text") {
            out << "error: " << e.what() << "\n";
        } else {
            out << j.dump(2) << "\n";
            err << "error: " << e.what() << "\n";
        }
        return 2;
    }
}

} // namespace starpde
