// su2hk command-line front end
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <locale>
#include <optional>
#include <sstream>

#include "su2hk/errors.hpp"
#include "su2hk/functional_inequalities.hpp"
#include "su2hk/heisenberg.hpp"
#include "su2hk/sde_sampler.hpp"
#include "su2hk/sr_distance.hpp"
#include "su2hk/su2_kernel.hpp"
#include "su2hk/version.hpp"

using namespace su2hk;
using nlohmann::json;

namespace {

struct Tunables {
    double eps = 1e-13;
    double t_cross = 0.35;
    double r_min = 1e-3;
    double t_min_spectral = 0.01;
    double quad_abs_tol = 1e-300;
    double quad_rel_tol = 1e-12;
    int quad_max_intervals = 20000;
    int grid_nr = 40;
    int grid_nz = 40;
    int phi_grid = 30;
    double smoothing = 1e-3;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string format = "auto";
    std::string out;

    KernelConfig kernel() const {
        KernelConfig c;
        c.eps = eps;
        c.t_cross = t_cross;
        c.r_min = r_min;
        c.t_min_spectral = t_min_spectral;
        c.quad = {quad_abs_tol, quad_rel_tol, quad_max_intervals};
        return c;
    }
    json echo() const {
        return {{"eps", eps},
                {"t_cross", t_cross},
                {"r_min", r_min},
                {"t_min_spectral", t_min_spectral},
                {"quad_abs_tol", quad_abs_tol},
                {"quad_rel_tol", quad_rel_tol},
                {"quad_max_intervals", quad_max_intervals},
                {"grid_nr", grid_nr},
                {"grid_nz", grid_nz},
                {"phi_grid", phi_grid},
                {"smoothing", smoothing},
                {"seed", seed},
                {"threads", threads}};
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << x;
    return os.str();
}

// stdout, or the --out file written through a temporary and renamed
void emit(const Tunables& tn, const std::string& text) {
    if (tn.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    const std::string tmp = tn.out + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        os << text;
        if (!text.empty() && text.back() != '\n') os << '\n';
        if (!os) throw Error(ErrorCode::DomainError, "cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), tn.out.c_str()) != 0) throw Error(ErrorCode::DomainError, "cannot rename to " + tn.out);
}

std::string format_of(const Tunables& tn, const char* dflt) {
    std::string f = tn.format == "auto" ? dflt : tn.format;
    if (f != "csv" && f != "json") throw Error(ErrorCode::DomainError, "format must be csv or json");
    return f;
}

json envelope(const Tunables& tn, const std::string& cmd, const json& args) {
    return {{"command", cmd}, {"version", kVersion}, {"config", tn.echo()}, {"args", args}};
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

json report_json(const VerifyReport& r) {
    return {{"name", r.name},         {"n_points", r.n_points}, {"n_violations", r.n_violations},
            {"min_margin", r.min_margin}, {"tol", r.tol},       {"argmin", {{"t", r.t}, {"r", r.r}, {"z", r.z}}},
            {"lhs", r.lhs},           {"rhs", r.rhs}};
}

// ---------------------------------------------------------------- commands

struct KernelArgs {
    double t = 0, r = 0, z = 0;
    std::string rep = "auto";
};

void cmd_kernel(const Tunables& tn, const KernelArgs& a) {
    KernelConfig cfg = tn.kernel();
    KernelEval ev;
    if (a.rep == "auto")
        ev = pt(a.t, a.r, a.z, cfg);
    else if (a.rep == "spectral")
        ev = pt_spectral(a.t, a.r, a.z, cfg.eps, cfg.t_min_spectral);
    else if (a.rep == "integral")
        ev = pt_integral(a.t, a.r, a.z, cfg.quad, cfg.r_min);
    else if (a.rep == "cutlocus") {
        if (a.r != 0) throw Error(ErrorCode::DomainError, "the cut-locus form needs r = 0");
        ev = pt_cutlocus(a.t, a.z);
    } else
        throw Error(ErrorCode::DomainError, "unknown representation " + a.rep);
    const char* rep = ev.representation == KernelRep::Spectral   ? "spectral"
                      : ev.representation == KernelRep::Integral ? "integral"
                                                                 : "cutlocus";
    if (format_of(tn, "json") == "csv") {
        emit(tn, "t,r,z,value,abs_err,representation\n" + fmt(a.t) + "," + fmt(a.r) + "," + fmt(a.z) + "," +
                     fmt(ev.value) + "," + fmt(ev.abs_err) + "," + std::string(rep) + "\n");
        return;
    }
    json j = envelope(tn, "kernel", {{"t", a.t}, {"r", a.r}, {"z", a.z}, {"rep", a.rep}});
    j["result"] = {{"value", ev.value}, {"abs_err", ev.abs_err}, {"representation", rep}};
    emit(tn, j.dump(2));
}

void cmd_distance(const Tunables& tn, double r, double z) {
    DistanceResult d = cc_distance(r, z, tn.r_min);
    double dist = std::sqrt(d.d_squared);
    if (format_of(tn, "json") == "csv") {
        emit(tn, "r,z,theta_star,d,d_squared,residual,on_cut_locus\n" + fmt(r) + "," + fmt(z) + "," +
                     fmt(d.theta_star) + "," + fmt(dist) + "," + fmt(d.d_squared) + "," + fmt(d.residual) + "," +
                     (d.on_cut_locus ? "1" : "0") + "\n");
        return;
    }
    json j = envelope(tn, "distance", {{"r", r}, {"z", z}});
    j["result"] = {{"theta_star", d.theta_star}, {"d", dist},          {"d_squared", d.d_squared},
                   {"residual", d.residual},     {"on_cut_locus", d.on_cut_locus}};
    emit(tn, j.dump(2));
}

void cmd_constants(const Tunables& tn, const std::vector<double>& ts) {
    auto rs = linspace(0, kPi / 2, tn.phi_grid), zs = linspace(-kPi, kPi, tn.phi_grid);
    struct Row {
        double t, a, c, phi;
    };
    std::vector<Row> rows;
    for (double t : ts) {
        double phi = t >= 0.5 ? phi_ratio(t, rs, zs) : std::nan("");
        rows.push_back({t, a_const(t), c_const(t), phi});
    }
    if (format_of(tn, "csv") == "csv") {
        std::string s = "t,A,C,Phi,A_over_4exp,C_over_4exp\n";
        for (auto& r : rows) {
            double l = 4 * std::exp(-4 * r.t);
            s += fmt(r.t) + "," + fmt(r.a) + "," + fmt(r.c) + "," + fmt(r.phi) + "," + fmt(r.a / l) + "," +
                 fmt(r.c / l) + "\n";
        }
        emit(tn, s);
        return;
    }
    json j = envelope(tn, "constants", {{"t", ts}});
    j["rows"] = json::array();
    for (auto& r : rows)
        j["rows"].push_back({{"t", r.t}, {"A", r.a}, {"C", r.c}, {"Phi", std::isnan(r.phi) ? json() : json(r.phi)}});
    emit(tn, j.dump(2));
}

struct VerifyArgs {
    std::string suite = "all";
    std::vector<double> t;
    std::vector<double> alpha;
};

std::vector<VerifyReport> suite_liyau(const Tunables& tn, const VerifyArgs& a) {
    std::vector<double> ts = a.t.empty() ? std::vector<double>{0.1, 1} : a.t;
    std::vector<double> as = a.alpha.empty() ? std::vector<double>{2.5, 3, 4} : a.alpha;
    auto grid = ChartGrid::interior(tn.grid_nr, tn.grid_nz);
    std::vector<VerifyReport> out;
    for (double t : ts) {
        KernelJets kj = kernel_jets(t, tn.smoothing, grid);
        for (double al : as) {
            auto r = li_yau_check(kj, al);
            r.name += ":alpha=" + fmt(al);
            out.push_back(r);
            auto e = li_yau_exponential_check(kj, al);
            e.name += ":alpha=" + fmt(al);
            out.push_back(e);
        }
    }
    return out;
}

std::vector<VerifyReport> suite_functions(const VerifyArgs& a, bool gradient) {
    std::vector<double> ts = a.t.empty() ? std::vector<double>{0.5, 1} : a.t;
    std::vector<VerifyReport> out;
    for (double t : ts) {
        double c = gradient ? 0 : c_const(t);
        for (const auto& f : testfn::builtins())
            out.push_back(gradient ? first_gradient_bound_check(f, t) : reverse_poincare_check(f, t, c, 1e-9));
    }
    return out;
}

std::vector<VerifyReport> suite_laplace() {
    VerifyReport rep;
    rep.name = "laplace";
    rep.tol = 0;
    const double pts[3][3] = {{0.5, 1.0, 0}, {1, 0.7, 1.1}, {20, 0.7, 1.1}};
    for (auto& p : pts) {
        auto c = laplace_check(p[0], p[1], p[2]);
        rep.add(1e-5 - c.rel_diff, p[0], p[1], p[2], c.lhs, c.rhs);
    }
    return {rep};
}

std::vector<VerifyReport> suite_heisenberg() {
    VerifyReport mono, size;
    mono.name = "heisenberg:decreasing";
    size.name = "heisenberg:below_10pct";
    mono.tol = size.tol = 0;
    const double pts[3][2] = {{1, 0.5}, {0.5, 1}, {0, 1}};
    for (auto& p : pts) {
        double prev = std::numeric_limits<double>::infinity();
        for (double t : {0.1, 0.05, 0.02}) {
            auto d = dilation_probe(t, p[0], p[1]);
            if (std::isfinite(prev)) mono.add(prev - d.rel_error, t, p[0], p[1], d.rel_error, prev);
            prev = d.rel_error;
            if (t == 0.02) size.add(0.1 - d.rel_error, t, p[0], p[1], d.rel_error, 0.1);
        }
    }
    return {mono, size};
}

int cmd_verify(const Tunables& tn, const VerifyArgs& a) {
    const std::string& s = a.suite;
    bool all = s == "all";
    if (!all && s != "liyau" && s != "reverse-poincare" && s != "gradient" && s != "laplace" && s != "heisenberg")
        throw Error(ErrorCode::DomainError, "unknown suite " + s);
    std::vector<VerifyReport> reps;
    auto add = [&](std::vector<VerifyReport> v) { reps.insert(reps.end(), v.begin(), v.end()); };
    if (all || s == "liyau") add(suite_liyau(tn, a));
    if (all || s == "reverse-poincare") add(suite_functions(a, false));
    if (all || s == "gradient") add(suite_functions(a, true));
    if (all || s == "laplace") add(suite_laplace());
    if (all || s == "heisenberg") add(suite_heisenberg());
    long viol = 0;
    for (auto& r : reps) viol += r.n_violations;
    if (format_of(tn, "json") == "csv") {
        std::string out = "name,n_points,n_violations,min_margin,t,r,z,lhs,rhs\n";
        for (auto& r : reps)
            out += r.name + "," + std::to_string(r.n_points) + "," + std::to_string(r.n_violations) + "," +
                   fmt(r.min_margin) + "," + fmt(r.t) + "," + fmt(r.r) + "," + fmt(r.z) + "," + fmt(r.lhs) + "," +
                   fmt(r.rhs) + "\n";
        emit(tn, out);
    } else {
        json j = envelope(tn, "verify", {{"suite", s}, {"t", a.t}, {"alpha", a.alpha}});
        j["reports"] = json::array();
        for (auto& r : reps) j["reports"].push_back(report_json(r));
        j["n_violations"] = viol;
        emit(tn, j.dump(2));
    }
    return viol == 0 ? 0 : 1;
}

struct SampleArgs {
    long n = 100000;
    double step = 1e-3;
    double t = 0.5;
    int hist_nr = 12, hist_nz = 12;
    std::string samples_csv, hist_json;
};

void cmd_sample(const Tunables& tn, const SampleArgs& a) {
    MCConfig cfg;
    cfg.n_paths = a.n;
    cfg.step = a.step;
    cfg.t_final = a.t;
    cfg.seed = tn.seed;
    cfg.threads = tn.threads;
    auto samples = simulate_paths(cfg);
    auto mom = sample_moment(samples, [](const CylCoord& c) { return std::cos(c.r) * std::cos(c.z); });
    auto h = empirical_density(samples, Histogram2D::uniform(a.hist_nr, a.hist_nz));
    if (!a.samples_csv.empty()) write_samples_csv(a.samples_csv, samples);
    if (!a.hist_json.empty()) {
        Tunables o = tn;
        o.out = a.hist_json;
        emit(o, histogram_json(h));
    }
    json chi;
    try {
        auto cs = chi_square(h, kernel_cell_probabilities(h, a.t));
        chi = {{"statistic", cs.statistic}, {"dof", cs.dof}, {"p_value", cs.p_value}, {"merged_cells", cs.n_merged}};
    } catch (const Error& e) {
        chi = {{"error", e.what()}};
    }
    double exact = std::exp(-2 * a.t);
    json j = envelope(tn, "sample", {{"n", a.n}, {"step", a.step}, {"t", a.t}, {"seed", tn.seed}});
    j["result"] = {{"mean_cos_r_cos_z", mom.mean},
                   {"stderr", mom.stderr_},
                   {"exact", exact},
                   {"deviation_in_stderr", (mom.mean - exact) / mom.stderr_},
                   {"chi_square", chi}};
    if (format_of(tn, "json") == "csv") {
        emit(tn, "n,step,t,seed,mean,stderr,exact\n" + std::to_string(a.n) + "," + fmt(a.step) + "," + fmt(a.t) + "," +
                     std::to_string(tn.seed) + "," + fmt(mom.mean) + "," + fmt(mom.stderr_) + "," + fmt(exact) + "\n");
        return;
    }
    emit(tn, j.dump(2));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Subelliptic heat kernel on SU(2)"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "key=value file ('#' comments); flags override it");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    Tunables tn;
    app.add_option("--eps", tn.eps, "spectral truncation tolerance")->capture_default_str();
    app.add_option("--t_cross", tn.t_cross, "spectral for t >= t_cross, integral below")->capture_default_str();
    app.add_option("--r_min", tn.r_min, "below this r the cut-locus form is used")->capture_default_str();
    app.add_option("--t_min_spectral", tn.t_min_spectral, "smallest t for the spectral series")->capture_default_str();
    app.add_option("--quad_abs_tol", tn.quad_abs_tol)->capture_default_str();
    app.add_option("--quad_rel_tol", tn.quad_rel_tol)->capture_default_str();
    app.add_option("--quad_max_intervals", tn.quad_max_intervals)->capture_default_str();
    app.add_option("--grid_nr", tn.grid_nr, "Li-Yau grid size in r")->capture_default_str();
    app.add_option("--grid_nz", tn.grid_nz, "Li-Yau grid size in z")->capture_default_str();
    app.add_option("--phi_grid", tn.phi_grid, "grid size per axis for Phi(t)")->capture_default_str();
    app.add_option("--smoothing", tn.smoothing, "s in P_t p_s for Li-Yau")->capture_default_str();
    app.add_option("--seed", tn.seed)->capture_default_str();
    app.add_option("--threads", tn.threads, "0 = hardware concurrency")->capture_default_str();
    app.add_option("--format", tn.format, "csv | json | auto")->capture_default_str();
    app.add_option("--out", tn.out, "write the result here instead of stdout");

    auto* kernel = app.add_subcommand("kernel", "evaluate p_t(r, z)");
    KernelArgs ka;
    kernel->add_option("--t", ka.t)->required();
    kernel->add_option("--r", ka.r)->required();
    kernel->add_option("--z", ka.z)->required();
    kernel->add_option("--rep", ka.rep, "auto | spectral | integral | cutlocus")->capture_default_str();

    auto* distance = app.add_subcommand("distance", "Carnot-Caratheodory distance from the identity");
    double dr = 0, dz = 0;
    distance->add_option("--r", dr)->required();
    distance->add_option("--z", dz)->required();

    auto* constants = app.add_subcommand("constants", "A(t), C(t), Phi(t) on a t grid");
    std::vector<double> cts{0.5, 1, 3};
    constants->add_option("--t", cts)->capture_default_str();

    auto* verify = app.add_subcommand("verify", "inequality suites; exit 0 iff no violations");
    VerifyArgs va;
    verify->add_option("--suite", va.suite, "liyau | reverse-poincare | gradient | laplace | heisenberg | all")
        ->capture_default_str();
    verify->add_option("--t", va.t);
    verify->add_option("--alpha", va.alpha);

    auto* sample = app.add_subcommand("sample", "Monte Carlo paths of the diffusion");
    SampleArgs sa;
    sample->add_option("--n", sa.n)->capture_default_str();
    sample->add_option("--step", sa.step)->capture_default_str();
    sample->add_option("--t", sa.t)->capture_default_str();
    sample->add_option("--hist_nr", sa.hist_nr)->capture_default_str();
    sample->add_option("--hist_nz", sa.hist_nz)->capture_default_str();
    sample->add_option("--samples_csv", sa.samples_csv, "CSV dump of (path_id, r, theta, z)");
    sample->add_option("--hist_json", sa.hist_json, "histogram JSON");

    auto* reference = app.add_subcommand("config-reference", "print every config key with its default");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*reference) {
            std::cout << app.config_to_str(true, true);
            return 0;
        }
        if (*kernel) cmd_kernel(tn, ka);
        if (*distance) cmd_distance(tn, dr, dz);
        if (*constants) cmd_constants(tn, cts);
        if (*verify) return cmd_verify(tn, va);
        if (*sample) cmd_sample(tn, sa);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.is_convergence() ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
