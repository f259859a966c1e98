#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "figures.hpp"
#include "qdcav/io.hpp"

namespace qdcav::cli {

namespace {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParamFlags {
    std::string preset;
    std::string config;
    std::string units;
    std::optional<double> g, kappa, gamma, p, delta, gamma_d;

    bool any_rate() const { return g || kappa || gamma || p || delta || gamma_d; }
};

struct CommonFlags {
    double eps = 0.1;
    double tol = 1e-10;
    std::string precision;   // empty selects the command default
    std::string out;
    std::string format = "csv";
};

struct Resolved {
    SystemParams params;
    Units units = Units::si;
    std::string source;
};

void add_param_flags(CLI::App* app, ParamFlags& f) {
    app->add_option("--preset", f.preset, "Parameter preset")
        ->check(CLI::IsMember({"setA", "setB"}))
        ->envname("QDCAV_PRESET");
    app->add_option("--config", f.config, "Parameter file (key = value lines)")->envname("QDCAV_CONFIG");
    app->add_option("--units", f.units, "Units of the rate flags: si (s^-1) or kappa (multiples of kappa)")
        ->check(CLI::IsMember({"si", "kappa"}))
        ->envname("QDCAV_UNITS");
    app->add_option("--g", f.g, "Emitter-cavity coupling")->envname("QDCAV_G");
    app->add_option("--kappa", f.kappa, "Cavity decay rate")->envname("QDCAV_KAPPA");
    app->add_option("--gamma", f.gamma, "Emitter decay rate")->envname("QDCAV_GAMMA");
    app->add_option("--p", f.p, "Incoherent pump rate")->envname("QDCAV_P");
    app->add_option("--delta", f.delta, "Detuning")->envname("QDCAV_DELTA");
    app->add_option("--gamma-d", f.gamma_d, "Pure dephasing rate")->envname("QDCAV_GAMMA_D");
}

void add_common_flags(CLI::App* app, CommonFlags& f) {
    app->add_option("--eps", f.eps, "Ratio neighborhood for the cutoff selection")
        ->capture_default_str()
        ->envname("QDCAV_EPS");
    app->add_option("--tol", f.tol, "Relative bracket width on I_1")->capture_default_str()->envname("QDCAV_TOL");
    app->add_option("--precision", f.precision, "Working precision in bits (auto, 64, 128, 256)")
        ->check(CLI::IsMember({"auto", "64", "128", "256"}))
        ->envname("QDCAV_PRECISION");
    app->add_option("--out", f.out, "Output file (default: standard output)")->envname("QDCAV_OUT");
    app->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str()
        ->envname("QDCAV_FORMAT");
}

// Raw rate flags are read in --units; they override the preset or config
// values, converted into that source's units.
Resolved resolve_params(const ParamFlags& f, bool allow_fallback) {
    if (!f.preset.empty() && !f.config.empty()) throw ConfigError("--preset and --config are mutually exclusive");
    if (f.any_rate() && f.units.empty()) {
        throw ConfigError("--units (si or kappa) is required when rate flags are given");
    }
    Resolved r;
    bool have_base = true;
    if (!f.preset.empty()) {
        r.params = preset(f.preset);
        r.units = Units::si;
        r.source = "preset " + f.preset;
    } else if (!f.config.empty()) {
        const ParamConfig cfg = load_config(f.config);
        r.params = cfg.params;
        r.units = cfg.units;
        r.source = "config " + f.config;
    } else if (f.any_rate()) {
        have_base = false;
        r.units = parse_units(f.units);
        r.params = SystemParams{};
        r.source = "flags";
        if (r.units == Units::si) {
            if (!f.g || !f.kappa || !f.gamma) throw ParamError("kappa", "--g, --kappa and --gamma are required with --units si");
        } else if (f.kappa && *f.kappa != 1.0) {
            throw ParamError("kappa", "kappa must be 1 with --units kappa");
        }
    } else if (allow_fallback) {
        r.params = preset("setA");
        r.units = Units::si;
        r.source = "preset setA (default)";
    } else {
        throw ConfigError("no parameters given: use --preset, --config or rate flags with --units");
    }

    if (f.any_rate()) {
        const Units flag_units = parse_units(f.units);
        double scale = 1.0;
        if (have_base && flag_units != r.units) {
            if (r.units == Units::kappa) {
                throw ConfigError("cannot apply --units si rate flags to parameters given in kappa units");
            }
            if (f.kappa) throw ParamError("kappa", "--kappa cannot be given in kappa units");
            scale = r.params.kappa;
        }
        auto apply = [&](const std::optional<double>& v, double& field) {
            if (v) field = *v * scale;
        };
        apply(f.g, r.params.g);
        apply(f.kappa, r.params.kappa);
        apply(f.gamma, r.params.gamma);
        apply(f.p, r.params.p);
        apply(f.delta, r.params.delta);
        apply(f.gamma_d, r.params.gamma_d);
        r.source += " with flag overrides";
    }
    r.params = validate(r.params);
    return r;
}

Precision precision_or(const CommonFlags& f, Precision fallback) {
    return f.precision.empty() ? fallback : parse_precision(f.precision);
}

SolveOptions solve_options(const CommonFlags& f) {
    if (!(f.eps > 0.0)) throw ParamError("eps", "--eps must be > 0");
    if (!(f.tol > 0.0)) throw ParamError("tol", "--tol must be > 0");
    SolveOptions so;
    so.epsilon = f.eps;
    so.tol = f.tol;
    return so;
}

void head(Table& t, const std::string& command) {
    t.meta.insert(t.meta.begin(), {"command", command});
}

// Moves the keys of `front` ahead of the existing meta entries.
void prepend(Table& t, const Table& front) {
    t.meta.insert(t.meta.begin(), front.meta.begin(), front.meta.end());
}

void emit(const Table& t, const CommonFlags& f, std::ostream& out) {
    std::ostringstream buf;
    write_table(t, parse_format(f.format), buf);
    if (f.out.empty()) {
        out << buf.str();
        return;
    }
    std::ofstream file(f.out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file '" + f.out + "'");
    file << buf.str();
    if (!file) throw std::runtime_error("failed writing output file '" + f.out + "'");
}

double rel_err(double value, double reference) {
    const double diff = std::abs(value - reference);
    if (diff == 0.0) return 0.0;
    return diff / std::abs(reference);
}

double rel_err(std::complex<double> value, std::complex<double> reference) {
    const double diff = std::abs(value - reference);
    if (diff == 0.0) return 0.0;
    return diff / std::abs(reference);
}

FullMoments recurrence_moments(const SystemParams& params, const SolveOptions& so, Precision precision) {
    const SystemParams prm = normalize(params);
    return dispatch_precision(precision, [&]<class Real>() { return solve_full<Real>(prm, so); });
}

// ---- solve ----

struct SolveFlags {
    long order = 10;
    bool oracle_check = false;
    long n_ph = 40;
    long oracle_max_n = 5;
    double check_tol = 1e-6;
};

int cmd_solve(const ParamFlags& pf, const CommonFlags& cf, const SolveFlags& sf, std::ostream& out,
              std::ostream& err) {
    const Resolved r = resolve_params(pf, false);
    if (sf.order < 0) throw ParamError("order", "--order must be >= 0");
    SolveOptions so = solve_options(cf);
    so.min_order = std::max(so.min_order, sf.order + 2);
    const Precision prec = precision_or(cf, Precision::bits64);
    const FullMoments full = recurrence_moments(r.params, so, prec);

    Table t = moments_table(full, sf.order);
    Table front;
    front.set("command", std::string("solve"));
    front.set("source", r.source);
    describe_params(front, r.params, r.units);
    describe_solve(front, so, prec);
    front.set("rows", sf.order);
    prepend(t, front);

    if (!sf.oracle_check) {
        emit(t, cf, out);
        return kOk;
    }
    if (sf.n_ph < 4) throw ParamError("n-ph", "--n-ph must be >= 4");
    const long max_n = std::min({sf.oracle_max_n, sf.n_ph - 2, sf.order});
    const OracleResult oracle = oracle_moments(r.params, sf.n_ph, max_n);
    t.set("oracle_n_ph", sf.n_ph);
    t.set("oracle_max_n", max_n);
    t.set("oracle_bias", oracle.bias);
    t.set("oracle_residual", oracle.state.residual);
    t.set("check_tol", sf.check_tol);
    t.columns.insert(t.columns.end(), {"rel_err_I", "rel_err_B", "rel_err_R"});
    double worst = 0.0;
    for (auto& row : t.rows) {
        const long n = std::get<long>(row[0]);
        if (n > max_n) {
            row.insert(row.end(), 3, std::monostate{});
            continue;
        }
        const auto k = static_cast<std::size_t>(n);
        const double ei = rel_err(full.i_moments()[k], oracle.moments.i_moments()[k]);
        const double eb = rel_err(full.b_moments[k], oracle.moments.b_moments[k]);
        const double er = rel_err(full.r_moments[k], oracle.moments.r_moments[k]);
        worst = std::max({worst, ei, eb, er});
        row.insert(row.end(), {ei, eb, er});
    }
    t.set("max_rel_err", worst);
    emit(t, cf, out);
    if (!(worst <= sf.check_tol)) {
        err << "oracle check failed: max relative error " << format_number(worst) << " > " << format_number(sf.check_tol)
            << '\n';
        return kFailure;
    }
    return kOk;
}

// ---- oracle-check ----

int cmd_oracle_check(const ParamFlags& pf, const CommonFlags& cf, const SolveFlags& sf, std::ostream& out,
                     std::ostream& err) {
    const Resolved r = resolve_params(pf, false);
    if (sf.n_ph < 4) throw ParamError("n-ph", "--n-ph must be >= 4");
    if (sf.oracle_max_n < 0 || sf.oracle_max_n > sf.n_ph - 2) {
        throw ParamError("max-n", "--max-n must lie in [0, n_ph - 2]");
    }
    const long max_n = sf.oracle_max_n;
    SolveOptions so = solve_options(cf);
    so.min_order = std::max(so.min_order, max_n + 2);
    const Precision prec = precision_or(cf, Precision::bits64);
    const FullMoments full = recurrence_moments(r.params, so, prec);
    const OracleResult oracle = oracle_moments(r.params, sf.n_ph, max_n);

    Table t;
    t.kind = "oracle_check";
    t.set("command", std::string("oracle-check"));
    t.set("source", r.source);
    describe_params(t, r.params, r.units);
    describe_solve(t, so, prec);
    t.set("n_ph", sf.n_ph);
    t.set("max_n", max_n);
    t.set("oracle_bias", oracle.bias);
    t.set("oracle_residual", oracle.state.residual);
    t.set("oracle_min_eigenvalue", oracle.state.min_eigenvalue);
    t.set("check_tol", sf.check_tol);
    t.columns = {"quantity", "n", "recurrence", "oracle", "rel_err"};
    double worst = 0.0;
    for (long n = 0; n <= max_n; ++n) {
        const auto k = static_cast<std::size_t>(n);
        const double e = rel_err(full.i_moments()[k], oracle.moments.i_moments()[k]);
        worst = std::max(worst, e);
        t.add_row({std::string("I"), n, full.i_moments()[k], oracle.moments.i_moments()[k], e});
    }
    for (long n = 0; n <= max_n; ++n) {
        const auto k = static_cast<std::size_t>(n);
        const double e = rel_err(full.b_moments[k], oracle.moments.b_moments[k]);
        worst = std::max(worst, e);
        t.add_row({std::string("B"), n, full.b_moments[k], oracle.moments.b_moments[k], e});
    }
    for (long n = 0; n <= max_n; ++n) {
        const auto k = static_cast<std::size_t>(n);
        const double e = rel_err(full.r_moments[k], oracle.moments.r_moments[k]);
        worst = std::max(worst, e);
        t.add_row({std::string("absR"), n, std::abs(full.r_moments[k]), std::abs(oracle.moments.r_moments[k]), e});
    }
    t.set("max_rel_err", worst);
    emit(t, cf, out);
    if (!(worst <= sf.check_tol)) {
        err << "oracle check failed: max relative error " << format_number(worst) << " > " << format_number(sf.check_tol)
            << '\n';
        return kFailure;
    }
    return kOk;
}

// ---- criteria ----

struct CriteriaFlags {
    std::optional<double> p_min, p_max;
    long points = 121;
    std::vector<long> field{1, 3, 5};
    std::vector<long> joint{1, 3, 5};
    std::vector<long> entanglement{0};
    bool serial = false;
};

int cmd_criteria(const ParamFlags& pf, const CommonFlags& cf, const CriteriaFlags& kf, std::ostream& out,
                 std::ostream& err) {
    const Resolved r = resolve_params(pf, false);
    // Default p range: 1e8 .. 1e14 s^-1, or 1e-3 .. 1e3 in kappa units.
    const double lo = kf.p_min.value_or(r.units == Units::si ? 1e8 : 1e-3);
    const double hi = kf.p_max.value_or(r.units == Units::si ? 1e14 : 1e3);
    if (kf.points < 1) throw ParamError("points", "--points must be >= 1");
    if (!(lo > 0.0) || !(hi >= lo)) throw ParamError("p-min", "need 0 < --p-min <= --p-max");
    const std::vector<double> grid = log_grid(lo, hi, static_cast<std::size_t>(kf.points));
    const SweepOrders orders{kf.field, kf.joint, kf.entanglement};
    const SweepOptions options{solve_options(cf), precision_or(cf, Precision::bits64)};
    const CriteriaReport report =
        kf.serial ? sweep_serial(r.params, grid, orders, options) : sweep(r.params, grid, orders, options);

    Table t = criteria_table(report);
    Table front;
    front.set("command", std::string("criteria"));
    front.set("source", r.source);
    describe_params(front, r.params, r.units);
    front.set("p", std::string("swept"));
    describe_solve(front, options.solve, options.precision);
    front.set("p_grid_choice", "log " + format_number(lo) + " .. " + format_number(hi) + ", " +
                                   std::to_string(kf.points) + " points");
    auto join = [](const std::vector<long>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
        return s;
    };
    front.set("field_orders", join(kf.field));
    front.set("joint_orders", join(kf.joint));
    front.set("entanglement_orders", join(kf.entanglement));
    prepend(t, front);
    emit(t, cf, out);
    if (report.failed_points > 0) {
        err << report.failed_points << " of " << grid.size() << " sweep points failed; see the note column\n";
        return kPartialFailure;
    }
    return kOk;
}

// ---- charfn ----

struct CharfnFlags {
    double alpha_min = 0.0;
    std::optional<double> alpha_max;
    long samples = 512;
    bool serial = false;
};

int cmd_charfn(const ParamFlags& pf, const CommonFlags& cf, const CharfnFlags& hf, std::ostream& out,
               std::ostream&) {
    const Resolved r = resolve_params(pf, false);
    PhiOptions phi;
    phi.precision = precision_or(cf, Precision::automatic);
    phi.epsilon = solve_options(cf).epsilon;
    if (hf.samples < 1) throw ParamError("samples", "--samples must be >= 1");
    double alpha_max = 0.0;
    std::string alpha_source;
    if (hf.alpha_max) {
        alpha_max = *hf.alpha_max;
        alpha_source = "flag";
    } else {
        alpha_max = max_safe_alpha(r.params, Precision::bits256, phi);
        alpha_source = "max safe |alpha| at 256 bits";
        if (!std::isfinite(alpha_max)) {
            alpha_max = 10.0;
            alpha_source = "10 (Phi = 1 for a field without pumping)";
        }
    }
    if (!(alpha_max >= hf.alpha_min) || hf.alpha_min < 0.0) {
        throw ParamError("alpha-max", "need 0 <= --alpha-min <= --alpha-max");
    }
    const std::vector<double> grid = linear_grid(hf.alpha_min, alpha_max, static_cast<std::size_t>(hf.samples));
    const CharFnProfile prof = hf.serial ? profile_serial(r.params, grid, phi) : profile(r.params, grid, phi);

    Table t = charfn_table(prof);
    Table front;
    front.set("command", std::string("charfn"));
    front.set("source", r.source);
    describe_params(front, r.params, r.units);
    front.set("eps", phi.epsilon);
    front.set("precision", std::string(to_string(phi.precision)));
    front.set("phi_tol", phi.tol);
    front.set("cancellation_limit", phi.cancellation_limit);
    front.set("margin", phi.margin);
    front.set("alpha_grid", "linear " + format_number(hf.alpha_min) + " .. " + format_number(alpha_max) + ", " +
                                std::to_string(hf.samples) + " samples");
    front.set("alpha_max_source", alpha_source);
    prepend(t, front);
    emit(t, cf, out);
    return kOk;
}

// ---- bench ----

struct BenchFlags {
    std::vector<long> rec_sizes{10'000, 100'000, 1'000'000, 10'000'000};
    std::vector<long> dense_sizes{10, 15, 20, 25, 30, 35};
    long max_dense_n_ph = 35;
    int repeats = 3;
    bool no_recurrence = false;
    bool no_dense = false;
};

int cmd_bench(const ParamFlags& pf, const CommonFlags& cf, const BenchFlags& bf, std::ostream& out, std::ostream&) {
    const Resolved r = resolve_params(pf, true);
    BenchmarkOptions bo;
    bo.recurrence_sizes = bf.no_recurrence ? std::vector<long>{} : bf.rec_sizes;
    bo.dense_sizes = bf.no_dense ? std::vector<long>{} : bf.dense_sizes;
    bo.max_dense_n_ph = bf.max_dense_n_ph;
    bo.repeats = bf.repeats;
    if (bo.recurrence_sizes.empty() && bo.dense_sizes.empty()) {
        throw ParamError("sizes", "no benchmark sizes requested");
    }
    const BenchmarkReport report = benchmark(r.params, bo);
    Table t = benchmark_table(report);
    Table front;
    front.set("command", std::string("bench"));
    front.set("source", r.source);
    describe_params(front, r.params, r.units);
    front.set("repeats", static_cast<long>(bo.repeats));
    front.set("timing", std::string("minimum wall time over repeats, single thread"));
    front.set("max_dense_n_ph", bo.max_dense_n_ph);
    prepend(t, front);
    emit(t, cf, out);
    return kOk;
}

// ---- fig ----

struct FigFlags {
    int id = 0;
    std::optional<double> x_min, x_max;
    std::optional<long> points;
};

int cmd_fig(const CommonFlags& cf, const FigFlags& ff, std::ostream& out, std::ostream& err) {
    figures::NumericOptions numeric;
    numeric.solve = solve_options(cf);
    numeric.precision = precision_or(cf, Precision::bits64);
    if (ff.points && *ff.points < 1) throw ParamError("points", "--points must be >= 1");
    Table t;
    switch (ff.id) {
        case 2: {
            figures::Fig2Options o;
            o.g_min = ff.x_min.value_or(o.g_min);
            o.g_max = ff.x_max.value_or(o.g_max);
            o.points = ff.points.value_or(o.points);
            t = figures::fig2(o, numeric);
            break;
        }
        case 3: {
            figures::Fig3Options o;
            o.p_min = ff.x_min.value_or(o.p_min);
            o.p_max = ff.x_max.value_or(o.p_max);
            o.points = ff.points.value_or(o.points);
            t = figures::fig3(o, numeric);
            break;
        }
        case 4:
        case 5:
        case 6: {
            figures::SweepFigureOptions o;
            o.p_min = ff.x_min.value_or(o.p_min);
            o.p_max = ff.x_max.value_or(o.p_max);
            o.points = ff.points.value_or(o.points);
            t = figures::criteria_figure(ff.id, o, numeric);
            break;
        }
        case 7: {
            figures::Fig7Options o;
            o.alpha_min = ff.x_min.value_or(o.alpha_min);
            o.alpha_max = ff.x_max.value_or(o.alpha_max);
            o.samples = ff.points.value_or(o.samples);
            o.precision = precision_or(cf, Precision::automatic);
            t = figures::fig7(o, numeric);
            break;
        }
        case 8: {
            figures::Fig8Options o;
            o.n_min = ff.x_min.value_or(o.n_min);
            o.n_max = ff.x_max.value_or(o.n_max);
            o.points = ff.points.value_or(o.points);
            t = figures::fig8(o, numeric);
            break;
        }
        default: throw ParamError("id", "unknown figure id " + std::to_string(ff.id) + " (expected 2..8)");
    }
    head(t, "fig");
    emit(t, cf, out);
    for (const auto& [key, value] : t.meta) {
        if (key == "failed_points" && value != "0") {
            err << value << " sweep points failed\n";
            return kPartialFailure;
        }
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steady-state correlations of a pumped quantum-dot cavity by moment recurrence", "qdcav"};
    app.require_subcommand(1);

    ParamFlags pf;
    CommonFlags cf;
    SolveFlags sf;
    CriteriaFlags kf;
    CharfnFlags hf;
    BenchFlags bf;
    FigFlags ff;

    auto* solve = app.add_subcommand("solve", "Moment ladder I_n, B_n, R_n at one parameter point");
    add_param_flags(solve, pf);
    add_common_flags(solve, cf);
    solve->add_option("--order", sf.order, "Largest n written")->capture_default_str();
    solve->add_flag("--oracle-check", sf.oracle_check, "Append relative errors against the Liouvillian steady state");
    solve->add_option("--n-ph", sf.n_ph, "Photon cutoff of the oracle")->capture_default_str();
    solve->add_option("--oracle-max-n", sf.oracle_max_n, "Largest n compared with the oracle")->capture_default_str();
    solve->add_option("--check-tol", sf.check_tol, "Relative tolerance of the oracle check")->capture_default_str();

    auto* oracle = app.add_subcommand("oracle-check", "Recurrence against the truncated-Fock steady state");
    add_param_flags(oracle, pf);
    add_common_flags(oracle, cf);
    oracle->add_option("--n-ph", sf.n_ph, "Photon cutoff")->capture_default_str();
    oracle->add_option("--max-n", sf.oracle_max_n, "Largest moment order compared")->capture_default_str();
    oracle->add_option("--check-tol", sf.check_tol, "Relative tolerance")->capture_default_str();

    auto* criteria = app.add_subcommand("criteria", "Nonclassicality and entanglement conditions over a pump sweep");
    add_param_flags(criteria, pf);
    add_common_flags(criteria, cf);
    criteria->add_option("--p-min", kf.p_min, "Smallest pump rate (in the parameter units)");
    criteria->add_option("--p-max", kf.p_max, "Largest pump rate (in the parameter units)");
    criteria->add_option("--points", kf.points, "Number of log-spaced pump rates")->capture_default_str();
    criteria->add_option("--field-orders", kf.field, "Orders of I_2n / I_n^2")->delimiter(',');
    criteria->add_option("--joint-orders", kf.joint, "Orders of B_2n / B_n^2")->delimiter(',');
    criteria->add_option("--entanglement-orders", kf.entanglement, "Orders of B_2n+1 - |R_n|^2")->delimiter(',');
    criteria->add_flag("--serial", kf.serial, "Evaluate sweep points on one thread");

    auto* charfn = app.add_subcommand("charfn", "Normally ordered characteristic function over |alpha|");
    add_param_flags(charfn, pf);
    add_common_flags(charfn, cf);
    charfn->add_option("--alpha-min", hf.alpha_min, "Smallest |alpha|")->capture_default_str();
    charfn->add_option("--alpha-max", hf.alpha_max, "Largest |alpha| (default: max safe |alpha| at 256 bits)");
    charfn->add_option("--samples", hf.samples, "Number of |alpha| samples")->capture_default_str();
    charfn->add_flag("--serial", hf.serial, "Evaluate samples on one thread");

    auto* bench = app.add_subcommand("bench", "Wall time of the recurrence against the dense Liouvillian solve");
    add_param_flags(bench, pf);
    add_common_flags(bench, cf);
    bench->add_option("--rec-sizes", bf.rec_sizes, "Recurrence orders N")->delimiter(',');
    bench->add_option("--dense-sizes", bf.dense_sizes, "Dense photon cutoffs n_ph")->delimiter(',');
    bench->add_option("--max-dense-n-ph", bf.max_dense_n_ph, "Largest dense cutoff attempted")->capture_default_str();
    bench->add_option("--repeats", bf.repeats, "Repeats per size (minimum reported)")->capture_default_str();
    bench->add_flag("--no-recurrence", bf.no_recurrence, "Skip the recurrence timings");
    bench->add_flag("--no-dense", bf.no_dense, "Skip the dense timings");

    auto* fig = app.add_subcommand("fig", "Plot data of one figure");
    add_common_flags(fig, cf);
    fig->add_option("--id", ff.id, "Figure number, 2..8")->required();
    fig->add_option("--x-min", ff.x_min, "Lower end of the figure's main axis");
    fig->add_option("--x-max", ff.x_max, "Upper end of the figure's main axis");
    fig->add_option("--points", ff.points, "Samples along the main axis");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("qdcav");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (solve->parsed()) return cmd_solve(pf, cf, sf, out, err);
        if (oracle->parsed()) return cmd_oracle_check(pf, cf, sf, out, err);
        if (criteria->parsed()) return cmd_criteria(pf, cf, kf, out, err);
        if (charfn->parsed()) return cmd_charfn(pf, cf, hf, out, err);
        if (bench->parsed()) return cmd_bench(pf, cf, bf, out, err);
        if (fig->parsed()) return cmd_fig(cf, ff, out, err);
    } catch (const ParamError& e) {
        err << "config error [" << e.field() << "]: " << e.what() << '\n';
        return kConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

}  // namespace qdcav::cli
