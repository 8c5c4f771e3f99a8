#include "covario/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "covario/alpha1d.hpp"
#include "covario/ballbodies.hpp"
#include "covario/bodies.hpp"
#include "covario/combinatorics.hpp"
#include "covario/covariogram.hpp"
#include "covario/numerics.hpp"
#include "covario/verifier.hpp"

namespace covario {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RunConfig {
    std::string cmd;
    std::string body = "builtin:cube";
    int dim = 2;
    double p = 2.0;
    double q = 4.0;
    double alpha = 0.0; // 0: 1/n where a body is involved
    std::size_t samples = 100000;
    std::size_t dirs = 0; // 0: per-command default
    std::uint64_t seed = 7;
    double tol = 0.0; // 0: per-command default
    unsigned max_n = 10;
    std::size_t trials = 1000;
    std::string out;
    std::string format = "csv";

    double quad_tol() const { return tol > 0.0 ? tol : 1e-9; }

    std::string echo() const {
        std::ostringstream os;
        os << "cmd=" << cmd << " body=" << body << " dim=" << dim << " p=" << fmt(p)
           << " q=" << fmt(q) << " alpha=" << fmt(alpha) << " samples=" << samples
           << " dirs=" << dirs << " seed=" << seed << " tol=" << fmt(tol)
           << " max=" << max_n << " trials=" << trials << " format=" << format;
        return os.str();
    }

    json to_json() const {
        return json{{"cmd", cmd},       {"body", body},     {"dim", dim},
                    {"p", p},           {"q", q},           {"alpha", alpha},
                    {"samples", samples}, {"dirs", dirs},   {"seed", seed},
                    {"tol", tol},       {"max", max_n},     {"trials", trials},
                    {"format", format}};
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes; // extra "# key=value" lines for CSV
    json json_rows = json::array();
};

void add_report_row(Table& t, const VerificationReport& rep) {
    t.rows.push_back({rep.check, fmt(rep.lhs), fmt(rep.rhs), fmt(rep.worst_margin),
                      fmt(rep.tolerance), fmt(rep.error_estimate),
                      rep.pass ? "true" : "false", rep.detail});
    t.json_rows.push_back(rep.to_json());
}

void report_columns(Table& t) {
    t.columns = {"check", "lhs",  "rhs",  "worst_margin",
                 "tolerance", "error_estimate", "pass", "detail"};
}

int emit(const RunConfig& cfg, const Table& t, int code) {
    std::ostringstream os;
    if (cfg.format == "csv") {
        os << "# covario " << kVersion << "\n";
        os << "# " << cfg.echo() << "\n";
        for (const auto& n : t.notes) os << "# " << n << "\n";
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << row[i];
            os << "\n";
        }
    } else {
        json doc{{"tool", "covario"},
                 {"version", kVersion},
                 {"config", cfg.to_json()},
                 {"rows", t.json_rows}};
        for (const auto& n : t.notes) {
            const auto eq = n.find('=');
            if (eq != std::string::npos)
                doc["meta"][n.substr(0, eq)] = n.substr(eq + 1);
        }
        os << doc.dump(2) << "\n";
    }
    if (cfg.out.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            std::cerr << "covario: cannot open output file " << cfg.out << "\n";
            return 2;
        }
        f << os.str();
    }
    return code;
}

ConvexBody resolve_body(const RunConfig& cfg) {
    const std::string& b = cfg.body;
    if (b.rfind("builtin:", 0) == 0) {
        const std::string name = b.substr(8);
        if (name == "cube") return ConvexBody::cube(cfg.dim, 1.0);
        if (name == "ball") return ConvexBody::unit_volume_ball(cfg.dim);
        if (name == "simplex") return ConvexBody::regular_simplex(cfg.dim);
        throw std::invalid_argument("unknown builtin body '" + name + "'");
    }
    std::string path = b;
    if (b.rfind("vpolytope:", 0) == 0) path = b.substr(10);
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read body file '" + path + "'");
    json j = json::parse(f);
    return ConvexBody::from_json(j);
}

bool simplex_like(const ConvexBody& K) {
    return K.kind() == ConvexBody::Kind::Simplex ||
           (K.kind() == ConvexBody::Kind::VPolytope &&
            K.vertices().size() == static_cast<std::size_t>(K.dim()) + 1);
}

int cmd_dn(const RunConfig& cfg) {
    Table t;
    t.columns = {"n", "D_n", "sqrt2_gap", "certified"};
    int code = 0;
    for (const DnScanRow& row : dn_limit_scan([&] {
             std::vector<unsigned> ns(cfg.max_n);
             for (unsigned i = 0; i < cfg.max_n; ++i) ns[i] = i + 1;
             return ns;
         }())) {
        t.rows.push_back({std::to_string(row.n), fmt(row.value), fmt(row.gap),
                          row.certified ? "true" : "false"});
        t.json_rows.push_back(json{{"n", row.n},
                                   {"D_n", row.value},
                                   {"sqrt2_gap", row.gap},
                                   {"certified", row.certified}});
        if (!row.certified) code = 1;
    }
    return emit(cfg, t, code);
}

int cmd_catalan(const RunConfig& cfg) {
    Table t;
    t.columns = {"n", "C_n"};
    for (unsigned n = 1; n <= cfg.max_n; ++n) {
        const std::string c = catalan(n).str();
        t.rows.push_back({std::to_string(n), c});
        t.json_rows.push_back(json{{"n", n}, {"C_n", c}});
    }
    return emit(cfg, t, 0);
}

int cmd_lemma(const RunConfig& cfg, bool (*holds)(unsigned), const char* name) {
    Table t;
    t.columns = {"n", "holds"};
    int code = 0;
    for (unsigned n = 1; n <= cfg.max_n; ++n) {
        const bool ok = holds(n);
        if (!ok) code = 1;
        t.rows.push_back({std::to_string(n), ok ? "true" : "false"});
        t.json_rows.push_back(json{{"n", n}, {"holds", ok}, {"lemma", name}});
    }
    return emit(cfg, t, code);
}

int cmd_covariogram(const RunConfig& cfg) {
    const ConvexBody K = resolve_body(cfg);
    const Covariogram g(K, Covariogram::Backend::Auto, cfg.samples, cfg.seed);
    const std::size_t dirs = cfg.dirs ? cfg.dirs : 256;

    Table t;
    report_columns(t);
    int code = 0;

    const VerificationReport density = check_probability_density(g, dirs, cfg.seed);
    const VerificationReport concav =
        check_one_over_n_concavity(g, cfg.trials, cfg.seed,
                                   cfg.tol > 0.0 ? cfg.tol : -1.0);
    add_report_row(t, density);
    add_report_row(t, concav);
    if (!density.pass || !concav.pass) code = 1;

    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(K.dim());
    e1(0) = 1.0;
    try {
        const VerificationReport moment = second_moment_identity(g, e1, dirs, cfg.seed);
        add_report_row(t, moment);
        if (!moment.pass) code = 1;
    } catch (const std::domain_error& e) {
        VerificationReport skipped;
        skipped.check = "covariogram_second_moment_identity";
        skipped.pass = true;
        skipped.detail = std::string("skipped: ") + e.what();
        add_report_row(t, skipped);
    }

    const VerificationReport level = simplex_levelset_check(
        K, {0.25, 0.5, 0.75}, cfg.dirs ? cfg.dirs : 64, cfg.seed,
        Covariogram::Backend::Auto, cfg.samples);
    add_report_row(t, level);
    if (simplex_like(K) && !level.pass) code = 1;
    return emit(cfg, t, code);
}

int cmd_ballbody(const RunConfig& cfg) {
    const ConvexBody K = resolve_body(cfg);
    const Covariogram g(K, Covariogram::Backend::Auto, cfg.samples, cfg.seed);
    const int n = K.dim();
    const std::size_t vol_dirs = cfg.dirs ? cfg.dirs : (n == 2 ? 256 : 4096);
    const VolumeEstimate vol =
        ballbody_volume(g, cfg.p, vol_dirs, cfg.seed, cfg.quad_tol());

    const BallBodyQuery q(g, cfg.p);
    const std::size_t table_dirs = cfg.dirs ? cfg.dirs : 64;
    const DirectionSet ds = sphere_directions(n, table_dirs, cfg.seed);

    Table t;
    t.columns.clear();
    for (int k = 0; k < n; ++k) t.columns.push_back("u" + std::to_string(k + 1));
    t.columns.push_back("rho");
    t.columns.push_back("rho_err");
    for (std::size_t i = 0; i < ds.count(); ++i) {
        const Eigen::VectorXd u = ds.dir(i);
        const RayValue r = q.radial(u, cfg.quad_tol());
        std::vector<std::string> row;
        json ju = json::array();
        for (int k = 0; k < n; ++k) {
            row.push_back(fmt(u(k)));
            ju.push_back(u(k));
        }
        row.push_back(fmt(r.value));
        row.push_back(fmt(r.std_error));
        t.rows.push_back(std::move(row));
        t.json_rows.push_back(
            json{{"u", ju}, {"rho", r.value}, {"rho_err", r.std_error}});
    }
    t.notes.push_back("p=" + fmt(cfg.p));
    t.notes.push_back("volume=" + fmt(vol.value));
    t.notes.push_back("volume_err=" + fmt(vol.std_error));
    return emit(cfg, t, 0);
}

int cmd_inclusion(const RunConfig& cfg) {
    const ConvexBody K = resolve_body(cfg);
    const Covariogram g(K, Covariogram::Backend::Auto, cfg.samples, cfg.seed);
    const double alpha = cfg.alpha > 0.0 ? cfg.alpha : 1.0 / K.dim();
    const std::size_t dirs = cfg.dirs ? cfg.dirs : 64;
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-8;

    Table t;
    report_columns(t);
    int code = 0;
    const VerificationReport chain =
        inclusion_logconcave_check(g, cfg.p, cfg.q, dirs, cfg.seed, tol);
    const VerificationReport sharp =
        inclusion_alpha_check(g, alpha, cfg.p, cfg.q, dirs, cfg.seed, tol);
    const VerificationReport finger =
        equality_case_fingerprint(g, alpha, dirs, 64, cfg.seed, tol);
    add_report_row(t, chain);
    add_report_row(t, sharp);
    add_report_row(t, finger);
    if (!chain.pass || !sharp.pass) code = 1;
    if (simplex_like(K) && !finger.pass) code = 1;
    return emit(cfg, t, code);
}

int cmd_gmono(const RunConfig& cfg) {
    const double alpha = cfg.alpha > 0.0 ? cfg.alpha : 1.0;
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-7;
    const std::vector<double> grid{0.5, 1.0, 2.0, 4.0, 8.0};

    Table t;
    report_columns(t);
    const VerificationReport suite =
        monotonicity_suite(cfg.trials, {alpha}, grid, cfg.seed, tol);
    add_report_row(t, suite);

    // The extremal profile must make G constant on the grid.
    const AlphaConcave1D h = AlphaConcave1D::extremal(alpha, 2.0);
    double worst = 0.0;
    for (const double p : grid)
        worst = std::max(worst, std::abs(h.g_function(p) - 2.0));
    VerificationReport extremal;
    extremal.check = "g_function_extremal_constant";
    extremal.lhs = worst;
    extremal.tolerance = 1e-10;
    extremal.worst_margin = extremal.tolerance - worst;
    extremal.pass = worst <= extremal.tolerance;
    add_report_row(t, extremal);

    return emit(cfg, t, suite.pass && extremal.pass ? 0 : 1);
}

int cmd_theorem1(const RunConfig& cfg) {
    const ConvexBody K = resolve_body(cfg);
    Theorem1Config tc;
    tc.samples = cfg.samples;
    tc.dirs = cfg.dirs;
    tc.seed = cfg.seed;
    tc.tol = cfg.quad_tol();
    const VolumeEstimate v = K.volume(cfg.samples, cfg.seed);
    tc.normalize = std::abs(v.value - 1.0) > std::max(1e-9, 3.0 * v.std_error);

    const Theorem1Report rep = theorem1_verify(K, tc, cfg.body);

    Table t;
    t.columns = {"body", "n", "L_K", "V", "L_ball", "D_n", "ratio", "pass", "equality"};
    t.rows.push_back({rep.body, std::to_string(rep.n), fmt(rep.L_K), fmt(rep.V),
                      fmt(rep.L_ball), fmt(rep.D_n), fmt(rep.ratio),
                      rep.pass ? "true" : "false", rep.equality ? "true" : "false"});
    t.json_rows.push_back(rep.to_json());
    return emit(cfg, t, rep.pass ? 0 : 1);
}

int cmd_volbound(const RunConfig& cfg) {
    const ConvexBody K = resolve_body(cfg);
    Theorem1Config tc;
    tc.samples = cfg.samples;
    tc.dirs = cfg.dirs;
    tc.seed = cfg.seed;
    tc.tol = cfg.quad_tol();
    const VerificationReport rep = volume_bound_check(K, tc, cfg.body);
    Table t;
    report_columns(t);
    add_report_row(t, rep);
    return emit(cfg, t, rep.pass ? 0 : 1);
}

int cmd_reduce(const RunConfig& cfg) {
    const ConvexBody K = resolve_body(cfg);
    Theorem1Config tc;
    tc.samples = cfg.samples;
    tc.dirs = cfg.dirs;
    tc.seed = cfg.seed;
    tc.tol = cfg.quad_tol();
    const ReductionReport rep = symmetric_reduction_report(K, tc, cfg.body);

    Table t;
    const int n = K.dim();
    for (int k = 0; k < n; ++k) t.columns.push_back("u" + std::to_string(k + 1));
    t.columns.push_back("rho_T");
    for (std::size_t i = 0; i < rep.directions.size(); ++i) {
        std::vector<std::string> row;
        for (int k = 0; k < n; ++k) row.push_back(fmt(rep.directions[i](k)));
        row.push_back(fmt(rep.radial_T[i]));
        t.rows.push_back(std::move(row));
    }
    t.json_rows.push_back(rep.to_json());
    t.notes.push_back("volume_T=" + fmt(rep.volume_T));
    t.notes.push_back("volume_T_err=" + fmt(rep.volume_T_err));
    t.notes.push_back("symmetry_defect=" + fmt(rep.symmetry_defect));
    t.notes.push_back("constant=" + fmt(rep.constant));
    t.notes.push_back(std::string("pass=") + (rep.pass ? "true" : "false"));
    return emit(cfg, t, rep.pass ? 0 : 1);
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    RunConfig cfg;
    CLI::App app{"covariogram / Ball-body verification toolkit"};
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* sub, bool with_body) {
        if (with_body) {
            sub->add_option("--body", cfg.body,
                            "builtin:cube|ball|simplex, vpolytope:<path>, or a "
                            "body JSON path");
            sub->add_option("--dim", cfg.dim, "dimension for builtin bodies");
        }
        sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
        sub->add_option("--dirs", cfg.dirs, "direction / panel count");
        sub->add_option("--seed", cfg.seed, "random seed (always echoed)");
        sub->add_option("--tol", cfg.tol, "tolerance override");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--format", cfg.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* dn_cmd = app.add_subcommand("dn", "table of D_n with certificates");
    dn_cmd->add_option("--max", cfg.max_n, "largest n");
    add_common(dn_cmd, false);

    CLI::App* cat_cmd = app.add_subcommand("catalan", "Catalan numbers");
    cat_cmd->add_option("--max", cfg.max_n, "largest n");
    add_common(cat_cmd, false);

    CLI::App* l41 = app.add_subcommand("lemma41", "exact auxiliary inequality");
    l41->add_option("--max", cfg.max_n, "largest n");
    add_common(l41, false);

    CLI::App* l42 = app.add_subcommand("lemma42", "exact induction-step inequality");
    l42->add_option("--max", cfg.max_n, "largest n");
    add_common(l42, false);

    CLI::App* cov = app.add_subcommand("covariogram", "covariogram property suite");
    add_common(cov, true);
    cov->add_option("--trials", cfg.trials, "concavity trial count");

    CLI::App* bb = app.add_subcommand("ballbody", "Ball body radial table and volume");
    add_common(bb, true);
    bb->add_option("--p", cfg.p, "Ball body exponent");

    CLI::App* inc = app.add_subcommand("inclusion", "inclusion chains and fingerprint");
    add_common(inc, true);
    inc->add_option("--p", cfg.p, "smaller exponent");
    inc->add_option("--q", cfg.q, "larger exponent");
    inc->add_option("--alpha", cfg.alpha, "concavity index (default 1/n)");

    CLI::App* gm = app.add_subcommand("gmono", "G_g monotonicity suite");
    gm->add_option("--trials", cfg.trials, "random profiles per run");
    gm->add_option("--alpha", cfg.alpha, "concavity index (default 1)");
    add_common(gm, false);

    CLI::App* th = app.add_subcommand("theorem1", "reduction inequality pipeline");
    add_common(th, true);

    CLI::App* vb = app.add_subcommand("volbound", "Ball body volume bound");
    add_common(vb, true);

    CLI::App* rd = app.add_subcommand("reduce", "symmetric reduction artifact");
    add_common(rd, true);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (dn_cmd->parsed()) return (cfg.cmd = "dn", cmd_dn(cfg));
        if (cat_cmd->parsed()) return (cfg.cmd = "catalan", cmd_catalan(cfg));
        if (l41->parsed()) return (cfg.cmd = "lemma41", cmd_lemma(cfg, lemma41_holds, "lemma41"));
        if (l42->parsed()) return (cfg.cmd = "lemma42", cmd_lemma(cfg, lemma42_holds, "lemma42"));
        if (cov->parsed()) return (cfg.cmd = "covariogram", cmd_covariogram(cfg));
        if (bb->parsed()) return (cfg.cmd = "ballbody", cmd_ballbody(cfg));
        if (inc->parsed()) return (cfg.cmd = "inclusion", cmd_inclusion(cfg));
        if (gm->parsed()) return (cfg.cmd = "gmono", cmd_gmono(cfg));
        if (th->parsed()) return (cfg.cmd = "theorem1", cmd_theorem1(cfg));
        if (vb->parsed()) return (cfg.cmd = "volbound", cmd_volbound(cfg));
        if (rd->parsed()) return (cfg.cmd = "reduce", cmd_reduce(cfg));
    } catch (const std::exception& e) {
        std::cerr << "covario: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace covario
