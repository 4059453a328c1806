#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gnf/fieldspec.hpp"
#include "gnf/flatsolver.hpp"
#include "gnf/gevreyfn.hpp"
#include "gnf/liouville.hpp"
#include "gnf/normalform.hpp"
#include "gnf/reports.hpp"
#include "gnf/smalldivisors.hpp"

// gnf: normal forms, small divisors, and cohomological solvers for truncated
// vector fields. Every subcommand writes report.json (byte-stable for fixed
// inputs) and series.csv under --output; run metadata goes to metadata.json.

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gnf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;

struct OutputSink {
    fs::path dir;
    std::string format = "both";

    void emit(const json& report, const std::string& csv) const {
        fs::create_directories(dir);
        if (format != "csv") reports::write_text((dir / "report.json").string(), report.dump(2) + "\n");
        if (format != "json") reports::write_text((dir / "series.csv").string(), csv);
        json meta;
        meta["written_at"] = static_cast<long long>(std::time(nullptr));
        reports::write_text((dir / "metadata.json").string(), meta.dump(2) + "\n");
    }
};

unsigned env_default_precision() {
    if (const char* e = std::getenv("GNF_PRECISION_BITS")) {
        long v = std::atol(e);
        if (v >= 64) return static_cast<unsigned>(v);
    }
    return kDefaultPrecisionBits;
}

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParamError("cannot open input file: " + path);
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw ParamError("malformed JSON in " + path + ": " + e.what());
    }
}

std::vector<CEig> parse_lambda(const std::string& text) {
    std::vector<CEig> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.emplace_back(k_from_string<BigFloat>(item));
    }
    if (out.empty()) throw ParamError("--lambda: no eigenvalues parsed");
    return out;
}

// ---------------------------------------------------------------------------
// normalize
// ---------------------------------------------------------------------------

template <class K>
int run_normalize_typed(const cli::FieldSpec& spec, unsigned nmax, const std::string& mode,
                        double alpha, bool ack_nonhyperbolic, const OutputSink& sink) {
    PrecisionGuard prec(spec.precision_bits);
    auto x = cli::to_graded<K>(spec, nmax);
    auto m = mode == "linearize" ? homological::SolveMode::linearize : homological::SolveMode::normal_form;
    nf::Options opt;
    opt.acknowledge_nonhyperbolic = ack_nonhyperbolic;
    try {
        auto result = nf::normalize(x, m, opt);
        auto majorant = nf::majorant_check(x, result, alpha);
        json report = reports::normalization_report(result, &majorant);
        report["mode"] = mode;
        report["nmax"] = nmax;
        report["alpha"] = reports::fixed(alpha);
        report["input"] = cli::fieldspec_to_json(spec);
        std::ostringstream csv;
        reports::normalization_csv(csv, result, &majorant);
        sink.emit(report, csv.str());
        return kExitOk;
    } catch (const NotLinearizableError& e) {
        json report;
        report["error"] = "not-formally-linearizable";
        report["resonant_degree"] = e.degree;
        report["resonant_part"] = e.resonant_part;
        report["mode"] = mode;
        report["input"] = cli::fieldspec_to_json(spec);
        sink.emit(report, "delta,u_norm,n_norm,eta,sigma,residual\n");
        std::cerr << "gnf normalize: " << e.what() << "\n";
        return kExitDomain;
    }
}

int run_normalize(const std::string& input, unsigned degree, const std::string& mode, double alpha,
                  bool ack_nonhyperbolic, const OutputSink& sink) {
    auto spec = cli::parse_fieldspec(load_json(input));
    unsigned nmax = degree ? degree : spec.max_term_degree();
    if (spec.scalar_field == "rational")
        return run_normalize_typed<Rat>(spec, nmax, mode, alpha, ack_nonhyperbolic, sink);
    return run_normalize_typed<BigFloat>(spec, nmax, mode, alpha, ack_nonhyperbolic, sink);
}

// ---------------------------------------------------------------------------
// smalldiv
// ---------------------------------------------------------------------------

int run_smalldiv(const std::string& input, const std::string& lambda_text, unsigned kmax, double alpha,
                 double beta, double sigma_c, unsigned qcap, const OutputSink& sink) {
    reports::SmallDivisorBundle b;
    b.alpha = alpha;
    b.beta = beta;
    b.kmax = kmax;

    std::vector<CEig> lambda;
    unsigned n = 0;
    if (!input.empty()) {
        auto spec = cli::parse_fieldspec(load_json(input));
        PrecisionGuard prec(spec.precision_bits);
        n = spec.n;
        if (spec.scalar_field == "rational") {
            auto x = cli::to_graded<Rat>(spec, 2);
            lambda = x.linear().eigenvalues();
            b.a_seq = homological::a_sequence(x.linear(), kmax);
        } else {
            auto x = cli::to_graded<BigFloat>(spec, 2);
            lambda = x.linear().eigenvalues();
            b.a_seq = homological::a_sequence(x.linear(), kmax);
        }
    } else {
        lambda = parse_lambda(lambda_text);
        n = static_cast<unsigned>(lambda.size());
        // eigenvalue list input: a_k through the diagonal realization
        std::vector<BigFloat> diag;
        bool real = true;
        for (const auto& ev : lambda) {
            diag.push_back(ev.re);
            if (!ev.real()) real = false;
        }
        if (real) b.a_seq = homological::a_sequence(LinearPart<BigFloat>::diagonal(diag), kmax);
    }

    b.lambda = lambda;
    smalldiv::OmegaOptions opts;
    opts.qcap = qcap;
    b.omega = smalldiv::omega_sequence(lambda, kmax, opts);
    b.brjuno = smalldiv::brjuno_partials(b.omega.omega);
    b.cm = smalldiv::carletti_marmi_sequence(b.omega.omega, alpha, beta);

    std::vector<BigFloat> a_plain;
    for (const auto& v : b.a_seq)
        if (v) a_plain.push_back(*v);
    if (a_plain.size() == b.a_seq.size() && !a_plain.empty()) {
        try {
            b.siegel = smalldiv::siegel_fit(a_plain);
        } catch (const InsufficientDataError&) {
        }
        b.eta = smalldiv::eta_sequence<BigFloat>(a_plain, alpha, kmax);
        b.sigma = smalldiv::sigma_sequence<BigFloat>(BigFloat(sigma_c), BigFloat(sqrt(BigFloat(n))), kmax).sigma;
        try {
            b.beta_fit = smalldiv::gevrey_bound_fit(b.eta);
        } catch (const InsufficientDataError&) {
        }
    }

    json report = reports::smalldiv_report(b);
    std::ostringstream csv;
    reports::smalldiv_csv(csv, b);
    sink.emit(report, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// liouville
// ---------------------------------------------------------------------------

int run_liouville(double alpha, double beta, unsigned terms, unsigned precision_bits, unsigned degree,
                  const OutputSink& sink) {
    if (beta < alpha + 1.0) throw ParamError("liouville: requires beta - alpha >= 1");
    auto data = liouville::build_liouville_zeta(beta - alpha, terms, precision_bits);
    unsigned nmax = degree ? degree : liouville::default_nmax(data);
    auto rep = liouville::verify_divergence(data, alpha, nmax);
    json report = reports::liouville_report(data, rep, alpha);
    std::ostringstream csv;
    reports::liouville_csv(csv, data, rep);
    sink.emit(report, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// flatsolve
// ---------------------------------------------------------------------------

flat::ContractionField build_field(const json& j) {
    flat::ContractionField field;
    if (j.contains("model")) {
        std::string model = j.at("model").get<std::string>();
        if (model == "linear-contraction-1d") {
            field.n = 1;
            field.p = 0;
            field.eval = [](const flat::Point& x, flat::Point& out) { out.assign(1, -x[0]); };
            field.jacobian = [](const flat::Point&, std::vector<double>& jac) { jac.assign(1, -1.0); };
        } else {
            throw ParamError("flatsolve: unknown model '" + model + "'");
        }
    } else if (j.contains("field")) {
        auto spec = cli::parse_fieldspec(j.at("field"));
        auto graded = cli::to_graded<BigFloat>(spec, std::max(2u, spec.max_term_degree()));
        field.n = spec.n;
        field.p = j.value("p", 0u);
        field.eval = [graded](const flat::Point& x, flat::Point& out) {
            out.assign(x.size(), 0.0);
            std::vector<BigFloat> xb;
            for (double v : x) xb.emplace_back(v);
            for (unsigned i = 0; i < graded.dim(); ++i)
                out[i] = static_cast<double>(BigFloat(graded.component_series(i).eval(xb)));
        };
    } else {
        throw ParamError("flatsolve: input needs 'model' or 'field'");
    }
    for (const auto& r : j.at("box")) field.box.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    if (field.box.ranges.size() != field.n) throw ParamError("flatsolve: box rank != dimension");
    return field;
}

int run_flatsolve(const std::string& input, double tol, unsigned grid, const OutputSink& sink) {
    json j = load_json(input);
    auto field = build_field(j);
    auto cert = flat::certify_contraction(field, grid ? grid : 17);
    json report;
    report["certified"] = cert.ok;
    if (!cert.ok) {
        report["witness"] = cert.witness;
        report["reason"] = cert.reason;
        sink.emit(report, "x,value\n");
        std::cerr << "gnf flatsolve: contraction certificate failed: " << cert.reason << "\n";
        return kExitDomain;
    }
    field.c = cert.c;
    field.C = cert.C;
    field.certified = true;
    report["c"] = reports::fixed(cert.c);
    report["C"] = reports::fixed(cert.C);

    std::string equation = j.value("equation", std::string("lie-derivative"));
    std::vector<flat::Point> points;
    for (const auto& pt : j.at("points")) {
        flat::Point x;
        for (const auto& v : pt) x.push_back(v.get<double>());
        points.push_back(std::move(x));
    }

    std::ostringstream csv;
    bool sandwich_all = true;
    if (equation == "lie-derivative") {
        flat::FlatScalar h;
        const auto& hj = j.at("h");
        h.profile = gevrey::parse_expr(hj.at("profile").get<std::string>());
        h.beta = hj.value("beta", 2.0);
        if (hj.contains("M")) h.M = hj.at("M").get<double>();
        if (hj.contains("eta")) h.eta = hj.at("eta").get<double>();
        csv << "x,value,error_estimate\n";
        json values = json::array();
        for (const auto& x : points) {
            auto rep = flat::solve_lie_derivative(field, h, x, tol);
            sandwich_all = sandwich_all && rep.sandwich_ok;
            for (std::size_t i = 0; i < x.size(); ++i) csv << (i ? ";" : "") << reports::fixed(x[i]);
            csv << "," << reports::fixed(rep.value, 15) << "," << reports::fixed(rep.error_estimate, 6) << "\n";
            values.push_back(reports::fixed(rep.value, 15));
        }
        report["values"] = values;
        report["residual_sup"] = reports::fixed(flat::lie_derivative_residual(field, h, points, tol), 6);
    } else if (equation == "lie-bracket") {
        flat::FlatVector y;
        const auto& yj = j.at("y");
        for (const auto& prof : yj.at("profiles"))
            y.profiles.push_back(prof.is_null() ? nullptr : gevrey::parse_expr(prof.get<std::string>()));
        y.beta = yj.value("beta", 2.0);
        if (yj.contains("M")) y.M = yj.at("M").get<double>();
        if (yj.contains("eta")) y.eta = yj.at("eta").get<double>();
        csv << "x,value,error_estimate\n";
        json values = json::array();
        for (const auto& x : points) {
            auto rep = flat::solve_lie_bracket(field, y, x, tol);
            sandwich_all = sandwich_all && rep.sandwich_ok;
            for (std::size_t i = 0; i < x.size(); ++i) csv << (i ? ";" : "") << reports::fixed(x[i]);
            csv << ",";
            for (std::size_t i = 0; i < rep.value.size(); ++i)
                csv << (i ? ";" : "") << reports::fixed(rep.value[i], 15);
            csv << "," << reports::fixed(rep.error_estimate, 6) << "\n";
            json row = json::array();
            for (double v : rep.value) row.push_back(reports::fixed(v, 15));
            values.push_back(row);
        }
        report["values"] = values;
        report["residual_sup"] = reports::fixed(flat::lie_bracket_residual(field, y, points, tol), 6);
    } else {
        throw ParamError("flatsolve: equation must be lie-derivative or lie-bracket");
    }
    report["sandwich_ok"] = sandwich_all;
    report["tol"] = reports::fixed(tol, 6);
    sink.emit(report, csv.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// gevrey-fit / gevreynorm
// ---------------------------------------------------------------------------

int run_gevrey_fit(const std::string& input, unsigned min_points, const OutputSink& sink) {
    json j = load_json(input);
    std::vector<BigFloat> norms;
    for (const auto& v : j.at("norms"))
        norms.push_back(v.is_string() ? k_from_string<BigFloat>(v.get<std::string>())
                                      : BigFloat(v.get<double>()));
    auto fit = nf::gevrey_order_fit(norms, min_points);
    json report;
    report["beta_hat"] = reports::fixed(fit.beta_hat);
    report["c_hat"] = reports::fixed(fit.c_hat);
    report["r2"] = reports::fixed(fit.r2);
    std::ostringstream csv;
    csv << "delta,norm\n";
    for (std::size_t i = 0; i < norms.size(); ++i) csv << (i + 1) << "," << bf_to_string(norms[i]) << "\n";
    sink.emit(report, csv.str());
    return kExitOk;
}

int run_gevreynorm(const std::string& expr_text, double alpha, double width, unsigned jmax,
                   const std::string& points_text, const OutputSink& sink) {
    auto expr = gevrey::parse_expr(expr_text);
    std::vector<double> pts;
    std::stringstream ss(points_text);
    std::string item;
    while (std::getline(ss, item, ',')) pts.push_back(std::stod(item));
    if (pts.empty()) pts.push_back(0.0);
    auto table = gevrey::truncated_gevrey_norm(expr, pts, alpha, width, jmax);
    json report = reports::gevreynorm_report(table, alpha, width);
    report["expr"] = expr_text;
    std::ostringstream csv;
    csv << "J,partial_sum\n";
    for (std::size_t i = 0; i < table.partial.size(); ++i)
        csv << i << "," << reports::fixed(table.partial[i], 15) << "\n";
    sink.emit(report, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gnf: Gevrey normal forms, small divisors, and flat cohomological solvers"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string output_dir = ".";
    std::string format = "both";
    app.add_option("--output", output_dir, "output directory")->capture_default_str();
    app.add_option("--format", format, "json|csv|both")->check(CLI::IsMember({"json", "csv", "both"}));

    std::string input, mode = "normal-form", lambda_text, expr_text = "exp(x)", points_text = "0";
    unsigned degree = 0, kmax = 8, terms = 5, jmax = 20, min_points = 5, grid = 0, qcap = 0;
    double alpha = 0.0, beta = 1.0, tol = 1e-8, sigma_c = 1.0, width = 1.0;
    unsigned precision_bits = env_default_precision();

    auto* c_norm = app.add_subcommand("normalize", "normalize or linearize a truncated field");
    c_norm->add_option("--input", input, "FieldSpec JSON")->required();
    c_norm->add_option("--degree", degree, "truncation order Nmax (default: max term degree)");
    c_norm->add_option("--mode", mode, "linearize|normal-form")
        ->check(CLI::IsMember({"linearize", "normal-form"}));
    c_norm->add_option("--alpha", alpha, "Gevrey exponent for the majorant check");
    bool ack_nonhyperbolic = false;
    c_norm->add_flag("--acknowledge-nonhyperbolic", ack_nonhyperbolic,
                     "linearize despite a non-hyperbolic linear part");

    auto* c_sd = app.add_subcommand("smalldiv", "small-divisor sequences and conditions");
    c_sd->add_option("--input", input, "FieldSpec JSON (matrix + eigenvalues)");
    c_sd->add_option("--lambda", lambda_text, "comma-separated eigenvalues (alternative to --input)");
    c_sd->add_option("--kmax", kmax, "horizon")->capture_default_str();
    c_sd->add_option("--alpha", alpha, "Gevrey exponent of the data");
    c_sd->add_option("--beta", beta, "target Gevrey order for the Carletti-Marmi bracket");
    c_sd->add_option("--sigma-c", sigma_c, "composition constant C for the sigma recursion");
    c_sd->add_option("--qcap", qcap, "brute-force cap on |Q| (0: by dimension)");

    auto* c_li = app.add_subcommand("liouville", "Liouville divergence example");
    c_li->add_option("--alpha", alpha, "Gevrey exponent of the data");
    c_li->add_option("--beta", beta, "target divergence order (beta-alpha >= 1)");
    c_li->add_option("--terms", terms, "number of convergent scales")->capture_default_str();
    c_li->add_option("--precision-bits", precision_bits, "working precision");
    c_li->add_option("--degree", degree, "engine truncation (default: three scales)");

    auto* c_fs = app.add_subcommand("flatsolve", "cohomological equations with flat data");
    c_fs->add_option("--input", input, "solver spec JSON")->required();
    c_fs->add_option("--tol", tol, "target tolerance")->capture_default_str();
    c_fs->add_option("--grid", grid, "certification grid per dimension");

    auto* c_gf = app.add_subcommand("gevrey-fit", "fit beta, C from a norm sequence");
    c_gf->add_option("--input", input, "JSON with a 'norms' array")->required();
    c_gf->add_option("--min-points", min_points, "minimum nonzero norms")->capture_default_str();

    auto* c_gn = app.add_subcommand("gevreynorm", "truncated Gevrey norm table");
    c_gn->add_option("--expr", expr_text, "model function, e.g. 'exp(-1/x^2)'")->required();
    c_gn->add_option("--alpha", alpha, "Gevrey order (>= 1)");
    c_gn->add_option("--width", width, "norm width L")->capture_default_str();
    c_gn->add_option("--jmax", jmax, "truncation order")->capture_default_str();
    c_gn->add_option("--points", points_text, "comma-separated evaluation points")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    OutputSink sink{fs::path(output_dir), format};
    set_working_precision_bits(precision_bits);

    try {
        if (app.got_subcommand(c_norm))
            return run_normalize(input, degree, mode, alpha, ack_nonhyperbolic, sink);
        if (app.got_subcommand(c_sd)) {
            if (input.empty() && lambda_text.empty())
                throw ParamError("smalldiv: need --input or --lambda");
            return run_smalldiv(input, lambda_text, kmax, alpha, beta, sigma_c, qcap, sink);
        }
        if (app.got_subcommand(c_li))
            return run_liouville(alpha, beta, terms, precision_bits, degree, sink);
        if (app.got_subcommand(c_fs)) return run_flatsolve(input, tol, grid, sink);
        if (app.got_subcommand(c_gf)) return run_gevrey_fit(input, min_points, sink);
        if (app.got_subcommand(c_gn))
            return run_gevreynorm(expr_text, alpha < 1.0 ? 1.0 : alpha, width, jmax, points_text, sink);
    } catch (const ParamError& e) {
        std::cerr << "gnf: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ShapeError& e) {
        std::cerr << "gnf: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "gnf: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
