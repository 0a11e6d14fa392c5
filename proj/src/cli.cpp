#include "extham/cli.h"

#include "extham/catalog.h"
#include "extham/ccm.h"
#include "extham/dynamics.h"
#include "extham/errors.h"
#include "extham/ladder.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace extham::cli {

using nlohmann::json;
namespace cat = extham::catalog;

namespace {

struct ModelOptions {
    std::string model = "minkowski";
    std::string k = "1";
    double alpha = 1.0, beta = 2.0, omega = 0.0;
    bool no_integral = false;
    double d = std::numeric_limits<double>::quiet_NaN();
    std::string base = "hyperbolic";
    double C1 = 1.0, C2 = 0.5, C3 = 0.7, C4 = 0.3, eta = 2.0;
    double ta = 0.8, tb = 0.3, A = 1.0, psi0 = 0.5, lambda = 1.0;
    int kappa = 1;
    int m = 4, n = 1;
};

void add_model_options(CLI::App* app, ModelOptions& o) {
    app->add_option("--model", o.model,
                    "minkowski | minkowski-polar | generalized | curved | flat-ttw | remark-h1 | remark-h2 | free")
        ->capture_default_str();
    app->add_option("--k", o.k, "k as p/q (a decimal needs --no-integral)")->capture_default_str();
    app->add_option("--alpha", o.alpha)->capture_default_str();
    app->add_option("--beta", o.beta)->capture_default_str();
    app->add_option("--omega", o.omega)->capture_default_str();
    app->add_flag("--no-integral", o.no_integral, "build H and L only; allows real k");
    app->add_option("--d", o.d, "exponent of the remark pair");
    app->add_option("--base", o.base, "hyperbolic | trig")->capture_default_str();
    app->add_option("--C1", o.C1)->capture_default_str();
    app->add_option("--C2", o.C2)->capture_default_str();
    app->add_option("--C3", o.C3)->capture_default_str();
    app->add_option("--C4", o.C4)->capture_default_str();
    app->add_option("--eta", o.eta)->capture_default_str();
    app->add_option("--trig-alpha", o.ta)->capture_default_str();
    app->add_option("--trig-beta", o.tb)->capture_default_str();
    app->add_option("--A", o.A)->capture_default_str();
    app->add_option("--psi0", o.psi0)->capture_default_str();
    app->add_option("--lambda", o.lambda)->capture_default_str();
    app->add_option("--kappa", o.kappa)->capture_default_str();
    app->add_option("--m", o.m)->capture_default_str();
    app->add_option("--n", o.n)->capture_default_str();
}

ext::BaseSystem make_base(const ModelOptions& o) {
    if (o.base == "hyperbolic") return cat::make_base_family(o.C1, o.C2, o.C3, o.C4, o.eta);
    if (o.base == "trig") return cat::make_trig_family(o.ta, o.tb, o.A, o.psi0, o.lambda);
    throw std::invalid_argument("unknown base family '" + o.base + "'");
}

double parse_real_k(const std::string& s) {
    if (s.find('/') != std::string::npos) return cat::Rational::parse(s).value();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("cannot parse k = '" + s + "'");
    return v;
}

struct Built {
    cat::ModelInstance model;
    SamplingBox box;
};

SamplingBox psi_box_for(const ext::BaseSystem& base, SamplingBox box) {
    if (box.overrides.empty()) box.overrides = {{box.q_lo, box.q_hi}, {box.q_lo, box.q_hi}, {box.p_lo, box.p_hi}, {box.p_lo, box.p_hi}};
    if (base.family == "trig") {
        const double l = base.params.at("lambda"), p0 = base.params.at("psi0");
        double a = (0.2 - p0) / l, b = (std::numbers::pi - 0.2 - p0) / l;
        if (a > b) std::swap(a, b);
        box.overrides[1] = {a, b};
    }
    return box;
}

Built build_model(const ModelOptions& o) {
    Built b;
    if (o.model == "minkowski" || o.model == "minkowski-polar") {
        if (o.no_integral) {
            if (o.model != "minkowski") throw std::invalid_argument("--no-integral is only supported for the null chart");
            b.model = cat::make_minkowski_H(parse_real_k(o.k), o.alpha, o.beta, o.omega);
        } else {
            const auto k = cat::Rational::parse(o.k);
            b.model = o.model == "minkowski" ? cat::make_minkowski_H(k, o.alpha, o.beta, o.omega)
                                             : cat::make_minkowski_polar(k, o.alpha, o.beta, o.omega);
        }
        return b;
    }
    if (o.model == "generalized") {
        b.model = cat::make_generalized_H(make_base(o), o.m, o.n, o.omega);
        b.box = psi_box_for(*b.model.base, b.box);
        return b;
    }
    if (o.model == "curved") {
        const auto base = make_base(o);
        b.model = o.no_integral ? cat::make_curved_H(base, parse_real_k(o.k), base.c, o.kappa, o.omega)
                                : cat::make_curved_H(base, cat::Rational::parse(o.k), base.c, o.kappa, o.omega);
        b.box = psi_box_for(base, b.box);
        const double ac = std::abs(base.c);
        b.box.overrides[0] = o.kappa > 0 ? std::pair{0.3 / ac, 1.4 / ac} : std::pair{0.3 / ac, 2.0 / ac};
        return b;
    }
    if (o.model == "flat-ttw") {
        b.model = cat::make_flat_TTW_H(make_base(o), o.m, o.n, o.omega);
        b.box = psi_box_for(*b.model.base, b.box);
        return b;
    }
    if (o.model == "remark-h1" || o.model == "remark-h2") {
        const double d1 = o.model == "remark-h1" && !std::isnan(o.d) ? o.d : 2.0;
        const double d2 = o.model == "remark-h2" && !std::isnan(o.d) ? o.d : 3.0;
        auto [h1, h2] = cat::make_remark_pair(d1, d2);
        b.model = o.model == "remark-h1" ? h1 : h2;
        return b;
    }
    if (o.model == "free") {
        b.model.id = "free";
        b.model.H = PhaseFunction::from_expression(1, [](std::span<const Jet> z) { return 0.5 * z[1] * z[1]; });
        b.model.known_integrals = {{"p", PhaseFunction::coordinate(1, 1)}};
        b.model.geometry = "E1";
        return b;
    }
    throw std::invalid_argument("unknown model '" + o.model + "'");
}

json error_json(const std::string& what) { return {{"error", what}, {"pass", false}}; }

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---------------------------------------------------------------- verify

int cmd_verify(const ModelOptions& o, int points, std::uint64_t seed, double tol, std::ostream& out, std::ostream& err) {
    const Built b = build_model(o);
    const auto& mi = b.model;
    err << "verify: " << mi.id << " with " << mi.known_integrals.size() << " known integrals at " << points
        << " points\n";
    PointSampler sampler(seed, b.box);
    double max_abs = 0, max_rel = 0;
    int rank = std::numeric_limits<int>::max();
    std::vector<PhaseFunction> fs = {mi.H};
    for (const auto& ki : mi.known_integrals) fs.push_back(ki.f);
    const int expected_rank = int(fs.size());
    json per = json::object();
    for (int i = 0; i < points; ++i) {
        const PhasePoint x = sampler.draw(mi.H.dof());
        for (const auto& ki : mi.known_integrals) {
            const auto s = bracket_sample(mi.H, ki.f, x);
            max_abs = std::max(max_abs, std::abs(s.value));
            max_rel = std::max(max_rel, s.relative());
            auto& slot = per[ki.label];
            slot = std::max(slot.is_null() ? 0.0 : slot.get<double>(), s.relative());
        }
        rank = std::min(rank, ext::functional_independence(fs, x).rank);
    }
    if (points == 0) rank = 0;
    const bool pass = points > 0 && max_rel <= tol && rank == expected_rank;
    json r;
    r["model"] = mi.id;
    r["chart"] = cat::chart_name(mi.chart);
    r["geometry"] = mi.geometry;
    r["params"] = mi.params;
    if (mi.extension) {
        r["m"] = mi.extension->m;
        r["n"] = mi.extension->n;
    }
    r["K_form"] = mi.notes.count("K_form") ? mi.notes.at("K_form") : "";
    r["Omega"] = o.omega;
    r["num_points"] = points;
    r["rng_seed"] = seed;
    r["rng"] = PointSampler::kGeneratorName;
    r["tol"] = tol;
    r["max_abs_bracket"] = max_abs;
    r["max_rel_bracket"] = max_rel;
    r["max_rel_bracket_by_integral"] = per;
    r["independence_rank"] = rank;
    r["expected_rank"] = expected_rank;
    r["extendable"] = mi.extendable;
    r["notes"] = mi.notes;
    r["pass"] = pass;
    emit(out, r);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------- integrate

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    return v;
}

int cmd_integrate(const ModelOptions& o, const std::string& x0s, double h, int steps, const std::string& csv,
                  std::ostream& out, std::ostream& err) {
    const Built b = build_model(o);
    const auto& mi = b.model;
    const auto z = parse_list(x0s);
    if (int(z.size()) != 2 * mi.H.dof())
        throw std::invalid_argument("--x0 needs " + std::to_string(2 * mi.H.dof()) + " comma-separated values");
    const PhasePoint x0 = PhasePoint::from_coordinates(z);
    dyn::IntegratorOptions opt;
    if (mi.chart == cat::Chart::null_coordinates && mi.H.dof() == 2)
        opt.radius = [](const PhasePoint& x) { return x.q[0] > 0 && x.q[1] > 0 ? std::sqrt(2 * x.q[0] * x.q[1]) : 0.0; };
    else if (mi.H.dof() == 2)
        opt.radius = [](const PhasePoint& x) { return x.q[0]; };
    err << "integrate: " << mi.id << " h=" << h << " steps=" << steps << '\n';
    const auto tr = dyn::integrate(mi.H, x0, h, steps, opt);
    if (!csv.empty()) {
        std::ofstream f(csv);
        if (!f) throw std::runtime_error("cannot open " + csv);
        dyn::write_csv(f, tr);
    }
    std::vector<PhaseFunction> fs = {mi.H};
    std::vector<std::string> labels = {"H"};
    for (const auto& ki : mi.known_integrals) {
        fs.push_back(ki.f);
        labels.push_back(ki.label);
    }
    const auto drift = dyn::drift_report(tr, fs);
    json r;
    r["model"] = mi.id;
    r["method"] = tr.method;
    r["h"] = h;
    r["steps_requested"] = steps;
    r["steps_done"] = int(tr.states.size()) - 1;
    r["status"] = dyn::status_name(tr.status);
    if (tr.status == dyn::Status::domain_exit) {
        r["exit_step"] = tr.exit_step;
        r["exit_reason"] = tr.exit_reason;
    }
    json d = json::object();
    for (std::size_t i = 0; i < fs.size(); ++i) d[labels[i]] = drift[i];
    r["drift"] = d;
    r["final_state"] = tr.states.back().coordinates();
    if (!csv.empty()) r["csv"] = csv;
    emit(out, r);
    return 0;
}

// ---------------------------------------------------------------- ccm

int cmd_ccm(const ModelOptions& o, double E, int points, std::uint64_t seed, double tol, std::ostream& out,
            std::ostream& err) {
    ModelOptions ho = o;
    ho.base = "hyperbolic";
    const auto base = make_base(ho);
    const auto fam = ccm::extended_family(base, o.m, o.n);
    const auto res = ccm::ccm_transform(fam.Hhat, fam.builder, {fam.U, E, true});
    const auto Hv = ccm::rescale_radial(res.Hprime);
    const auto Kv = ccm::rescale_radial(res.Kprime);
    const auto H2 = ccm::h2_direct(base, o.m, o.n, E);
    err << "ccm: m=" << o.m << " n=" << o.n << " E=" << E << '\n';
    PointSampler sampler(seed);
    double br_u = 0, br_v = 0, chart = 0;
    for (int i = 0; i < points; ++i) {
        const PhasePoint x = sampler.draw(2);
        br_u = std::max(br_u, bracket_sample(res.Hprime, res.Kprime, x).relative());
        const PhasePoint y = ccm::to_radial(x);
        br_v = std::max(br_v, bracket_sample(Hv, Kv, y).relative());
        const double a = Hv(y), bb = H2(y);
        chart = std::max(chart, std::abs(a - bb) / (1 + std::abs(bb)));
    }
    const bool pass = points > 0 && br_u <= tol && br_v <= tol && chart <= 1e-12;
    json r;
    r["m"] = o.m;
    r["n"] = o.n;
    r["E"] = E;
    r["eta"] = fam.eta;
    r["base"] = base.params;
    r["num_points"] = points;
    r["rng_seed"] = seed;
    r["rng"] = PointSampler::kGeneratorName;
    r["tol"] = tol;
    r["max_rel_bracket_u"] = br_u;
    r["max_rel_bracket_v"] = br_v;
    r["max_rel_h2_mismatch"] = chart;
    r["pass"] = pass;
    emit(out, r);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------- gamma table

struct Form {
    int sign;
    std::string fn;  // sin, cos, sinh, cosh, tan, tanh
    int power;
};

std::string form_name(const Form& f) {
    return std::string(f.sign < 0 ? "-" : "") + f.fn + "^" + std::to_string(f.power) + " u";
}

double form_value(const Form& f, double u) {
    double b = 0;
    if (f.fn == "sin") b = std::sin(u);
    else if (f.fn == "cos") b = std::cos(u);
    else if (f.fn == "sinh") b = std::sinh(u);
    else if (f.fn == "cosh") b = std::cosh(u);
    else if (f.fn == "tan") b = std::tan(u);
    else b = std::tanh(u);
    return f.sign * std::pow(b, f.power);
}

// the matching candidate, if any
std::optional<Form> classify(const std::vector<double>& us, const std::vector<double>& vals, int power) {
    for (const char* fn : {"sin", "cos", "sinh", "cosh", "tan", "tanh"})
        for (int sign : {1, -1}) {
            const Form f{sign, fn, power};
            bool ok = true;
            for (std::size_t i = 0; i < us.size() && ok; ++i) {
                const double e = form_value(f, us[i]);
                ok = std::abs(vals[i] - e) <= 1e-12 * (1 + std::abs(e));
            }
            if (ok) return f;
        }
    return std::nullopt;
}

int cmd_gamma_table(bool as_json, std::ostream& out, std::ostream& err) {
    struct Row {
        std::string table;
        double c;
        int kappa;
        bool translated;
        Form expected;
    };
    const std::vector<Row> rows = {
        {"gamma_prime", 1, 1, false, {-1, "sin", -2}},  {"gamma_prime", 1, -1, false, {-1, "sinh", -2}},
        {"gamma_prime", -1, 1, false, {1, "sin", -2}},  {"gamma_prime", -1, -1, false, {1, "sinh", -2}},
        {"gamma_prime", 1, 1, true, {-1, "cos", -2}},   {"gamma_prime", 1, -1, true, {1, "cosh", -2}},
        {"gamma_prime", -1, 1, true, {1, "cos", -2}},   {"gamma_prime", -1, -1, true, {-1, "cosh", -2}},
        {"gamma_squared", 1, 1, false, {1, "tan", -2}}, {"gamma_squared", 1, -1, false, {1, "tanh", -2}},
        {"gamma_squared", -1, 1, false, {1, "tan", -2}}, {"gamma_squared", -1, -1, false, {1, "tanh", -2}},
        {"gamma_squared", 1, 1, true, {1, "tan", 2}},   {"gamma_squared", 1, -1, true, {1, "tanh", 2}},
        {"gamma_squared", -1, 1, true, {1, "tan", 2}},  {"gamma_squared", -1, -1, true, {1, "tanh", 2}},
    };
    const std::vector<double> us = {0.3, 0.7, 1.1, 1.4};
    json list = json::array();
    bool all = true;
    for (const auto& row : rows) {
        const auto g = tagged::GammaProfile::make(row.c, row.kappa * row.c, 0.0, row.translated);
        std::vector<double> vals;
        for (double u : us) {
            const double gm = tagged::gamma(g, u);
            vals.push_back(row.table == "gamma_prime" ? tagged::gamma_prime(g, u) : gm * gm);
        }
        const auto got = classify(us, vals, row.expected.power);
        const bool match = got && got->sign == row.expected.sign && got->fn == row.expected.fn;
        all = all && match;
        list.push_back({{"table", row.table},
                        {"c", row.c},
                        {"kappa", row.kappa},
                        {"translation", row.translated ? (row.kappa > 0 ? "u -> u + pi/2" : "u -> u + i pi/2") : "none"},
                        {"expected", form_name(row.expected)},
                        {"computed", got ? form_name(*got) : "unclassified"},
                        {"match", match}});
    }
    // c = 0: gamma' = -C
    for (double C : {-1.0, 2.0}) {
        const auto g = tagged::GammaProfile::make(0.0, C);
        bool match = true;
        for (double u : us) match = match && tagged::gamma_prime(g, u) == -C;
        all = all && match;
        list.push_back({{"table", "gamma_prime"},
                        {"c", 0.0},
                        {"C", C},
                        {"expected", "-C"},
                        {"computed", match ? "-C" : "unclassified"},
                        {"match", match}});
    }
    if (as_json) {
        emit(out, {{"rows", list}, {"pass", all}});
    } else {
        for (const auto& r : list) {
            out << r["table"].get<std::string>() << "  c=" << r["c"].get<double>();
            if (r.contains("kappa")) out << "  kappa=" << r["kappa"].get<int>() << "  " << r["translation"].get<std::string>();
            else out << "  C=" << r["C"].get<double>();
            out << "  " << r["computed"].get<std::string>();
            out << (r["match"].get<bool>() ? "  ok" : "  MISMATCH") << '\n';
        }
    }
    if (!all) err << "gamma-table: mismatch with the reference tables\n";
    return all ? 0 : 1;
}

// ---------------------------------------------------------------- ladder

int cmd_ladder(const ModelOptions& o, int points, std::uint64_t seed, double tol, std::ostream& out, std::ostream& err) {
    const auto base = make_base(o);
    const auto data = ladder::LadderData::from_base(base);
    const SamplingBox box = psi_box_for(base, SamplingBox{});
    PointSampler sampler(seed, box);
    double r1 = 0, r2 = 0;
    json diag = {{"printed", 0.0}, {"first_order", 0.0}, {"second_order", 0.0}, {"evaluated", 0}, {"skipped", 0}};
    for (int i = 0; i < points; ++i) {
        const PhasePoint x = sampler.draw(1);
        const auto r = ladder::ladder_residuals(data, x.q[0]);
        const double scale = 1 + std::abs(base.V(x));
        r1 = std::max(r1, std::abs(r.r1) / scale);
        r2 = std::max(r2, std::abs(r.r2) / scale);
        try {
            const auto d = ladder::ladder_eigen_diagnostics(data, x, 1);
            diag["printed"] = std::max(diag["printed"].get<double>(), std::abs(d.printed) / d.scale);
            diag["first_order"] = std::max(diag["first_order"].get<double>(), std::abs(d.first_order) / d.scale);
            diag["second_order"] = std::max(diag["second_order"].get<double>(), std::abs(d.second_order) / d.scale);
            diag["evaluated"] = diag["evaluated"].get<int>() + 1;
        } catch (const DomainError&) {
            diag["skipped"] = diag["skipped"].get<int>() + 1;
        }
    }
    const bool pass = points > 0 && r1 <= tol && r2 <= tol;
    err << "ladder: " << base.family << " base, " << points << " samples\n";
    json r;
    r["base"] = base.family;
    r["params"] = base.params;
    r["c1"] = data.c1;
    r["eta2"] = data.eta2;
    r["num_points"] = points;
    r["rng_seed"] = seed;
    r["rng"] = PointSampler::kGeneratorName;
    r["tol"] = tol;
    r["max_rel_r1"] = r1;
    r["max_rel_r2"] = r2;
    r["eigen_relation_diagnostic"] = diag;
    r["pass"] = pass;
    emit(out, r);
    return pass ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"extham: extended Hamiltonians and their first integrals"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    std::uint64_t seed = 7;
    int points = 50;
    double tol = 1e-9;
    double ladder_tol = 1e-10;
    bool as_json = false;
    ModelOptions mo;
    auto common = [&](CLI::App* sub, double& tol_slot) {
        sub->add_option("--seed", seed)->capture_default_str();
        sub->add_option("--points", points)->capture_default_str()->check(CLI::NonNegativeNumber);
        sub->add_option("--tol", tol_slot)->capture_default_str();
        sub->add_flag("--json", as_json, "JSON output (default for every subcommand except gamma-table)");
    };

    auto* verify = app.add_subcommand("verify", "bracket and rank sweep for a catalog model");
    common(verify, tol);
    add_model_options(verify, mo);

    std::string x0 = "3,1,2,0.5", csv;
    double h = 1e-3;
    int steps = 10000;
    auto* integ = app.add_subcommand("integrate", "implicit-midpoint trajectory with drift summary");
    common(integ, tol);
    add_model_options(integ, mo);
    integ->add_option("--x0", x0, "initial state q..., p... (comma-separated)")->capture_default_str();
    integ->add_option("--h", h)->capture_default_str();
    integ->add_option("--steps", steps)->capture_default_str();
    integ->add_option("--csv", csv, "write the trajectory to this file");

    double E = 0.6;
    auto* ccm_cmd = app.add_subcommand("ccm", "coupling-constant metamorphosis of the generalized family");
    common(ccm_cmd, tol);
    add_model_options(ccm_cmd, mo);
    ccm_cmd->add_option("--E", E)->capture_default_str();

    auto* gt = app.add_subcommand("gamma-table", "reproduce the gamma' and gamma^2 translation tables");
    common(gt, tol);

    auto* lad = app.add_subcommand("ladder", "ladder-function conditions for a base family");
    common(lad, ladder_tol);
    add_model_options(lad, mo);

    auto* catc = app.add_subcommand("catalog", "list the catalog models");
    common(catc, tol);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) return cmd_verify(mo, points, seed, tol, out, err);
        if (*integ) return cmd_integrate(mo, x0, h, steps, csv, out, err);
        if (*ccm_cmd) return cmd_ccm(mo, E, points, seed, tol, out, err);
        if (*gt) return cmd_gamma_table(as_json, out, err);
        if (*lad) return cmd_ladder(mo, points, seed, ladder_tol, out, err);
        if (*catc) {
            emit(out, catalog::catalog_listing());
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        emit(out, error_json(e.what()));
        return 2;
    }
    return 2;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace extham::cli
