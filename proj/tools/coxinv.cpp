#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "coxinv/json_io.hpp"
#include "coxinv/verify.hpp"

using namespace coxinv;

namespace {

struct GlobalOpts {
    std::string group_label;
    std::string group_json;
    std::string mode = "auto";  // exact | float | auto
    bool pretty = false;
    uint64_t seed = 0;
    double tol = 1e-9;
};

// JSON argument values may be given inline or as @path.
njson read_json_arg(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw ConfigError("cannot open file: " + arg.substr(1));
        return njson::parse(in);
    }
    return njson::parse(arg);
}

GroupSpec resolve_spec(const GlobalOpts& g) {
    if (!g.group_json.empty()) return spec_from_json(read_json_arg(g.group_json));
    if (!g.group_label.empty()) return GroupSpec::parse_label(g.group_label);
    throw ConfigError("a group is required (--group or --group-json)");
}

bool use_exact(const GlobalOpts& g, const GroupSpec& spec) {
    if (g.mode == "exact") {
        if (spec.requires_float())
            throw ConfigError("exact mode is unavailable for this group (irrational dihedral data)");
        return true;
    }
    if (g.mode == "float") return false;
    if (g.mode == "auto") return !spec.requires_float();
    throw ConfigError("mode must be exact, float or auto");
}

template <class T>
std::vector<T> parse_point(const std::string& csv) {
    std::vector<T> x;
    std::string tok;
    std::istringstream in(csv);
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        x.push_back(scalar_from_string<T>(tok));
    }
    return x;
}

void emit(const njson& j, const GlobalOpts& g) {
    std::cout << (g.pretty ? j.dump(2) : j.dump()) << "\n";
}

// ---------------------------------------------------------------------------

template <class T>
int cmd_group_info(const GlobalOpts& g, const GroupSpec& spec) {
    auto gd = GroupData<T>::build(spec);
    emit(group_info_to_json(gd), g);
    return 0;
}

template <class T>
int cmd_invariants(const GlobalOpts& g, const GroupSpec& spec) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    njson j;
    j["label"] = spec.label();
    j["degrees"] = map.degrees;
    njson polys = njson::array();
    njson text = njson::array();
    for (const auto& p : map.polys) {
        polys.push_back(poly_to_json(p));
        text.push_back(p.str());
    }
    j["polys"] = polys;
    j["text"] = text;
    emit(j, g);
    return 0;
}

template <class T>
int cmd_eval(const GlobalOpts& g, const GroupSpec& spec, const std::string& xcsv) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    auto x = parse_point<T>(xcsv);
    njson j;
    j["x"] = point_to_json(x);
    j["P"] = point_to_json(map.eval(x));
    emit(j, g);
    return 0;
}

template <class T>
int cmd_jacobian_check(const GlobalOpts& g, const GroupSpec& spec) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    auto [c, residual] = verify_jacobian_factorization(map);
    njson j;
    j["label"] = spec.label();
    j["c"] = scalar_to_json(c);
    j["residual_sup"] = residual.coeff_sup();
    j["exact_zero"] = residual.is_zero();
    emit(j, g);
    return 0;
}

template <class T>
int cmd_rewrite(const GlobalOpts& g, const GroupSpec& spec, const std::string& poly_arg) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    Poly<T> f = poly_from_json<T>(read_json_arg(poly_arg), map.dim());
    Poly<T> F = rewrite_invariant_polynomial(map, f, g.tol);
    njson j;
    j["F"] = poly_to_json(F);
    j["text"] = F.str();
    emit(j, g);
    return 0;
}

template <class T>
int cmd_compose(const GlobalOpts& g, const GroupSpec& spec, const std::string& jet_arg, const std::string& at) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    Jet<T> F = jet_from_json<T>(read_json_arg(jet_arg));
    auto a = parse_point<T>(at);
    Jet<T> f = compose_jet(map, F, a);
    emit(jet_to_json(f), g);
    return 0;
}

template <class T>
int cmd_recover(const GlobalOpts& g, const GroupSpec& spec, const std::string& field_arg, int r,
                const std::string& at) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    JetField<T> field = field_from_json<T>(read_json_arg(field_arg));
    auto a = parse_point<T>(at);
    Jet<T> F = recover_jet(map, field, r, a, g.tol);
    emit(jet_to_json(F), g);
    return 0;
}

template <class T>
int cmd_cramer(const GlobalOpts& g, const GroupSpec& spec, const std::string& grad_csv, const std::string& xcsv) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    auto grad = parse_point<T>(grad_csv);
    auto x = parse_point<T>(xcsv);
    auto v = cramer_first_derivatives(map, grad, x);
    njson j;
    j["dF_dp"] = point_to_json(v);
    emit(j, g);
    return 0;
}

template <class T>
int cmd_ledger(const GlobalOpts& g, const GroupSpec& spec, int r, const std::string& stratum_csv,
               double stratum_tol) {
    auto map = basic_invariants(GroupData<T>::build(spec));
    njson j;
    j["label"] = spec.label();
    j["r"] = r;
    j["hr"] = map.h() * r;
    if (!stratum_csv.empty()) {
        auto x = parse_point<T>(stratum_csv);
        auto s = stratify(map.group, x, stratum_tol);
        j["stratum"] = stratum_to_json(s);
        j["entries"] = ledger_to_json(continuity_ledger(map, r, &s));
    } else {
        j["entries"] = ledger_to_json(continuity_ledger(map, r));
    }
    emit(j, g);
    return 0;
}

template <class T>
int cmd_seminorm(const GlobalOpts& g, const GroupSpec* spec, const std::string& field_arg, int r,
                 const std::string& domain_arg) {
    JetField<T> field = field_from_json<T>(read_json_arg(field_arg));
    njson j;
    if (spec && !domain_arg.empty()) {
        auto map = basic_invariants(GroupData<T>::build(*spec));
        njson dj = read_json_arg(domain_arg);
        std::vector<std::vector<T>> domain;
        for (const auto& pj : dj) domain.push_back(point_from_json<T>(pj));
        auto rep = weighted_seminorm(map, field, r, domain);
        j = weighted_seminorm_to_json(rep);
    } else {
        auto rep = seminorms(field, r);
        j = seminorm_report_to_json(rep);
    }
    emit(j, g);
    return 0;
}

template <class T>
int cmd_stratify(const GlobalOpts& g, const GroupSpec& spec, const std::string& xcsv, double tol,
                 std::optional<int> r) {
    auto gd = GroupData<T>::build(spec);
    auto x = parse_point<T>(xcsv);
    auto s = stratify(gd, x, tol);
    njson j = stratum_to_json(s);
    if (r) {
        j["r"] = *r;
        j["hr"] = gd.coxeter_number() * *r;
        j["class_exponent"] = static_cast<double>(gd.coxeter_number() * *r) / s.h_S;
    }
    emit(j, g);
    return 0;
}

template <class T>
int cmd_orbit(const GlobalOpts& g, const GroupSpec& spec, const std::string& xcsv, size_t cap) {
    auto gd = GroupData<T>::build(spec);
    auto x = parse_point<T>(xcsv);
    auto orb = gd.orbit(x, cap);
    njson j;
    j["size"] = orb.size();
    njson pts = njson::array();
    for (const auto& p : orb) pts.push_back(point_to_json(p));
    j["points"] = pts;
    emit(j, g);
    return 0;
}

int cmd_probe(const GlobalOpts& g, const GroupSpec& spec, const RegularityProbeOptions& opts) {
    auto map = basic_invariants(GroupData<double>::build(spec));
    auto rep = regularity_probe(map, opts);
    emit(probe_report_to_json(rep), g);
    return 0;
}

template <class T>
int cmd_verify_all(const GlobalOpts& g, const GroupSpec& spec) {
    auto rep = verify_group<T>(spec, g.seed);
    njson j;
    j["label"] = spec.label();
    njson checks = njson::array();
    for (const auto& c : rep.checks) {
        njson cj;
        cj["name"] = c.name;
        cj["ok"] = c.ok;
        cj["detail"] = c.detail;
        checks.push_back(std::move(cj));
    }
    j["checks"] = checks;
    j["ok"] = rep.all_ok();
    emit(j, g);
    return rep.all_ok() ? 0 : 1;
}

template <class F>
int dispatch(const GlobalOpts& g, const GroupSpec& spec, F&& fn) {
    if (use_exact(g, spec))
        return fn.template operator()<Rational>();
    else
        return fn.template operator()<double>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chevalley mappings of finite reflection groups and the transfer between invariant functions and functions of the invariants"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--group", g.group_label, "Group label, e.g. B2, A3, I2(5), R1xB2xA1");
    app.add_option("--group-json", g.group_json, "Group spec as JSON (inline or @file)");
    app.add_option("--mode", g.mode, "Arithmetic mode: exact, float or auto (default)");
    app.add_flag("--pretty", g.pretty, "Indented JSON output");
    app.add_option("--seed", g.seed, "Seed for randomized verification");
    app.add_option("--tolerance", g.tol, "Float-path tolerance (default 1e-9)");

    auto* sc_group_info = app.add_subcommand("group-info", "Degrees, reflection count and Coxeter data");
    auto* sc_invariants = app.add_subcommand("invariants", "Basic invariant polynomials");

    std::string xcsv, grad_csv, at_csv, stratum_csv;
    std::string poly_arg, jet_arg, field_arg, domain_arg;
    int r_value = 1;
    double stratify_tol = -1.0;
    size_t orbit_cap = 1000000;
    int opt_r = -1;

    auto* sc_eval = app.add_subcommand("eval", "Evaluate the Chevalley mapping");
    sc_eval->add_option("--x", xcsv, "Point, comma separated")->required();

    auto* sc_jac = app.add_subcommand("jacobian-check", "Verify det J_P = c * prod(lambda)");

    auto* sc_rewrite = app.add_subcommand("rewrite", "Rewrite an invariant polynomial in the basic invariants");
    sc_rewrite->add_option("--poly", poly_arg, "Polynomial JSON (inline or @file)")->required();

    auto* sc_compose = app.add_subcommand("compose", "Compose a jet of F with P");
    sc_compose->add_option("--jet", jet_arg, "F-jet JSON (inline or @file)")->required();
    sc_compose->add_option("--at", at_csv, "Domain base point a with P(a) = jet base")->required();

    auto* sc_recover = app.add_subcommand("recover", "Recover the F-jet from a composed field");
    sc_recover->add_option("--field", field_arg, "Jet field JSON (inline or @file)")->required();
    sc_recover->add_option("--r", r_value, "Target order of the F-jet")->required();
    sc_recover->add_option("--at", at_csv, "Base point inside the field")->required();

    auto* sc_cramer = app.add_subcommand("cramer", "First derivatives of F from grad f at a regular point");
    sc_cramer->add_option("--grad", grad_csv, "Gradient of f, comma separated")->required();
    sc_cramer->add_option("--x", xcsv, "Regular point")->required();

    auto* sc_ledger = app.add_subcommand("ledger", "Differentiability-loss ledger");
    sc_ledger->add_option("--r", r_value, "Regularity parameter r")->required();
    sc_ledger->add_option("--stratum", stratum_csv, "Stratum sample point (optional)");
    sc_ledger->add_option("--stratum-tol", stratify_tol, "Activity tolerance at the stratum point");

    auto* sc_seminorm = app.add_subcommand("seminorm", "Whitney seminorms of a jet field (weighted with --domain)");
    sc_seminorm->add_option("--field", field_arg, "Jet field JSON (inline or @file)")->required();
    sc_seminorm->add_option("--r", r_value, "Regularity parameter r")->required();
    sc_seminorm->add_option("--domain", domain_arg, "Domain sample points JSON (enables the weighted seminorm)");

    auto* sc_stratify = app.add_subcommand("stratify", "Active reflections and isotropy degrees at a point");
    sc_stratify->add_option("--x", xcsv, "Point")->required();
    sc_stratify->add_option("--tol", stratify_tol, "Activity tolerance (float path)");
    sc_stratify->add_option("--r", opt_r, "Report the predicted class exponent hr/h_S for this r");

    auto* sc_orbit = app.add_subcommand("orbit", "Orbit of a point");
    sc_orbit->add_option("--x", xcsv, "Point")->required();
    sc_orbit->add_option("--cap", orbit_cap, "Orbit size cap");

    RegularityProbeOptions probe_opts;
    auto* sc_probe = app.add_subcommand("probe-regularity", "Geodesic/Euclidean ratio of the image of a ball");
    sc_probe->add_option("--radius", probe_opts.radius, "Ball radius");
    sc_probe->add_option("--samples", probe_opts.samples, "Sample count");
    sc_probe->add_option("--k", probe_opts.k_neighbors, "Neighbors per node");
    sc_probe->add_option("--probe-seed", probe_opts.seed, "Probe seed");
    sc_probe->add_option("--sources", probe_opts.sources, "Geodesic source count");
    sc_probe->add_option("--cutoff", probe_opts.cutoff_frac, "Pair cutoff as a fraction of the image diameter");
    sc_probe->add_flag("--refine", probe_opts.refine, "Also run at half the samples for the trend");

    auto* sc_verify = app.add_subcommand("verify-all", "Run the bundled verification suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        GroupSpec spec;
        if (!sc_seminorm->parsed() || !domain_arg.empty() || !g.group_label.empty() || !g.group_json.empty()) {
            if (sc_seminorm->parsed() && g.group_label.empty() && g.group_json.empty()) {
                // plain seminorms need no group
            } else {
                spec = resolve_spec(g);
            }
        }

        if (sc_group_info->parsed()) return dispatch(g, spec, [&]<class T>() { return cmd_group_info<T>(g, spec); });
        if (sc_invariants->parsed()) return dispatch(g, spec, [&]<class T>() { return cmd_invariants<T>(g, spec); });
        if (sc_eval->parsed()) return dispatch(g, spec, [&]<class T>() { return cmd_eval<T>(g, spec, xcsv); });
        if (sc_jac->parsed()) return dispatch(g, spec, [&]<class T>() { return cmd_jacobian_check<T>(g, spec); });
        if (sc_rewrite->parsed()) return dispatch(g, spec, [&]<class T>() { return cmd_rewrite<T>(g, spec, poly_arg); });
        if (sc_compose->parsed())
            return dispatch(g, spec, [&]<class T>() { return cmd_compose<T>(g, spec, jet_arg, at_csv); });
        if (sc_recover->parsed())
            return dispatch(g, spec, [&]<class T>() { return cmd_recover<T>(g, spec, field_arg, r_value, at_csv); });
        if (sc_cramer->parsed())
            return dispatch(g, spec, [&]<class T>() { return cmd_cramer<T>(g, spec, grad_csv, xcsv); });
        if (sc_ledger->parsed()) {
            double stol = stratify_tol >= 0 ? stratify_tol : 0.0;
            return dispatch(g, spec, [&]<class T>() { return cmd_ledger<T>(g, spec, r_value, stratum_csv, stol); });
        }
        if (sc_seminorm->parsed()) {
            bool weighted = !domain_arg.empty();
            if (weighted) {
                return dispatch(g, spec,
                                [&]<class T>() { return cmd_seminorm<T>(g, &spec, field_arg, r_value, domain_arg); });
            }
            // arithmetic of a bare field follows its contents: exact only if
            // a group in exact mode was requested, otherwise float
            if (!g.group_label.empty() || !g.group_json.empty())
                return dispatch(g, spec, [&]<class T>() { return cmd_seminorm<T>(g, nullptr, field_arg, r_value, ""); });
            return cmd_seminorm<Rational>(g, nullptr, field_arg, r_value, "");
        }
        if (sc_stratify->parsed()) {
            std::optional<int> rr;
            if (opt_r >= 0) rr = opt_r;
            return dispatch(g, spec, [&]<class T>() {
                double tol = stratify_tol;
                if (tol < 0) {
                    if constexpr (is_exact_v<T>) {
                        tol = 0.0;
                    } else {
                        double nx = 0;
                        for (const auto& v : parse_point<T>(xcsv)) nx = std::max(nx, std::abs(to_double(v)));
                        tol = 1e-9 * (1.0 + nx);
                    }
                }
                return cmd_stratify<T>(g, spec, xcsv, tol, rr);
            });
        }
        if (sc_orbit->parsed()) return dispatch(g, spec, [&]<class T>() { return cmd_orbit<T>(g, spec, xcsv, orbit_cap); });
        if (sc_probe->parsed()) return cmd_probe(g, spec, probe_opts);
        if (sc_verify->parsed()) {
            if (use_exact(g, spec)) return cmd_verify_all<Rational>(g, spec);
            return cmd_verify_all<double>(g, spec);
        }
        throw ConfigError("no subcommand given");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: invalid JSON input: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
