#include <pybind11/pybind11.h>

#include <string>

#include "coxinv/json_io.hpp"
#include "coxinv/verify.hpp"

namespace py = pybind11;
using namespace coxinv;

namespace {

GroupSpec spec_of(const std::string& group) {
    if (!group.empty() && (group[0] == '{' || group[0] == '[')) return spec_from_json(njson::parse(group));
    return GroupSpec::parse_label(group);
}

bool exact_mode(const std::string& mode, const GroupSpec& spec) {
    if (mode == "exact") {
        if (spec.requires_float()) throw ConfigError("exact mode is unavailable for this group");
        return true;
    }
    if (mode == "float") return false;
    if (mode == "auto") return !spec.requires_float();
    throw ConfigError("mode must be exact, float or auto");
}

template <class F>
std::string with_map(const std::string& group, const std::string& mode, F&& fn) {
    GroupSpec spec = spec_of(group);
    if (exact_mode(mode, spec)) {
        auto map = basic_invariants(GroupData<Rational>::build(spec));
        return fn(map).dump();
    }
    auto map = basic_invariants(GroupData<double>::build(spec));
    return fn(map).dump();
}

std::string group_info(const std::string& group, const std::string& mode) {
    GroupSpec spec = spec_of(group);
    if (exact_mode(mode, spec)) return group_info_to_json(GroupData<Rational>::build(spec)).dump();
    return group_info_to_json(GroupData<double>::build(spec)).dump();
}

std::string invariants(const std::string& group, const std::string& mode) {
    return with_map(group, mode, [](const auto& map) {
        njson j;
        j["degrees"] = map.degrees;
        njson polys = njson::array();
        njson text = njson::array();
        for (const auto& p : map.polys) {
            polys.push_back(poly_to_json(p));
            text.push_back(p.str());
        }
        j["polys"] = polys;
        j["text"] = text;
        return j;
    });
}

std::string eval_p(const std::string& group, const std::string& x_json, const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto x = point_from_json<T>(njson::parse(x_json));
        return point_to_json(map.eval(x));
    });
}

std::string jacobian_check(const std::string& group, const std::string& mode) {
    return with_map(group, mode, [](const auto& map) {
        auto [c, residual] = verify_jacobian_factorization(map);
        njson j;
        j["c"] = scalar_to_json(c);
        j["residual_sup"] = residual.coeff_sup();
        j["exact_zero"] = residual.is_zero();
        return j;
    });
}

std::string rewrite(const std::string& group, const std::string& poly_json, const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto f = poly_from_json<T>(njson::parse(poly_json), map.dim());
        auto F = rewrite_invariant_polynomial(map, f);
        njson j;
        j["F"] = poly_to_json(F);
        j["text"] = F.str();
        return j;
    });
}

std::string compose(const std::string& group, const std::string& jet_json, const std::string& at_json,
                    const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto F = jet_from_json<T>(njson::parse(jet_json));
        auto a = point_from_json<T>(njson::parse(at_json));
        return jet_to_json(compose_jet(map, F, a));
    });
}

std::string recover(const std::string& group, const std::string& field_json, int r, const std::string& at_json,
                    const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto field = field_from_json<T>(njson::parse(field_json));
        auto a = point_from_json<T>(njson::parse(at_json));
        return jet_to_json(recover_jet(map, field, r, a));
    });
}

std::string cramer(const std::string& group, const std::string& grad_json, const std::string& x_json,
                   const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto grad = point_from_json<T>(njson::parse(grad_json));
        auto x = point_from_json<T>(njson::parse(x_json));
        return point_to_json(cramer_first_derivatives(map, grad, x));
    });
}

std::string epsilon(const std::string& group, const std::string& alpha_json, const std::string& beta_json,
                    const std::string& x_json, const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto alpha = multi_index_from_json(njson::parse(alpha_json));
        auto beta = multi_index_from_json(njson::parse(beta_json));
        auto x = point_from_json<T>(njson::parse(x_json));
        return njson(scalar_to_json(epsilon_beta(map, alpha, beta, x)));
    });
}

std::string ledger(const std::string& group, int r, const std::string& stratum_json, double tol,
                   const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        njson j;
        j["r"] = r;
        j["hr"] = map.h() * r;
        if (!stratum_json.empty()) {
            auto x = point_from_json<T>(njson::parse(stratum_json));
            auto s = stratify(map.group, x, tol);
            j["stratum"] = stratum_to_json(s);
            j["entries"] = ledger_to_json(continuity_ledger(map, r, &s));
        } else {
            j["entries"] = ledger_to_json(continuity_ledger(map, r));
        }
        return j;
    });
}

std::string stratify_point(const std::string& group, const std::string& x_json, double tol,
                           const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto x = point_from_json<T>(njson::parse(x_json));
        return stratum_to_json(stratify(map.group, x, tol));
    });
}

std::string orbit(const std::string& group, const std::string& x_json, size_t cap, const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto x = point_from_json<T>(njson::parse(x_json));
        auto orb = map.group.orbit(x, cap);
        njson j;
        j["size"] = orb.size();
        njson pts = njson::array();
        for (const auto& p : orb) pts.push_back(point_to_json(p));
        j["points"] = pts;
        return j;
    });
}

std::string fundamental_rep(const std::string& group, const std::string& x_json, const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto x = point_from_json<T>(njson::parse(x_json));
        return point_to_json(fundamental_domain_rep(map.group, x));
    });
}

std::string seminorm(const std::string& field_json, int r, bool exact) {
    if (exact) {
        auto field = field_from_json<Rational>(njson::parse(field_json));
        return seminorm_report_to_json(seminorms(field, r)).dump();
    }
    auto field = field_from_json<double>(njson::parse(field_json));
    return seminorm_report_to_json(seminorms(field, r)).dump();
}

std::string weighted_seminorm_api(const std::string& group, const std::string& field_json, int r,
                                  const std::string& domain_json, const std::string& mode) {
    return with_map(group, mode, [&](const auto& map) {
        using T = std::decay_t<decltype(map.polys.front().constant_term())>;
        auto field = field_from_json<T>(njson::parse(field_json));
        std::vector<std::vector<T>> domain;
        for (const auto& pj : njson::parse(domain_json)) domain.push_back(point_from_json<T>(pj));
        return weighted_seminorm_to_json(weighted_seminorm(map, field, r, domain));
    });
}

std::string probe_regularity(const std::string& group, double radius, int samples, int k_neighbors, uint64_t seed,
                             int sources, double cutoff, bool refine) {
    auto map = basic_invariants(GroupData<double>::build(spec_of(group)));
    RegularityProbeOptions opts;
    opts.radius = radius;
    opts.samples = samples;
    opts.k_neighbors = k_neighbors;
    opts.seed = seed;
    opts.sources = sources;
    opts.cutoff_frac = cutoff;
    opts.refine = refine;
    return probe_report_to_json(regularity_probe(map, opts)).dump();
}

std::string verify_all(const std::string& group, uint64_t seed, const std::string& mode) {
    GroupSpec spec = spec_of(group);
    VerifyReport rep =
        exact_mode(mode, spec) ? verify_group<Rational>(spec, seed) : verify_group<double>(spec, seed);
    njson j;
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
    return j.dump();
}

}  // namespace

PYBIND11_MODULE(_coxinv, m) {
    m.doc() = "Chevalley mappings of finite reflection groups: invariants, jets and the transfer machinery";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<Error>(m, "CoxinvError", PyExc_RuntimeError);

    m.def("group_info", &group_info, py::arg("group"), py::arg("mode") = "auto");
    m.def("invariants", &invariants, py::arg("group"), py::arg("mode") = "auto");
    m.def("eval_p", &eval_p, py::arg("group"), py::arg("x"), py::arg("mode") = "auto");
    m.def("jacobian_check", &jacobian_check, py::arg("group"), py::arg("mode") = "auto");
    m.def("rewrite", &rewrite, py::arg("group"), py::arg("poly"), py::arg("mode") = "auto");
    m.def("compose", &compose, py::arg("group"), py::arg("jet"), py::arg("at"), py::arg("mode") = "auto");
    m.def("recover", &recover, py::arg("group"), py::arg("field"), py::arg("r"), py::arg("at"),
          py::arg("mode") = "auto");
    m.def("cramer", &cramer, py::arg("group"), py::arg("grad"), py::arg("x"), py::arg("mode") = "auto");
    m.def("epsilon", &epsilon, py::arg("group"), py::arg("alpha"), py::arg("beta"), py::arg("x"),
          py::arg("mode") = "auto");
    m.def("ledger", &ledger, py::arg("group"), py::arg("r"), py::arg("stratum") = std::string(),
          py::arg("tol") = 0.0, py::arg("mode") = "auto");
    m.def("stratify", &stratify_point, py::arg("group"), py::arg("x"), py::arg("tol") = 0.0,
          py::arg("mode") = "auto");
    m.def("orbit", &orbit, py::arg("group"), py::arg("x"), py::arg("cap") = size_t(1000000),
          py::arg("mode") = "auto");
    m.def("fundamental_rep", &fundamental_rep, py::arg("group"), py::arg("x"), py::arg("mode") = "auto");
    m.def("seminorm", &seminorm, py::arg("field"), py::arg("r"), py::arg("exact") = true);
    m.def("weighted_seminorm", &weighted_seminorm_api, py::arg("group"), py::arg("field"), py::arg("r"),
          py::arg("domain"), py::arg("mode") = "auto");
    m.def("probe_regularity", &probe_regularity, py::arg("group"), py::arg("radius") = 1.0,
          py::arg("samples") = 2000, py::arg("k_neighbors") = 14, py::arg("seed") = uint64_t(0),
          py::arg("sources") = 48, py::arg("cutoff") = 0.2, py::arg("refine") = false);
    m.def("verify_all", &verify_all, py::arg("group"), py::arg("seed") = uint64_t(0), py::arg("mode") = "auto");

#ifdef COXINV_VERSION
    m.attr("__version__") = COXINV_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
