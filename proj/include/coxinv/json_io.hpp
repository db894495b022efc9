#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "coxinv/chevalley.hpp"
#include "coxinv/errors.hpp"
#include "coxinv/geometry.hpp"
#include "coxinv/groups.hpp"
#include "coxinv/jets.hpp"
#include "coxinv/poly.hpp"
#include "coxinv/transfer.hpp"

namespace coxinv {

using njson = nlohmann::ordered_json;

template <class T>
njson scalar_to_json(const T& v) {
    if constexpr (is_exact_v<T>)
        return rational_to_string(v);
    else
        return to_double(v);
}

template <class T>
T scalar_from_json(const njson& j) {
    if (j.is_string()) return scalar_from_string<T>(j.get<std::string>());
    if constexpr (is_exact_v<T>) {
        if (j.is_number_integer()) return T(j.get<long long>());
        throw ConfigError("expected an exact scalar (\"num/den\" or integer)");
    } else {
        return j.get<double>();
    }
}

template <class T>
njson point_to_json(const std::vector<T>& x) {
    njson a = njson::array();
    for (const auto& v : x) a.push_back(scalar_to_json(v));
    return a;
}

template <class T>
std::vector<T> point_from_json(const njson& j) {
    if (!j.is_array()) throw ConfigError("expected an array point");
    std::vector<T> x;
    for (const auto& v : j) x.push_back(scalar_from_json<T>(v));
    return x;
}

inline njson multi_index_to_json(const MultiIndex& k) {
    njson a = njson::array();
    for (int i = 0; i < k.size(); ++i) a.push_back(k[i]);
    return a;
}

inline MultiIndex multi_index_from_json(const njson& j) {
    if (!j.is_array()) throw ConfigError("expected an exponent array");
    std::vector<uint32_t> e;
    for (const auto& v : j) e.push_back(v.get<uint32_t>());
    return MultiIndex(std::move(e));
}

// [[exponents, coefficient], ...] in ascending graded-lex order.
template <class T>
njson poly_to_json(const Poly<T>& p) {
    njson a = njson::array();
    for (const auto& [k, c] : p.terms()) a.push_back(njson::array({multi_index_to_json(k), scalar_to_json(c)}));
    return a;
}

template <class T>
Poly<T> poly_from_json(const njson& j, int nvars = -1) {
    if (!j.is_array()) throw ConfigError("expected a polynomial term array");
    Poly<T> p;
    bool first = true;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2) throw ConfigError("polynomial term must be [exponents, coeff]");
        MultiIndex k = multi_index_from_json(term[0]);
        if (first) {
            p = Poly<T>(nvars >= 0 ? nvars : k.size());
            first = false;
        }
        p.add_term(k, scalar_from_json<T>(term[1]));
    }
    if (first) p = Poly<T>(nvars >= 0 ? nvars : 0);
    return p;
}

template <class T>
njson jet_to_json(const Jet<T>& jet, bool with_order = true) {
    njson j;
    if (with_order) j["order"] = jet.order;
    j["x"] = point_to_json(jet.base);
    njson cs = njson::array();
    for (const auto& [k, c] : jet.coeffs) cs.push_back(njson::array({multi_index_to_json(k), scalar_to_json(c)}));
    j["coeffs"] = cs;
    return j;
}

template <class T>
Jet<T> jet_from_json(const njson& j, int order = -1) {
    Jet<T> jet;
    jet.base = point_from_json<T>(j.at("x"));
    jet.order = order >= 0 ? order : j.at("order").get<int>();
    for (const auto& term : j.at("coeffs")) {
        MultiIndex k = multi_index_from_json(term[0]);
        jet.set_coeff(k, scalar_from_json<T>(term[1]));
    }
    return jet;
}

// {"order": m, "points": [{"x": [...], "coeffs": [[k, coeff], ...]}, ...]}
template <class T>
njson field_to_json(const JetField<T>& f) {
    njson j;
    j["order"] = f.order;
    njson pts = njson::array();
    for (const auto& jet : f.jets) pts.push_back(jet_to_json(jet, false));
    j["points"] = pts;
    return j;
}

template <class T>
JetField<T> field_from_json(const njson& j) {
    JetField<T> f;
    f.order = j.at("order").get<int>();
    for (const auto& pj : j.at("points")) f.jets.push_back(jet_from_json<T>(pj, f.order));
    f.validate();
    return f;
}

inline njson spec_to_json(const GroupSpec& spec) {
    njson j;
    njson fs = njson::array();
    for (const auto& f : spec.factors) fs.push_back(njson::array({factor_type_name(f.type), f.rank}));
    j["factors"] = fs;
    j["fixed_dim"] = spec.fixed_dim;
    return j;
}

inline GroupSpec spec_from_json(const njson& j) {
    GroupSpec spec;
    for (const auto& f : j.at("factors")) {
        std::string t = f.at(0).get<std::string>();
        int rank = f.at(1).get<int>();
        if (t == "A")
            spec.factors.push_back({FactorType::A, rank});
        else if (t == "B")
            spec.factors.push_back({FactorType::B, rank});
        else if (t == "D")
            spec.factors.push_back({FactorType::D, rank});
        else if (t == "I2" || t == "I")
            spec.factors.push_back({FactorType::I2, rank});
        else
            throw UnsupportedType("unsupported group type: " + t);
    }
    if (j.contains("fixed_dim")) spec.fixed_dim = j.at("fixed_dim").get<int>();
    spec.validate();
    return spec;
}

template <class T>
njson group_info_to_json(const GroupData<T>& g) {
    njson j;
    j["label"] = g.spec().label();
    j["spec"] = spec_to_json(g.spec());
    j["ambient_dim"] = g.dim();
    j["degrees"] = g.degrees();
    j["h"] = g.coxeter_number();
    j["d"] = g.d();
    j["order"] = g.order().str();
    njson refs = njson::array();
    for (int i = 0; i < g.reflection_count(); ++i) refs.push_back(point_to_json(g.normal(i)));
    j["reflections"] = refs;
    return j;
}

template <class T>
njson stratum_to_json(const StratumInfo<T>& s) {
    njson j;
    j["point"] = point_to_json(s.point);
    j["active"] = s.active;
    j["isotropy_degrees"] = s.isotropy_degrees;
    j["h_S"] = s.h_S;
    j["isotropy_order"] = s.isotropy_order.str();
    return j;
}

inline njson ledger_to_json(const std::vector<LedgerEntry>& entries) {
    njson a = njson::array();
    for (const auto& e : entries) {
        njson j;
        j["beta"] = multi_index_to_json(e.beta);
        j["weighted_order"] = e.weighted_order;
        j["threshold"] = e.threshold;
        j["verdict"] = verdict_name(e.verdict);
        if (e.stratum_weighted_order) j["stratum_weighted_order"] = *e.stratum_weighted_order;
        a.push_back(std::move(j));
    }
    return a;
}

template <class T>
njson seminorm_report_to_json(const SeminormReport<T>& rep) {
    njson j;
    j["sup_norm"] = scalar_to_json(rep.sup_norm);
    j["whitney_norm"] = rep.whitney_norm;
    j["max_quotient"] = rep.max_quotient;
    j["quotients_all_zero"] = rep.quotients_all_zero;
    if (rep.worst_x >= 0) {
        njson w;
        w["x_index"] = rep.worst_x;
        w["xp_index"] = rep.worst_xp;
        w["q"] = multi_index_to_json(rep.worst_q);
        j["worst_pair"] = w;
    }
    return j;
}

inline njson weighted_seminorm_to_json(const WeightedSeminormReport& rep) {
    njson j;
    j["whitney_r"] = rep.whitney_r;
    j["weighted_sup"] = rep.weighted_sup;
    j["total"] = rep.total;
    j["worst_beta"] = multi_index_to_json(rep.worst_beta);
    j["worst_sample"] = rep.worst_sample;
    return j;
}

inline njson probe_report_to_json(const ImageRegularityReport& rep) {
    njson j;
    j["max_ratio"] = rep.max_ratio;
    j["pairs"] = rep.pairs;
    njson curve = njson::array();
    for (const auto& [n, ratio] : rep.refinement) curve.push_back(njson::array({n, ratio}));
    j["refinement_curve"] = curve;
    if (rep.refinement.size() >= 2)
        j["ratio_vs_refinement"] = rep.refinement.back().second / rep.refinement.front().second;
    j["seed"] = rep.seed;
    j["k_neighbors"] = rep.k_neighbors;
    return j;
}

inline njson regularity_slopes_to_json(const RegularityProbeReport& rep) {
    njson j;
    j["min_pair_distance"] = rep.min_pair_distance;
    j["max_pair_distance"] = rep.max_pair_distance;
    njson entries = njson::array();
    for (const auto& e : rep.entries) {
        njson ej;
        ej["q"] = multi_index_to_json(e.q);
        ej["exact"] = e.exact;
        if (!e.exact) {
            ej["slope"] = e.slope;
            ej["margin"] = e.margin;
        }
        ej["pairs"] = e.pairs;
        entries.push_back(std::move(ej));
    }
    j["entries"] = entries;
    return j;
}

}  // namespace coxinv
