#pragma once

#include <json.hpp>

#include "lapsum/contour.hpp"
#include "lapsum/fit.hpp"
#include "lapsum/tauberian.hpp"

namespace lapsum {

using Json = nlohmann::ordered_json;

// ---- FunctionExpr <-> JSON (lossless for all representable parameters) ----

inline Json to_json(const FunctionExpr& f) {
    return std::visit(
        [&](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExpSumNode>) {
                Json terms = Json::array();
                for (const auto& t : n.sum.terms()) {
                    Json row = {t.node.real(), t.node.imag(), t.coeff.real(),
                                t.coeff.imag()};
                    if (t.degree != 0) row.push_back(t.degree);
                    terms.push_back(row);
                }
                return Json{{"type", "expsum"},
                            {"real_part", n.sum.real_part()},
                            {"terms", terms}};
            } else if constexpr (std::is_same_v<T, BumpNode>) {
                return Json{{"type", "bump"},
                            {"support", n.support},
                            {"amplitude", n.amplitude}};
            } else if constexpr (std::is_same_v<T, PowerDecayNode>) {
                return Json{{"type", "powerdecay"}, {"exponent", n.p}, {"shift", n.c}};
            } else if constexpr (std::is_same_v<T, DilatedNode>) {
                return Json{{"type", "dilated"},
                            {"lambda", n.lambda},
                            {"inner", to_json(*n.inner)}};
            } else if constexpr (std::is_same_v<T, WindowedNode>) {
                return Json{{"type", "windowed"},
                            {"lambda", n.lambda},
                            {"window", n.window_id},
                            {"inner", to_json(*n.inner)}};
            } else if constexpr (std::is_same_v<T, MollifiedNode>) {
                return Json{{"type", "mollified"},
                            {"lambda", n.lambda},
                            {"mollifier", n.mollifier_id},
                            {"inner", to_json(*n.inner)}};
            } else if constexpr (std::is_same_v<T, DampedNode>) {
                return Json{{"type", "damped"},
                            {"h", n.h},
                            {"inner", to_json(*n.inner)}};
            } else if constexpr (std::is_same_v<T, SineModulatedNode>) {
                return Json{{"type", "sine"},
                            {"b", n.b},
                            {"inner", to_json(*n.inner)}};
            } else {
                Json parts = Json::array();
                for (const auto& [a, g] : n.parts)
                    parts.push_back(Json{{"coeff", a}, {"fn", to_json(*g)}});
                return Json{{"type", "sum"}, {"parts", parts}};
            }
        },
        f.node());
}

inline FunctionExpr function_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw precondition_error("function JSON: missing type tag");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "expsum") {
            std::vector<ExpTerm> terms;
            for (const auto& row : j.at("terms")) {
                if (!row.is_array() || row.size() < 4 || row.size() > 5)
                    throw precondition_error("function JSON: bad expsum term");
                ExpTerm t;
                t.node = {row[0].get<double>(), row[1].get<double>()};
                t.coeff = {row[2].get<double>(), row[3].get<double>()};
                t.degree = row.size() == 5 ? row[4].get<int>() : 0;
                terms.push_back(t);
            }
            return make_expsum(
                ExpSum::create(std::move(terms), j.at("real_part").get<bool>()));
        }
        if (type == "bump")
            return make_bump(j.at("support").get<double>(),
                             j.at("amplitude").get<double>());
        if (type == "powerdecay")
            return make_power_decay(j.at("exponent").get<double>(),
                                    j.at("shift").get<double>());
        if (type == "dilated")
            return dilate(function_from_json(j.at("inner")),
                          j.at("lambda").get<double>());
        if (type == "windowed") {
            if (j.at("window").get<std::string>() != "bump_hat")
                throw precondition_error("function JSON: unknown window id");
            return window(function_from_json(j.at("inner")),
                          j.at("lambda").get<double>());
        }
        if (type == "mollified") {
            if (j.at("mollifier").get<std::string>() != "bump01")
                throw precondition_error("function JSON: unknown mollifier id");
            return mollify(function_from_json(j.at("inner")),
                           j.at("lambda").get<double>());
        }
        if (type == "damped")
            return damp(function_from_json(j.at("inner")), j.at("h").get<double>());
        if (type == "sine")
            return sine_modulate(function_from_json(j.at("inner")),
                                 j.at("b").get<double>());
        if (type == "sum") {
            std::vector<std::pair<double, FunctionExpr>> parts;
            for (const auto& p : j.at("parts"))
                parts.emplace_back(p.at("coeff").get<double>(),
                                   function_from_json(p.at("fn")));
            return lincomb(std::move(parts));
        }
    } catch (const Json::exception& e) {
        throw precondition_error(std::string("function JSON: ") + e.what());
    }
    throw precondition_error("function JSON: unknown type '" + type + "'");
}

// ---- reports ----------------------------------------------------------

inline Json to_json(const NormReport& r) {
    Json hist = Json::array();
    for (const auto& [n, v] : r.refinement_history)
        hist.push_back(Json{{"grid", n}, {"value", v}});
    return Json{{"deriv_sup", r.deriv_sup},
                {"rect_sup", r.rect_sup},
                {"total", r.total},
                {"deriv_cutoff", r.deriv_cutoff},
                {"deriv_tail_bound", r.deriv_tail_bound},
                {"deriv_grid_n", r.deriv_grid_n},
                {"boundary_grid_size", r.boundary_grid_size},
                {"refinement_history", hist}};
}

inline Json to_json(const ContourSpec& s) {
    Json nodes = Json::array();
    for (const auto& n : s.nodes)
        nodes.push_back(Json{{"re", n.zeta.real()},
                             {"im", n.zeta.imag()},
                             {"w_re", n.weight.real()},
                             {"w_im", n.weight.imag()},
                             {"segment", static_cast<int>(n.segment)}});
    return Json{{"h", s.h},
                {"alpha_prime", s.alpha_prime},
                {"r_prime", s.r_prime},
                {"xi", s.xi},
                {"nodes_per_unit", s.nodes_per_unit},
                {"nodes", nodes}};
}

inline Json to_json(const ExpSum& e) {
    Json terms = Json::array();
    for (const auto& t : e.terms()) {
        Json row = {t.node.real(), t.node.imag(), t.coeff.real(), t.coeff.imag()};
        if (t.degree != 0) row.push_back(t.degree);
        terms.push_back(row);
    }
    return Json{{"type", "expsum"}, {"real_part", e.real_part()}, {"terms", terms}};
}

inline Json to_json(const NodeSet& n) {
    Json nodes = Json::array();
    for (Complex z : n.nodes) nodes.push_back(Json{z.real(), z.imag()});
    return Json{{"beta", n.beta},
                {"delta", n.delta},
                {"rule", n.rule},
                {"nodes", nodes}};
}

inline NodeSet nodeset_from_json(const Json& j) {
    try {
        std::vector<Complex> nodes;
        for (const auto& row : j.at("nodes"))
            nodes.emplace_back(row[0].get<double>(), row[1].get<double>());
        return NodeSet::from_nodes(j.at("beta").get<double>(),
                                   j.at("delta").get<double>(), std::move(nodes),
                                   j.value("rule", std::string("user")));
    } catch (const Json::exception& e) {
        throw precondition_error(std::string("node set JSON: ") + e.what());
    }
}

inline Json to_json(const FitResult& f) {
    return Json{{"expsum", to_json(f.expsum)},
                {"achieved_error", f.achieved_error},
                {"surrogate_objective", f.surrogate_objective},
                {"fine_objective", f.fine_objective},
                {"objective_trace", f.objective_trace},
                {"sigma_max", f.sigma_max},
                {"sigma_min", f.sigma_min},
                {"tikhonov", f.tikhonov},
                {"converged", f.converged},
                {"deriv_cutoff", f.deriv_cutoff},
                {"deriv_samples", f.deriv_samples},
                {"boundary_samples", f.boundary_samples},
                {"method", f.method}};
}

inline Json to_json(const DemoResult& d) {
    Json j{{"achieved", d.achieved},
           {"eps", d.eps},
           {"levels_tried", d.levels_tried},
           {"nodes_used", d.nodes_used},
           {"fit", to_json(d.best)}};
    if (d.warm_start_error) j["warm_start_error"] = *d.warm_start_error;
    return j;
}

inline Json to_json(const ProbeReport& p) {
    Json rows = Json::array();
    for (const auto& row : p.table)
        rows.push_back(Json{{"X", row.X},
                            {"windowed_ratio", row.windowed_ratio},
                            {"modulated_sup", row.modulated_sup}});
    Json j{{"L", p.L_id},
           {"rho", p.rho_id},
           {"alpha", p.alpha},
           {"r", p.r},
           {"M", p.M},
           {"b_interval", Json{p.b_lo, p.b_hi}},
           {"b_samples", p.b_samples},
           {"norm_sup", p.norm_sup},
           {"C", p.C},
           {"table", rows}};
    if (p.crossing_X)
        j["crossing_X"] = *p.crossing_X;
    else
        j["crossing_X"] = nullptr;
    return j;
}

} // namespace lapsum
