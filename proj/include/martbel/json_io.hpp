/*
 * Copyright 2026 The martbel authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MARTBEL_JSON_IO_HPP
#define MARTBEL_JSON_IO_HPP

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "martbel/approx.hpp"
#include "martbel/arbitrage.hpp"
#include "martbel/market.hpp"
#include "martbel/setfunc.hpp"

namespace martbel::io {

using nlohmann::json;

namespace detail {

inline Mask mask_from_label(const std::string& label, int n) {
    Mask mask = 0;
    std::size_t pos = 0;
    while (pos < label.size()) {
        std::size_t next = label.find(',', pos);
        if (next == std::string::npos) next = label.size();
        const std::string piece = label.substr(pos, next - pos);
        int state = 0;
        try {
            state = std::stoi(piece);
        } catch (const std::exception&) {
            throw ParseError("bad state label: " + piece);
        }
        if (state < 1 || state > n) throw ParseError("state out of range: " + piece);
        mask |= Mask{1} << (state - 1);
        pos = next + 1;
    }
    return mask;
}

inline Rat rat_field(const json& j) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (!j.is_string()) throw ParseError("expected a rational string");
    return parse_rational(j.get<std::string>());
}

}  // namespace detail

/// {"n": 4, "values": {"1,2": "15/105", ...}}; omitted subsets are zero.
inline json set_function_to_json(const SetFunction& f) {
    json values = json::object();
    for (Mask a = 1; a <= f.space.full_mask(); ++a) {
        if (f[a] != 0) values[subset_label(a)] = to_string(f[a]);
    }
    return json{{"n", f.space.n}, {"values", values}};
}

inline SetFunction set_function_from_json(const json& j) {
    if (!j.contains("n")) throw ParseError("set function needs a state count \"n\"");
    SetFunction f(StateSpace(j.at("n").get<int>()));
    if (j.contains("values")) {
        for (const auto& [key, value] : j.at("values").items()) {
            f[detail::mask_from_label(key, f.space.n)] = detail::rat_field(value);
        }
    }
    return f;
}

/// {"m": ["4","2","1/2","1/4"], "r": "0", "s0": "20", "p": optional};
/// "r" is the interest rate, the factor used internally is 1+r.
inline json market_to_json(const MarketModel& model) {
    json m = json::array();
    for (const Rat& mi : model.m) m.push_back(to_string(mi));
    json out{{"m", m}, {"r", to_string(model.r_factor - 1)}, {"s0", to_string(model.s0)}};
    if (model.p) {
        json p = json::array();
        for (const Rat& pi : *model.p) p.push_back(to_string(pi));
        out["p"] = p;
    }
    return out;
}

inline MarketModel market_from_json(const json& j) {
    if (!j.contains("m") || !j.contains("r") || !j.contains("s0")) {
        throw ParseError("market config needs \"m\", \"r\" and \"s0\"");
    }
    std::vector<Rat> m;
    for (const auto& v : j.at("m")) m.push_back(detail::rat_field(v));
    std::optional<std::vector<Rat>> p;
    if (j.contains("p") && !j.at("p").is_null()) {
        p.emplace();
        for (const auto& v : j.at("p")) p->push_back(detail::rat_field(v));
    }
    return MarketModel(std::move(m), detail::rat_field(j.at("r")) + 1,
                       detail::rat_field(j.at("s0")), std::move(p));
}

/// {"n": 4, "r": "0", "payoffs": [{"name": "S1", "values": [...],
///  "lower": "15", "upper": null}, ...]}.
inline json assessment_to_json(const PriceAssessment& a) {
    json payoffs = json::array();
    for (std::size_t k = 0; k < a.size(); ++k) {
        json values = json::array();
        for (const Rat& v : a.payoffs[k].payoff) values.push_back(to_string(v));
        json entry{{"name", a.names[k]}, {"values", values}, {"lower", to_string(a.lower[k])}};
        entry["upper"] = a.upper ? json(to_string((*a.upper)[k])) : json(nullptr);
        payoffs.push_back(std::move(entry));
    }
    return json{{"n", a.space.n}, {"r", to_string(a.r_factor - 1)}, {"payoffs", payoffs}};
}

inline PriceAssessment assessment_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("r") || !j.contains("payoffs")) {
        throw ParseError("assessment needs \"n\", \"r\" and \"payoffs\"");
    }
    const StateSpace space(j.at("n").get<int>());
    std::vector<RandomVariable> payoffs;
    std::vector<std::string> names;
    std::vector<Rat> lower;
    std::vector<Rat> upper;
    bool any_upper = false;
    bool all_upper = true;
    for (const auto& entry : j.at("payoffs")) {
        std::vector<Rat> values;
        for (const auto& v : entry.at("values")) values.push_back(detail::rat_field(v));
        payoffs.emplace_back(space, std::move(values));
        names.push_back(entry.contains("name") ? entry.at("name").get<std::string>()
                                               : "S" + std::to_string(names.size() + 1));
        lower.push_back(detail::rat_field(entry.at("lower")));
        if (entry.contains("upper") && !entry.at("upper").is_null()) {
            any_upper = true;
            upper.push_back(detail::rat_field(entry.at("upper")));
        } else {
            all_upper = false;
            upper.push_back(Rat(0));
        }
    }
    if (any_upper && !all_upper) {
        throw ParseError("either all payoffs carry an upper price or none do");
    }
    return PriceAssessment(space, std::move(payoffs), std::move(lower),
                           detail::rat_field(j.at("r")) + 1,
                           any_upper ? std::optional(std::move(upper)) : std::nullopt,
                           std::move(names));
}

/// Certificate with its witness and a replay stamp.
inline json certificate_to_json(const PriceAssessment& a, const Certificate& cert) {
    json out{{"verdict", to_string(cert.verdict)},
             {"strictly_positive", cert.strictly_positive}};
    if (cert.witness_mass) out["witness_mass"] = set_function_to_json(*cert.witness_mass);
    if (cert.witness_portfolio) {
        json lam = json::array();
        for (const Rat& v : cert.witness_portfolio->lambda) lam.push_back(to_string(v));
        out["witness_portfolio"] = lam;
        out["witness_bond"] = to_string(cert.witness_portfolio->bond);
    }
    out["verification"] = json{{"replayed", replay_certificate(a, cert)}};
    return out;
}

/// {"kind", "distance", "value", "mass", "belief", "unique",
///  "dominance_minimal"}; value is an exact string for d1, a decimal for d2.
inline json approx_result_to_json(const ApproxResult& r) {
    json out{{"kind", to_string(r.kind)},
             {"distance", to_string(r.distance)},
             {"mass", set_function_to_json(r.mass)},
             {"belief", set_function_to_json(r.belief)},
             {"unique", r.unique},
             {"dominance_minimal", r.dominance_minimal}};
    if (r.distance == ApproxDistance::D1) {
        out["value"] = to_string(r.value_exact);
    } else {
        out["value"] = r.value_float;
    }
    return out;
}

}  // namespace martbel::io

#endif  // MARTBEL_JSON_IO_HPP
