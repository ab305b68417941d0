#ifndef STEENWEB_WEB_IO_HPP
#define STEENWEB_WEB_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "web_checker.hpp"
#include "web_model.hpp"
#include "web_search.hpp"

namespace steenweb::web {

using json = nlohmann::ordered_json;

inline json model_to_json(const IsotropyModel& M)
{
    return json{{"n", M.n}, {"r", M.r}, {"W", M.W}};
}

inline IsotropyModel model_from_json(const json& doc)
{
    auto bad = [](const std::string& what) { throw Error(Errc::parse_error, "weight matrix: " + what); };
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("r") || !doc.contains("W"))
        bad("expected {\"n\", \"r\", \"W\"}");
    if (!doc["n"].is_number_integer() || !doc["r"].is_number_integer() || !doc["W"].is_array())
        bad("n, r must be integers and W an array");
    IsotropyModel M;
    M.n = doc["n"].get<int>();
    M.r = doc["r"].get<int>();
    for (const auto& row : doc["W"]) {
        if (!row.is_array())
            bad("W rows must be arrays");
        std::vector<long long> r;
        for (const auto& x : row) {
            if (!x.is_number_integer())
                bad("W entries must be integers");
            r.push_back(x.get<long long>());
        }
        M.W.push_back(std::move(r));
    }
    check_model(M);
    return M;
}

inline IsotropyModel model_from_string(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, std::string("malformed JSON: ") + e.what());
    }
    return model_from_json(doc);
}

inline IsotropyModel load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::invalid_argument, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_string(ss.str());
}

namespace detail {

inline json inv_json(Involution v, int r) { return involution_bits(v, r); }

inline json plane_list(PlaneMask m, int planes)
{
    json out = json::array();
    for (int c = 0; c < planes; ++c)
        if (m >> c & 1)
            out.push_back(c);
    return out;
}

} // namespace detail

inline json step_to_json(const ReductionStep& s)
{
    json H = json::array();
    for (auto h : s.H)
        H.push_back(detail::inv_json(h, s.r_from));
    return json{{"kind", s.kind},    {"H", H},         {"n_from", s.n_from}, {"r_from", s.r_from},
                {"d", s.d},          {"columns", s.columns}, {"basis", s.basis},
                {"model", model_to_json(s.to)}};
}

inline json trace_to_json(const Case5Trace& t, int r)
{
    json rho = json::array(), R = json::array(), sweep = json::array(), basis = json::array();
    for (auto v : t.rho)
        rho.push_back(detail::inv_json(v, r));
    for (auto v : t.sweep)
        sweep.push_back(detail::inv_json(v, r));
    for (auto v : t.group_basis)
        basis.push_back(detail::inv_json(v, r));
    json dims = json::array();
    for (auto m : t.R)
        dims.push_back(2 * std::popcount(m));
    return json{{"m", t.m},
                {"l", t.l},
                {"group_basis", basis},
                {"rho", rho},
                {"k", t.k},
                {"R_dims", dims},
                {"j", t.j},
                {"sweep", sweep},
                {"rho_j", detail::inv_json(t.rho_j_final, r)},
                {"l_values", t.l_vals},
                {"i_star", t.i_star},
                {"claims", {{"dim_R_mod_4", t.claim_dims}, {"k_halving", t.claim_halving}, {"k_l_zero", t.claim_terminal}}}};
}

inline json certificate_to_json(const Certificate& c)
{
    json out;
    out["case"] = c.label;
    out["model"] = model_to_json(c.model);
    if (c.label == "recurse") {
        out["step"] = step_to_json(*c.step);
        out["inner"] = certificate_to_json(*c.inner);
        return out;
    }
    if (c.label == "point")
        return out;
    const int r = c.model.r;
    json actors = json::object();
    for (const auto& [name, v] : c.actors)
        actors[name] = detail::inv_json(v, r);
    out["actors"] = actors;
    json amb = json::array();
    for (auto h : c.ambient)
        amb.push_back(detail::inv_json(h, r));
    out["ambient"] = {{"name", c.ambient_name}, {"H", amb}, {"dim", c.ambient_dim}};
    out["target"] = c.target;
    out["pair"] = {{"a", detail::inv_json(c.pair.a, r)},
                   {"b", detail::inv_json(c.pair.b, r)},
                   {"k1", c.pair.k1},
                   {"k2", c.pair.k2}};
    out["inequality"] = std::to_string(2 * c.pair.k1) + " + " + std::to_string(2 * c.pair.k2) +
                        " <= " + std::to_string(c.ambient_dim);
    if (c.trace)
        out["trace"] = trace_to_json(*c.trace, r);
    out["notes"] = c.notes;
    return out;
}

inline json flagged_to_json(const Flagged& f)
{
    return json{{"flagged", f.reason}, {"model", model_to_json(f.model)}, {"notes", f.notes}};
}

/* One record per model: the search outcome plus the independent re-verification. */
inline json analyze_record(const IsotropyModel& M, const SearchResult& res, bool enforce_rank_bound)
{
    json rec;
    rec["input"] = model_to_json(M);
    if (const auto* c = std::get_if<Certificate>(&res)) {
        const auto rep = verify_certificate(M, *c, enforce_rank_bound);
        rec["status"] = rep.ok() ? "certified" : "verification-failed";
        rec["leaf_case"] = c->leaf().label;
        rec["depth"] = c->depth();
        rec["certificate"] = certificate_to_json(*c);
        rec["verification"] = {{"ok", rep.ok()}, {"failures", rep.failures}};
    } else {
        const auto& f = std::get<Flagged>(res);
        rec["status"] = "flagged";
        rec["flag"] = flagged_to_json(f);
    }
    return rec;
}

} // namespace steenweb::web

#endif // STEENWEB_WEB_IO_HPP
