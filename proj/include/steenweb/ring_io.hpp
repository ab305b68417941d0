#ifndef STEENWEB_RING_IO_HPP
#define STEENWEB_RING_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "field.hpp"
#include "ring.hpp"

namespace steenweb {

using json = nlohmann::ordered_json;

using AnyAlgebra = std::variant<GradedAlgebra<PrimeField>, GradedAlgebra<RationalField>>;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& what)
{
    throw Error(Errc::parse_error, "ring literal: " + what);
}

inline long long json_int(const json& v, const char* what)
{
    if (!v.is_number_integer())
        schema_error(std::string(what) + " must be an integer");
    return v.get<long long>();
}

inline Rational parse_rational(const json& v)
{
    if (v.is_number_integer())
        return Rational(v.get<long long>());
    if (!v.is_string())
        schema_error("coefficient must be an integer or a \"num/den\" string");
    const auto s = v.get<std::string>();
    try {
        const auto slash = s.find('/');
        if (slash == std::string::npos)
            return Rational(boost::multiprecision::cpp_int(s));
        const boost::multiprecision::cpp_int num(s.substr(0, slash));
        const boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den == 0)
            schema_error("zero denominator in " + s);
        return Rational(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        schema_error("malformed rational " + s);
    }
}

template <class Field>
typename Field::value_type coeff_from_json(const Field& f, const json& v)
{
    if constexpr (std::is_same_v<Field, RationalField>) {
        return parse_rational(v);
    } else {
        if (v.is_number_integer())
            return f.from_int(v.get<long long>());
        const Rational r = parse_rational(v);
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        const int num = f.from_int(static_cast<long long>(numerator(r) % f.characteristic()));
        const int den = f.from_int(static_cast<long long>(denominator(r) % f.characteristic()));
        if (den == 0)
            schema_error("denominator divisible by the characteristic");
        return f.mul(num, f.inv(den));
    }
}

template <class Field>
json coeff_to_json(const Field& f, const typename Field::value_type& v)
{
    if constexpr (std::is_same_v<Field, RationalField>) {
        using boost::multiprecision::denominator;
        if (denominator(v) == 1)
            return json(static_cast<long long>(boost::multiprecision::numerator(v)));
        return json(f.to_string(v));
    } else {
        return json(v);
    }
}

template <class Field>
GradedAlgebra<Field> load_into(const Field& f, const json& doc)
{
    if (!doc.contains("n") || !doc.contains("dims"))
        schema_error("missing \"n\" or \"dims\"");
    const int n = static_cast<int>(json_int(doc["n"], "n"));
    if (n < 0 || n > 4096)
        schema_error("n out of range");
    if (!doc["dims"].is_array())
        schema_error("\"dims\" must be an array");
    std::vector<int> dims;
    for (const auto& d : doc["dims"])
        dims.push_back(static_cast<int>(json_int(d, "dims entry")));
    if (static_cast<int>(dims.size()) != n + 1)
        schema_error("\"dims\" must have n + 1 entries");
    for (int d : dims)
        if (d < 0 || d > 4096)
            schema_error("dims entry out of range");

    GradedAlgebra<Field> A(f, n, dims);
    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            schema_error("\"name\" must be a string");
        A.set_name(doc["name"].get<std::string>());
    }
    if (doc.contains("poincare")) {
        if (!doc["poincare"].is_boolean())
            schema_error("\"poincare\" must be a boolean");
        A.set_poincare(doc["poincare"].get<bool>());
    }
    if (doc.contains("labels")) {
        const auto& L = doc["labels"];
        if (!L.is_array() || static_cast<int>(L.size()) != n + 1)
            schema_error("\"labels\" must have n + 1 entries");
        for (int i = 0; i <= n; ++i) {
            if (!L[i].is_array() || static_cast<int>(L[i].size()) != dims[i])
                schema_error("labels in degree " + std::to_string(i) + " do not match dims");
            for (int a = 0; a < dims[i]; ++a)
                A.set_label(i, a, L[i][a].get<std::string>());
        }
    }
    if (doc.contains("products")) {
        if (!doc["products"].is_array())
            schema_error("\"products\" must be an array");
        for (const auto& e : doc["products"]) {
            for (const char* key : {"i", "a", "j", "b", "coords"})
                if (!e.contains(key))
                    schema_error(std::string("product entry missing \"") + key + "\"");
            const int i = static_cast<int>(json_int(e["i"], "i"));
            const int a = static_cast<int>(json_int(e["a"], "a"));
            const int j = static_cast<int>(json_int(e["j"], "j"));
            const int b = static_cast<int>(json_int(e["b"], "b"));
            if (i < 0 || j < 0 || i + j > n || a < 0 || a >= A.dim(i) || b < 0 || b >= A.dim(j))
                schema_error("product index out of range");
            if (!e["coords"].is_array() || static_cast<int>(e["coords"].size()) != A.dim(i + j))
                schema_error("product coords length mismatch");
            Vec<Field> coords;
            for (const auto& c : e["coords"])
                coords.push_back(coeff_from_json(f, c));
            A.set_product(i, a, j, b, coords);
        }
    }
    if (doc.contains("steenrod")) {
        if constexpr (!GradedAlgebra<Field>::supports_steenrod) {
            schema_error("Steenrod tables require Z_p coefficients");
        } else {
            if (!doc["steenrod"].is_array())
                schema_error("\"steenrod\" must be an array");
            A.enable_steenrod();
            const bool two = f.characteristic() == 2;
            for (const auto& e : doc["steenrod"]) {
                for (const char* key : {"op", "k", "from_deg", "matrix"})
                    if (!e.contains(key))
                        schema_error(std::string("steenrod entry missing \"") + key + "\"");
                const auto op = e["op"].get<std::string>();
                if (op != (two ? "Sq" : "P"))
                    schema_error("operation \"" + op + "\" does not match the prime");
                const int k = static_cast<int>(json_int(e["k"], "k"));
                const int from = static_cast<int>(json_int(e["from_deg"], "from_deg"));
                if (k < 1 || from < 0 || from + A.op_shift(k) > n)
                    schema_error("steenrod entry out of range");
                const int to = from + A.op_shift(k);
                const auto& M = e["matrix"];
                // one row per source basis element, holding its image in target coordinates
                if (!M.is_array() || static_cast<int>(M.size()) != A.dim(from))
                    schema_error("steenrod matrix must have one row per source basis element");
                auto m = zero_matrix(f, A.dim(to), A.dim(from));
                for (int a = 0; a < A.dim(from); ++a) {
                    if (!M[a].is_array() || static_cast<int>(M[a].size()) != A.dim(to))
                        schema_error("steenrod matrix row length mismatch");
                    for (int c = 0; c < A.dim(to); ++c)
                        m(c, a) = coeff_from_json(f, M[a][c]);
                }
                A.set_steenrod(k, from, std::move(m));
            }
        }
    }
    return A;
}

} // namespace detail

inline AnyAlgebra ring_from_json(const json& doc)
{
    if (!doc.is_object())
        detail::schema_error("document must be an object");
    if (!doc.contains("field"))
        detail::schema_error("missing \"field\"");
    const auto& fld = doc["field"];
    if (fld.is_string()) {
        if (fld.get<std::string>() != "Q")
            detail::schema_error("field string must be \"Q\"");
        return detail::load_into(RationalField(), doc);
    }
    if (!fld.is_object() || !fld.contains("p"))
        detail::schema_error("field must be \"Q\" or {\"p\": prime}");
    const long long p = detail::json_int(fld["p"], "p");
    if (p < 2 || p > 46337 || !is_prime(p))
        detail::schema_error("field prime " + std::to_string(p) + " is not a supported prime");
    return detail::load_into(PrimeField(static_cast<int>(p)), doc);
}

inline AnyAlgebra ring_from_string(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, std::string("malformed JSON: ") + e.what());
    }
    try {
        return ring_from_json(doc);
    } catch (const json::exception& e) {
        detail::schema_error(e.what());
    }
}

inline AnyAlgebra load_ring(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::invalid_argument, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ring_from_string(ss.str());
}

template <class Field>
json ring_to_json(const GradedAlgebra<Field>& A)
{
    const Field& f = A.field();
    json doc;
    doc["name"] = A.name();
    doc["n"] = A.top();
    if constexpr (std::is_same_v<Field, RationalField>)
        doc["field"] = "Q";
    else
        doc["field"] = {{"p", f.characteristic()}};
    doc["dims"] = A.dims();
    doc["poincare"] = A.poincare();
    doc["labels"] = A.labels();
    json prods = json::array();
    for (int i = 0; i <= A.top(); ++i)
        for (int j = 0; i + j <= A.top(); ++j)
            for (int a = 0; a < A.dim(i); ++a)
                for (int b = 0; b < A.dim(j); ++b) {
                    const auto v = A.product(i, a, j, b);
                    bool nz = false;
                    for (const auto& c : v)
                        nz = nz || !f.is_zero(c);
                    if (!nz)
                        continue;
                    json coords = json::array();
                    for (const auto& c : v)
                        coords.push_back(detail::coeff_to_json(f, c));
                    prods.push_back({{"i", i}, {"a", a}, {"j", j}, {"b", b}, {"coords", coords}});
                }
    doc["products"] = prods;
    if constexpr (GradedAlgebra<Field>::supports_steenrod) {
        if (A.has_steenrod()) {
            json st = json::array();
            for (const auto& [key, m] : A.steenrod_tables()) {
                json rows = json::array();
                for (int a = 0; a < m.cols; ++a) {
                    json row = json::array();
                    for (int c = 0; c < m.rows; ++c)
                        row.push_back(m(c, a));
                    rows.push_back(row);
                }
                st.push_back({{"op", f.characteristic() == 2 ? "Sq" : "P"},
                              {"k", key.first},
                              {"from_deg", key.second},
                              {"matrix", rows}});
            }
            doc["steenrod"] = st;
        }
    }
    return doc;
}

} // namespace steenweb

#endif // STEENWEB_RING_IO_HPP
