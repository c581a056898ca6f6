#include "so21/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace so21 {

namespace {

using nlohmann::json;

json matrix_to_json_value(const GroupElement& c) {
    json arr = json::array();
    for (double v : c.a) arr.push_back(v);
    return arr;
}

json residuals_value(const GroupElement& c, double tol) {
    const ValidationReport rep = validate(c, tol);
    return json{{"pseudo_orthogonality", rep.pseudo_orthogonality},
                {"det_minus_one", rep.det_minus_one},
                {"c11_floor", rep.c11_floor}};
}

json params_value(const GeodesicParams& p) {
    return json{{"beta", p.beta}, {"phi", p.phi}, {"t", p.t}};
}

std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double parse_number(const std::string& tok, std::size_t position) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw std::invalid_argument("matrix literal: not a number at token " +
                                    std::to_string(position) + ": '" + tok + "'");
    return v;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

GroupElement parse_matrix(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        throw std::invalid_argument("matrix literal: empty input");

    if (text[first] == '[') {
        json arr;
        try {
            arr = json::parse(text);
        } catch (const json::exception& e) {
            throw std::invalid_argument(std::string("matrix literal: bad JSON: ") +
                                        e.what());
        }
        if (!arr.is_array() || arr.size() != 9)
            throw std::invalid_argument(
                "matrix literal: JSON array must hold exactly 9 numbers, got " +
                std::to_string(arr.size()));
        GroupElement c;
        for (std::size_t i = 0; i < 9; ++i) {
            if (!arr[i].is_number())
                throw std::invalid_argument(
                    "matrix literal: JSON element " + std::to_string(i) +
                    " is not a number");
            c.a[i] = arr[i].get<double>();
        }
        return c;
    }

    const auto toks = tokens_of(text);
    if (toks.empty()) throw std::invalid_argument("matrix literal: empty input");

    if (toks[0] == "identity") {
        if (toks.size() != 1)
            throw std::invalid_argument("matrix literal: identity takes no arguments");
        return GroupElement::identity();
    }
    if (toks[0] == "rotation") {
        if (toks.size() != 2)
            throw std::invalid_argument("matrix literal: rotation takes one angle");
        return rotation(parse_number(toks[1], 1));
    }
    if (toks[0] == "boost") {
        if (toks.size() != 2)
            throw std::invalid_argument("matrix literal: boost takes one rapidity");
        return boost(parse_number(toks[1], 1));
    }
    if (toks[0] == "geodesic") {
        if (toks.size() != 4)
            throw std::invalid_argument(
                "matrix literal: geodesic takes beta phi t");
        return geodesic_point(parse_number(toks[1], 1), parse_number(toks[2], 2),
                              parse_number(toks[3], 3));
    }

    if (toks.size() != 9)
        throw std::invalid_argument(
            "matrix literal: expected 9 numbers, got " + std::to_string(toks.size()) +
            " (first token '" + toks[0] + "')");
    GroupElement c;
    for (std::size_t i = 0; i < 9; ++i) c.a[i] = parse_number(toks[i], i);
    return c;
}

std::string matrix_json(const GroupElement& c, double tol) {
    const ValidationReport rep = validate(c, tol);
    json j{{"matrix", matrix_to_json_value(c)},
           {"residuals", residuals_value(c, tol)},
           {"accepted", rep.accepted}};
    return j.dump();
}

std::string distance_json(const DistanceResult& r) {
    json geos = json::array();
    for (const auto& g : r.geodesics) geos.push_back(params_value(g));
    json j{{"d", r.d},
           {"case", to_string(r.case_label)},
           {"beta", r.beta},
           {"mu", r.mu},
           {"eta_abs", r.eta_abs},
           {"gamma_angle", r.gamma_angle},
           {"psi", r.psi},
           {"geodesics", geos},
           {"residuals",
            {{"master_identity", r.residuals.master_identity},
             {"forward_reconstruction", r.residuals.forward_reconstruction}}}};
    return j.dump();
}

std::string classification_json(const Classification& c) {
    json j{{"label", to_string(c.label)},
           {"conjugate_flag", c.conjugate_flag},
           {"eta", c.eta},
           {"theta", c.theta},
           {"alpha", c.alpha},
           {"residuals",
            {{"symmetry", c.residuals.symmetry},
             {"cutK", c.residuals.cutK},
             {"so2", c.residuals.so2}}}};
    return j.dump();
}

std::string decomposition_json(const Decomposition& d) {
    json j{{"s1", matrix_to_json_value(d.s1)},
           {"k1", matrix_to_json_value(d.k1)},
           {"s2", matrix_to_json_value(d.s2)},
           {"eta", d.eta}};
    return j.dump();
}

std::string oracle_json(const OracleReport& r) {
    json hits = json::array();
    for (const auto& h : r.near_hits)
        hits.push_back(json{{"params", params_value(h.params)},
                            {"residual", h.residual}});
    json analytic = json::array();
    for (const auto& g : r.analytic_geodesics) analytic.push_back(params_value(g));
    json j{{"t_min", r.hit_found ? json(r.t_min) : json()},
           {"best_params", params_value(r.best_params)},
           {"match_residual", r.match_residual},
           {"analytic_d", r.analytic_d},
           {"gap", r.hit_found ? json(r.gap) : json()},
           {"hit_found", r.hit_found},
           {"consistent", r.consistent},
           {"near_hits", hits},
           {"analytic_geodesics", analytic}};
    return j.dump();
}

std::string oracle_csv(const std::vector<OracleReport>& reports) {
    std::string out =
        "index,t_min,match_residual,analytic_d,gap,hit_found,consistent\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const OracleReport& r = reports[i];
        out += std::to_string(i);
        out += ',';
        out += r.hit_found ? format_double(r.t_min) : "inf";
        out += ',';
        out += format_double(r.match_residual);
        out += ',';
        out += format_double(r.analytic_d);
        out += ',';
        out += r.hit_found ? format_double(r.gap) : "inf";
        out += ',';
        out += r.hit_found ? '1' : '0';
        out += ',';
        out += r.consistent ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
    std::string out = "t,c11,c12,c13,c21,c22,c23,c31,c32,c33,hx,hy,ht\n";
    for (const auto& p : trace) {
        out += format_double(p.t);
        for (double v : p.g.a) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += format_double(p.base.x);
        out += ',';
        out += format_double(p.base.y);
        out += ',';
        out += format_double(p.base.t);
        out += '\n';
    }
    return out;
}

std::string trace_json(const std::vector<TracePoint>& trace) {
    json arr = json::array();
    for (const auto& p : trace) {
        arr.push_back(json{{"t", p.t},
                           {"matrix", matrix_to_json_value(p.g)},
                           {"hx", p.base.x},
                           {"hy", p.base.y},
                           {"ht", p.base.t}});
    }
    return arr.dump();
}

}  // namespace so21
