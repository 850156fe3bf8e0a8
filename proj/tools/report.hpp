#pragma once

// File formats and canonical report serialization for the command-line tool.
//
// Channel file:    {"n": N, "ordering": "qqpp", "X": [[..]], "Y": [[..]], "v": [..]}
// Covariance file: {"n": N, "ordering": "qqpp", "cov": [[..]]}
// Dilation file:   {"kind", "env_modes", "sigma_E", "s2", "S", "gamma_E", "mu", "mu_o", "k", "r", "r_prime"}
//
// A report produced by `random` or `dilate` is accepted wherever a channel or
// dilation file is expected; the object is then taken from its payload.

#include "gaussdil/dilation.hpp"
#include "gaussdil/purify.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

namespace gaussdil::cli {

using Json = nlohmann::json;

/// Malformed input: bad JSON, wrong shapes, unknown ordering.
class ParseError : public Error {
  public:
    using Error::Error;
};

inline std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256: digest computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

// ---- encoding ----------------------------------------------------------

inline Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

inline Json to_json(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) {
        out.push_back(x);
    }
    return out;
}

inline Json to_json(const Tolerance& tol) {
    return {{"psd_abs", tol.psd_abs}, {"rank_rel", tol.rank_rel}, {"residual", tol.residual}};
}

inline Json channel_to_json(const GaussianChannel& ch) {
    return {{"n", ch.n()}, {"ordering", "qqpp"}, {"X", to_json(ch.X())}, {"Y", to_json(ch.Y())}, {"v", to_json(ch.v())}};
}

inline Json dilation_to_json(const Dilation& d) {
    return {{"kind", to_string(d.kind)},
            {"env_modes", d.env_modes},
            {"sigma_E", to_json(d.sigma_E)},
            {"s2", to_json(d.s2)},
            {"S", to_json(d.S)},
            {"gamma_E", to_json(d.gamma_E)},
            {"mu", to_json(d.mu)},
            {"mu_o", to_json(d.mu_o)},
            {"k", d.k},
            {"r", d.r},
            {"r_prime", d.r_prime}};
}

inline Json verification_to_json(const VerificationReport& rep) {
    Json out = {{"eq19_sigma", rep.eq19_sigma},     {"eq19_Y", rep.eq19_Y},
                {"symplectic", rep.symplectic},     {"blocks", rep.blocks},
                {"uncertainty_ok", rep.uncertainty_ok}, {"action_max_err", rep.action_max_err},
                {"passed", rep.passed}};
    out["purity_ok"] = rep.purity_ok ? Json(*rep.purity_ok) : Json(nullptr);
    return out;
}

// ---- canonical writer --------------------------------------------------

namespace detail {

inline std::string format_real(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    if (x == 0.0) {
        return "0";  // folds -0
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_canonical(const Json& j, std::string& out) {
    switch (j.type()) {
    case Json::value_t::object: {
        out.push_back('{');
        bool first = true;
        for (const auto& [key, value] : j.items()) {  // std::map: sorted
            if (!first) out.push_back(',');
            first = false;
            out += Json(key).dump();
            out.push_back(':');
            write_canonical(value, out);
        }
        out.push_back('}');
        break;
    }
    case Json::value_t::array: {
        out.push_back('[');
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out.push_back(',');
            write_canonical(j[i], out);
        }
        out.push_back(']');
        break;
    }
    case Json::value_t::number_float:
        out += format_real(j.get<double>());
        break;
    default:
        out += j.dump();
    }
}

inline std::string scalar_text(const Json& j) {
    if (j.is_number_float()) {
        return format_real(j.get<double>());
    }
    if (j.is_string()) {
        return j.get<std::string>();
    }
    std::string out;
    write_canonical(j, out);
    return out;
}

inline void write_text(const Json& obj, const std::string& section, std::string& out) {
    if (!section.empty()) {
        out += "[" + section + "]\n";
    }
    std::vector<std::string> nested;
    for (const auto& [key, value] : obj.items()) {
        if (value.is_object()) {
            nested.push_back(key);
        } else {
            out += key + " = " + scalar_text(value) + "\n";
        }
    }
    for (const auto& key : nested) {
        write_text(obj.at(key), section.empty() ? key : section + "." + key, out);
    }
}

}  // namespace detail

/// Sorted keys, reals with 17 significant digits, no whitespace, trailing newline.
inline std::string canonical_json(const Json& j) {
    std::string out;
    detail::write_canonical(j, out);
    out.push_back('\n');
    return out;
}

/// One "key = value" line per scalar; nested objects become [dotted.section]
/// blocks after the scalars of their parent.
inline std::string text_report(const Json& j) {
    std::string out;
    detail::write_text(j, "", out);
    return out;
}

// ---- decoding ----------------------------------------------------------

inline Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

inline double real_from(const Json& j, const std::string& what) {
    if (!j.is_number()) {
        throw ParseError(what + ": expected a number");
    }
    return j.get<double>();
}

inline Index index_from(const Json& j, const std::string& what) {
    if (!j.is_number_integer()) {
        throw ParseError(what + ": expected an integer");
    }
    return j.get<Index>();
}

inline Matrix matrix_from(const Json& j, Index rows, Index cols, const std::string& what) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
        throw ParseError(what + ": expected " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw ParseError(what + ": row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
        }
        for (Index c = 0; c < cols; ++c) {
            m(i, c) = real_from(row[static_cast<std::size_t>(c)], what);
        }
    }
    return m;
}

inline Vector vector_from(const Json& j, Index size, const std::string& what) {
    if (!j.is_array() || static_cast<Index>(j.size()) != size) {
        throw ParseError(what + ": expected " + std::to_string(size) + " entries");
    }
    Vector v(size);
    for (Index i = 0; i < size; ++i) {
        v(i) = real_from(j[static_cast<std::size_t>(i)], what);
    }
    return v;
}

inline std::vector<double> reals_from(const Json& j, const std::string& what) {
    if (!j.is_array()) {
        throw ParseError(what + ": expected an array");
    }
    std::vector<double> out;
    for (const auto& x : j) {
        out.push_back(real_from(x, what));
    }
    return out;
}

inline const Json& field(const Json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(std::string("missing field \"") + key + "\"");
    }
    return obj.at(key);
}

namespace detail {

/// The object itself, or payload[key] when given a report.
inline const Json& unwrap(const Json& doc, const char* key) {
    if (doc.is_object() && doc.contains("payload") && doc.at("payload").is_object() &&
        doc.at("payload").contains(key)) {
        return doc.at("payload").at(key);
    }
    return doc;
}

inline Index modes_from(const Json& obj) {
    const Index n = index_from(field(obj, "n"), "n");
    if (n < 1) {
        throw ParseError("n must be positive");
    }
    const Json& ordering = field(obj, "ordering");
    if (!ordering.is_string() || ordering.get<std::string>() != "qqpp") {
        throw ParseError("ordering must be \"qqpp\"");
    }
    return n;
}

}  // namespace detail

inline GaussianChannel parse_channel(std::string_view text, const Tolerance& tol = {}) {
    const Json doc = parse_json(text);
    const Json& obj = detail::unwrap(doc, "channel");
    const Index n = detail::modes_from(obj);
    Matrix x = matrix_from(field(obj, "X"), 2 * n, 2 * n, "X");
    Matrix y = matrix_from(field(obj, "Y"), 2 * n, 2 * n, "Y");
    Vector v = obj.contains("v") ? vector_from(obj.at("v"), 2 * n, "v") : Vector::Zero(2 * n);
    if (max_abs(y - y.transpose()) > tol.residual * (1.0 + max_abs(y))) {
        throw ParseError("Y is not symmetric within the residual tolerance");
    }
    return GaussianChannel(std::move(x), std::move(y), std::move(v), tol);
}

inline Matrix parse_covariance(std::string_view text, const Tolerance& tol = {}) {
    const Json doc = parse_json(text);
    const Index n = detail::modes_from(doc);
    Matrix cov = matrix_from(field(doc, "cov"), 2 * n, 2 * n, "cov");
    if (max_abs(cov - cov.transpose()) > tol.residual * (1.0 + max_abs(cov))) {
        throw ParseError("cov is not symmetric within the residual tolerance");
    }
    return 0.5 * (cov + cov.transpose());
}

inline Dilation parse_dilation(std::string_view text, Index n) {
    const Json doc = parse_json(text);
    const Json& obj = detail::unwrap(doc, "dilation");
    Dilation d;
    const Json& kind = field(obj, "kind");
    if (kind == "pure") {
        d.kind = DilationKind::pure;
    } else if (kind == "mixed") {
        d.kind = DilationKind::mixed;
    } else {
        throw ParseError("kind must be \"pure\" or \"mixed\"");
    }
    d.env_modes = index_from(field(obj, "env_modes"), "env_modes");
    if (d.env_modes < 0) {
        throw ParseError("env_modes must be non-negative");
    }
    const Index e = 2 * d.env_modes;
    d.sigma_E = matrix_from(field(obj, "sigma_E"), e, e, "sigma_E");
    d.s2 = matrix_from(field(obj, "s2"), 2 * n, e, "s2");
    d.S = matrix_from(field(obj, "S"), 2 * n + e, 2 * n + e, "S");
    d.gamma_E = matrix_from(field(obj, "gamma_E"), e, e, "gamma_E");
    d.mu = obj.contains("mu") ? reals_from(obj.at("mu"), "mu") : std::vector<double>{};
    d.mu_o = obj.contains("mu_o") ? reals_from(obj.at("mu_o"), "mu_o") : std::vector<double>{};
    d.k = obj.contains("k") ? index_from(obj.at("k"), "k") : 0;
    d.r = obj.contains("r") ? index_from(obj.at("r"), "r") : 0;
    d.r_prime = obj.contains("r_prime") ? index_from(obj.at("r_prime"), "r_prime") : 0;
    return d;
}

}  // namespace gaussdil::cli
