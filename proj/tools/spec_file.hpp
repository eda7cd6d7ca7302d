#pragma once

// JSON spec files for the command-line tool.
//
//   {
//     "branches": [ <branch>, ... ],
//     "mixture":  [ {"weight": 0.7, "coefficients": [1, [0.5, 0.1]]}, ... ],
//     "kappa": 1.0, "p": 0.1, "phi": 0.0,
//     "party_a": [ <branch>, <branch> ],
//     "party_b": [ <branch>, <branch> ]
//   }
//
// A <branch> is either parametric,
//   {"x0": 1, "p0": 0, "r": 0.3, "theta": 0}           single mode
//   {"alpha": [re, im], "r": 0.3, "theta": 0}          single mode, x0 + i p0 = sqrt(2) alpha
//   {"modes": [ {...}, {...} ]}                        several modes
//   {}                                                 vacuum
// or raw,
//   {"d": [...], "V": [...]}                           V row-major, 2n x 2n
// Complex numbers are a plain number, [re, im] or {"re": .., "im": ..}.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "branchspan/branchspan.hpp"

namespace branchspan::cli {

/// Malformed input file. Carries a 1-based line/column when known.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& what, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                                      : what),
          line_(line), column_(column) {}

    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

using json = nlohmann::json;

struct SpecFile {
    std::vector<GaussianPure> branches;
    std::vector<ComplexVector> mixture_coefficients;
    std::vector<double> mixture_weights;
    std::optional<double> kappa;
    std::optional<double> p;
    std::optional<double> phi;
    std::vector<GaussianPure> party_a;
    std::vector<GaussianPure> party_b;
};

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1;
    int column = 1;
    for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

inline double number(const json& j, const std::string& where) {
    if (!j.is_number())
        throw parse_error(where + ": expected a number");
    return j.get<double>();
}

inline Complex complex_value(const json& j, const std::string& where) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {number(j[0], where + "[0]"), number(j[1], where + "[1]")};
    if (j.is_object() && j.contains("re"))
        return {number(j.at("re"), where + ".re"), j.contains("im") ? number(j.at("im"), where + ".im") : 0.0};
    throw parse_error(where + ": expected a complex number (number, [re, im] or {re, im})");
}

inline ModeParams mode(const json& j, const std::string& where) {
    if (!j.is_object())
        throw parse_error(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (key != "x0" && key != "p0" && key != "alpha" && key != "r" && key != "theta")
            throw parse_error(where + ": unknown key '" + key + "'");
    ModeParams m;
    if (j.contains("alpha")) {
        if (j.contains("x0") || j.contains("p0"))
            throw parse_error(where + ": give either alpha or x0/p0, not both");
        const Complex a = complex_value(j.at("alpha"), where + ".alpha");
        m.x0 = std::sqrt(2.0) * a.real();
        m.p0 = std::sqrt(2.0) * a.imag();
    } else {
        if (j.contains("x0")) m.x0 = number(j.at("x0"), where + ".x0");
        if (j.contains("p0")) m.p0 = number(j.at("p0"), where + ".p0");
    }
    if (j.contains("r")) m.r = number(j.at("r"), where + ".r");
    if (j.contains("theta")) m.theta = number(j.at("theta"), where + ".theta");
    return m;
}

inline GaussianPure branch(const json& j, const std::string& where) {
    if (!j.is_object())
        throw parse_error(where + ": expected a branch object");
    const bool raw = j.contains("d") || j.contains("V");
    const bool parametric = j.contains("modes") || j.contains("x0") || j.contains("p0") || j.contains("alpha")
                            || j.contains("r") || j.contains("theta");
    if (raw && parametric)
        throw parse_error(where + ": a branch is either parametric (x0, p0, r, theta / modes) or raw (d, V)");
    for (const auto& [key, value] : j.items())
        if (key != "d" && key != "V" && key != "modes" && key != "x0" && key != "p0" && key != "alpha" && key != "r"
            && key != "theta")
            throw parse_error(where + ": unknown key '" + key + "'");

    if (raw) {
        if (!j.contains("d") || !j.contains("V") || !j.at("d").is_array() || !j.at("V").is_array())
            throw parse_error(where + ": raw branches need arrays d and V");
        const auto& jd = j.at("d");
        const auto& jv = j.at("V");
        const auto n = static_cast<Eigen::Index>(jd.size());
        if (static_cast<Eigen::Index>(jv.size()) != n * n)
            throw parse_error(where + ": V must hold len(d)^2 entries in row-major order");
        RealVector d(n);
        RealMatrix v(n, n);
        for (Eigen::Index k = 0; k < n; ++k) d(k) = number(jd[static_cast<std::size_t>(k)], where + ".d");
        for (Eigen::Index k = 0; k < n * n; ++k) v(k / n, k % n) = number(jv[static_cast<std::size_t>(k)], where + ".V");
        return GaussianPure::from_moments(std::move(d), std::move(v));
    }
    if (j.contains("modes")) {
        if (!j.at("modes").is_array() || j.at("modes").empty())
            throw parse_error(where + ".modes: expected a non-empty array");
        std::vector<ModeParams> modes;
        for (std::size_t k = 0; k < j.at("modes").size(); ++k)
            modes.push_back(mode(j.at("modes")[k], where + ".modes[" + std::to_string(k) + "]"));
        return make_displaced_squeezed(modes);
    }
    return make_displaced_squeezed(mode(j, where));
}

inline std::vector<GaussianPure> branch_list(const json& j, const std::string& where) {
    if (!j.is_array())
        throw parse_error(where + ": expected an array of branches");
    std::vector<GaussianPure> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(branch(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

} // namespace detail

inline SpecFile parse_spec(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw parse_error(e.what(), line, column);
    }
    if (!root.is_object())
        throw parse_error("top level must be an object", 1, 1);

    SpecFile out;
    if (root.contains("branches")) out.branches = detail::branch_list(root.at("branches"), "branches");
    if (root.contains("party_a")) out.party_a = detail::branch_list(root.at("party_a"), "party_a");
    if (root.contains("party_b")) out.party_b = detail::branch_list(root.at("party_b"), "party_b");
    if (root.contains("kappa")) out.kappa = detail::number(root.at("kappa"), "kappa");
    if (root.contains("p")) out.p = detail::number(root.at("p"), "p");
    if (root.contains("phi")) out.phi = detail::number(root.at("phi"), "phi");

    if (root.contains("mixture")) {
        const json& mix = root.at("mixture");
        if (!mix.is_array() || mix.empty())
            throw parse_error("mixture: expected a non-empty array");
        for (std::size_t mu = 0; mu < mix.size(); ++mu) {
            const std::string where = "mixture[" + std::to_string(mu) + "]";
            const json& item = mix[mu];
            if (!item.is_object() || !item.contains("coefficients") || !item.at("coefficients").is_array())
                throw parse_error(where + ": expected {weight, coefficients}");
            const json& jc = item.at("coefficients");
            ComplexVector c(static_cast<Eigen::Index>(jc.size()));
            for (std::size_t k = 0; k < jc.size(); ++k)
                c(static_cast<Eigen::Index>(k)) = detail::complex_value(jc[k], where + ".coefficients");
            out.mixture_coefficients.push_back(std::move(c));
            out.mixture_weights.push_back(item.contains("weight") ? detail::number(item.at("weight"), where + ".weight")
                                                                  : 1.0);
        }
    }
    return out;
}

inline SpecFile load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw parse_error("cannot open spec file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_spec(buffer.str());
}

} // namespace branchspan::cli
