#pragma once

// Closed-form versus number-basis comparisons behind `branchspan verify`.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "branchspan/branchspan.hpp"
#include "branchspan/fock_oracle.hpp"

namespace branchspan::cli {

struct Comparison {
    std::string quantity;
    double library = 0.0;
    double oracle = 0.0;

    [[nodiscard]] double diff() const { return std::abs(library - oracle); }
};

using Scenario = std::function<std::vector<Comparison>()>;

namespace scenarios {

inline void push_complex(std::vector<Comparison>& out, const std::string& name, Complex lib, Complex ora) {
    out.push_back({name + ".re", lib.real(), ora.real()});
    out.push_back({name + ".im", lib.imag(), ora.imag()});
}

inline fock::FockVector fock_of(const ModeParams& m, int cutoff) {
    return fock::displaced_squeezed(m.x0, m.p0, m.r, m.theta, cutoff);
}

inline std::vector<Comparison> overlap() {
    const std::vector<std::pair<ModeParams, ModeParams>> pairs{
        {{1.1, -0.4, 0.3, 0.7}, {-0.5, 0.9, -0.2, 2.1}},
        {{std::sqrt(2.0) * 0.8, 0.0, 0.2, 0.0}, {-std::sqrt(2.0) * 0.8, 0.0, 0.2, 0.0}},
        {{0.0, 0.0, 0.0, 0.0}, {2.0, 0.0, 0.0, 0.0}},
    };
    std::vector<Comparison> out;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [m1, m2] = pairs[k];
        push_complex(out, "overlap[" + std::to_string(k) + "]",
                     branchspan::overlap(make_displaced_squeezed(m1), make_displaced_squeezed(m2)),
                     fock::overlap(fock_of(m1, 80), fock_of(m2, 80)));
    }
    return out;
}

inline std::vector<Comparison> characteristic() {
    const ModeParams m1{0.9, 0.1, 0.0, 0.0};
    const ModeParams m2{-0.7, 0.3, 0.0, 0.0};
    std::vector<Comparison> out;
    const std::vector<std::pair<double, double>> points{{0.3, -0.2}, {-0.5, 0.4}, {0.0, 0.0}};
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto [eta, mom] = points[k];
        RealVector xi(2);
        xi << eta, mom;
        fock::FockVector bra = fock_of(m1, 100);
        const fock::FockVector ket = fock::weyl(fock_of(m2, 80), eta, mom, 100);
        push_complex(out, "chi[" + std::to_string(k) + "]",
                     cross_characteristic(make_displaced_squeezed(m1), make_displaced_squeezed(m2), xi),
                     fock::overlap(bra, ket));
    }
    return out;
}

inline std::vector<Comparison> cross_moments() {
    const ModeParams m1{std::sqrt(2.0) * 0.7, 0.0, 0.0, 0.0};
    const ModeParams m2{-std::sqrt(2.0) * 0.7, 0.0, 0.0, 0.0};
    const CrossMomentData lib = branchspan::cross_moments(make_displaced_squeezed(m1), make_displaced_squeezed(m2));
    const fock::CrossMoments ora = fock::cross_moments(fock_of(m1, 80), fock_of(m2, 80));
    std::vector<Comparison> out;
    push_complex(out, "g12", lib.overlap, ora.overlap);
    push_complex(out, "<x>", lib.r(0), ora.r(0));
    push_complex(out, "<p>", lib.r(1), ora.r(1));
    push_complex(out, "<x^2>", lib.M(0, 0), ora.M(0, 0));
    push_complex(out, "<{x,p}>/2", lib.M(0, 1), ora.M(0, 1));
    push_complex(out, "<p^2>", lib.M(1, 1), ora.M(1, 1));
    return out;
}

struct CatCase {
    double alpha;
    double r;
    double kappa;
    double p;
};

// rho = (1-p)|psi+><psi+| + p|psi-><psi-| in the number basis, with the same gauge fix.
inline std::pair<ComplexMatrix, fock::Moments> fock_cat(const CatCase& c, int cutoff) {
    const ModeParams m1{std::sqrt(2.0) * c.alpha, 0.0, c.r, 0.0};
    const ModeParams m2{-std::sqrt(2.0) * c.alpha, 0.0, c.r, 0.0};
    const fock::FockVector f1 = fock_of(m1, cutoff);
    const fock::FockVector f2 = fock_of(m2, cutoff);
    const Complex g = fock::overlap(f1, f2);
    const Complex phase = std::abs(g) > 0.0 ? std::conj(g) / std::abs(g) : Complex(1.0, 0.0);
    const std::vector<fock::FockVector> br{f1, f2};
    const std::vector<Complex> plus{1.0, c.kappa * phase};
    const std::vector<Complex> minus{1.0, -c.kappa * phase};
    const std::vector<fock::FockVector> states{fock::superpose(br, plus), fock::superpose(br, minus)};
    const std::vector<double> w{1.0 - c.p, c.p};
    return {fock::density(states, w), fock::mixture_moments(states, w)};
}

inline TwoBranchMixSpec library_cat(const CatCase& c) {
    return TwoBranchMixSpec::create(make_coherent_squeezed(c.alpha, c.r), make_coherent_squeezed(-c.alpha, c.r),
                                    c.kappa, c.p);
}

inline std::vector<Comparison> cat_entropy() {
    std::vector<Comparison> out;
    const std::vector<CatCase> cases{{1.0, 0.0, 1.0, 0.3}, {0.8, 0.3, 0.5, 0.2}, {1.5, -0.4, 0.7, 0.1}};
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto spec = library_cat(cases[k]);
        const auto spectrum = two_by_two_spectrum(two_branch_detrho(spec));
        out.push_back({"S(rho)[" + std::to_string(k) + "]", von_neumann_entropy(spectrum),
                       fock::entropy(fock_cat(cases[k], 80).first)});
    }
    return out;
}

inline std::vector<Comparison> nongauss() {
    std::vector<Comparison> out;
    const std::vector<CatCase> cases{{1.0, 0.0, 1.0, 0.1}, {1.2, 0.3, 0.5, 0.1}, {0.6, -0.5, 1.0, 0.0}};
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto report = non_gaussianity_report(library_cat(cases[k]));
        const auto [rho, moments] = fock_cat(cases[k], 80);
        const double s_tau = fock::gaussian_entropy(moments.V);
        const std::string tag = "[" + std::to_string(k) + "]";
        out.push_back({"V_xx" + tag, report.moments.V(0, 0), moments.V(0, 0)});
        out.push_back({"V_pp" + tag, report.moments.V(1, 1), moments.V(1, 1)});
        out.push_back({"S(tau)" + tag, report.reference_entropy, s_tau});
        out.push_back({"delta_nG" + tag, report.delta, s_tau - fock::entropy(rho)});
    }
    return out;
}

struct BellCase {
    double alpha;
    double r;
    double phi;
    double p;
};

/// Number-basis negativity of rho_{p,phi} with one mode per party and branches D(+-alpha)S(r)|0>.
inline double fock_bell_negativity(const BellCase& c, int cutoff) {
    const ModeParams m1{std::sqrt(2.0) * c.alpha, 0.0, c.r, 0.0};
    const ModeParams m2{-std::sqrt(2.0) * c.alpha, 0.0, c.r, 0.0};
    const fock::FockVector f1 = fock_of(m1, cutoff);
    fock::FockVector f2 = fock_of(m2, cutoff);
    const Complex g = fock::overlap(f1, f2);
    if (std::abs(g) > 0.0) f2.amplitudes *= std::conj(g) / std::abs(g);

    const fock::FockVector gamma1 = fock::product(f1, f1);
    const fock::FockVector gamma2 = fock::product(f2, f2);
    const std::vector<fock::FockVector> br{gamma1, gamma2};
    const std::vector<Complex> coeffs{1.0, std::polar(1.0, c.phi)};
    std::vector<fock::FockVector> states;
    std::vector<double> weights;
    if (c.p < 1.0) {
        states.push_back(fock::superpose(br, coeffs));
        weights.push_back(1.0 - c.p);
    }
    if (c.p > 0.0) {
        states.push_back(gamma1);
        states.push_back(gamma2);
        weights.push_back(0.5 * c.p);
        weights.push_back(0.5 * c.p);
    }
    const auto d = static_cast<Eigen::Index>(cutoff + 1);
    return fock::negativity(fock::density(states, weights), d, d);
}

inline double library_bell_negativity(const BellCase& c) {
    const GaussianPure g1 = make_coherent_squeezed(c.alpha, c.r);
    const GaussianPure g2 = make_coherent_squeezed(-c.alpha, c.r);
    const auto spec = TwoBranchBellSpec::create(g1, g2, g1, g2, c.phi, c.p);
    return negativity_numeric(build_bipartite_effective(spec));
}

inline std::vector<Comparison> bell_negativity() {
    std::vector<Comparison> out;
    const std::vector<BellCase> cases{{0.6, 0.0, pi / 3.0, 0.4}, {0.5, 0.2, 0.0, 0.0}};
    for (std::size_t k = 0; k < cases.size(); ++k)
        out.push_back({"N[" + std::to_string(k) + "]", library_bell_negativity(cases[k]),
                       fock_bell_negativity(cases[k], 30)});
    return out;
}

} // namespace scenarios

inline const std::map<std::string, Scenario>& registered_scenarios() {
    static const std::map<std::string, Scenario> table{
        {"overlap", scenarios::overlap},
        {"characteristic", scenarios::characteristic},
        {"cross-moments", scenarios::cross_moments},
        {"cat-entropy", scenarios::cat_entropy},
        {"nongauss", scenarios::nongauss},
        {"bell-negativity", scenarios::bell_negativity},
    };
    return table;
}

} // namespace branchspan::cli
