// branchspan command-line tool.
//
// Exit codes: 0 ok, 1 unexpected internal error, 2 parse/usage error,
// 3 near-dependent branches, 4 unphysical or invalid input, 5 verification failure.

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "branchspan/branchspan.hpp"
#include "spec_file.hpp"
#include "verify_scenarios.hpp"

namespace bs = branchspan;
using bs::cli::parse_error;

namespace {

enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_parse = 2,
    exit_near_dependence = 3,
    exit_unphysical = 4,
    exit_verification = 5,
};

std::string num(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

std::string num(bs::Complex z) {
    if (z.imag() == 0.0) return num(z.real());
    return num(z.real()) + (std::signbit(z.imag()) ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

struct Options {
    std::string spec_path;
    std::string out_path;
    bool bits = false;
    double tolerance = 1e-6;
    unsigned threads = 1;
    std::optional<double> pseudo_inverse;
    std::optional<double> kappa;
    std::optional<double> p;
    std::optional<double> phi;
    std::optional<double> renyi;
    std::string scenario = "all";

    // sweep-nongauss
    std::vector<double> kappas{0.0, 1e-3, 1e-2, 0.2, 0.5, 1.0};
    double alpha_min = 0.05;
    double alpha_max = 4.0;
    double alpha_step = 0.05;
    double r = 0.0;
    double theta = 0.0;

    // sweep-negativity
    double neg_alpha_min = 0.0;
    double neg_alpha_max = 4.0;
    double neg_alpha_step = 0.1;
    double r_min = -1.0;
    double r_max = 1.0;
    double r_step = 0.1;
    double theta1 = 0.0;
    double theta2 = 0.0;

    [[nodiscard]] bs::GramOptions gram() const {
        bs::GramOptions g;
        g.pseudo_inverse_cutoff = pseudo_inverse;
        return g;
    }

    [[nodiscard]] double entropy_unit() const { return bits ? 1.0 / std::numbers::ln2 : 1.0; }
};

/// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw parse_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

bs::cli::SpecFile require_spec(const Options& o) {
    if (o.spec_path.empty())
        throw parse_error("--spec <file> is required for this command");
    return bs::cli::load_spec(o.spec_path);
}

void print_matrix(std::ostream& os, const std::string& name, const bs::ComplexMatrix& m) {
    os << name << " =\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << num(m(i, j));
        os << "]\n";
    }
}

void write_matrix_csv(std::ostream& os, const bs::ComplexMatrix& m) {
    os << "i,j,re,im\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << i << ',' << j << ',' << num(m(i, j).real()) << ',' << num(m(i, j).imag()) << '\n';
}

int cmd_overlap(const Options& o) {
    const auto spec = require_spec(o);
    if (spec.branches.size() != 2)
        throw parse_error("overlap expects exactly two branches");
    const bs::Complex g = bs::overlap(spec.branches[0], spec.branches[1]);
    std::cout << "overlap = " << num(g) << "\n|overlap| = " << num(std::abs(g)) << '\n';
    if (!o.out_path.empty()) {
        Output out(o.out_path);
        out.stream() << "re,im,abs\n" << num(g.real()) << ',' << num(g.imag()) << ',' << num(std::abs(g)) << '\n';
    }
    return exit_ok;
}

bs::BranchManifold manifold_from(const bs::cli::SpecFile& spec, const Options& o) {
    if (spec.branches.empty())
        throw parse_error("spec file has no branches");
    return bs::build_manifold(spec.branches, o.gram());
}

int cmd_gram(const Options& o) {
    const auto m = manifold_from(require_spec(o), o);
    print_matrix(std::cout, "G", m.gram());
    std::cout << "min eigenvalue = " << num(m.min_gram_eigenvalue()) << '\n';
    if (!o.out_path.empty()) {
        Output out(o.out_path);
        write_matrix_csv(out.stream(), m.gram());
    }
    return exit_ok;
}

bs::SupportedMixture mixture_from(const bs::cli::SpecFile& spec) {
    if (spec.mixture_coefficients.empty())
        throw parse_error("spec file has no mixture");
    return bs::SupportedMixture::create(spec.mixture_coefficients, spec.mixture_weights);
}

void print_spectrum(std::ostream& os, const std::vector<double>& ev) {
    os << "spectrum = [";
    for (std::size_t k = 0; k < ev.size(); ++k) os << (k ? ", " : "") << num(ev[k]);
    os << "]\n";
}

int cmd_reduce(const Options& o) {
    const auto spec = require_spec(o);
    const auto m = manifold_from(spec, o);
    const auto rho = bs::effective_density(m, mixture_from(spec));
    print_matrix(std::cout, "rho", rho.matrix());
    print_spectrum(std::cout, rho.spectrum());
    if (!o.out_path.empty()) {
        Output out(o.out_path);
        write_matrix_csv(out.stream(), rho.matrix());
    }
    return exit_ok;
}

int cmd_entropy(const Options& o) {
    const auto spec = require_spec(o);
    const auto rho = bs::effective_density(manifold_from(spec, o), mixture_from(spec));
    const double s = bs::von_neumann_entropy(rho) * o.entropy_unit();
    const char* unit = o.bits ? "bits" : "nats";
    print_spectrum(std::cout, rho.spectrum());
    std::cout << "S = " << num(s) << ' ' << unit << '\n';
    std::optional<double> renyi;
    if (o.renyi) {
        renyi = bs::renyi_entropy(rho, *o.renyi) * o.entropy_unit();
        std::cout << "S_" << num(*o.renyi) << " = " << num(*renyi) << ' ' << unit << '\n';
    }
    if (!o.out_path.empty()) {
        Output out(o.out_path);
        out.stream() << "von_neumann" << (renyi ? ",renyi" : "") << '\n' << num(s);
        if (renyi) out.stream() << ',' << num(*renyi);
        out.stream() << '\n';
    }
    return exit_ok;
}

int cmd_nongauss(const Options& o) {
    const auto spec = require_spec(o);
    if (spec.branches.size() != 2)
        throw parse_error("nongauss expects exactly two branches");
    const double kappa = o.kappa ? *o.kappa : spec.kappa.value_or(1.0);
    const double p = o.p ? *o.p : spec.p.value_or(0.0);
    const auto mix = bs::TwoBranchMixSpec::create(spec.branches[0], spec.branches[1], kappa, p);
    const auto r = bs::non_gaussianity_report(mix);
    const double u = o.entropy_unit();
    const char* unit = o.bits ? "bits" : "nats";
    std::cout << "g = " << num(mix.overlap()) << "\ndet rho = " << num(bs::two_branch_detrho(mix))
              << "\nS(rho) = " << num(r.state_entropy * u) << ' ' << unit
              << "\nS(tau) = " << num(r.reference_entropy * u) << ' ' << unit
              << "\ndelta_nG = " << num(r.delta * u) << ' ' << unit << '\n';
    if (!o.out_path.empty()) {
        Output out(o.out_path);
        out.stream() << "kappa,p,g,S_rho,S_tau,delta_nG\n"
                     << num(kappa) << ',' << num(p) << ',' << num(mix.overlap()) << ',' << num(r.state_entropy * u)
                     << ',' << num(r.reference_entropy * u) << ',' << num(r.delta * u) << '\n';
    }
    return exit_ok;
}

int cmd_negativity(const Options& o) {
    const auto spec = require_spec(o);
    if (spec.party_a.size() != 2 || spec.party_b.size() != 2)
        throw parse_error("negativity expects party_a and party_b with two branches each");
    const double phi = o.phi ? *o.phi : spec.phi.value_or(0.0);
    const double p = o.p ? *o.p : spec.p.value_or(0.0);
    const auto bell = bs::TwoBranchBellSpec::create(spec.party_a[0], spec.party_a[1], spec.party_b[0],
                                                    spec.party_b[1], phi, p);
    const auto& s = bell.overlaps();
    const double pure = bs::negativity_closed_form(bell);
    const auto [l1, l2] = bs::schmidt_spectrum(bell);
    const double n = bs::negativity_numeric(bs::build_bipartite_effective(bell, o.gram()));
    std::cout << "a = " << num(s.a) << "\nb = " << num(s.b) << "\nN = " << num(n)
              << "\nN(pure, closed form) = " << num(pure) << "\nbound (1-p) N(pure) = " << num((1.0 - p) * pure)
              << "\nSchmidt (pure) = [" << num(l1) << ", " << num(l2) << "]\n";
    if (!o.out_path.empty()) {
        Output out(o.out_path);
        out.stream() << "a,b,phi,p,negativity,negativity_pure,bound\n"
                     << num(s.a) << ',' << num(s.b) << ',' << num(phi) << ',' << num(p) << ',' << num(n) << ','
                     << num(pure) << ',' << num((1.0 - p) * pure) << '\n';
    }
    return exit_ok;
}

std::vector<double> grid(double lo, double hi, double step, const std::string& name) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !std::isfinite(step) || step <= 0.0 || hi < lo)
        throw parse_error("invalid " + name + " range");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = lo + static_cast<double>(k) * step;
    return out;
}

/// Evaluates fn(0..n-1) on a worker pool; results keep index order. The lowest failing
/// index is reported (with its label) and its exception rethrown.
template <typename Row, typename Fn, typename Label>
std::vector<Row> parallel_rows(std::size_t n, unsigned threads, Fn fn, Label label) {
    std::vector<Row> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                rows[k] = fn(k);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < std::max(1u, threads); ++t) pool.emplace_back(worker);
    worker();
    pool.clear();
    for (std::size_t k = 0; k < n; ++k) {
        if (errors[k]) {
            std::cerr << "error at grid point " << label(k) << '\n';
            std::rethrow_exception(errors[k]);
        }
    }
    return rows;
}

int cmd_sweep_nongauss(const Options& o) {
    const auto alphas = grid(o.alpha_min, o.alpha_max, o.alpha_step, "alpha");
    const double p = o.p.value_or(0.1);
    const std::size_t n = o.kappas.size() * alphas.size();
    auto point = [&](std::size_t k) { return std::pair{o.kappas[k / alphas.size()], alphas[k % alphas.size()]}; };

    const auto rows = parallel_rows<double>(
        n, o.threads,
        [&](std::size_t k) {
            const auto [kappa, alpha] = point(k);
            const auto spec = bs::TwoBranchMixSpec::create(bs::make_coherent_squeezed(alpha, o.r, o.theta),
                                                           bs::make_coherent_squeezed(-alpha, o.r, o.theta), kappa, p);
            return bs::non_gaussianity(spec) * o.entropy_unit();
        },
        [&](std::size_t k) {
            const auto [kappa, alpha] = point(k);
            return "(kappa=" + num(kappa) + ", alpha=" + num(alpha) + ")";
        });

    Output out(o.out_path);
    out.stream() << "alpha,kappa,delta_nG\n";
    for (std::size_t k = 0; k < n; ++k) {
        const auto [kappa, alpha] = point(k);
        out.stream() << num(alpha) << ',' << num(kappa) << ',' << num(rows[k]) << '\n';
    }
    return exit_ok;
}

/// Branch pair D(+-alpha) S(r)|0>; r < 0 rotates the second branch's squeezing by pi/2.
std::pair<bs::GaussianPure, bs::GaussianPure> negativity_branches(double alpha, double r, const Options& o) {
    const double theta2 = r < 0.0 ? o.theta2 + std::numbers::pi / 2.0 : o.theta2;
    return {bs::make_coherent_squeezed(alpha, std::abs(r), o.theta1),
            bs::make_coherent_squeezed(-alpha, std::abs(r), theta2)};
}

int cmd_sweep_negativity(const Options& o) {
    if (!o.phi)
        throw parse_error("sweep-negativity requires --phi");
    const auto alphas = grid(o.neg_alpha_min, o.neg_alpha_max, o.neg_alpha_step, "alpha");
    const auto rs = grid(o.r_min, o.r_max, o.r_step, "r");
    const double p = o.p.value_or(0.0);
    const std::size_t n = alphas.size() * rs.size();
    auto point = [&](std::size_t k) { return std::pair{alphas[k / rs.size()], rs[k % rs.size()]}; };

    const auto rows = parallel_rows<double>(
        n, o.threads,
        [&](std::size_t k) {
            const auto [alpha, r] = point(k);
            const auto [g1, g2] = negativity_branches(alpha, r, o);
            const auto bell = bs::TwoBranchBellSpec::create(g1, g2, g1, g2, *o.phi, p);
            // Coinciding local branches make the state a product.
            if (bell.overlaps().a >= bs::max_branch_overlap) return 0.0;
            if (p == 0.0) return bs::negativity_closed_form(bell);
            return bs::negativity_numeric(bs::build_bipartite_effective(bell, o.gram()));
        },
        [&](std::size_t k) {
            const auto [alpha, r] = point(k);
            return "(alpha=" + num(alpha) + ", r=" + num(r) + ")";
        });

    Output out(o.out_path);
    out.stream() << "alpha,r,negativity\n";
    for (std::size_t k = 0; k < n; ++k) {
        const auto [alpha, r] = point(k);
        out.stream() << num(alpha) << ',' << num(r) << ',' << num(rows[k]) << '\n';
    }
    return exit_ok;
}

int cmd_verify(const Options& o) {
    const auto& table = bs::cli::registered_scenarios();
    std::vector<std::string> names;
    if (o.scenario == "all") {
        for (const auto& [name, fn] : table) names.push_back(name);
    } else if (table.contains(o.scenario)) {
        names.push_back(o.scenario);
    } else {
        std::string known;
        for (const auto& [name, fn] : table) known += " " + name;
        throw parse_error("unknown scenario '" + o.scenario + "'; known:" + known);
    }

    bool ok = true;
    Output out(o.out_path);
    std::ostream& os = out.stream();
    os << "scenario,quantity,closed_form,oracle,abs_diff,tolerance,status\n";
    for (const auto& name : names) {
        for (const auto& c : table.at(name)()) {
            const bool pass = c.diff() <= o.tolerance;
            ok = ok && pass;
            os << name << ',' << c.quantity << ',' << num(c.library) << ',' << num(c.oracle) << ',' << num(c.diff())
               << ',' << num(o.tolerance) << ',' << (pass ? "pass" : "FAIL") << '\n';
        }
    }
    std::cerr << (ok ? "verification passed" : "verification FAILED") << '\n';
    return ok ? exit_ok : exit_verification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact reductions of bosonic states supported on finitely many Gaussian branches"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--spec", o.spec_path, "JSON spec file");
        sub->add_option("--out", o.out_path, "write CSV output to this file");
        sub->add_flag("--bits", o.bits, "report entropies in bits instead of nats");
        sub->add_option("--tolerance", o.tolerance, "verification tolerance");
        sub->add_option("--threads", o.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
        sub->add_option("--pseudo-inverse", o.pseudo_inverse,
                        "drop Gram eigen-directions below this cutoff instead of rejecting the manifold");
    };

    auto* overlap = app.add_subcommand("overlap", "overlap of two branches");
    auto* gram = app.add_subcommand("gram", "Gram matrix of the branch list");
    auto* reduce = app.add_subcommand("reduce", "effective density matrix of the mixture");
    auto* entropy = app.add_subcommand("entropy", "von Neumann (and optionally Renyi) entropy of the mixture");
    auto* nongauss = app.add_subcommand("nongauss", "relative-entropy non-Gaussianity of a two-branch mixture");
    auto* negativity = app.add_subcommand("negativity", "negativity of a two-branch Bell-like encoding");
    auto* sweep_ng = app.add_subcommand("sweep-nongauss", "delta_nG over (kappa, alpha)");
    auto* sweep_neg = app.add_subcommand("sweep-negativity", "negativity over (alpha, r)");
    auto* verify = app.add_subcommand("verify", "compare closed forms with the number-basis oracle");
    for (auto* sub : {overlap, gram, reduce, entropy, nongauss, negativity, sweep_ng, sweep_neg, verify})
        add_common(sub);

    entropy->add_option("--alpha", o.renyi, "Renyi order");
    nongauss->add_option("--kappa", o.kappa, "amplitude ratio (overrides the spec file)");
    nongauss->add_option("--p", o.p, "dephasing weight (overrides the spec file)");
    negativity->add_option("--phi", o.phi, "relative phase (overrides the spec file)");
    negativity->add_option("--p", o.p, "dephasing weight (overrides the spec file)");

    sweep_ng->add_option("--kappa", o.kappas, "amplitude ratios")->delimiter(',');
    sweep_ng->add_option("--p", o.p, "dephasing weight (default 0.1)");
    sweep_ng->add_option("--alpha-min", o.alpha_min);
    sweep_ng->add_option("--alpha-max", o.alpha_max);
    sweep_ng->add_option("--alpha-step", o.alpha_step);
    sweep_ng->add_option("--r", o.r, "squeezing of both branches");
    sweep_ng->add_option("--theta", o.theta, "squeezing angle of both branches");

    sweep_neg->add_option("--phi", o.phi, "relative phase")->required();
    sweep_neg->add_option("--p", o.p, "dephasing weight (default 0)");
    sweep_neg->add_option("--alpha-min", o.neg_alpha_min);
    sweep_neg->add_option("--alpha-max", o.neg_alpha_max);
    sweep_neg->add_option("--alpha-step", o.neg_alpha_step);
    sweep_neg->add_option("--r-min", o.r_min);
    sweep_neg->add_option("--r-max", o.r_max);
    sweep_neg->add_option("--r-step", o.r_step);
    sweep_neg->add_option("--theta1", o.theta1, "squeezing angle of the +alpha branch");
    sweep_neg->add_option("--theta2", o.theta2, "squeezing angle of the -alpha branch (r < 0 adds pi/2)");

    verify->add_option("--scenario", o.scenario, "scenario name or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_parse;
    }

    try {
        if (*overlap) return cmd_overlap(o);
        if (*gram) return cmd_gram(o);
        if (*reduce) return cmd_reduce(o);
        if (*entropy) return cmd_entropy(o);
        if (*nongauss) return cmd_nongauss(o);
        if (*negativity) return cmd_negativity(o);
        if (*sweep_ng) return cmd_sweep_nongauss(o);
        if (*sweep_neg) return cmd_sweep_negativity(o);
        if (*verify) return cmd_verify(o);
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_parse;
    } catch (const bs::near_dependence& e) {
        std::cerr << "near-dependent branches: " << e.what() << '\n';
        return exit_near_dependence;
    } catch (const bs::error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return exit_unphysical;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_internal;
}
