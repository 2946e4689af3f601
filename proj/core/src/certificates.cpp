#include "consensus/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace consensus {

namespace {

void require_positive_definite(const Matrix& p, const char* what) {
    if (!p.is_square()) throw InvalidInput(std::string(what) + " must be square");
    if (!is_positive_definite(p)) throw InvalidInput(std::string(what) + " must be symmetric positive definite");
}

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidInput("epsilon must be positive and finite");
}

double hermitian_max(const ComplexMatrix& h) { return hermitian_eigenvalues(sym_part(h)).front(); }

ConsensusCertificate lyapunov_modal_check(const SystemSpec& s, const Matrix& p, double epsilon, Criterion tag) {
    require_epsilon(epsilon);
    if (p.rows() != s.state_dim()) throw InvalidInput("P must be " + std::to_string(s.state_dim()) + "x" +
                                                      std::to_string(s.state_dim()));
    require_positive_definite(p, "P");

    const CouplingSpectrum spec = analyze_spectrum(s.coupling());
    const ComplexMatrix pc = to_complex(p);
    ConsensusCertificate cert;
    cert.criterion = tag;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& lambda : spec.reduced) {
        const double top = hermitian_max(pc * modal_matrix(s.a(), s.gamma(), s.c(), lambda));
        cert.per_mode.push_back({lambda, top});
        worst = std::max(worst, top);
    }
    cert.verdict = worst < -epsilon;
    cert.margin = -epsilon - worst;
    cert.p = p;
    cert.parameters = {{"c", s.c()}, {"epsilon", epsilon}};
    return cert;
}

ConsensusCertificate modal_hurwitz_check(const SystemSpec& s, double margin, Criterion tag) {
    if (!(margin >= 0.0) || !std::isfinite(margin)) throw InvalidInput("margin must be nonnegative and finite");
    const CouplingSpectrum spec = analyze_spectrum(s.coupling());
    ConsensusCertificate cert;
    cert.criterion = tag;
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& lambda : spec.reduced) {
        const HurwitzCheck h = is_hurwitz(modal_matrix(s.a(), s.gamma(), s.c(), lambda), margin);
        cert.per_mode.push_back({lambda, h.worst_real_part});
        worst = std::max(worst, h.worst_real_part);
    }
    cert.verdict = worst < -margin;
    cert.margin = -worst;
    cert.parameters = {{"c", s.c()}, {"required_margin", margin}};
    if (!connectivity_hint(spec)) cert.notes.emplace_back("L* has an eigenvalue with nonnegative real part");
    return cert;
}

void require_observer(const SystemSpec& s) {
    if (!s.observer()) throw InvalidInput("observer criteria need a system built with F and C");
}

std::optional<Matrix> validated_observer_candidate(const Matrix& a, const Matrix& ctc, const Matrix& p, double epsilon,
                                                   double& max_eig) {
    if (!is_positive_definite(sym_part(p))) return std::nullopt;
    const Matrix ps = sym_part(p);
    const Matrix form = ps * a + a.transpose() * ps - ctc;
    max_eig = symmetric_eigenvalues(sym_part(form)).front();
    if (!(max_eig < -epsilon)) return std::nullopt;
    return ps;
}

}  // namespace

SystemSpec::SystemSpec(Matrix a, Matrix gamma, double c, CouplingMatrix l)
    : a_(std::move(a)), gamma_(std::move(gamma)), c_(c), l_(std::move(l)) {
    if (!a_.is_square() || a_.rows() == 0) throw InvalidInput("A must be a non-empty square matrix");
    if (gamma_.rows() != a_.rows() || gamma_.cols() != a_.cols()) {
        throw InvalidInput("Gamma must be " + a_.shape_string() + ", got " + gamma_.shape_string());
    }
    if (!std::isfinite(c_) || c_ < 0.0) throw InvalidInput("coupling strength c must be finite and nonnegative");
}

SystemSpec SystemSpec::with_observer(Matrix a, Matrix f, Matrix c_out, double c, CouplingMatrix l) {
    if (f.rows() != a.rows() || c_out.cols() != a.cols() || f.cols() != c_out.rows()) {
        throw InvalidInput("observer shapes inconsistent: A " + a.shape_string() + ", F " + f.shape_string() + ", C " +
                           c_out.shape_string() + " (need F n x q, C q x n)");
    }
    SystemSpec s(std::move(a), f * c_out, c, std::move(l));
    s.observer_ = ObserverCoupling{std::move(f), std::move(c_out)};
    return s;
}

SystemSpec SystemSpec::with_strength(double c) const {
    SystemSpec s = *this;
    if (!std::isfinite(c) || c < 0.0) throw InvalidInput("coupling strength c must be finite and nonnegative");
    s.c_ = c;
    return s;
}

SystemSpec SystemSpec::with_coupling(CouplingMatrix l) const {
    SystemSpec s = *this;
    s.l_ = std::move(l);
    return s;
}

std::string_view to_string(Criterion c) {
    switch (c) {
        case Criterion::theorem1: return "theorem1";
        case Criterion::theorem2: return "theorem2";
        case Criterion::theorem2_simplified: return "theorem2-simplified";
        case Criterion::corollary1: return "corollary1";
        case Criterion::corollary2: return "corollary2";
        case Criterion::theorem3: return "theorem3";
    }
    return "unknown";
}

ComplexMatrix modal_matrix(const Matrix& a, const Matrix& gamma, double c, Complex lambda) {
    return to_complex(a) + (c * lambda) * to_complex(gamma);
}

std::vector<ComplexMatrix> modal_matrices(const SystemSpec& s) {
    const CouplingSpectrum spec = analyze_spectrum(s.coupling());
    std::vector<ComplexMatrix> out;
    out.reserve(spec.reduced.size());
    for (const auto& lambda : spec.reduced) out.push_back(modal_matrix(s.a(), s.gamma(), s.c(), lambda));
    return out;
}

ConsensusCertificate check_theorem1(const SystemSpec& s, double margin) {
    return modal_hurwitz_check(s, margin, Criterion::theorem1);
}

ConsensusCertificate check_theorem2(const SystemSpec& s, const Matrix& p, double epsilon) {
    return lyapunov_modal_check(s, p, epsilon, Criterion::theorem2);
}

ConsensusCertificate check_theorem2_simplified(const SystemSpec& s, const Matrix& p, double epsilon) {
    require_epsilon(epsilon);
    if (p.rows() != s.state_dim()) throw InvalidInput("P has the wrong dimension");
    require_positive_definite(p, "P");
    const Matrix pg = p * s.gamma();
    if (max_abs_diff(pg, pg.transpose()) > kStructuralTol * std::max(1.0, max_abs(pg))) {
        throw InvalidInput("P*Gamma must be symmetric for the simplified condition");
    }
    if (!is_positive_definite(sym_part(pg))) {
        throw InvalidInput("P*Gamma must be positive definite for the simplified condition");
    }
    const CouplingSpectrum spec = analyze_spectrum(s.coupling());
    const double re_lambda2 = spec.lambda2.real();
    const Matrix form = p * s.a() + s.a().transpose() * p + (s.c() * re_lambda2) * sym_part(pg);
    const double top = symmetric_eigenvalues(sym_part(form)).front();

    ConsensusCertificate cert;
    cert.criterion = Criterion::theorem2_simplified;
    cert.per_mode.push_back({spec.lambda2, top});
    cert.verdict = top < -epsilon;
    cert.margin = -epsilon - top;
    cert.p = p;
    cert.parameters = {{"c", s.c()}, {"epsilon", epsilon}, {"re_lambda2", re_lambda2}};
    if (!(re_lambda2 < 0.0)) cert.notes.emplace_back("Re(lambda2) is not negative; coupling cannot help");
    return cert;
}

ConsensusCertificate check_observer(const SystemSpec& s, double margin) {
    require_observer(s);
    return modal_hurwitz_check(s, margin, Criterion::corollary1);
}

ConsensusCertificate check_observer(const SystemSpec& s, const Matrix& p, double epsilon) {
    require_observer(s);
    return lyapunov_modal_check(s, p, epsilon, Criterion::corollary2);
}

ObserverDesign design_observer_gain(const Matrix& a, const Matrix& c_out, double epsilon,
                                    std::optional<Complex> lambda2) {
    require_epsilon(epsilon);
    if (!a.is_square() || a.rows() == 0) throw InvalidInput("A must be a non-empty square matrix");
    if (c_out.cols() != a.rows() || c_out.rows() == 0) {
        throw InvalidInput("C must have " + std::to_string(a.rows()) + " columns, got " + c_out.shape_string());
    }
    const std::size_t n = a.rows();
    const Matrix eye = Matrix::identity(n);
    const Matrix ctc = c_out.transpose() * c_out;
    constexpr int kBudget = 20;

    ObserverDesign design;
    auto accept = [&](const Matrix& p, const std::string& method) -> bool {
        ++design.candidates_tried;
        double max_eig = 0.0;
        auto ok = validated_observer_candidate(a, ctc, p, epsilon, max_eig);
        if (!ok) return false;
        design.p = *ok;
        design.inequality_max_eig = max_eig;
        design.method = method;
        return true;
    };

    bool found = false;
    if (is_hurwitz(a).verdict) {
        for (double beta : {0.0, 0.5, 1.0}) {
            try {
                const Matrix w = (epsilon + 1.0) * eye + beta * ctc;
                if (accept(solve_lyapunov(a, w), "lyapunov beta=" + std::to_string(beta))) {
                    found = true;
                    break;
                }
            } catch (const std::runtime_error&) {
                ++design.candidates_tried;
            }
        }
    }
    auto try_filter = [&](double q) {
        try {
            const Matrix s = solve_riccati(a.transpose(), ctc, q * eye);
            if (!is_positive_definite(s)) {
                ++design.candidates_tried;
                return false;
            }
            return accept(inverse(s), "filter-riccati q=" + std::to_string(q));
        } catch (const std::runtime_error&) {
            ++design.candidates_tried;
            return false;
        }
    };
    auto try_direct = [&](double g) {
        try {
            const Matrix p = solve_riccati(-1.0 * a, g * eye, ctc - (1.001 * epsilon) * eye);
            return accept(p, "direct-riccati g=" + std::to_string(g));
        } catch (const std::runtime_error&) {
            ++design.candidates_tried;
            return false;
        }
    };

    if (!found) found = try_filter(1.0);
    for (double g : {1.0, 0.1, 10.0, 0.01, 100.0, 1e-3, 1e3, 1e-4, 1e4}) {
        if (found || design.candidates_tried >= kBudget) break;
        found = try_direct(g);
    }
    for (double q : {10.0, 0.1, 100.0, 0.01, 1e3, 1e-3, 1e4, 1e-4}) {
        if (found || design.candidates_tried >= kBudget) break;
        found = try_filter(q);
    }
    if (!found) {
        throw InfeasibleDesign("no P with P A + A^T P - C^T C < -epsilon I among " +
                               std::to_string(design.candidates_tried) +
                               " candidates; (A, C) may be undetectable or numerically hard");
    }
    design.f = inverse(design.p) * c_out.transpose();
    if (lambda2 && lambda2->real() < 0.0) design.c_min = 1.0 / std::abs(lambda2->real());
    return design;
}

std::optional<Matrix> find_common_P(const SystemSpec& s, double epsilon) {
    require_epsilon(epsilon);
    const CouplingSpectrum spec = analyze_spectrum(s.coupling());
    const std::size_t n = s.state_dim();
    const Matrix eye = Matrix::identity(n);

    std::vector<Matrix> candidates;
    for (const auto& lambda : spec.reduced) {
        const Matrix hermitianized = real_part(modal_matrix(s.a(), s.gamma(), s.c(), lambda));
        try {
            candidates.push_back(solve_lyapunov(hermitianized, eye));
        } catch (const std::runtime_error&) {
        }
    }
    candidates.push_back(eye);

    for (Matrix p : candidates) {
        p = sym_part(p);
        if (!is_positive_definite(p)) continue;
        p = (1.0 / symmetric_eigenvalues(p).back()) * p;
        try {
            if (check_theorem2(s, p, epsilon).verdict) return p;
        } catch (const std::exception&) {
        }
    }
    return std::nullopt;
}

Theorem3Constants theorem3_constants(const Matrix& a, const Matrix& gamma, const Matrix& p,
                                     const CouplingMatrix& l) {
    const std::size_t n = a.rows();
    if (!a.is_square() || gamma.rows() != n || gamma.cols() != n || p.rows() != n || p.cols() != n) {
        throw InvalidInput("A, Gamma, P must all be n x n");
    }
    require_positive_definite(p, "P");
    const Matrix pg = p * gamma;
    if (max_abs_diff(pg, pg.transpose()) > kStructuralTol * std::max(1.0, max_abs(pg)) ||
        !is_positive_definite(sym_part(pg))) {
        throw InvalidInput("P*Gamma must be symmetric positive definite");
    }
    const Matrix reduced = reduced_coupling(l);
    // A zero eigenvalue of L* can come out as -1e-17; require a scaled gap from the axis.
    if (!is_hurwitz(reduced, kStructuralTol * std::max(1.0, max_abs(reduced))).verdict) {
        throw InvalidInput("L* is not Hurwitz; no weight matrix Q exists");
    }

    Theorem3Constants k;
    k.q = solve_lyapunov(reduced, Matrix::identity(reduced.rows()));
    k.mu = symmetric_eigenvalues(k.q);
    k.nu = symmetric_eigenvalues(sym_part(p * a));
    k.gamma = symmetric_eigenvalues(sym_part(k.q * reduced));
    k.theta = symmetric_eigenvalues(sym_part(pg));

    k.c1 = -std::numeric_limits<double>::infinity();
    for (double mu : k.mu)
        for (double nu : k.nu) k.c1 = std::max(k.c1, mu * nu);
    k.c2 = k.gamma.front() * k.theta.back();
    if (!(k.c2 < 0.0)) throw InvalidInput("Theorem-3 constant c2 is not negative");
    k.c_min = k.c1 > 0.0 ? k.c1 / -k.c2 : 0.0;
    return k;
}

ConsensusCertificate check_theorem3(const Matrix& a, const Matrix& gamma, const Matrix& p, const CouplingMatrix& l,
                                    double c) {
    if (!std::isfinite(c) || c < 0.0) throw InvalidInput("coupling strength c must be finite and nonnegative");
    const Theorem3Constants k = theorem3_constants(a, gamma, p, l);
    const double rate = c * k.c2 + k.c1;

    ConsensusCertificate cert;
    cert.criterion = Criterion::theorem3;
    cert.verdict = rate < 0.0;
    cert.margin = -rate;
    cert.p = p;
    cert.q = k.q;
    cert.parameters = {{"c", c}, {"c1", k.c1}, {"c2", k.c2}, {"c_min", k.c_min}};
    cert.notes.emplace_back("decay condition implemented as c*c2 + c1 < 0 (the 'c*c2 < c1' wording is vacuous)");
    return cert;
}

}  // namespace consensus
