#include "consensus/spectral.hpp"

#include <limits>

namespace consensus {

CouplingSpectrum analyze_spectrum(const CouplingMatrix& l) {
    CouplingSpectrum out;
    out.full = eigenvalues(l.matrix());
    out.reduced = eigenvalues(reduced_coupling(l));
    out.lambda2 = out.reduced[0];

    std::vector<Complex> rest(out.full.values());
    std::size_t zero_at = 0;
    for (std::size_t i = 1; i < rest.size(); ++i) {
        if (std::abs(rest[i]) < std::abs(rest[zero_at])) zero_at = i;
    }
    out.zero_eigenvalue = rest[zero_at];
    out.zero_found = std::abs(out.zero_eigenvalue) < kZeroEigenvalueTol;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(zero_at));

    std::vector<bool> used(rest.size(), false);
    double worst = 0.0;
    for (const auto& mu : out.reduced) {
        std::size_t best = rest.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < rest.size(); ++k) {
            if (used[k]) continue;
            const double d = std::abs(rest[k] - mu);
            if (d < best_dist) {
                best_dist = d;
                best = k;
            }
        }
        used[best] = true;
        worst = std::max(worst, best_dist);
    }
    out.correspondence_error = worst;
    out.correspondence_ok = out.zero_found && worst < kCorrespondenceFlag;
    return out;
}

bool connectivity_hint(const CouplingSpectrum& spec, double tol) {
    for (const auto& v : spec.reduced) {
        if (!(v.real() < -tol)) return false;
    }
    return true;
}

}  // namespace consensus
