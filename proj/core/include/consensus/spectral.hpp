#pragma once

#include "consensus/coupling.hpp"
#include "consensus/linalg.hpp"

namespace consensus {

/// The smallest-modulus eigenvalue of L must be at most this far from zero.
inline constexpr double kZeroEigenvalueTol = 1e-6;
/// Pairing distance above which the L / L* correspondence is flagged in reports.
inline constexpr double kCorrespondenceFlag = 1e-4;

struct CouplingSpectrum {
    Spectrum full;     ///< eig(L), canonical order
    Spectrum reduced;  ///< eig(L*), canonical order
    Complex lambda2;   ///< reduced eigenvalue with the largest real part (the slowest mode)
    Complex zero_eigenvalue;         ///< eig(L) member designated lambda_1
    double correspondence_error = 0; ///< max greedy pairing distance between eig(L) \ {lambda_1} and eig(L*)
    bool zero_found = false;         ///< |lambda_1| < kZeroEigenvalueTol
    bool correspondence_ok = false;  ///< zero_found and correspondence_error < kCorrespondenceFlag
};

/**
 * Spectra of L and L* plus the correspondence report. L's smallest-modulus
 * eigenvalue is removed and the rest paired greedily against eig(L*), visiting
 * eig(L*) in canonical order and taking the nearest unpaired partner each time.
 */
CouplingSpectrum analyze_spectrum(const CouplingMatrix& l);

/// True iff every reduced eigenvalue has real part below -tol (strong connectivity proxy).
bool connectivity_hint(const CouplingSpectrum& spec, double tol = kZeroEigenvalueTol);

}  // namespace consensus
