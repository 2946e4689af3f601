#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "consensus/coupling.hpp"
#include "consensus/linalg.hpp"
#include "consensus/spectral.hpp"

namespace consensus {

/// Output-injection coupling through measured outputs: Gamma = F * C.
struct ObserverCoupling {
    Matrix f;  ///< n x q gain
    Matrix c;  ///< q x n output map
};

/**
 * A linearly coupled network dx_i/dt = A x_i + c * sum_j l_ij * Gamma * x_j.
 * For the observer variant Gamma is the product F * C and the factors are kept.
 */
class SystemSpec {
public:
    /// Throws InvalidInput on shape mismatch or a negative / non-finite coupling strength.
    SystemSpec(Matrix a, Matrix gamma, double c, CouplingMatrix l);

    static SystemSpec with_observer(Matrix a, Matrix f, Matrix c_out, double c, CouplingMatrix l);

    [[nodiscard]] const Matrix& a() const noexcept { return a_; }
    [[nodiscard]] const Matrix& gamma() const noexcept { return gamma_; }
    [[nodiscard]] double c() const noexcept { return c_; }
    [[nodiscard]] const CouplingMatrix& coupling() const noexcept { return l_; }
    [[nodiscard]] const std::optional<ObserverCoupling>& observer() const noexcept { return observer_; }
    [[nodiscard]] std::size_t state_dim() const noexcept { return a_.rows(); }
    [[nodiscard]] std::size_t agents() const noexcept { return l_.agents(); }

    [[nodiscard]] SystemSpec with_strength(double c) const;
    [[nodiscard]] SystemSpec with_coupling(CouplingMatrix l) const;

private:
    Matrix a_;
    Matrix gamma_;
    double c_;
    CouplingMatrix l_;
    std::optional<ObserverCoupling> observer_;
};

enum class Criterion { theorem1, theorem2, theorem2_simplified, corollary1, corollary2, theorem3 };

std::string_view to_string(Criterion c);

struct ModeResult {
    Complex lambda;
    /// Worst real part (modal criteria) or largest eigenvalue of the tested Hermitian form.
    double value = 0.0;
};

/// Verdict of one consensus criterion. verdict implies margin > 0.
struct ConsensusCertificate {
    Criterion criterion = Criterion::theorem1;
    bool verdict = false;
    double margin = 0.0;
    std::vector<ModeResult> per_mode;
    std::optional<Matrix> p;
    std::optional<Matrix> q;
    std::map<std::string, double> parameters;
    std::vector<std::string> notes;
};

/// A + c * lambda * Gamma.
ComplexMatrix modal_matrix(const Matrix& a, const Matrix& gamma, double c, Complex lambda);

/// One modal matrix per eigenvalue of L*, in canonical spectrum order.
std::vector<ComplexMatrix> modal_matrices(const SystemSpec& s);

/// Every modal matrix Hurwitz with the given margin. Certificate margin is -max_k max Re eig.
ConsensusCertificate check_theorem1(const SystemSpec& s, double margin = 0.0);

/// Single P, single epsilon: sym(P (A + c lambda_k Gamma)) < -epsilon I for every k.
ConsensusCertificate check_theorem2(const SystemSpec& s, const Matrix& p, double epsilon);

/// P A + A^T P + c Re(lambda2) P Gamma < -epsilon I; requires P Gamma symmetric positive definite.
ConsensusCertificate check_theorem2_simplified(const SystemSpec& s, const Matrix& p, double epsilon);

/// Observer-coupled modal Hurwitz check (Gamma = F C); tagged corollary1.
ConsensusCertificate check_observer(const SystemSpec& s, double margin = 0.0);

/// Observer-coupled Lyapunov check (Gamma = F C); tagged corollary2.
ConsensusCertificate check_observer(const SystemSpec& s, const Matrix& p, double epsilon);

struct ObserverDesign {
    Matrix p;
    Matrix f;
    /// Largest eigenvalue of sym(P A + A^T P - C^T C); below -epsilon on success.
    double inequality_max_eig = 0.0;
    /// 1 / |Re lambda2| when a lambda2 with negative real part was supplied.
    std::optional<double> c_min;
    std::string method;
    int candidates_tried = 0;
};

/**
 * Finds P > 0 with P A + A^T P - C^T C < -epsilon I and returns F = P^{-1} C^T.
 *
 * Candidates, at most 20, each validated a posteriori, in this order:
 *  - Hurwitz A: Lyapunov solves P A + A^T P = -(epsilon I + I + beta C^T C), beta in {0, 0.5, 1};
 *  - P = S^{-1} from the filter Riccati equation A S + S A^T - S C^T C S + I = 0,
 *    for which P A + A^T P - C^T C = -P^2;
 *  - stabilizing P of (-A)^T P + P (-A) - g P^2 + C^T C - epsilon' I = 0 over a grid of g,
 *    for which P A + A^T P - C^T C = -epsilon' I - g P^2;
 *  - the filter Riccati equation again with weights q I over a grid of q.
 *
 * Throws InfeasibleDesign when no candidate validates.
 */
ObserverDesign design_observer_gain(const Matrix& a, const Matrix& c_out, double epsilon,
                                    std::optional<Complex> lambda2 = std::nullopt);

/// Best-effort common Lyapunov matrix for check_theorem2. Absence is not a proof of infeasibility.
std::optional<Matrix> find_common_P(const SystemSpec& s, double epsilon);

struct Theorem3Constants {
    Matrix q;                   ///< solves Q L* + L*^T Q = -I
    double c1 = 0.0;            ///< max_{k,j} mu_k * nu_j
    double c2 = 0.0;            ///< gamma_2 * theta_n
    double c_min = 0.0;         ///< c > c_min implies c * c2 + c1 < 0
    std::vector<double> mu;     ///< eig(Q), descending
    std::vector<double> nu;     ///< eig(sym(P A)), descending
    std::vector<double> gamma;  ///< eig(sym(Q L*)), descending
    std::vector<double> theta;  ///< eig(P Gamma), descending
};

Theorem3Constants theorem3_constants(const Matrix& a, const Matrix& gamma, const Matrix& p, const CouplingMatrix& l);

/// Verdict iff c * c2 + c1 < 0; margin = -(c * c2 + c1).
ConsensusCertificate check_theorem3(const Matrix& a, const Matrix& gamma, const Matrix& p, const CouplingMatrix& l,
                                    double c);

}  // namespace consensus
