#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "consensus/certificates.hpp"

namespace consensus {

/// States whose Euclidean norm exceeds this stop the integration with the divergence flag set.
inline constexpr double kDivergenceNorm = 1e12;
inline constexpr double kMaxSteps = 1e7;

/// Fixed-step RK4 settings. The step actually used is t_end / ceil(t_end / dt), so the last step lands on t_end.
struct SimConfig {
    double dt = 1e-3;
    double t_end = 10.0;
    std::size_t stride = 1;  ///< record every stride-th step (the final step is always recorded)
};

enum class TrajectoryKind { full, reduced, modal };

/**
 * Recorded states of a simulation. For `full` the blocks are x_1..x_m; for `reduced`
 * they are y_2..y_m with y_i = x_i - x_1; for `modal` there is a single block z.
 */
template<typename T>
struct BasicTrajectory {
    TrajectoryKind kind = TrajectoryKind::full;
    std::size_t blocks = 0;
    std::size_t dim = 0;
    std::vector<double> times;
    std::vector<std::vector<T>> states;
    bool diverged = false;
    std::string digest;
    std::optional<std::uint64_t> seed;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }

    [[nodiscard]] std::span<const T> block(std::size_t step, std::size_t i) const {
        return std::span<const T>(states[step]).subspan(i * dim, dim);
    }
};

using Trajectory = BasicTrajectory<double>;
using ComplexTrajectory = BasicTrajectory<Complex>;

/// Stable 64-bit FNV-1a digest over shapes and IEEE bytes of the matrices, then the scalars, as 16 hex digits.
std::string digest_of(std::initializer_list<std::reference_wrapper<const Matrix>> matrices,
                      std::initializer_list<double> scalars = {});

/// digest_of({A, Gamma, L}, {c}).
std::string system_digest(const SystemSpec& s);

/// m x n matrix of agent states drawn uniformly from [-1, 1) with a 64-bit Mersenne Twister.
Matrix random_initial_states(std::size_t agents, std::size_t dim, std::uint64_t seed);

/// Integrates the mn-dimensional coupled system; x0 is m x n (row i = agent i).
Trajectory simulate_full(const SystemSpec& s, const Matrix& x0, const SimConfig& cfg);

/// Integrates the (m-1)n-dimensional difference system driven by L*; y0 is (m-1) x n.
Trajectory simulate_reduced(const SystemSpec& s, const Matrix& y0, const SimConfig& cfg);

/// Integrates z' = (A + c lambda Gamma) z through its real 2n-dimensional split.
ComplexTrajectory simulate_modal(const Matrix& a, const Matrix& gamma, double c, Complex lambda,
                                 std::span<const Complex> z0, const SimConfig& cfg);

/// Max pairwise Euclidean distance between agents at each recorded time.
/// Reduced trajectories include the implicit reference agent at the origin.
std::vector<double> disagreement(const Trajectory& traj);

/// Least-squares slope of log(series) over the trailing `window` fraction of samples.
/// Values below 1e-14 are skipped; throws InvalidInput with fewer than 10 usable points.
double decay_rate_estimate(std::span<const double> times, std::span<const double> series, double window = 0.5);

/// V(t) = y^T (Q (x) P) y along a reduced trajectory.
std::vector<double> lyapunov_trace(const Trajectory& reduced, const Matrix& q, const Matrix& p);

struct ConsensusTime {
    bool reached = false;
    std::optional<double> time;
};

/// First recorded time after which disagreement stays below tol.
ConsensusTime consensus_reached(const Trajectory& traj, double tol);

}  // namespace consensus
