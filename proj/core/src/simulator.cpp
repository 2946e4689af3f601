#include "consensus/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>

namespace consensus {

namespace {

void validate(const SimConfig& cfg) {
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InvalidInput("dt must be positive and finite");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw InvalidInput("t_end must be positive and finite");
    if (cfg.stride == 0) throw InvalidInput("recording stride must be positive");
    if (cfg.t_end / cfg.dt > kMaxSteps) throw InvalidInput("t_end / dt exceeds 1e7 steps");
}

struct RawRun {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    bool diverged = false;
};

// Classical RK4 on x' = f(x). Divergence is checked per block of `block` entries.
template<typename Deriv>
RawRun integrate(Deriv&& deriv, std::vector<double> x, const SimConfig& cfg, std::size_t block) {
    validate(cfg);
    const std::size_t dim = x.size();
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    const std::size_t n_steps = std::max<std::size_t>(steps, 1);
    const double h = cfg.t_end / static_cast<double>(n_steps);

    auto too_large = [&](const std::vector<double>& v) {
        for (std::size_t b = 0; b < dim; b += block) {
            double s = 0.0;
            for (std::size_t k = b; k < b + block; ++k) s += v[k] * v[k];
            if (!(std::sqrt(s) <= kDivergenceNorm)) return true;
        }
        return false;
    };

    RawRun run;
    run.times.push_back(0.0);
    run.states.push_back(x);

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    for (std::size_t step = 1; step <= n_steps; ++step) {
        deriv(x, k1);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        deriv(tmp, k2);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        deriv(tmp, k3);
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + h * k3[i];
        deriv(tmp, k4);
        for (std::size_t i = 0; i < dim; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        const bool blown = too_large(x);
        if (blown || step % cfg.stride == 0 || step == n_steps) {
            run.times.push_back(static_cast<double>(step) * h);
            run.states.push_back(x);
        }
        if (blown) {
            // Keep every emitted state finite.
            bool finite = true;
            for (double v : x) finite = finite && std::isfinite(v);
            if (!finite) {
                run.times.pop_back();
                run.states.pop_back();
            }
            run.diverged = true;
            break;
        }
    }
    return run;
}

RawRun integrate_linear(const Matrix& m, std::vector<double> x, const SimConfig& cfg, std::size_t block) {
    const std::size_t dim = x.size();
    auto deriv = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < dim; ++j) acc += m(i, j) * in[j];
            out[i] = acc;
        }
    };
    return integrate(deriv, std::move(x), cfg, block);
}

// x_i' = A x_i + c Gamma sum_{j != i} l_ij (x_j - x_i). Equal to the stacked form for zero row sums,
// and keeps agents with equal states exactly equal.
RawRun integrate_network(const SystemSpec& s, std::vector<double> x, const SimConfig& cfg) {
    const std::size_t m = s.agents();
    const std::size_t n = s.state_dim();
    const Matrix& a = s.a();
    const Matrix cg = s.c() * s.gamma();
    const Matrix& l = s.coupling().matrix();
    std::vector<double> diff(n);
    auto deriv = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t i = 0; i < m; ++i) {
            const double* xi = &in[i * n];
            std::fill(diff.begin(), diff.end(), 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                if (j == i || l(i, j) == 0.0) continue;
                const double* xj = &in[j * n];
                for (std::size_t k = 0; k < n; ++k) diff[k] += l(i, j) * (xj[k] - xi[k]);
            }
            for (std::size_t r = 0; r < n; ++r) {
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) acc += a(r, k) * xi[k] + cg(r, k) * diff[k];
                out[i * n + r] = acc;
            }
        }
    };
    return integrate(deriv, std::move(x), cfg, n);
}

std::vector<double> flatten(const Matrix& blocks) { return {blocks.data().begin(), blocks.data().end()}; }

Matrix stacked_system(const Matrix& a, const Matrix& gamma, double c, const Matrix& coupling) {
    const Matrix eye = Matrix::identity(coupling.rows());
    return kron(eye, a) + c * kron(coupling, gamma);
}

void fnv_mix(std::uint64_t& h, const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

void fnv_mix_matrix(std::uint64_t& h, const Matrix& m) {
    const std::uint64_t shape[2] = {m.rows(), m.cols()};
    fnv_mix(h, shape, sizeof(shape));
    fnv_mix(h, m.data().data(), m.data().size() * sizeof(double));
}

}  // namespace

std::string digest_of(std::initializer_list<std::reference_wrapper<const Matrix>> matrices,
                      std::initializer_list<double> scalars) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const Matrix& m : matrices) fnv_mix_matrix(h, m);
    for (double v : scalars) fnv_mix(h, &v, sizeof(v));
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string system_digest(const SystemSpec& s) {
    return digest_of({s.a(), s.gamma(), s.coupling().matrix()}, {s.c()});
}

Matrix random_initial_states(std::size_t agents, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Matrix x(agents, dim);
    for (auto& v : x.data()) {
        // Top 53 bits -> [0, 1), independent of the standard library's distribution implementation.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = 2.0 * u - 1.0;
    }
    return x;
}

Trajectory simulate_full(const SystemSpec& s, const Matrix& x0, const SimConfig& cfg) {
    if (x0.rows() != s.agents() || x0.cols() != s.state_dim()) {
        throw InvalidInput("initial state must be " + std::to_string(s.agents()) + "x" +
                           std::to_string(s.state_dim()) + ", got " + x0.shape_string());
    }
    RawRun run = integrate_network(s, flatten(x0), cfg);
    Trajectory t;
    t.kind = TrajectoryKind::full;
    t.blocks = s.agents();
    t.dim = s.state_dim();
    t.times = std::move(run.times);
    t.states = std::move(run.states);
    t.diverged = run.diverged;
    t.digest = system_digest(s);
    return t;
}

Trajectory simulate_reduced(const SystemSpec& s, const Matrix& y0, const SimConfig& cfg) {
    if (y0.rows() + 1 != s.agents() || y0.cols() != s.state_dim()) {
        throw InvalidInput("reduced initial state must be " + std::to_string(s.agents() - 1) + "x" +
                           std::to_string(s.state_dim()) + ", got " + y0.shape_string());
    }
    const Matrix m = stacked_system(s.a(), s.gamma(), s.c(), reduced_coupling(s.coupling()));
    RawRun run = integrate_linear(m, flatten(y0), cfg, s.state_dim());
    Trajectory t;
    t.kind = TrajectoryKind::reduced;
    t.blocks = s.agents() - 1;
    t.dim = s.state_dim();
    t.times = std::move(run.times);
    t.states = std::move(run.states);
    t.diverged = run.diverged;
    t.digest = system_digest(s);
    return t;
}

ComplexTrajectory simulate_modal(const Matrix& a, const Matrix& gamma, double c, Complex lambda,
                                 std::span<const Complex> z0, const SimConfig& cfg) {
    const std::size_t n = a.rows();
    if (!a.is_square() || gamma.rows() != n || gamma.cols() != n || z0.size() != n) {
        throw InvalidInput("modal simulation: A, Gamma must be n x n and z0 of length n");
    }
    const ComplexMatrix mode = modal_matrix(a, gamma, c, lambda);
    Matrix split(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            split(i, j) = mode(i, j).real();
            split(i, n + j) = -mode(i, j).imag();
            split(n + i, j) = mode(i, j).imag();
            split(n + i, n + j) = mode(i, j).real();
        }
    }
    std::vector<double> x(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = z0[i].real();
        x[n + i] = z0[i].imag();
    }
    RawRun run = integrate_linear(split, std::move(x), cfg, 2 * n);

    ComplexTrajectory t;
    t.kind = TrajectoryKind::modal;
    t.blocks = 1;
    t.dim = n;
    t.times = std::move(run.times);
    t.diverged = run.diverged;
    t.states.reserve(run.states.size());
    for (const auto& st : run.states) {
        std::vector<Complex> z(n);
        for (std::size_t i = 0; i < n; ++i) z[i] = Complex{st[i], st[n + i]};
        t.states.push_back(std::move(z));
    }
    return t;
}

std::vector<double> disagreement(const Trajectory& traj) {
    const bool with_reference = traj.kind == TrajectoryKind::reduced;
    if (traj.kind == TrajectoryKind::modal) throw InvalidInput("disagreement is undefined for a single modal state");
    if (traj.blocks + (with_reference ? 1 : 0) < 2) throw InvalidInput("disagreement needs at least 2 agents");

    std::vector<double> out;
    out.reserve(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.blocks; ++i) {
            const auto xi = traj.block(k, i);
            if (with_reference) {
                double s = 0.0;
                for (double v : xi) s += v * v;
                worst = std::max(worst, std::sqrt(s));
            }
            for (std::size_t j = i + 1; j < traj.blocks; ++j) {
                const auto xj = traj.block(k, j);
                double s = 0.0;
                for (std::size_t p = 0; p < traj.dim; ++p) s += (xi[p] - xj[p]) * (xi[p] - xj[p]);
                worst = std::max(worst, std::sqrt(s));
            }
        }
        out.push_back(worst);
    }
    return out;
}

double decay_rate_estimate(std::span<const double> times, std::span<const double> series, double window) {
    if (times.size() != series.size()) throw InvalidInput("times and series lengths differ");
    if (!(window > 0.0 && window <= 1.0)) throw InvalidInput("window must be in (0, 1]");
    const std::size_t n = series.size();
    const auto take = static_cast<std::size_t>(std::ceil(window * static_cast<double>(n)));
    const std::size_t start = n - std::min(take, n);

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    std::size_t count = 0;
    for (std::size_t i = start; i < n; ++i) {
        const double v = series[i];
        if (!(v >= 1e-14) || !std::isfinite(v)) continue;
        const double ly = std::log(v);
        st += times[i];
        sy += ly;
        stt += times[i] * times[i];
        sty += times[i] * ly;
        ++count;
    }
    if (count < 10) throw InvalidInput("decay rate needs at least 10 usable points, got " + std::to_string(count));
    const double cn = static_cast<double>(count);
    const double denom = cn * stt - st * st;
    if (!(denom > 0.0)) throw InvalidInput("decay rate fit needs distinct sample times");
    return (cn * sty - st * sy) / denom;
}

std::vector<double> lyapunov_trace(const Trajectory& reduced, const Matrix& q, const Matrix& p) {
    if (reduced.kind != TrajectoryKind::reduced) throw InvalidInput("lyapunov_trace needs a reduced trajectory");
    if (q.rows() != reduced.blocks || q.cols() != reduced.blocks || p.rows() != reduced.dim ||
        p.cols() != reduced.dim) {
        throw InvalidInput("Q must be (m-1)x(m-1) and P n x n for this trajectory");
    }
    std::vector<double> out;
    out.reserve(reduced.size());
    std::vector<double> py(reduced.dim);
    for (std::size_t k = 0; k < reduced.size(); ++k) {
        double v = 0.0;
        for (std::size_t j = 0; j < reduced.blocks; ++j) {
            const auto yj = reduced.block(k, j);
            for (std::size_t r = 0; r < reduced.dim; ++r) {
                double acc = 0.0;
                for (std::size_t s = 0; s < reduced.dim; ++s) acc += p(r, s) * yj[s];
                py[r] = acc;
            }
            for (std::size_t i = 0; i < reduced.blocks; ++i) {
                if (q(i, j) == 0.0) continue;
                const auto yi = reduced.block(k, i);
                double dot = 0.0;
                for (std::size_t r = 0; r < reduced.dim; ++r) dot += yi[r] * py[r];
                v += q(i, j) * dot;
            }
        }
        out.push_back(v);
    }
    return out;
}

ConsensusTime consensus_reached(const Trajectory& traj, double tol) {
    if (!(tol > 0.0)) throw InvalidInput("consensus tolerance must be positive");
    const auto d = disagreement(traj);
    if (d.empty() || !(d.back() < tol)) return {};
    std::size_t first = d.size() - 1;
    while (first > 0 && d[first - 1] < tol) --first;
    return {true, traj.times[first]};
}

}  // namespace consensus
