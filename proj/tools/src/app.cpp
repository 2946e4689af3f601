#include "consensus/cli/app.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include <CLI11.hpp>

#include "consensus/cli/io.hpp"
#include "consensus/cli/report.hpp"

namespace consensus::cli {

namespace {

struct CertifyOptions {
    std::string system;
    std::string criterion;
    std::string p_file;
    bool auto_p = false;
    double c = 0.0;
    bool c_given = false;
    double epsilon = 1e-3;
    double margin = 0.0;
};

struct SimulateOptions {
    std::string system;
    std::string x0_file;
    double dt = 1e-3;
    double t_end = 10.0;
    double tol = 1e-6;
    std::size_t stride = 1;
    double window = 0.5;
    double c = 0.0;
    bool c_given = false;
    std::string out_file;
};

struct DesignOptions {
    std::string a_file;
    std::string c_file;
    std::string l_file;
    double epsilon = 1e-3;
};

json base_report(const char* command, const std::string& digest, std::uint64_t seed) {
    return {
        {"version", kToolVersion},
        {"command", command},
        {"digest", digest},
        {"seed", seed},
        {"spectrum", nullptr},
        {"certificates", json::array()},
        {"simulation", nullptr},
    };
}

ConsensusCertificate no_witness(Criterion criterion, const std::string& note) {
    ConsensusCertificate cert;
    cert.criterion = criterion;
    cert.margin = std::numeric_limits<double>::quiet_NaN();
    cert.notes.push_back(note);
    return cert;
}

// P from --p, or the identity when --auto-p is set (valid whenever Gamma is symmetric positive definite).
Matrix identity_or_file(const CertifyOptions& o, std::size_t n, ConsensusCertificate* note_target) {
    if (!o.p_file.empty()) return read_matrix_file(o.p_file);
    if (note_target) note_target->notes.emplace_back("P = I chosen by --auto-p");
    return Matrix::identity(n);
}

void require_p(const CertifyOptions& o, const char* criterion) {
    if (o.p_file.empty() && !o.auto_p) {
        throw InvalidInput(std::string("criterion ") + criterion + " needs a witness: pass --p FILE or --auto-p");
    }
}

int cmd_spectrum(const std::string& file, std::uint64_t seed, std::ostream& out) {
    const CouplingMatrix l = read_coupling_file(file);
    json report = base_report("spectrum", digest_of({l.matrix()}), seed);
    report["spectrum"] = to_json(analyze_spectrum(l));
    report["reduced_coupling"] = to_json(reduced_coupling(l));
    out << canonical_dump(report);
    return kExitOk;
}

int cmd_certify(const CertifyOptions& o, std::uint64_t seed, std::ostream& out) {
    SystemInput in = read_system_file(o.system);
    if (o.c_given) in.c = o.c;
    const CouplingSpectrum spec = analyze_spectrum(in.l);

    ConsensusCertificate cert;
    json design = nullptr;
    std::string digest;
    if (o.criterion == "c2" && !in.has_coupling_gain()) {
        if (!in.c_out) throw InvalidInput("criterion c2 needs 'C' (and optionally 'F') in the system file");
        digest = digest_of({in.a, *in.c_out, in.l.matrix()}, {in.c});
        try {
            const ObserverDesign d = design_observer_gain(in.a, *in.c_out, o.epsilon, spec.lambda2);
            design = to_json(d);
            const SystemSpec s = SystemSpec::with_observer(in.a, d.f, *in.c_out, in.c, in.l);
            // The designed inequality bounds every mode with c Re(lambda) <= -1 by -epsilon/2.
            cert = check_observer(s, d.p, o.epsilon / 2.0);
            cert.parameters["c_re_lambda2"] = in.c * spec.lambda2.real();
            cert.notes.emplace_back("F = P^-1 C^T designed by " + d.method + "; checked with epsilon/2");
            if (!(in.c * spec.lambda2.real() < -1.0)) {
                cert.notes.emplace_back("c * Re(lambda2) >= -1: the design guarantee does not apply at this c");
            }
        } catch (const InfeasibleDesign& e) {
            cert = no_witness(Criterion::corollary2, e.what());
        }
    } else {
        const SystemSpec s = in.build();
        digest = system_digest(s);
        const auto& c = o.criterion;
        if (c == "t1") {
            cert = check_theorem1(s, o.margin);
        } else if (c == "c1") {
            cert = check_observer(s, o.margin);
        } else if (c == "t2" || c == "c2") {
            require_p(o, c.c_str());
            if (c == "c2" && !s.observer()) throw InvalidInput("criterion c2 with a P witness needs 'F' and 'C'");
            std::optional<Matrix> p;
            if (!o.p_file.empty()) {
                p = read_matrix_file(o.p_file);
            } else {
                p = find_common_P(s, o.epsilon);
            }
            const Criterion tag = c == "t2" ? Criterion::theorem2 : Criterion::corollary2;
            if (!p) {
                cert = no_witness(tag, "no common P found by the candidate search; this is not a proof of infeasibility");
            } else {
                cert = c == "t2" ? check_theorem2(s, *p, o.epsilon) : check_observer(s, *p, o.epsilon);
                if (o.p_file.empty()) cert.notes.emplace_back("P found by --auto-p search");
            }
        } else if (c == "t2s") {
            require_p(o, "t2s");
            ConsensusCertificate scratch;
            const Matrix p = identity_or_file(o, s.state_dim(), &scratch);
            cert = check_theorem2_simplified(s, p, o.epsilon);
            cert.notes.insert(cert.notes.end(), scratch.notes.begin(), scratch.notes.end());
        } else if (c == "t3") {
            require_p(o, "t3");
            ConsensusCertificate scratch;
            const Matrix p = identity_or_file(o, s.state_dim(), &scratch);
            cert = check_theorem3(s.a(), s.gamma(), p, s.coupling(), s.c());
            cert.notes.insert(cert.notes.end(), scratch.notes.begin(), scratch.notes.end());
        } else {
            throw InvalidInput("unknown criterion '" + c + "' (expected t1, t2, t2s, c1, c2, t3)");
        }
    }

    json report = base_report("certify", digest, seed);
    report["spectrum"] = to_json(spec);
    report["certificates"].push_back(to_json(cert));
    if (!design.is_null()) report["design"] = design;
    out << canonical_dump(report);
    return cert.verdict ? kExitOk : kExitNegative;
}

int cmd_simulate(const SimulateOptions& o, std::uint64_t seed, std::ostream& out) {
    SystemInput in = read_system_file(o.system);
    if (o.c_given) in.c = o.c;
    const SystemSpec s = in.build();

    const bool from_file = !o.x0_file.empty();
    const Matrix x0 = from_file ? read_matrix_file(o.x0_file) : random_initial_states(s.agents(), s.state_dim(), seed);
    if (x0.rows() != s.agents() || x0.cols() != s.state_dim()) {
        throw InvalidInput("x0 must be " + std::to_string(s.agents()) + "x" + std::to_string(s.state_dim()) +
                           " (one row per agent), got " + x0.shape_string());
    }
    if (!(o.tol > 0.0)) throw InvalidInput("--tol must be positive");
    if (!(o.window > 0.0 && o.window <= 1.0)) throw InvalidInput("--window must lie in (0, 1]");

    Trajectory t = simulate_full(s, x0, {o.dt, o.t_end, o.stride});
    if (!from_file) t.seed = seed;
    const std::vector<double> d = disagreement(t);
    const ConsensusTime ct = consensus_reached(t, o.tol);
    json rate = nullptr;
    try {
        rate = decay_rate_estimate(t.times, d, o.window);
    } catch (const InvalidInput&) {
        // Too few usable samples (for example identical initial states); reported as null.
    }

    if (!o.out_file.empty()) {
        std::ofstream csv(o.out_file, std::ios::binary);
        if (!csv) throw InvalidInput("cannot write '" + o.out_file + "'");
        write_trajectory_csv(csv, t);
    }

    json report = base_report("simulate", t.digest, seed);
    report["spectrum"] = to_json(analyze_spectrum(s.coupling()));
    report["simulation"] = {
        {"consensus_reached", ct.reached},
        {"consensus_time", ct.time ? json(*ct.time) : json(nullptr)},
        {"decay_rate", rate},
        {"diverged", t.diverged},
        {"initial_disagreement", d.front()},
        {"final_disagreement", d.back()},
        {"final_time", t.times.back()},
        {"samples", t.size()},
        {"dt", o.dt},
        {"t_end", o.t_end},
        {"tol", o.tol},
        {"stride", o.stride},
        {"window", o.window},
        {"x0_source", from_file ? "file" : "seed"},
        {"trajectory_file", o.out_file.empty() ? json(nullptr) : json(o.out_file)},
    };
    out << canonical_dump(report);
    return kExitOk;
}

int cmd_design_observer(const DesignOptions& o, std::uint64_t seed, std::ostream& out) {
    const Matrix a = read_matrix_file(o.a_file);
    const Matrix c_out = read_matrix_file(o.c_file);
    const CouplingMatrix l = read_coupling_file(o.l_file);
    if (!a.is_square() || c_out.cols() != a.rows()) {
        throw InvalidInput("A must be n x n and C must be q x n; got A " + a.shape_string() + ", C " +
                           c_out.shape_string());
    }
    const CouplingSpectrum spec = analyze_spectrum(l);
    json report = base_report("design-observer", digest_of({a, c_out, l.matrix()}, {o.epsilon}), seed);
    report["spectrum"] = to_json(spec);

    ObserverDesign d;
    try {
        d = design_observer_gain(a, c_out, o.epsilon, spec.lambda2);
    } catch (const InfeasibleDesign& e) {
        report["design"] = {{"feasible", false}, {"notes", json::array({e.what()})}, {"epsilon", o.epsilon}};
        out << canonical_dump(report);
        return kExitNegative;
    }
    json design = to_json(d);
    design["feasible"] = true;
    design["epsilon"] = o.epsilon;
    design["notes"] = json::array();
    if (!d.c_min) {
        design["notes"].push_back("Re(lambda2) is not negative; no coupling strength achieves consensus");
        report["design"] = design;
        out << canonical_dump(report);
        return kExitNegative;
    }
    const double c = 1.1 * *d.c_min;
    design["c_used"] = c;
    report["design"] = design;

    const SystemSpec s = SystemSpec::with_observer(a, d.f, c_out, c, l);
    ConsensusCertificate modal = check_observer(s);
    ConsensusCertificate lyap = check_observer(s, d.p, o.epsilon / 2.0);
    lyap.notes.emplace_back("checked with epsilon/2, the slack the design inequality guarantees");
    report["certificates"].push_back(to_json(modal));
    report["certificates"].push_back(to_json(lyap));
    out << canonical_dump(report);
    return modal.verdict ? kExitOk : kExitNegative;
}

std::optional<std::uint64_t> parse_seed_text(const std::string& text, const char* source) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size() || text.front() == '-') {
        throw InvalidInput(std::string(source) + ": '" + text + "' is not an unsigned 64-bit seed");
    }
    return static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value) {
    if (flag) return *flag;
    if (env_value && *env_value) return *parse_seed_text(env_value, kSeedEnvVar);
    return kDefaultSeed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Consensus certificates and simulation for linearly coupled multi-agent systems", "consensus-kit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);

    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Seed for every random draw (overrides $" +
                                                             std::string(kSeedEnvVar) + ")");

    std::string spectrum_file;
    auto* spectrum = app.add_subcommand("spectrum", "Spectra of L and L*, lambda2 and the correspondence error");
    spectrum->add_option("coupling", spectrum_file, "Coupling matrix (JSON) or edge list")->required();

    CertifyOptions co;
    auto* certify = app.add_subcommand("certify", "Evaluate one consensus criterion");
    certify->add_option("system", co.system, "System JSON file")->required();
    certify->add_option("--criterion", co.criterion, "t1, t2, t2s, c1, c2 or t3")
        ->required()
        ->check(CLI::IsMember({"t1", "t2", "t2s", "c1", "c2", "t3"}));
    certify->add_option("--p", co.p_file, "Lyapunov witness P (JSON matrix)");
    certify->add_flag("--auto-p", co.auto_p, "Search for P (t2, c2) or use P = I (t2s, t3)");
    auto* certify_c = certify->add_option("--c", co.c, "Override the coupling strength");
    certify->add_option("--epsilon", co.epsilon, "Strictness of Lyapunov inequalities")->capture_default_str();
    certify->add_option("--margin", co.margin, "Required stability margin for modal criteria")->capture_default_str();

    SimulateOptions so;
    auto* simulate = app.add_subcommand("simulate", "Integrate the coupled system with fixed-step RK4");
    simulate->add_option("system", so.system, "System JSON file")->required();
    simulate->add_option("--x0", so.x0_file, "Initial states, m x n JSON matrix (default: seeded uniform draw)");
    auto* random_seed_opt = simulate->add_option("--random-seed", seed_value, "Same as --seed");
    simulate->add_option("--dt", so.dt, "Step size")->capture_default_str();
    simulate->add_option("--t-end", so.t_end, "Horizon")->capture_default_str();
    simulate->add_option("--tol", so.tol, "Consensus tolerance on disagreement")->capture_default_str();
    simulate->add_option("--stride", so.stride, "Record every stride-th step")->capture_default_str();
    simulate->add_option("--window", so.window, "Tail fraction used for the decay-rate fit")->capture_default_str();
    auto* simulate_c = simulate->add_option("--c", so.c, "Override the coupling strength");
    simulate->add_option("--out", so.out_file, "Trajectory CSV output path");

    DesignOptions dopt;
    auto* design = app.add_subcommand("design-observer", "Design F = P^-1 C^T and report the coupling threshold");
    design->add_option("A", dopt.a_file, "A, n x n JSON matrix")->required();
    design->add_option("C", dopt.c_file, "C, q x n JSON matrix")->required();
    design->add_option("L", dopt.l_file, "Coupling matrix (JSON) or edge list")->required();
    design->add_option("--epsilon", dopt.epsilon, "Strictness of the design inequality")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        std::optional<std::uint64_t> flag;
        if (seed_opt->count() > 0 || random_seed_opt->count() > 0) flag = seed_value;
        const std::uint64_t seed = resolve_seed(flag, std::getenv(kSeedEnvVar));
        co.c_given = certify_c->count() > 0;
        so.c_given = simulate_c->count() > 0;

        if (spectrum->parsed()) return cmd_spectrum(spectrum_file, seed, out);
        if (certify->parsed()) return cmd_certify(co, seed, out);
        if (simulate->parsed()) return cmd_simulate(so, seed, out);
        if (design->parsed()) return cmd_design_observer(dopt, seed, out);
        err << "error: no subcommand\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace consensus::cli
