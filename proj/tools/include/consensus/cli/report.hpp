#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "consensus/consensus.hpp"

namespace consensus::cli {

using json = nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/**
 * Deterministic serialization: keys sorted, two-space indentation, reals as "%.17g"
 * (so every double round-trips bit-exactly), non-finite reals as null.
 */
std::string canonical_dump(const json& j);

/// Shortest form used by canonical_dump for a single real.
std::string format_real(double v);

json to_json(Complex z);
json to_json(const Matrix& m);
json to_json(const ComplexMatrix& m);
json to_json(const Spectrum& s);
json to_json(const CouplingSpectrum& s);
json to_json(const ConsensusCertificate& c);
json to_json(const ObserverDesign& d);

/// CSV with header "t,x_1_1,...,x_m_n"; reduced trajectories are labelled y_2_1,... instead.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

}  // namespace consensus::cli
