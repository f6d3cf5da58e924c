#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "offmorse/inverse_flow.hpp"
#include "offmorse/morse_verifier.hpp"

namespace offmorse {

nlohmann::json to_json(const RegularValueCertificate& cert);
nlohmann::json to_json(const CriticalPointRecord& record);
nlohmann::json to_json(const std::vector<CriticalPointRecord>& records);
nlohmann::json to_json(const VerificationReport& report);

/// Object keys are sorted, so identical reports serialise byte-identically.
std::string dump_report(const VerificationReport& report);
std::string render_text(const VerificationReport& report);

std::string critical_csv(const std::vector<CriticalPointRecord>& records);
std::string profile_csv(const BettiProfile& profile);
/// vertex index, coordinates, phi.
std::string trajectory_csv(const Trajectory& trajectory);

}  // namespace offmorse
