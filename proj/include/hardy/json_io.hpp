#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hardy/born.hpp"
#include "hardy/lhv.hpp"
#include "hardy/multiparty.hpp"
#include "hardy/schmidt.hpp"
#include "hardy/state.hpp"

namespace hardy {

/// All emitted documents use insertion-ordered keys so that equal inputs
/// produce byte-identical output. Indices in documents (parties, pairs,
/// strategies, constraints) are 1-based; the in-memory API is 0-based.
using Json = nlohmann::ordered_json;

/// Canonical dump: two-space indent, trailing newline.
std::string dump_json(const Json& doc);

Json state_json(const MultipartiteState& state);

Json schmidt_json(const SchmidtDecomposition& sd, const Bipartition& cut);
Json classify_json(const EligibilityClass& cls, const SchmidtDecomposition& sd);
Json report_json(const HardyReport& report);
Json counts_json(const OutcomeCounts& counts);

Json scan_json(const ScanResult& scan);
void scan_csv(const ScanResult& scan, std::ostream& out);

Json scenario_json(const Scenario& scenario);
Scenario scenario_from_json(const Json& doc);

/// Events referencing settings by label and outcomes by eigenvalue.
Json event_json(const Scenario& scenario, const JointEvent& event);
JointEvent event_from_json(const Scenario& scenario, const Json& doc);

Json certificate_json(const ContradictionCertificate& cert);
ContradictionCertificate certificate_from_json(const Json& doc);

Json feasibility_json(const LhvFeasibilityResult& result);
LhvFeasibilityResult feasibility_from_json(const Json& doc);

/// Dispatches on the document's "kind" field ("contradiction-certificate"
/// or "lhv-feasibility") and re-checks it. Returns the verification verdict
/// document; throws std::runtime_error on unknown or malformed documents.
Json verify_certificate_document(const Json& doc);

}  // namespace hardy
