#pragma once

#include <string>

#include "json.hpp"

#include "phasecov/attainability.hpp"
#include "phasecov/channel.hpp"
#include "phasecov/dynamics.hpp"
#include "phasecov/families.hpp"
#include "phasecov/kernels.hpp"
#include "phasecov/named_function.hpp"
#include "phasecov/rational.hpp"
#include "phasecov/verdict.hpp"

namespace phasecov {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "phasecov/1";

// Readers throw ValidationError naming the offending field path.

Json to_json(const PhaseCovChannel& ch);
PhaseCovChannel channel_from_json(const Json& j, const std::string& path = "channel");

Json to_json(const Verdict& v);
Json to_json(const ClassMembership& m);

Json to_json(const RationalLaplace& f);
RationalLaplace rational_from_json(const Json& j, const std::string& path = "rational");

/// A single term object {"kind": ..., "c": ..., "rate"|"omega": ...} or an
/// array of them.
Json to_json(const NamedFunction& f);
NamedFunction named_function_from_json(const Json& j, const std::string& path = "f");

Json to_json(const FamilySpec& spec);
FamilySpec family_spec_from_json(const Json& j, const std::string& path = "family");

/// A time function given as a number, a named function, or dense samples
/// {"samples": {"t": [...], "value": [...]}}.
TimeFunction time_function_from_json(const Json& j, const std::string& path);

Json to_json(const KernelSpec& k);
KernelSpec kernel_spec_from_json(const Json& j, const std::string& path = "kernel");

Json to_json(const PropertyTimeline& timeline, bool include_verdicts);
Json to_json(const DivisibilityReport& report, bool include_verdicts = false);
Json to_json(const CMReport& report);
Json to_json(const AdmissibilityReport& report);

} // namespace phasecov
