#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hyperdeg/classify.hpp"
#include "hyperdeg/planewave.hpp"

namespace hyperdeg {

using Document = nlohmann::ordered_json;

// Bumped on any change to the key layout of the documents below.
inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.3.0";

// Deterministic text form: two-space indentation, keys in insertion order,
// every real number with 17 significant digits (always with a '.' or an
// exponent), non-finite reals as null.
std::string dump(const Document& doc);

// Wraps a command body as {schema_version, tool, command, generated_at, body}.
// Only generated_at varies between identical runs.
Document envelope(std::string_view command, Document body);
// The envelope with generated_at removed, for byte comparisons.
Document strip_timestamp(Document doc);

Document to_json(const Vector& v);
Document to_json(const Box& box);
Document to_json(const std::vector<CatalogEntry>& entries);
Document to_json(const SamplingPlan& plan);
Document to_json(const ClassificationReport& report);
Document to_json(const TheoremVerdict& verdict);
Document to_json(const MixedPartialsReport& report);
// Time series and snapshots are left to the columnar files.
Document to_json(const EvolutionResult& result);
Document to_json(const BlowupConfirmation& confirmation);
Document to_json(const SplitComparison& comparison);

}  // namespace hyperdeg
