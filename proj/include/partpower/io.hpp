#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "partpower/partition.hpp"
#include "partpower/planning.hpp"
#include "partpower/simulator.hpp"

namespace partpower::io {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Dataset CSV: header `x0,...,x{d-1},w,y`, '.' decimals, integer arm column.
// Rejects malformed rows, non-finite values and arms outside 1..max_arm (when
// given) with a ParseError carrying the 1-based line number.
Dataset read_dataset_csv(std::istream& in, std::optional<int> max_arm = std::nullopt,
                         DataRole role = DataRole::Unspecified);
Dataset read_dataset_file(const std::string& path, std::optional<int> max_arm = std::nullopt,
                          DataRole role = DataRole::Unspecified);
void write_dataset_csv(std::ostream& out, const Dataset& data);

// Partition document: indented structured text with `feature`, `threshold`,
// `left`, `right` on internal nodes and `leaf` on leaves. Canonical: writing
// a parsed canonical document reproduces it byte for byte.
std::string partition_to_document(const Partition& partition);
Partition partition_from_document(std::string_view text);
Partition read_partition_file(const std::string& path);

// `arm,leaf,count,mean`; mean is empty for cells without rows.
void write_table_csv(std::ostream& out, const EstimatorTable& table);

// One row per (replicate, event family).
void write_report_csv(std::ostream& out, const CoverageReport& report);
// One row per event family with the mean coverage across replicates.
void write_summary_csv(std::ostream& out, const CoverageSummary& summary);

// curve rows `confidence,total_n`.
void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve);

// Simulation plan as a structured document (JSON).
std::string plan_to_document(const SimulationPlan& plan);
SimulationPlan plan_from_document(std::string_view text);

// Parsers for CLI enumerations; throw ConfigError on unknown names.
MethodKind parse_method(std::string_view name);
GuaranteeScope parse_scope(std::string_view name);
CltVariant parse_clt_variant(std::string_view name);

}  // namespace partpower::io
