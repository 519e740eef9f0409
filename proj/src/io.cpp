#include "partpower/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "partpower/errors.hpp"

namespace partpower::io {

using nlohmann::json;

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), end);
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_real(std::string_view field, std::size_t line, std::string_view column) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw ParseError("column " + std::string(column) + ": '" + std::string(field) + "' is not a finite real", line);
    }
    return value;
}

int parse_arm(std::string_view field, std::size_t line) {
    int value = 0;
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), last, value);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError("column w: '" + std::string(field) + "' is not an integer arm", line);
    }
    return value;
}

std::string read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, std::optional<int> max_arm, DataRole role) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) {
        throw ParseError("empty dataset: missing header", 1);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string_view> header = split_fields(line);
    if (header.size() < 3 || header[header.size() - 2] != "w" || header.back() != "y") {
        throw ParseError("header must be x0,...,x{d-1},w,y", line_no);
    }
    const std::size_t width = header.size() - 2;
    for (std::size_t j = 0; j < width; ++j) {
        if (header[j] != "x" + std::to_string(j)) {
            throw ParseError("header column " + std::to_string(j) + " must be x" + std::to_string(j), line_no);
        }
    }

    Dataset data(width, role);
    std::vector<double> x(width);
    bool saw_blank = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            saw_blank = true;
            continue;
        }
        if (saw_blank) {
            throw ParseError("blank line inside the data", line_no - 1);
        }
        const std::vector<std::string_view> fields = split_fields(line);
        if (fields.size() != width + 2) {
            throw ParseError("expected " + std::to_string(width + 2) + " fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        for (std::size_t j = 0; j < width; ++j) {
            x[j] = parse_real(fields[j], line_no, header[j]);
        }
        const int arm = parse_arm(fields[width], line_no);
        if (arm < 1 || (max_arm && arm > *max_arm)) {
            throw ParseError("arm " + std::to_string(arm) + " outside 1.." +
                                 (max_arm ? std::to_string(*max_arm) : std::string("K")),
                             line_no);
        }
        const double y = parse_real(fields[width + 1], line_no, "y");
        data.add_row(x, arm, y);
    }
    return data;
}

Dataset read_dataset_file(const std::string& path, std::optional<int> max_arm, DataRole role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path + "'", 0);
    }
    return read_dataset_csv(in, max_arm, role);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t j = 0; j < data.width(); ++j) out << 'x' << j << ',';
    out << "w,y\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.row(i)) out << format_double(v) << ',';
        out << data.arm(i) << ',' << format_double(data.outcome(i)) << '\n';
    }
}

namespace {

void write_node(std::ostringstream& out, const Partition& p, int id, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * depth), ' ');
    const std::string inner(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const Partition::Node& node = p.nodes()[static_cast<std::size_t>(id)];
    if (node.is_leaf()) {
        out << "{\n" << inner << "\"leaf\": " << node.leaf << "\n" << pad << "}";
        return;
    }
    out << "{\n";
    out << inner << "\"feature\": " << node.feature << ",\n";
    out << inner << "\"threshold\": " << format_double(node.threshold) << ",\n";
    out << inner << "\"left\": ";
    write_node(out, p, node.left, depth + 1);
    out << ",\n" << inner << "\"right\": ";
    write_node(out, p, node.right, depth + 1);
    out << "\n" << pad << "}";
}

constexpr std::string_view kPartitionFormat = "partpower-partition";

int read_node(const json& j, std::vector<Partition::Node>& nodes, int depth) {
    if (depth > 4096) throw ParseError("partition tree is too deep", 0);
    if (!j.is_object()) throw ParseError("partition node must be an object", 0);
    const int id = static_cast<int>(nodes.size());
    if (j.contains("leaf")) {
        if (j.size() != 1 || !j["leaf"].is_number_integer()) {
            throw ParseError("leaf node must hold exactly an integer `leaf`", 0);
        }
        nodes.push_back(Partition::Node::make_leaf(j["leaf"].get<int>()));
        return id;
    }
    for (const char* key : {"feature", "threshold", "left", "right"}) {
        if (!j.contains(key)) throw ParseError(std::string("internal node missing `") + key + "`", 0);
    }
    if (j.size() != 4 || !j["feature"].is_number_integer() || !j["threshold"].is_number()) {
        throw ParseError("internal node needs integer `feature`, numeric `threshold`, `left`, `right`", 0);
    }
    nodes.emplace_back();
    const int left = read_node(j["left"], nodes, depth + 1);
    const int right = read_node(j["right"], nodes, depth + 1);
    nodes[static_cast<std::size_t>(id)] =
        Partition::Node::make_split(j["feature"].get<int>(), j["threshold"].get<double>(), left, right);
    return id;
}

}  // namespace

std::string partition_to_document(const Partition& partition) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"format\": \"" << kPartitionFormat << "\",\n";
    out << "  \"version\": 1,\n";
    out << "  \"features\": " << partition.feature_count() << ",\n";
    out << "  \"leaves\": " << partition.leaf_count() << ",\n";
    out << "  \"tree\": ";
    write_node(out, partition, 0, 1);
    out << "\n}\n";
    return out.str();
}

Partition partition_from_document(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("partition document: ") + e.what(), 0);
    }
    if (!doc.is_object() || doc.value("format", "") != kPartitionFormat) {
        throw ParseError("not a partition document", 0);
    }
    if (doc.value("version", 0) != 1) throw ParseError("unsupported partition version", 0);
    if (!doc.contains("features") || !doc["features"].is_number_unsigned() || !doc.contains("tree")) {
        throw ParseError("partition document needs `features` and `tree`", 0);
    }
    std::vector<Partition::Node> nodes;
    read_node(doc["tree"], nodes, 0);
    try {
        Partition p(doc["features"].get<std::size_t>(), std::move(nodes));
        if (doc.contains("leaves") && doc["leaves"] != p.leaf_count()) {
            throw ParseError("`leaves` does not match the tree", 0);
        }
        return p;
    } catch (const ConfigError& e) {
        throw ParseError(std::string("invalid partition: ") + e.what(), 0);
    }
}

Partition read_partition_file(const std::string& path) { return partition_from_document(read_all(path)); }

void write_table_csv(std::ostream& out, const EstimatorTable& table) {
    out << "arm,leaf,count,mean\n";
    for (int w = 1; w <= table.arms(); ++w) {
        for (int l = 0; l < table.leaves(); ++l) {
            out << w << ',' << l << ',' << table.count(w, l) << ',';
            if (auto m = table.mean(w, l)) out << format_double(*m);
            out << '\n';
        }
    }
}

namespace {

struct FamilyColumn {
    const char* name;
    double ReplicateRecord::*field;
    double CoverageSummary::*summary;
};

constexpr std::array<FamilyColumn, 6> kFamilies{{
    {"joint_mean", &ReplicateRecord::joint_mean, &CoverageSummary::joint_mean},
    {"best_arm", &ReplicateRecord::best_arm, &CoverageSummary::best_arm},
    {"cate", &ReplicateRecord::cate, &CoverageSummary::cate},
    {"joint_mean_uniform", &ReplicateRecord::joint_mean_uniform, &CoverageSummary::joint_mean_uniform},
    {"best_arm_uniform", &ReplicateRecord::best_arm_uniform, &CoverageSummary::best_arm_uniform},
    {"cate_uniform", &ReplicateRecord::cate_uniform, &CoverageSummary::cate_uniform},
}};

}  // namespace

void write_report_csv(std::ostream& out, const CoverageReport& report) {
    out << "replicate,family,coverage,leaf_count,min_cell_size,max_cell_sd,median_cell_sd,max_proxy_se,"
           "implication_violations\n";
    for (const ReplicateRecord& r : report.replicates) {
        for (const FamilyColumn& f : kFamilies) {
            out << r.replicate << ',' << f.name << ',' << format_double(r.*f.field) << ',' << r.leaf_count << ','
                << r.min_cell_size << ',' << format_double(r.max_cell_sd) << ',' << format_double(r.median_cell_sd)
                << ',' << format_double(r.max_proxy_se) << ',' << r.implication_violations << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const CoverageSummary& summary) {
    out << "family,mean_coverage,replicates\n";
    for (const FamilyColumn& f : kFamilies) {
        out << f.name << ',' << format_double(summary.*f.summary) << ',' << summary.replicates << '\n';
    }
}

void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& curve) {
    out << "confidence,total_n\n";
    for (const CurvePoint& p : curve) {
        out << format_double(p.confidence) << ',' << p.total_experiment_size << '\n';
    }
}

MethodKind parse_method(std::string_view name) {
    if (name == "clt") return MethodKind::Clt;
    if (name == "hoeffding") return MethodKind::Hoeffding;
    if (name == "bennett") return MethodKind::Bennett;
    throw ConfigError("unknown method '" + std::string(name) + "' (expected clt, hoeffding, bennett)");
}

GuaranteeScope parse_scope(std::string_view name) {
    if (name == "random") return GuaranteeScope::RandomPoint;
    if (name == "uniform") return GuaranteeScope::UniformOverLeaves;
    throw ConfigError("unknown scope '" + std::string(name) + "' (expected random, uniform)");
}

CltVariant parse_clt_variant(std::string_view name) {
    if (name == "two-sided") return CltVariant::TwoSidedLemma;
    if (name == "one-sided") return CltVariant::OneSidedProposition;
    throw ConfigError("unknown normal-bound variant '" + std::string(name) + "' (expected two-sided, one-sided)");
}

namespace {

json planning_to_json(const PlanningSpec& s) {
    json j = json::object();
    j["arms"] = s.arms;
    j["leaves"] = s.leaves;
    j["alpha"] = s.alpha;
    j["epsilon"] = s.epsilon;
    j["method"] = std::string(to_string(s.method.kind));
    j["clt_variant"] = std::string(to_string(s.method.clt_variant));
    j["scope"] = std::string(to_string(s.scope));
    if (s.bounds) {
        j["lo"] = s.bounds->lo;
        j["hi"] = s.bounds->hi;
    }
    if (s.sigma_sq) j["sigma_sq"] = *s.sigma_sq;
    j["honest_fraction"] = s.honest_fraction;
    return j;
}

template <typename T>
T required(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("plan document missing `") + key + "`", 0);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("plan document field `") + key + "` has the wrong type", 0);
    }
}

template <typename T>
T optional_field(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(std::string("plan document field `") + key + "` has the wrong type", 0);
    }
}

PlanningSpec planning_from_json(const json& j) {
    PlanningSpec s;
    s.arms = required<std::int64_t>(j, "arms");
    s.leaves = required<std::int64_t>(j, "leaves");
    s.alpha = required<double>(j, "alpha");
    s.epsilon = required<double>(j, "epsilon");
    s.method.kind = parse_method(required<std::string>(j, "method"));
    s.method.clt_variant = parse_clt_variant(optional_field<std::string>(j, "clt_variant", "two-sided"));
    s.scope = parse_scope(optional_field<std::string>(j, "scope", "random"));
    if (j.contains("lo") || j.contains("hi")) s.bounds = OutcomeBounds{required<double>(j, "lo"), required<double>(j, "hi")};
    if (j.contains("sigma_sq")) s.sigma_sq = required<double>(j, "sigma_sq");
    s.honest_fraction = optional_field<double>(j, "honest_fraction", 0.5);
    return s;
}

json cell_to_json(const CellLaw& c) {
    json j = json::object();
    if (c.family == OutcomeFamily::Bernoulli) {
        j["family"] = "bernoulli";
        j["p"] = c.p;
    } else {
        j["family"] = "gaussian";
        j["mean"] = c.mean;
        j["sd"] = c.sd;
        if (c.truncation) {
            j["lo"] = c.truncation->lo;
            j["hi"] = c.truncation->hi;
        }
    }
    return j;
}

CellLaw cell_from_json(const json& j) {
    const std::string family = required<std::string>(j, "family");
    if (family == "bernoulli") return CellLaw::bernoulli(required<double>(j, "p"));
    if (family == "gaussian") {
        if (j.contains("lo") || j.contains("hi")) {
            return CellLaw::truncated_gaussian(required<double>(j, "mean"), required<double>(j, "sd"),
                                               required<double>(j, "lo"), required<double>(j, "hi"));
        }
        return CellLaw::gaussian(required<double>(j, "mean"), required<double>(j, "sd"));
    }
    throw ConfigError("unknown cell family '" + family + "' (expected bernoulli, gaussian)");
}

}  // namespace

std::string plan_to_document(const SimulationPlan& plan) {
    json j = json::object();
    j["mode"] = plan.mode == PartitionMode::Known ? "known" : "learned";
    j["standardized"] = plan.standardized;
    j["replicates"] = plan.replicates;
    j["test_points"] = plan.test_points;
    j["seed"] = plan.seed;
    j["test_rows_per_unit"] = plan.test_rows_per_unit;
    j["max_depth"] = plan.max_depth;
    j["candidate_quantiles"] = plan.candidate_quantiles;
    j["planning"] = planning_to_json(plan.planning);
    json dgp = json::object();
    dgp["arms"] = plan.dgp.arms;
    dgp["leaves"] = plan.dgp.leaves;
    dgp["leaf_probs"] = plan.dgp.leaf_probs;
    dgp["arm_probs"] = plan.dgp.arm_probs;
    dgp["noise_features"] = plan.dgp.noise_features;
    json cells = json::array();
    for (const CellLaw& c : plan.dgp.cells) cells.push_back(cell_to_json(c));
    dgp["cells"] = cells;
    j["dgp"] = dgp;
    return j.dump(2) + "\n";
}

SimulationPlan plan_from_document(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("plan document: ") + e.what(), 0);
    }
    if (!j.is_object()) throw ParseError("plan document must be an object", 0);
    SimulationPlan plan;
    const std::string mode = optional_field<std::string>(j, "mode", "known");
    if (mode == "known") {
        plan.mode = PartitionMode::Known;
    } else if (mode == "learned") {
        plan.mode = PartitionMode::Learned;
    } else {
        throw ParseError("plan mode must be known or learned", 0);
    }
    plan.standardized = optional_field<bool>(j, "standardized", false);
    plan.replicates = required<int>(j, "replicates");
    plan.test_points = optional_field<int>(j, "test_points", plan.test_points);
    plan.seed = optional_field<std::uint64_t>(j, "seed", 0);
    plan.test_rows_per_unit = optional_field<std::int64_t>(j, "test_rows_per_unit", plan.test_rows_per_unit);
    plan.max_depth = optional_field<int>(j, "max_depth", plan.max_depth);
    plan.candidate_quantiles = optional_field<int>(j, "candidate_quantiles", plan.candidate_quantiles);
    plan.planning = planning_from_json(required<json>(j, "planning"));
    const json dgp = required<json>(j, "dgp");
    plan.dgp.arms = required<int>(dgp, "arms");
    plan.dgp.leaves = required<int>(dgp, "leaves");
    plan.dgp.leaf_probs = required<std::vector<double>>(dgp, "leaf_probs");
    plan.dgp.arm_probs = required<std::vector<double>>(dgp, "arm_probs");
    plan.dgp.noise_features = optional_field<int>(dgp, "noise_features", 0);
    for (const json& c : required<json>(dgp, "cells")) plan.dgp.cells.push_back(cell_from_json(c));
    validate(plan);
    return plan;
}

}  // namespace partpower::io
