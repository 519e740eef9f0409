#include "partpower/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "partpower/errors.hpp"
#include "partpower/learner.hpp"
#include "partpower/math_kernel.hpp"

namespace partpower {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

int draw_categorical(std::span<const double> probs, std::mt19937_64& rng) {
    const double u = uniform_open(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    // Rounding left u above the final cumulative sum; take the last positive entry.
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) return static_cast<int>(i);
    }
    return 0;
}

struct TruncationMoments {
    double mean;
    double sd;
};

TruncationMoments truncated_moments(double mean, double sd, double lo, double hi) {
    const double a = (lo - mean) / sd;
    const double b = (hi - mean) / sd;
    // Mass computed on whichever side keeps the tail accurate.
    const double z = a > 0.0 ? normal_cdf(-a) - normal_cdf(-b) : normal_cdf(b) - normal_cdf(a);
    const double pa = normal_pdf(a);
    const double pb = normal_pdf(b);
    const double shift = (pa - pb) / z;
    const double var = sd * sd * (1.0 + (a * pa - b * pb) / z - shift * shift);
    return {mean + sd * shift, std::sqrt(std::max(var, 0.0))};
}

double draw_outcome(const CellLaw& law, std::mt19937_64& rng) {
    const double u = uniform_open(rng);
    if (law.family == OutcomeFamily::Bernoulli) {
        return u < law.p ? 1.0 : 0.0;
    }
    if (!law.truncation) {
        return law.mean + law.sd * normal_quantile(u);
    }
    const double a = (law.truncation->lo - law.mean) / law.sd;
    const double b = (law.truncation->hi - law.mean) / law.sd;
    double x;
    if (a > 0.0) {
        // Upper-tail interval: invert on the reflected side.
        const double lo = normal_cdf(-b);
        const double hi = normal_cdf(-a);
        x = -normal_quantile(std::clamp(lo + u * (hi - lo), 1e-300, 1.0 - 1e-16));
    } else {
        const double lo = normal_cdf(a);
        const double hi = normal_cdf(b);
        x = normal_quantile(std::clamp(lo + u * (hi - lo), 1e-300, 1.0 - 1e-16));
    }
    return std::clamp(law.mean + law.sd * x, law.truncation->lo, law.truncation->hi);
}

double leaf_center(int leaf, int leaves) { return (static_cast<double>(leaf) + 0.5) / static_cast<double>(leaves); }

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Per-cell truth used by the indicators: exact law moments (known mode) or
// test-set plug-ins (learned mode).
struct CellTruth {
    int arms = 0;
    int leaves = 0;
    std::vector<double> mean;  // arm-major
    std::vector<double> sd;

    std::size_t at(int arm, int leaf) const { return static_cast<std::size_t>((arm - 1) * leaves + leaf); }
};

struct EventTally {
    std::int64_t points = 0;
    std::int64_t joint_mean = 0;
    std::int64_t best_arm = 0;
    std::int64_t cate = 0;
    std::int64_t violations = 0;
};

// Evaluates the events for leaf `leaf`, gathering per-arm vectors.
PointEvents leaf_events(const EstimatorTable& table, const CellTruth& truth, int leaf, double epsilon,
                        bool standardized) {
    const int k = table.arms();
    std::vector<double> estimate(k), mean(k), scale(k, 1.0);
    for (int w = 1; w <= k; ++w) {
        const auto m = table.mean(w, leaf);
        if (!m) {
            std::ostringstream msg;
            msg << "empty honest cell (arm " << w << ", leaf " << leaf << ")";
            throw EstimationError(msg.str(), w, leaf);
        }
        estimate[w - 1] = *m;
        mean[w - 1] = truth.mean[truth.at(w, leaf)];
        if (standardized) scale[w - 1] = truth.sd[truth.at(w, leaf)];
    }
    return evaluate_point(estimate, mean, scale, epsilon);
}

bool violates_implication(const PointEvents& e) { return e.joint_mean && !(e.best_arm && e.cate); }

void fill_uniform(ReplicateRecord& rec, const EstimatorTable& table, const CellTruth& truth, double epsilon,
                  bool standardized) {
    bool joint = true, best = true, cate = true;
    for (int l = 0; l < table.leaves(); ++l) {
        const PointEvents e = leaf_events(table, truth, l, epsilon, standardized);
        joint = joint && e.joint_mean;
        best = best && e.best_arm;
        cate = cate && e.cate;
    }
    rec.joint_mean_uniform = joint ? 1.0 : 0.0;
    rec.best_arm_uniform = best ? 1.0 : 0.0;
    rec.cate_uniform = cate ? 1.0 : 0.0;
    if (joint && !(best && cate)) rec.implication_violations += 1;
}

void fill_cell_stats(ReplicateRecord& rec, const EstimatorTable& table, const std::vector<double>& sds) {
    rec.leaf_count = table.leaves();
    rec.min_cell_size = check_min_cell(table, 0).min_count;
    rec.max_cell_sd = sds.empty() ? 0.0 : *std::max_element(sds.begin(), sds.end());
    rec.median_cell_sd = median(sds);
}

void finish_points(ReplicateRecord& rec, const EventTally& t) {
    const double n = static_cast<double>(t.points);
    rec.joint_mean = static_cast<double>(t.joint_mean) / n;
    rec.best_arm = static_cast<double>(t.best_arm) / n;
    rec.cate = static_cast<double>(t.cate) / n;
    rec.implication_violations += t.violations;
}

void tally_point(EventTally& t, const PointEvents& e) {
    t.points += 1;
    t.joint_mean += e.joint_mean;
    t.best_arm += e.best_arm;
    t.cate += e.cate;
    t.violations += violates_implication(e);
}

ReplicateRecord run_known(const SimulationPlan& plan, int index, std::mt19937_64& rng) {
    const DgpSpec& dgp = plan.dgp;
    const std::int64_t n_cell = required_cell_size(plan.planning).min_cell_size;
    const Partition partition = make_interval_partition(dgp.leaves, dgp.feature_count());

    CellTruth truth{dgp.arms, dgp.leaves, {}, {}};
    for (int w = 1; w <= dgp.arms; ++w) {
        for (int l = 0; l < dgp.leaves; ++l) {
            truth.mean.push_back(dgp.cell(w, l).true_mean());
            truth.sd.push_back(dgp.cell(w, l).true_sd());
        }
    }

    // Honest sample: exactly n_cell rows in every cell, drawn cell by cell.
    Dataset honest(dgp.feature_count(), DataRole::Honest);
    honest.reserve(static_cast<std::size_t>(n_cell) * dgp.arms * dgp.leaves);
    std::vector<double> x(dgp.feature_count(), 0.0);
    for (int w = 1; w <= dgp.arms; ++w) {
        for (int l = 0; l < dgp.leaves; ++l) {
            x[0] = leaf_center(l, dgp.leaves);
            for (std::int64_t i = 0; i < n_cell; ++i) {
                honest.add_row(x, w, draw_outcome(dgp.cell(w, l), rng));
            }
        }
    }
    const EstimatorTable table = fit_honest_means(partition, honest, dgp.arms);

    ReplicateRecord rec;
    rec.replicate = index;
    const double eps = plan.planning.epsilon;
    EventTally tally;
    for (int j = 0; j < plan.test_points; ++j) {
        const int leaf = draw_categorical(dgp.leaf_probs, rng);
        x[0] = leaf_center(leaf, dgp.leaves);
        tally_point(tally, leaf_events(table, truth, partition.assign_leaf(x), eps, plan.standardized));
    }
    finish_points(rec, tally);
    fill_uniform(rec, table, truth, eps, plan.standardized);
    fill_cell_stats(rec, table, truth.sd);
    return rec;
}

ReplicateRecord run_learned(const SimulationPlan& plan, int index, std::mt19937_64& rng) {
    const DgpSpec& dgp = plan.dgp;
    const CellRequirement req = required_cell_size(plan.planning);
    const std::int64_t n_total = req.total_experiment_size;
    const auto n_honest = static_cast<std::int64_t>(std::llround(static_cast<double>(n_total) * plan.planning.honest_fraction));

    // Draw the experiment, then split it at random into train and honest halves.
    const Dataset all = draw_dataset(dgp, n_total, rng, DataRole::Unspecified);
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    const std::size_t n_train = all.size() - static_cast<std::size_t>(n_honest);
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    Dataset train(all.width(), DataRole::Train);
    Dataset honest(all.width(), DataRole::Honest);
    for (std::size_t k = 0; k < order.size(); ++k) {
        Dataset& dst = k < n_train ? train : honest;
        dst.add_row(all.row(order[k]), all.arm(order[k]), all.outcome(order[k]));
    }

    LearnerConfig config;
    config.max_leaves = static_cast<int>(plan.planning.leaves);
    config.max_depth = plan.max_depth;
    config.min_cell_size = req.min_cell_size;
    config.candidate_quantiles = plan.candidate_quantiles;
    const Partition partition = learn_tree(train, honest, dgp.arms, config);
    const EstimatorTable table = fit_honest_means(partition, honest, dgp.arms);

    // Truth proxies from a fresh test draw.
    const std::int64_t n_test = static_cast<std::int64_t>(dgp.arms) * plan.planning.leaves * plan.test_rows_per_unit;
    const Dataset test = draw_dataset(dgp, n_test, rng, DataRole::Test);
    const int leaves = partition.leaf_count();
    CellTruth truth{dgp.arms, leaves, std::vector<double>(static_cast<std::size_t>(dgp.arms * leaves), 0.0),
                    std::vector<double>(static_cast<std::size_t>(dgp.arms * leaves), 0.0)};
    std::vector<std::int64_t> counts(truth.mean.size(), 0);
    std::vector<int> test_leaf(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        test_leaf[i] = partition.assign_leaf(test.row(i));
        const std::size_t c = truth.at(test.arm(i), test_leaf[i]);
        counts[c] += 1;
        truth.mean[c] += test.outcome(i);
    }
    ReplicateRecord rec;
    rec.replicate = index;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            const int arm = static_cast<int>(c) / leaves + 1;
            const int leaf = static_cast<int>(c) % leaves;
            throw EstimationError("empty test cell; increase the test set size", arm, leaf);
        }
        truth.mean[c] /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < test.size(); ++i) {
        const std::size_t c = truth.at(test.arm(i), test_leaf[i]);
        const double d = test.outcome(i) - truth.mean[c];
        truth.sd[c] += d * d;
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        truth.sd[c] = std::sqrt(truth.sd[c] / static_cast<double>(counts[c]));
        if (plan.standardized && !(truth.sd[c] > 0.0)) {
            throw ConfigError("test-set standard deviation is zero in a cell; standardized coverage is undefined");
        }
        rec.max_proxy_se = std::max(rec.max_proxy_se, truth.sd[c] / std::sqrt(static_cast<double>(counts[c])));
    }

    const double eps = plan.planning.epsilon;
    EventTally tally;
    for (std::size_t i = 0; i < test.size(); ++i) {
        tally_point(tally, leaf_events(table, truth, test_leaf[i], eps, plan.standardized));
    }
    finish_points(rec, tally);
    fill_uniform(rec, table, truth, eps, plan.standardized);
    fill_cell_stats(rec, table, truth.sd);
    return rec;
}

void check_probs(const std::vector<double>& probs, std::size_t size, bool strictly_positive, const char* what) {
    if (probs.size() != size) {
        std::ostringstream msg;
        msg << what << " must have " << size << " entries, got " << probs.size();
        throw ConfigError(msg.str());
    }
    double total = 0.0;
    for (double p : probs) {
        if (!(strictly_positive ? p > 0.0 : p >= 0.0) || p > 1.0) {
            std::ostringstream msg;
            msg << what << " entries must lie in " << (strictly_positive ? "(0, 1]" : "[0, 1]");
            throw ConfigError(msg.str());
        }
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << what << " must sum to 1, got " << total;
        throw ConfigError(msg.str());
    }
}

}  // namespace

CellLaw CellLaw::bernoulli(double p) { return CellLaw{OutcomeFamily::Bernoulli, p, 0.0, 0.0, std::nullopt}; }

CellLaw CellLaw::gaussian(double mean, double sd) { return CellLaw{OutcomeFamily::Gaussian, 0.0, mean, sd, std::nullopt}; }

CellLaw CellLaw::truncated_gaussian(double mean, double sd, double lo, double hi) {
    return CellLaw{OutcomeFamily::Gaussian, 0.0, mean, sd, OutcomeBounds{lo, hi}};
}

double CellLaw::true_mean() const {
    if (family == OutcomeFamily::Bernoulli) return p;
    if (!truncation) return mean;
    return truncated_moments(mean, sd, truncation->lo, truncation->hi).mean;
}

double CellLaw::true_sd() const {
    if (family == OutcomeFamily::Bernoulli) return std::sqrt(p * (1.0 - p));
    if (!truncation) return sd;
    return truncated_moments(mean, sd, truncation->lo, truncation->hi).sd;
}

void validate(const SimulationPlan& plan) {
    const DgpSpec& dgp = plan.dgp;
    if (dgp.arms < 1 || dgp.leaves < 1) throw ConfigError("DGP needs at least one arm and one leaf");
    if (dgp.noise_features < 0) throw ConfigError("noise feature count must be nonnegative");
    check_probs(dgp.leaf_probs, static_cast<std::size_t>(dgp.leaves), true, "leaf probabilities");
    check_probs(dgp.arm_probs, static_cast<std::size_t>(dgp.arms), false, "arm probabilities");
    if (dgp.cells.size() != static_cast<std::size_t>(dgp.arms * dgp.leaves)) {
        throw ConfigError("DGP needs one outcome law per (arm, leaf) cell");
    }
    for (const CellLaw& law : dgp.cells) {
        if (law.family == OutcomeFamily::Bernoulli) {
            if (!(law.p >= 0.0 && law.p <= 1.0)) throw ConfigError("Bernoulli p must lie in [0, 1]");
        } else {
            if (!(law.sd >= 0.0) || !std::isfinite(law.mean)) throw ConfigError("Gaussian cell needs sd >= 0");
            if (law.truncation) {
                if (!(law.truncation->lo < law.truncation->hi) || !(law.sd > 0.0)) {
                    throw ConfigError("truncated Gaussian needs lo < hi and sd > 0");
                }
            }
        }
    }
    validate(plan.planning);
    if (plan.planning.arms != dgp.arms) throw ConfigError("planning arms differ from DGP arms");
    if (plan.replicates < 1) throw ConfigError("replicates must be at least 1");
    if (plan.test_points < 1) throw ConfigError("test points per replicate must be at least 1");
    if (plan.mode == PartitionMode::Known) {
        if (plan.planning.leaves != dgp.leaves) throw ConfigError("known-partition mode needs planning leaves = DGP leaves");
        if (plan.standardized) {
            for (const CellLaw& law : dgp.cells) {
                if (!(law.true_sd() > 0.0)) {
                    throw ConfigError("standardized mode needs a positive true standard deviation in every cell");
                }
            }
        }
    } else {
        if (plan.test_rows_per_unit < 1) throw ConfigError("test rows per unit must be at least 1");
        if (plan.max_depth < 1 || plan.candidate_quantiles < 1) throw ConfigError("learner depth and candidates must be positive");
    }
}

PointEvents evaluate_point(std::span<const double> estimate, std::span<const double> truth,
                           std::span<const double> scale, double epsilon) {
    const std::size_t k = estimate.size();
    if (truth.size() != k || scale.size() != k || k == 0) {
        throw ShapeError("evaluate_point needs equally sized, nonempty per-arm vectors");
    }
    PointEvents e;
    e.joint_mean = true;
    double max_scale = scale[0];
    double best_estimate = estimate[0];
    double best_truth = truth[0];
    for (std::size_t w = 0; w < k; ++w) {
        if (!(std::fabs(estimate[w] - truth[w]) < epsilon * scale[w])) e.joint_mean = false;
        max_scale = std::max(max_scale, scale[w]);
        best_estimate = std::max(best_estimate, estimate[w]);
        best_truth = std::max(best_truth, truth[w]);
    }
    e.best_arm = std::fabs(best_estimate - best_truth) < epsilon * max_scale;
    e.cate = true;
    for (std::size_t w = 0; w < k && e.cate; ++w) {
        for (std::size_t v = 0; v < k; ++v) {
            if (v == w) continue;
            const double tau_estimate = estimate[w] - estimate[v];
            const double tau_truth = truth[w] - truth[v];
            if (!(std::fabs(tau_estimate - tau_truth) < epsilon * (scale[w] + scale[v]))) {
                e.cate = false;
                break;
            }
        }
    }
    return e;
}

std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t replicate_index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ replicate_index));
}

Dataset draw_dataset(const DgpSpec& dgp, std::int64_t rows, std::mt19937_64& rng, DataRole role) {
    Dataset data(dgp.feature_count(), role);
    data.reserve(static_cast<std::size_t>(rows));
    std::vector<double> x(dgp.feature_count());
    for (std::int64_t i = 0; i < rows; ++i) {
        const int leaf = draw_categorical(dgp.leaf_probs, rng);
        const int arm = draw_categorical(dgp.arm_probs, rng) + 1;
        x[0] = (static_cast<double>(leaf) + uniform_open(rng)) / static_cast<double>(dgp.leaves);
        for (std::size_t f = 1; f < x.size(); ++f) x[f] = uniform_open(rng);
        data.add_row(x, arm, draw_outcome(dgp.cell(arm, leaf), rng));
    }
    return data;
}

ReplicateRecord run_replicate(const SimulationPlan& plan, int replicate_index) {
    validate(plan);
    if (replicate_index < 0) throw ConfigError("replicate index must be nonnegative");
    std::mt19937_64 rng = replicate_rng(plan.seed, static_cast<std::uint64_t>(replicate_index));
    return plan.mode == PartitionMode::Known ? run_known(plan, replicate_index, rng)
                                             : run_learned(plan, replicate_index, rng);
}

CoverageSummary summarize(const std::vector<ReplicateRecord>& records) {
    CoverageSummary s;
    s.replicates = static_cast<int>(records.size());
    if (records.empty()) return s;
    s.min_cell_size = records.front().min_cell_size;
    for (const ReplicateRecord& r : records) {
        s.joint_mean += r.joint_mean;
        s.best_arm += r.best_arm;
        s.cate += r.cate;
        s.joint_mean_uniform += r.joint_mean_uniform;
        s.best_arm_uniform += r.best_arm_uniform;
        s.cate_uniform += r.cate_uniform;
        s.implication_violations += r.implication_violations;
        s.mean_leaf_count += r.leaf_count;
        s.min_cell_size = std::min(s.min_cell_size, r.min_cell_size);
    }
    const double n = static_cast<double>(records.size());
    s.joint_mean /= n;
    s.best_arm /= n;
    s.cate /= n;
    s.joint_mean_uniform /= n;
    s.best_arm_uniform /= n;
    s.cate_uniform /= n;
    s.mean_leaf_count /= n;
    return s;
}

CoverageReport run_simulation(const SimulationPlan& plan, unsigned threads) {
    validate(plan);
    const int total = plan.replicates;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(total));

    std::vector<ReplicateRecord> records(static_cast<std::size_t>(total));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(total));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
            try {
                records[static_cast<std::size_t>(i)] = run_replicate(plan, i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    for (int i = 0; i < total; ++i) {
        if (!errors[static_cast<std::size_t>(i)]) continue;
        try {
            std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
        } catch (const ConfigError& e) {
            throw ConfigError("replicate " + std::to_string(i) + ": " + e.what());
        } catch (const std::exception& e) {
            throw ReplicateError(i, e.what());
        }
    }
    CoverageReport report;
    report.summary = summarize(records);
    report.replicates = std::move(records);
    return report;
}

SimulationPlan make_preset(const std::string& name, std::uint64_t seed) {
    SimulationPlan plan;
    plan.seed = seed;
    if (name == "known-bernoulli") {
        DgpSpec dgp;
        dgp.arms = 2;
        dgp.leaves = 5;
        dgp.leaf_probs.assign(5, 0.2);
        dgp.arm_probs = {0.5, 0.5};
        // Cell probabilities drawn once per seed, on a stream no replicate uses.
        std::mt19937_64 rng = replicate_rng(seed, ~std::uint64_t{0});
        for (int c = 0; c < 10; ++c) dgp.cells.push_back(CellLaw::bernoulli(0.3 + 0.4 * uniform_open(rng)));
        plan.dgp = dgp;
        plan.planning.arms = 2;
        plan.planning.leaves = 5;
        plan.planning.alpha = 0.1;
        plan.planning.epsilon = 0.1;
        plan.planning.bounds = OutcomeBounds{0.0, 1.0};
        plan.planning.method = Method::hoeffding();
        plan.planning.scope = GuaranteeScope::RandomPoint;
        plan.replicates = 200;
        plan.test_points = 200;
        plan.mode = PartitionMode::Known;
        return plan;
    }
    if (name == "paper-desk" || name == "paper-full") {
        DgpSpec dgp;
        dgp.arms = 2;
        dgp.leaves = 5;
        dgp.leaf_probs.assign(5, 0.2);
        dgp.arm_probs = {0.5, 0.5};
        dgp.noise_features = 2;
        // Visit rates per leaf; the better arm changes across leaves.
        const double control[] = {0.30, 0.45, 0.50, 0.55, 0.70};
        const double treated[] = {0.50, 0.40, 0.60, 0.45, 0.60};
        for (double p : control) dgp.cells.push_back(CellLaw::bernoulli(p));
        for (double p : treated) dgp.cells.push_back(CellLaw::bernoulli(p));
        plan.dgp = dgp;
        plan.planning.arms = 2;
        plan.planning.leaves = 5;
        plan.planning.alpha = 0.1;
        plan.planning.epsilon = 1.0 / 25.0;
        plan.planning.sigma_sq = 1.0;
        plan.planning.method = Method::clt();
        plan.planning.scope = GuaranteeScope::RandomPoint;
        plan.planning.honest_fraction = 0.5;
        plan.replicates = name == "paper-desk" ? 50 : 500;
        plan.mode = PartitionMode::Learned;
        plan.standardized = true;
        plan.test_rows_per_unit = 20'000;
        return plan;
    }
    throw ConfigError("unknown preset '" + name + "' (expected known-bernoulli, paper-desk, paper-full)");
}

}  // namespace partpower
