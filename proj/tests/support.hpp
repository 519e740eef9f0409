#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library's numerics: the normal CDF is a long-double series /
// continued fraction, and sufficient sizes come from bisecting the guarantee
// itself rather than inverting it in closed form.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "partpower/partition.hpp"
#include "partpower/planning.hpp"

namespace oracle {

using ld = long double;

inline constexpr ld kPi = 3.141592653589793238462643383279502884L;

// Lower tail of the standard normal.
inline ld phi_lower(ld z) {
    if (z > 0) return 1.0L - phi_lower(-z);
    const ld a = -z;
    if (a <= 3.0L) {
        // erf Maclaurin series at a / sqrt(2).
        const ld x = a / std::sqrt(2.0L);
        ld term = x;
        ld sum = x;
        for (int n = 1; n < 400; ++n) {
            term *= -x * x / n;
            const ld add = term / (2 * n + 1);
            sum += add;
            if (std::fabs(add) < 1e-30L) break;
        }
        const ld erf = 2.0L / std::sqrt(kPi) * sum;
        return 0.5L * (1.0L - erf);
    }
    // Mills-ratio continued fraction, evaluated backwards.
    ld frac = a;
    for (int k = 300; k >= 1; --k) frac = a + k / frac;
    const ld density = std::exp(-a * a / 2.0L) / std::sqrt(2.0L * kPi);
    return density / frac;
}

inline ld phi(ld z) { return phi_lower(z); }

// Quantile by bisection on the lower tail; the upper half by reflection so
// that the bisection always compares small, accurately represented tails.
inline ld quantile(ld p) {
    if (p > 0.5L) return -quantile(1.0L - p);
    ld lo = -40.0L;
    ld hi = 0.0L;
    for (int i = 0; i < 300; ++i) {
        const ld mid = (lo + hi) / 2.0L;
        if (phi(mid) < p) lo = mid; else hi = mid;
    }
    return (lo + hi) / 2.0L;
}

inline ld bennett_h(ld s) { return (1.0L + s) * std::log1p(s) - s; }

inline ld cells(const partpower::PlanningSpec& s) {
    return s.scope == partpower::GuaranteeScope::RandomPoint ? static_cast<ld>(s.arms)
                                                             : static_cast<ld>(s.arms) * static_cast<ld>(s.leaves);
}

// log of the joint confidence the method certifies with n rows per cell.
inline ld log_confidence(const partpower::PlanningSpec& s, ld n) {
    using partpower::MethodKind;
    const ld eps = s.epsilon;
    ld miss = 0;  // per-cell two-sided miss bound
    switch (s.method.kind) {
        case MethodKind::Clt: {
            const ld t = eps * std::sqrt(n / static_cast<ld>(*s.sigma_sq));
            if (s.method.clt_variant == partpower::CltVariant::OneSidedProposition) {
                return cells(s) * std::log(phi(t));
            }
            miss = 2.0L * phi(-t);
            break;
        }
        case MethodKind::Hoeffding: {
            const ld w = static_cast<ld>(s.bounds->hi) - s.bounds->lo;
            miss = 2.0L * std::exp(-2.0L * n * eps * eps / (w * w));
            break;
        }
        case MethodKind::Bennett: {
            const ld m = std::max(std::fabs(static_cast<ld>(s.bounds->lo)), std::fabs(static_cast<ld>(s.bounds->hi)));
            const ld v = *s.sigma_sq;
            miss = 2.0L * std::exp(-n * v * bennett_h(eps * m / v) / (m * m));
            break;
        }
    }
    if (miss >= 1.0L) return -INFINITY;
    return cells(s) * std::log1p(-miss);
}

inline bool guarantee_holds(const partpower::PlanningSpec& s, ld n) {
    return log_confidence(s, n) >= std::log1p(-static_cast<ld>(s.alpha));
}

// Smallest real n at which the guarantee holds.
inline ld threshold_size(const partpower::PlanningSpec& s) {
    if (guarantee_holds(s, 0.0L)) return 0.0L;
    ld lo = 0.0L;
    ld hi = 1.0L;
    while (!guarantee_holds(s, hi)) {
        lo = hi;
        hi *= 2.0L;
    }
    for (int i = 0; i < 200; ++i) {
        const ld mid = (lo + hi) / 2.0L;
        if (guarantee_holds(s, mid)) hi = mid; else lo = mid;
    }
    return hi;
}

// n meets the sufficient inequality and n - 1 does not, up to a relative
// slack on the threshold.
struct Tightness {
    bool sufficient = false;
    bool tight = false;
};

inline Tightness check_tight(const partpower::PlanningSpec& s, std::int64_t n, ld slack = 1e-12L) {
    const ld t = threshold_size(s);
    const ld allow = slack * std::max<ld>(1.0L, t);
    Tightness r;
    r.sufficient = static_cast<ld>(n) >= t - allow;
    r.tight = n == 1 || static_cast<ld>(n - 1) < t + allow;
    return r;
}

inline bool fits(const partpower::PlanningSpec& s, std::int64_t budget) {
    const std::int64_t per_cell = budget / (s.arms * s.leaves);
    return per_cell >= 1 && check_tight(s, per_cell).sufficient;
}

// Random planning spec valid for the given method.
inline partpower::PlanningSpec random_spec(std::mt19937_64& rng, partpower::Method method, partpower::GuaranteeScope scope) {
    std::uniform_int_distribution<int> arms(1, 8);
    std::uniform_int_distribution<int> leaves(1, 20);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    partpower::PlanningSpec s;
    s.arms = arms(rng);
    s.leaves = leaves(rng);
    s.alpha = 0.01 + 0.29 * u(rng);
    s.method = method;
    s.scope = scope;
    const double lo = -2.0 + 3.0 * u(rng);
    const double width = 0.2 + 3.0 * u(rng);
    s.bounds = partpower::OutcomeBounds{lo, lo + width};
    s.epsilon = width * (0.01 + 0.3 * u(rng));
    s.sigma_sq = width * width / 4.0 * (0.02 + 0.98 * u(rng));
    return s;
}

// Exact variance of a finite law.
inline ld variance(const std::vector<std::pair<ld, ld>>& law) {
    ld mean = 0;
    for (auto [v, p] : law) mean += p * v;
    ld var = 0;
    for (auto [v, p] : law) var += p * (v - mean) * (v - mean);
    return var;
}

// Per-cell mean by explicit group-by.
inline std::map<std::pair<int, int>, std::pair<std::int64_t, double>> group_means(const partpower::Partition& p,
                                                                                const partpower::Dataset& d) {
    std::map<std::pair<int, int>, std::pair<std::int64_t, double>> sums;
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto& [n, total] = sums[{d.arm(i), p.assign_leaf(d.row(i))}];
        n += 1;
        total += d.outcome(i);
    }
    for (auto& [key, value] : sums) value.second /= static_cast<double>(value.first);
    return sums;
}

// Axis-aligned box (lo, hi] per feature for every leaf, by walking the tree.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;
    bool contains(std::span<const double> x) const {
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!(x[j] > lo[j] && x[j] <= hi[j])) return false;
        }
        return true;
    }
};

inline void collect_boxes(const partpower::Partition& p, int node, Box box, std::map<int, Box>& out) {
    const auto& n = p.nodes()[static_cast<std::size_t>(node)];
    if (n.is_leaf()) {
        out[n.leaf] = box;
        return;
    }
    Box left = box;
    Box right = box;
    const auto f = static_cast<std::size_t>(n.feature);
    left.hi[f] = std::min(left.hi[f], n.threshold);
    right.lo[f] = std::max(right.lo[f], n.threshold);
    collect_boxes(p, n.left, left, out);
    collect_boxes(p, n.right, right, out);
}

inline std::map<int, Box> leaf_boxes(const partpower::Partition& p) {
    const std::size_t d = p.feature_count();
    std::map<int, Box> out;
    collect_boxes(p, 0, Box{std::vector<double>(d, -INFINITY), std::vector<double>(d, INFINITY)}, out);
    return out;
}

// Random tree over `features` features with thresholds on a coarse grid so
// that test points can land exactly on them.
inline partpower::Partition random_partition(std::mt19937_64& rng, std::size_t features, int max_depth) {
    using Node = partpower::Partition::Node;
    std::vector<Node> nodes;
    int next_leaf = 0;
    std::uniform_int_distribution<int> feature(0, static_cast<int>(features) - 1);
    std::uniform_int_distribution<int> grid(1, 9);
    std::bernoulli_distribution split(0.6);
    auto grow = [&](auto&& self, int depth) -> int {
        const int id = static_cast<int>(nodes.size());
        if (depth >= max_depth || !split(rng)) {
            nodes.push_back(Node::make_leaf(next_leaf++));
            return id;
        }
        nodes.push_back(Node::make_leaf(-1));
        const int f = feature(rng);
        const double t = grid(rng) / 10.0;
        const int l = self(self, depth + 1);
        const int r = self(self, depth + 1);
        nodes[static_cast<std::size_t>(id)] = Node::make_split(f, t, l, r);
        return id;
    };
    grow(grow, 0);
    return partpower::Partition(features, std::move(nodes));
}

}  // namespace oracle
