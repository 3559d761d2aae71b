#include "ctsum/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "ctsum/error.hpp"

namespace ctsum {

namespace {

constexpr int kRepairAttempts = 3;

double squared_distance(const Vector& a, const Vector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

// Greedy k-means++: each new centre is the best of 2 + ln(k) D^2-weighted
// candidates, judged by the resulting potential.
std::vector<Vector> plus_plus_seeds(std::span<const Vector> points, int k, std::mt19937_64& rng) {
    const int trials = 2 + static_cast<int>(std::log(static_cast<double>(k)));
    std::vector<Vector> centers;
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    centers.push_back(points[pick(rng)]);
    std::vector<double> dist(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) dist[i] = squared_distance(points[i], centers.back());

    auto sample = [&](double total) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng);
        std::size_t chosen = points.size() - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            acc += dist[i];
            if (dist[i] > 0.0 && acc >= target) {
                chosen = i;
                break;
            }
        }
        while (dist[chosen] <= 0.0 && chosen > 0) --chosen;
        return chosen;
    };

    while (static_cast<int>(centers.size()) < k) {
        double total = std::accumulate(dist.begin(), dist.end(), 0.0);
        if (total <= 0.0) break;
        std::size_t best = 0;
        double best_potential = std::numeric_limits<double>::infinity();
        std::vector<double> best_dist;
        for (int t = 0; t < trials; ++t) {
            std::size_t cand = sample(total);
            std::vector<double> d(points.size());
            double potential = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                d[i] = std::min(dist[i], squared_distance(points[i], points[cand]));
                potential += d[i];
            }
            if (potential < best_potential) {
                best_potential = potential;
                best = cand;
                best_dist = std::move(d);
            }
        }
        centers.push_back(points[best]);
        dist = std::move(best_dist);
    }
    return centers;
}

int nearest(const Vector& p, const std::vector<Vector>& centers) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        double d = squared_distance(p, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

struct Run {
    std::vector<int> assignments;
    std::vector<Vector> centroids;
    double inertia = std::numeric_limits<double>::infinity();
    bool complete = false;
};

Run lloyd(std::span<const Vector> points, int k, int max_iters, std::mt19937_64& rng) {
    Run run;
    auto centers = plus_plus_seeds(points, k, rng);
    if (static_cast<int>(centers.size()) < k) return run;

    const std::size_t dim = points.front().size();
    std::vector<int> assign(points.size(), -1);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            int c = nearest(points[i], centers);
            if (c != assign[i]) {
                assign[i] = c;
                changed = true;
            }
        }
        std::vector<Vector> sums(static_cast<std::size_t>(k), Vector(dim, 0.0));
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto c = static_cast<std::size_t>(assign[i]);
            ++counts[c];
            for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
        }
        // Empty cluster: move its centre onto the point farthest from its
        // own centre and iterate again.
        bool repaired = false;
        for (int c = 0; c < k; ++c) {
            auto cu = static_cast<std::size_t>(c);
            if (counts[cu] > 0) {
                for (std::size_t d = 0; d < dim; ++d) centers[cu][d] = sums[cu][d] / counts[cu];
                continue;
            }
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                auto own = static_cast<std::size_t>(assign[i]);
                if (counts[own] < 2) continue;
                double d = squared_distance(points[i], centers[own]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far_d < 0.0) continue;
            --counts[static_cast<std::size_t>(assign[far])];
            assign[far] = c;
            counts[cu] = 1;
            centers[cu] = points[far];
            repaired = true;
        }
        if (!changed && !repaired) break;
    }

    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int a : assign) ++counts[static_cast<std::size_t>(a)];
    run.complete = std::all_of(counts.begin(), counts.end(), [](int c) { return c > 0; });
    run.assignments = std::move(assign);
    run.inertia = partition_inertia(points, run.assignments, k);
    return run;
}

// Renumber clusters by smallest member index.
void canonicalize(Run& run, int k) {
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    int next = 0;
    for (int& a : run.assignments) {
        auto& slot = remap[static_cast<std::size_t>(a)];
        if (slot < 0) slot = next++;
        a = slot;
    }
}

}  // namespace

double partition_inertia(std::span<const Vector> points, std::span<const int> assignments, int k) {
    if (points.empty()) return 0.0;
    const std::size_t dim = points.front().size();
    std::vector<Vector> sums(static_cast<std::size_t>(k), Vector(dim, 0.0));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto c = static_cast<std::size_t>(assignments[i]);
        ++counts[c];
        for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
    }
    for (std::size_t c = 0; c < sums.size(); ++c) {
        if (counts[c] == 0) continue;
        for (double& x : sums[c]) x /= counts[c];
    }
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total += squared_distance(points[i], sums[static_cast<std::size_t>(assignments[i])]);
    }
    return total;
}

std::size_t distinct_count(std::span<const Vector> points) {
    std::set<Vector> unique(points.begin(), points.end());
    return unique.size();
}

KMeansResult kmeans(std::span<const Vector> points, const KMeansOptions& options) {
    if (options.k < 2) throw std::invalid_argument("kmeans: k must be >= 2");
    if (points.empty()) throw std::invalid_argument("kmeans: no points");
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) throw DimensionError("kmeans: mixed dimensions");
    }

    KMeansResult result;
    if (distinct_count(points) < static_cast<std::size_t>(options.k)) return result;

    std::mt19937_64 rng(options.seed);
    Run best;
    for (int r = 0; r < std::max(1, options.restarts); ++r) {
        Run run;
        for (int attempt = 0; attempt <= kRepairAttempts && !run.complete; ++attempt) {
            run = lloyd(points, options.k, options.max_iters, rng);
        }
        if (run.complete && run.inertia < best.inertia) best = std::move(run);
    }
    if (!best.complete) return result;

    canonicalize(best, options.k);
    result.divisible = true;
    result.inertia = best.inertia;
    result.assignments = std::move(best.assignments);
    for (int c = 0; c < options.k; ++c) {
        std::vector<int> members;
        for (std::size_t i = 0; i < result.assignments.size(); ++i) {
            if (result.assignments[i] == c) members.push_back(static_cast<int>(i));
        }
        result.centroids.push_back(centroid(points, members));
    }
    return result;
}

}  // namespace ctsum
