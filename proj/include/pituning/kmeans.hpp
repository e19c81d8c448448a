#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "pituning/distribution.hpp"
#include "pituning/rng.hpp"

namespace pituning {

struct ClusterResult {
    std::vector<int> assignment;  // one entry per input distribution
    Mat centroids;                // k x N_I
    double inertia{0.0};          // sum of squared distances to assigned centroid
    int iterations{0};
};

/// K-means (Euclidean, k-means++ seeding, Lloyd iterations) over users'
/// intent distributions.
inline ClusterResult cluster_user_preferences(const std::vector<IntentDistribution>& dists,
                                              int k, std::uint64_t seed,
                                              int max_iterations = 200) {
    const int n = static_cast<int>(dists.size());
    if (k < 1) throw ArgumentError("cluster_user_preferences: k must be >= 1");
    if (k > n) throw ArgumentError("cluster_user_preferences: k exceeds the number of users");
    const int dim = dists[0].size();
    Mat points(n, dim);
    for (int i = 0; i < n; ++i) {
        if (dists[static_cast<std::size_t>(i)].size() != dim)
            throw ArgumentError("cluster_user_preferences: inconsistent distribution lengths");
        points.row(i) = dists[static_cast<std::size_t>(i)].probs.transpose();
    }

    Rng rng = make_rng(seed);
    Mat centroids(k, dim);

    // k-means++ seeding
    std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::max());
    centroids.row(0) = points.row(draw_index(rng, n));
    for (int c = 1; c < k; ++c) {
        for (int i = 0; i < n; ++i) {
            double d = (points.row(i) - centroids.row(c - 1)).squaredNorm();
            d2[static_cast<std::size_t>(i)] = std::min(d2[static_cast<std::size_t>(i)], d);
        }
        double total = 0.0;
        for (double v : d2) total += v;
        int pick;
        if (total <= 0.0) {
            pick = draw_index(rng, n);  // all points coincide with chosen centroids
        } else {
            double u = draw_uniform(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (int i = 0; i < n; ++i) {
                acc += d2[static_cast<std::size_t>(i)];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.row(c) = points.row(pick);
    }

    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    double inertia = 0.0;
    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        bool changed = false;
        inertia = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::max();
            for (int c = 0; c < k; ++c) {
                double d = (points.row(i) - centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[static_cast<std::size_t>(i)] != best) {
                assignment[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
            inertia += best_d;
        }
        Mat sums = Mat::Zero(k, dim);
        std::vector<int> counts(static_cast<std::size_t>(k), 0);
        for (int i = 0; i < n; ++i) {
            sums.row(assignment[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
            } else {
                // empty cluster: seize the point farthest from its centroid
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    double d = (points.row(i) -
                                centroids.row(assignment[static_cast<std::size_t>(i)]))
                                   .squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centroids.row(c) = points.row(far);
                assignment[static_cast<std::size_t>(far)] = c;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
    }

    ClusterResult res;
    res.assignment = std::move(assignment);
    res.centroids = std::move(centroids);
    res.inertia = inertia;
    res.iterations = iter;
    return res;
}

}  // namespace pituning
