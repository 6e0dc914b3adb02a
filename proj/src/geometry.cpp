#include "litiscope/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "litiscope/error.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

std::size_t count_distinct_rows(const Matrix& points) {
    std::vector<std::size_t> order(points.rows());
    std::iota(order.begin(), order.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
        const auto ra = points.row(a), rb = points.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(order.begin(), order.end(), less);
    std::size_t distinct = order.empty() ? 0 : 1;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (less(order[i - 1], order[i])) ++distinct;
    return distinct;
}

namespace {

std::size_t nearest_centroid(std::span<const double> p, const Matrix& centroids, double& best) {
    best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = squared_distance(p, centroids.row(c));
        if (d < best) {
            best = d;
            arg = c;
        }
    }
    return arg;
}

Matrix kmeanspp_seeds(const Matrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.rows();
    Matrix seeds(0, points.cols());
    seeds.append_row(points.row(uniform_index(rng, n)));
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points.row(i), seeds.row(0));
    while (seeds.rows() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        double target = uniform01(rng) * total;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (d2[i] <= 0.0) continue;
            pick = i;
            target -= d2[i];
            if (target < 0.0) break;
        }
        seeds.append_row(points.row(pick));
        const auto chosen = seeds.row(seeds.rows() - 1);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points.row(i), chosen));
    }
    return seeds;
}

} // namespace

ClusterSet kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
    if (k == 0) throw std::invalid_argument("kmeans: k must be at least 1");
    if (k > count_distinct_rows(points))
        throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " exceeds the number of distinct points");

    const std::size_t n = points.rows(), dim = points.cols();
    Rng rng = make_rng(seed, "kmeans");
    ClusterSet cs;
    cs.k = k;
    cs.centroids = kmeanspp_seeds(points, k, rng);
    cs.assignments.assign(n, 0);
    std::vector<double> cost(n);

    auto assign = [&] {
        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cs.assignments[i] = nearest_centroid(points.row(i), cs.centroids, cost[i]);
            objective += cost[i];
        }
        cs.objective_history.push_back(objective);
    };

    auto update = [&] {
        Matrix next(k, dim, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = next.row(cs.assignments[i]);
            const auto p = points.row(i);
            for (std::size_t j = 0; j < dim; ++j) row[j] += p[j];
            ++count[cs.assignments[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            auto row = next.row(c);
            if (count[c] == 0) {
                // Reseed with the point that is currently worst served.
                const auto far = static_cast<std::size_t>(std::max_element(cost.begin(), cost.end()) - cost.begin());
                const auto p = points.row(far);
                std::copy(p.begin(), p.end(), row.begin());
                cost[far] = 0.0;
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) row[j] /= static_cast<double>(count[c]);
        }
        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            movement = std::max(movement, distance(next.row(c), cs.centroids.row(c)));
        cs.centroids = std::move(next);
        return movement;
    };

    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        assign();
        if (update() <= options.tol) break;
    }
    assign();
    update();

    cs.members.assign(k, {});
    for (std::size_t i = 0; i < n; ++i) cs.members[cs.assignments[i]].push_back(i);
    return cs;
}

HullResult hull_distance_detailed(std::span<const double> point, const Matrix& hull,
                                  const HullOptions& options, double cutoff) {
    if (hull.rows() == 0) throw std::invalid_argument("hull_distance: empty hull");
    if (hull.cols() != point.size()) throw std::invalid_argument("hull_distance: dimension mismatch");

    const std::size_t n = hull.rows(), dim = hull.cols();
    // Work in the frame where the query point is the origin.
    auto shifted = [&](std::size_t i, Eigen::Ref<Eigen::VectorXd> out) {
        const auto h = hull.row(i);
        for (std::size_t j = 0; j < dim; ++j) out[static_cast<Eigen::Index>(j)] = h[j] - point[j];
    };

    HullResult result;
    std::vector<std::size_t> active;
    std::vector<double> weight;
    Eigen::VectorXd x(static_cast<Eigen::Index>(dim)), q(static_cast<Eigen::Index>(dim));

    {
        std::size_t start = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double d = squared_distance(hull.row(i), point);
            if (d < best) {
                best = d;
                start = i;
            }
        }
        active.push_back(start);
        weight.push_back(1.0);
        shifted(start, x);
    }

    const double weight_eps = 1e-12;
    auto rebuild_x = [&] {
        x.setZero();
        for (std::size_t a = 0; a < active.size(); ++a) {
            shifted(active[a], q);
            x += weight[a] * q;
        }
    };

    double lower_bound = 0.0;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        result.iterations = iter + 1;
        // Linear minimization oracle over the vertices.
        std::size_t vertex = 0;
        double min_dot = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const auto h = hull.row(i);
            double s = 0.0;
            for (std::size_t j = 0; j < dim; ++j) s += x[static_cast<Eigen::Index>(j)] * (h[j] - point[j]);
            if (s < min_dot) {
                min_dot = s;
                vertex = i;
            }
        }
        const double xx = x.squaredNorm();
        result.gap = xx - min_dot;
        const double norm = std::sqrt(xx);
        if (norm > 0.0) lower_bound = std::max(lower_bound, min_dot / norm);

        const bool in_active = std::find(active.begin(), active.end(), vertex) != active.end();
        if (result.gap <= options.tol || in_active) {
            result.distance = norm <= options.tol ? 0.0 : norm;
            return result;
        }
        if (lower_bound >= cutoff) {
            result.distance = lower_bound;
            result.pruned = true;
            return result;
        }

        active.push_back(vertex);
        weight.push_back(0.0);

        // Minor cycle: move to the affine minimizer of the active set, dropping vertices
        // whose weight would turn negative.
        for (std::size_t minor = 0; minor <= active.size() + 1; ++minor) {
            const auto s = static_cast<Eigen::Index>(active.size());
            Eigen::VectorXd alpha(s);
            if (s == 1) {
                alpha[0] = 1.0;
            } else {
                Eigen::VectorXd base(static_cast<Eigen::Index>(dim));
                shifted(active[0], base);
                Eigen::MatrixXd diff(static_cast<Eigen::Index>(dim), s - 1);
                for (Eigen::Index a = 1; a < s; ++a) {
                    shifted(active[static_cast<std::size_t>(a)], q);
                    diff.col(a - 1) = q - base;
                }
                const Eigen::VectorXd beta = diff.colPivHouseholderQr().solve(-base);
                alpha.tail(s - 1) = beta;
                alpha[0] = 1.0 - beta.sum();
            }

            if ((alpha.array() > weight_eps).all()) {
                for (Eigen::Index a = 0; a < s; ++a) weight[static_cast<std::size_t>(a)] = alpha[a];
                break;
            }
            double theta = 1.0;
            for (Eigen::Index a = 0; a < s; ++a) {
                const double w = weight[static_cast<std::size_t>(a)];
                if (alpha[a] <= weight_eps && w - alpha[a] > 0.0) theta = std::min(theta, w / (w - alpha[a]));
            }
            for (Eigen::Index a = 0; a < s; ++a) {
                auto& w = weight[static_cast<std::size_t>(a)];
                w = theta * alpha[a] + (1.0 - theta) * w;
            }
            // Drop the vertices that reached zero weight.
            std::size_t keep = 0;
            for (std::size_t a = 0; a < active.size(); ++a) {
                if (weight[a] > weight_eps) {
                    active[keep] = active[a];
                    weight[keep] = weight[a];
                    ++keep;
                }
            }
            if (keep == 0) {
                // Numerical breakdown; restart from the newest vertex.
                active.assign(1, vertex);
                weight.assign(1, 1.0);
            } else {
                active.resize(keep);
                weight.resize(keep);
            }
            const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
            for (auto& w : weight) w /= total;
        }
        rebuild_x();
    }
    throw ConvergenceError("hull_distance exceeded " + std::to_string(options.max_iter) + " iterations",
                           result.gap);
}

double hull_distance(std::span<const double> point, const Matrix& hull, const HullOptions& options) {
    return hull_distance_detailed(point, hull, options).distance;
}

double safe_ratio(double numerator, double denominator) {
    if (denominator > 0.0) return numerator / denominator;
    if (numerator > 0.0) return std::numeric_limits<double>::infinity();
    return 1.0;
}

BallCounts ball_counts(std::span<const double> center, double radius, const Matrix& points,
                       const std::vector<bool>& labels) {
    BallCounts counts;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        if (distance(points.row(i), center) <= radius) {
            if (labels[i])
                ++counts.positive;
            else
                ++counts.negative;
        }
    }
    return counts;
}

} // namespace litiscope
