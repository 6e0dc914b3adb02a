#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "litiscope/error.hpp"
#include "litiscope/learners.hpp"
#include "litiscope/random.hpp"

namespace litiscope {

namespace {

constexpr double kTau = 1e-12;

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
    return std::exp(-gamma * squared_distance(a, b));
}

/// LRU cache of rows of Q_ij = y_i y_j K(x_i, x_j).
class KernelRows {
public:
    KernelRows(const Matrix& X, const std::vector<double>& y, double gamma, std::size_t cache_mb)
        : X_(X), y_(y), gamma_(gamma), slot_of_(X.rows(), kNone) {
        const std::size_t bytes_per_row = std::max<std::size_t>(1, X.rows()) * sizeof(double);
        std::size_t capacity = (cache_mb << 20) / bytes_per_row;
        capacity = std::clamp<std::size_t>(capacity, 2, std::max<std::size_t>(2, X.rows()));
        slots_.resize(capacity);
        owner_.assign(capacity, kNone);
        last_used_.assign(capacity, 0);
    }

    const double* row(std::size_t i) {
        ++clock_;
        if (slot_of_[i] != kNone) {
            last_used_[slot_of_[i]] = clock_;
            return slots_[slot_of_[i]].data();
        }
        std::size_t slot = 0;
        if (filled_ < slots_.size()) {
            slot = filled_++;
        } else {
            slot = static_cast<std::size_t>(std::min_element(last_used_.begin(), last_used_.end()) - last_used_.begin());
            slot_of_[owner_[slot]] = kNone;
        }
        auto& data = slots_[slot];
        data.resize(X_.rows());
        const auto xi = X_.row(i);
        for (std::size_t j = 0; j < X_.rows(); ++j) data[j] = y_[i] * y_[j] * rbf(xi, X_.row(j), gamma_);
        owner_[slot] = i;
        slot_of_[i] = slot;
        last_used_[slot] = clock_;
        return data.data();
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    const Matrix& X_;
    const std::vector<double>& y_;
    double gamma_;
    std::vector<std::vector<double>> slots_;
    std::vector<std::size_t> owner_;
    std::vector<std::uint64_t> last_used_;
    std::vector<std::size_t> slot_of_;
    std::size_t filled_ = 0;
    std::uint64_t clock_ = 0;
};

void require_both_classes(const std::vector<bool>& y, const char* who) {
    const auto pos = std::count(y.begin(), y.end(), true);
    if (pos == 0 || pos == static_cast<std::ptrdiff_t>(y.size()))
        throw TrainingError(std::string(who) + ": training data holds a single class");
}

double sigmoid_probability(double a, double b, double f) {
    const double fApB = f * a + b;
    if (fApB >= 0.0) return std::exp(-fApB) / (1.0 + std::exp(-fApB));
    return 1.0 / (1.0 + std::exp(fApB));
}

} // namespace

double SvmModel::decision_value(std::span<const double> x) const {
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.rows(); ++i) f += coef[i] * rbf(support_vectors.row(i), x, gamma);
    return f;
}

double SvmModel::probability_from_decision(double f) const {
    return sigmoid_probability(platt_a, platt_b, f);
}

double SvmModel::probability(std::span<const double> x) const {
    return probability_from_decision(decision_value(x));
}

SvmModel fit_svm_dual(const Matrix& X, const std::vector<bool>& labels, const SvmConfig& cfg) {
    require_both_classes(labels, "train_svm");
    if (labels.size() != X.rows()) throw TrainingError("train_svm: label count differs from row count");

    const std::size_t n = X.rows();
    const double C = cfg.C;
    std::vector<double> y(n), alpha(n, 0.0), G(n, -1.0);
    for (std::size_t i = 0; i < n; ++i) y[i] = labels[i] ? 1.0 : -1.0;
    KernelRows Q(X, y, cfg.gamma, cfg.cache_mb);
    // RBF kernel: K(x, x) = 1.
    const double QD = 1.0;

    auto at_upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    std::size_t iter = 0;
    for (; iter < cfg.max_iter; ++iter) {
        // Second-order working set selection.
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0) {
                if (!at_upper(t) && -G[t] >= gmax) {
                    gmax = -G[t];
                    i = t;
                }
            } else if (!at_lower(t) && G[t] >= gmax) {
                gmax = G[t];
                i = t;
            }
        }
        if (i == n) break;
        const double* Qi = Q.row(i);
        double gmax2 = -std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0) {
                if (at_lower(t)) continue;
                const double grad_diff = gmax + G[t];
                gmax2 = std::max(gmax2, G[t]);
                if (grad_diff > 0) {
                    double quad = QD + QD - 2.0 * y[i] * Qi[t];
                    if (quad <= 0) quad = kTau;
                    const double obj = -(grad_diff * grad_diff) / quad;
                    if (obj <= best_obj) {
                        best_obj = obj;
                        j = t;
                    }
                }
            } else {
                if (at_upper(t)) continue;
                const double grad_diff = gmax - G[t];
                gmax2 = std::max(gmax2, -G[t]);
                if (grad_diff > 0) {
                    double quad = QD + QD + 2.0 * y[i] * Qi[t];
                    if (quad <= 0) quad = kTau;
                    const double obj = -(grad_diff * grad_diff) / quad;
                    if (obj <= best_obj) {
                        best_obj = obj;
                        j = t;
                    }
                }
            }
        }
        if (gmax + gmax2 < cfg.tol || j == n) break;

        Qi = Q.row(i);
        const double* Qj = Q.row(j);
        const double old_ai = alpha[i], old_aj = alpha[j];
        double& ai = alpha[i];
        double& aj = alpha[j];
        if (y[i] != y[j]) {
            double quad = QD + QD + 2.0 * Qi[j];
            if (quad <= 0) quad = kTau;
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0) {
                if (aj < 0) {
                    aj = 0;
                    ai = diff;
                }
            } else if (ai < 0) {
                ai = 0;
                aj = -diff;
            }
            if (diff > 0) {
                if (ai > C) {
                    ai = C;
                    aj = C - diff;
                }
            } else if (aj > C) {
                aj = C;
                ai = C + diff;
            }
        } else {
            double quad = QD + QD - 2.0 * Qi[j];
            if (quad <= 0) quad = kTau;
            const double delta = (G[i] - G[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C) {
                if (ai > C) {
                    ai = C;
                    aj = sum - C;
                }
            } else if (aj < 0) {
                aj = 0;
                ai = sum;
            }
            if (sum > C) {
                if (aj > C) {
                    aj = C;
                    ai = sum - C;
                }
            } else if (ai < 0) {
                ai = 0;
                aj = sum;
            }
        }
        const double dai = ai - old_ai, daj = aj - old_aj;
        for (std::size_t t = 0; t < n; ++t) G[t] += Qi[t] * dai + Qj[t] * daj;
    }
    if (iter == cfg.max_iter)
        throw TrainingError("train_svm: SMO did not reach the KKT tolerance in " + std::to_string(cfg.max_iter) +
                            " iterations");

    // Bias from free support vectors, or the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yG = y[t] * G[t];
        if (at_upper(t)) {
            if (y[t] < 0) ub = std::min(ub, yG);
            else lb = std::max(lb, yG);
        } else if (at_lower(t)) {
            if (y[t] > 0) ub = std::min(ub, yG);
            else lb = std::max(lb, yG);
        } else {
            ++n_free;
            sum_free += yG;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

    SvmModel model;
    model.gamma = cfg.gamma;
    model.bias = -rho;
    model.support_vectors = Matrix(0, X.cols());
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.support_vectors.append_row(X.row(t));
            model.coef.push_back(alpha[t] * y[t]);
        }
    }
    return model;
}

void fit_platt(std::span<const double> f, const std::vector<bool>& y, double& A, double& B) {
    const std::size_t n = f.size();
    double prior1 = 0, prior0 = 0;
    for (bool v : y) (v ? prior1 : prior0) += 1.0;
    const double hi = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo = 1.0 / (prior0 + 2.0);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = y[i] ? hi : lo;

    const double min_step = 1e-10, sigma = 1e-12, eps = 1e-5;
    A = 0.0;
    B = std::log((prior0 + 1.0) / (prior1 + 1.0));
    auto objective = [&](double a, double b) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double fApB = f[i] * a + b;
            if (fApB >= 0) v += t[i] * fApB + std::log1p(std::exp(-fApB));
            else v += (t[i] - 1.0) * fApB + std::log1p(std::exp(fApB));
        }
        return v;
    };
    double fval = objective(A, B);
    for (int iter = 0; iter < 100; ++iter) {
        double h11 = sigma, h22 = sigma, h21 = 0, g1 = 0, g2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double fApB = f[i] * A + B;
            double p, q;
            if (fApB >= 0) {
                p = std::exp(-fApB) / (1.0 + std::exp(-fApB));
                q = 1.0 / (1.0 + std::exp(-fApB));
            } else {
                p = 1.0 / (1.0 + std::exp(fApB));
                q = std::exp(fApB) / (1.0 + std::exp(fApB));
            }
            const double d2 = p * q;
            h11 += f[i] * f[i] * d2;
            h22 += d2;
            h21 += f[i] * d2;
            const double d1 = t[i] - p;
            g1 += f[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < eps && std::abs(g2) < eps) break;
        const double det = h11 * h22 - h21 * h21;
        const double dA = -(h22 * g1 - h21 * g2) / det;
        const double dB = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * dA + g2 * dB;
        double step = 1.0;
        while (step >= min_step) {
            const double newA = A + step * dA, newB = B + step * dB;
            const double newf = objective(newA, newB);
            if (newf < fval + 1e-4 * step * gd) {
                A = newA;
                B = newB;
                fval = newf;
                break;
            }
            step /= 2.0;
        }
        if (step < min_step) break;
    }
}

SvmModel train_svm(const Matrix& X, const std::vector<bool>& y, const SvmConfig& cfg, std::uint64_t seed) {
    require_both_classes(y, "train_svm");
    SvmModel model = fit_svm_dual(X, y, cfg);

    const std::size_t n = X.rows();
    const std::size_t folds = cfg.platt_folds;
    std::vector<double> decision(n, 0.0);
    bool out_of_fold = folds >= 2 && n >= 2 * folds;

    if (out_of_fold) {
        // Stratified fold assignment.
        Rng rng = make_rng(seed, "platt");
        std::vector<std::size_t> fold(n);
        for (bool cls : {true, false}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if (y[i] == cls) idx.push_back(i);
            for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
            for (std::size_t k = 0; k < idx.size(); ++k) fold[idx[k]] = k % folds;
        }
        for (std::size_t f = 0; f < folds && out_of_fold; ++f) {
            std::vector<std::size_t> train_idx, test_idx;
            for (std::size_t i = 0; i < n; ++i) (fold[i] == f ? test_idx : train_idx).push_back(i);
            std::vector<bool> train_y;
            for (std::size_t i : train_idx) train_y.push_back(y[i]);
            const auto pos = std::count(train_y.begin(), train_y.end(), true);
            if (pos == 0 || pos == static_cast<std::ptrdiff_t>(train_y.size())) {
                out_of_fold = false;
                break;
            }
            const SvmModel sub = fit_svm_dual(X.select_rows(train_idx), train_y, cfg);
            for (std::size_t i : test_idx) decision[i] = sub.decision_value(X.row(i));
        }
    }
    if (!out_of_fold)
        for (std::size_t i = 0; i < n; ++i) decision[i] = model.decision_value(X.row(i));

    fit_platt(decision, y, model.platt_a, model.platt_b);
    return model;
}

} // namespace litiscope
