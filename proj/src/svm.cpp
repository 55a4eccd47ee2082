#include "ocf/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ocf/errors.hpp"
#include "ocf/kernels.hpp"

namespace ocf {

namespace {

constexpr double kKktTolerance = 1e-3;
constexpr int kMaxPasses = 200;
constexpr double kMinStep = 1e-9;

void kernel_row(SvmKernel kernel, double gamma, std::span<const double> x, const double* rows,
                std::size_t n, std::size_t p, double* out) {
    if (kernel == SvmKernel::Radial) {
        kernels::squared_distances(x.data(), rows, n, p, out);
    } else {
        kernels::l1_distances(x.data(), rows, n, p, out);
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(-gamma * out[i]);
}

struct PairwiseOptimizer {
    const std::vector<double>& kmat;
    const std::vector<double>& y;
    std::size_t n;
    double c;
    std::vector<double> alpha;
    std::vector<double> residual;  // decision value minus mapped label, per point
    double bias = 0.0;

    PairwiseOptimizer(const std::vector<double>& kernel_matrix,
                      const std::vector<double>& mapped_labels, double regularization)
        : kmat(kernel_matrix),
          y(mapped_labels),
          n(mapped_labels.size()),
          c(regularization),
          alpha(n, 0.0),
          residual(n) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = -y[i];
    }

    double k(std::size_t i, std::size_t j) const { return kmat[i * n + j]; }

    bool take_step(std::size_t i, std::size_t j) {
        if (i == j) return false;
        const double ai = alpha[i];
        const double aj = alpha[j];
        double low = 0.0;
        double high = c;
        if (y[i] != y[j]) {
            low = std::max(0.0, aj - ai);
            high = std::min(c, c + aj - ai);
        } else {
            low = std::max(0.0, ai + aj - c);
            high = std::min(c, ai + aj);
        }
        if (high - low < 1e-12) return false;
        const double curvature = k(i, i) + k(j, j) - 2.0 * k(i, j);
        if (curvature <= 1e-12) return false;
        double aj_new = aj + y[j] * (residual[i] - residual[j]) / curvature;
        aj_new = std::clamp(aj_new, low, high);
        if (std::fabs(aj_new - aj) < kMinStep) return false;
        const double ai_new = std::clamp(ai + y[i] * y[j] * (aj - aj_new), 0.0, c);

        const double di = y[i] * (ai_new - ai);
        const double dj = y[j] * (aj_new - aj);
        const double b1 = bias - residual[i] - di * k(i, i) - dj * k(i, j);
        const double b2 = bias - residual[j] - di * k(i, j) - dj * k(j, j);
        double bias_new = 0.0;
        if (ai_new > 0.0 && ai_new < c) {
            bias_new = b1;
        } else if (aj_new > 0.0 && aj_new < c) {
            bias_new = b2;
        } else {
            bias_new = 0.5 * (b1 + b2);
        }
        const double db = bias_new - bias;
        for (std::size_t m = 0; m < n; ++m) {
            residual[m] += di * k(i, m) + dj * k(j, m) + db;
        }
        alpha[i] = ai_new;
        alpha[j] = aj_new;
        bias = bias_new;
        return true;
    }

    // Second index: the largest residual gap first (ties to the lowest index),
    // then a deterministic sweep so a degenerate best pair cannot stall a
    // genuinely improvable point.
    bool optimize_from(std::size_t i) {
        std::size_t best = n;
        double best_gap = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double gap = std::fabs(residual[i] - residual[j]);
            if (gap > best_gap) {
                best_gap = gap;
                best = j;
            }
        }
        if (best < n && take_step(i, best)) return true;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || j == best) continue;
            if (take_step(i, j)) return true;
        }
        return false;
    }

    void run() {
        for (int pass = 0; pass < kMaxPasses; ++pass) {
            int changed = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double margin_slack = residual[i] * y[i];
                const bool violates = (margin_slack < -kKktTolerance && alpha[i] < c) ||
                                      (margin_slack > kKktTolerance && alpha[i] > 0.0);
                if (violates && optimize_from(i)) ++changed;
            }
            if (changed == 0) break;
        }
    }
};

}  // namespace

double SvmModel::decision_value(std::span<const double> x) const {
    if (constant) return constant_class == 1 ? 1.0 : -1.0;
    if (x.size() != feature_count) {
        throw DataError("svm: observation has " + std::to_string(x.size()) +
                        " features, model expects " + std::to_string(feature_count));
    }
    const std::size_t m = support_count();
    std::vector<double> k(m);
    kernel_row(kernel, gamma, x, support_features.data(), m, feature_count, k.data());
    double value = bias;
    for (std::size_t i = 0; i < m; ++i) value += weights[i] * k[i];
    return value;
}

int SvmModel::predict(std::span<const double> x) const {
    if (constant) return constant_class;
    return decision_value(x) >= 0.0 ? 1 : 0;
}

SvmModel train_svm(const Dataset& data, double gamma, double regularization, SvmKernel kernel) {
    data.validate();
    const std::size_t n = data.size();
    const std::size_t p = data.feature_count();
    if (n < 2) throw ConfigError("svm: need at least two training points, got " +
                                 std::to_string(n));
    if (regularization <= 0.0) {
        throw ConfigError("svm: regularization must be positive");
    }
    if (gamma <= 0.0) gamma = 1.0 / static_cast<double>(p);

    SvmModel model;
    model.kernel = kernel;
    model.gamma = gamma;
    model.feature_count = p;

    const std::size_t ones =
        static_cast<std::size_t>(std::count(data.labels.begin(), data.labels.end(), 1));
    if (ones == 0 || ones == n) {
        model.constant = true;
        model.constant_class = ones == 0 ? 0 : 1;
        return model;
    }

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = data.labels[i] == 1 ? 1.0 : -1.0;

    std::vector<double> kmat(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        kernel_row(kernel, gamma, std::span<const double>(data.row(i), p),
                   data.features.data(), n, p, kmat.data() + i * n);
    }

    PairwiseOptimizer opt(kmat, y, regularization);
    opt.run();

    model.bias = opt.bias;
    for (std::size_t i = 0; i < n; ++i) {
        if (opt.alpha[i] > 1e-10) {
            model.weights.push_back(opt.alpha[i] * y[i]);
            const double* row = data.row(i);
            model.support_features.insert(model.support_features.end(), row, row + p);
        }
    }
    return model;
}

double svm_accuracy(const SvmModel& model, const Dataset& data) {
    data.validate();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const std::span<const double> row(data.row(i), data.feature_count());
        if (model.predict(row) == data.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace ocf
