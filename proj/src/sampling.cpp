#include "ocf/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>
#include <vector>

#include "ocf/errors.hpp"
#include "ocf/rng.hpp"

namespace ocf {

namespace {

std::vector<std::size_t> draw_subset(std::uint64_t seed, int iteration, std::size_t train_size,
                                     std::size_t subset_size) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(iteration));
    std::vector<std::size_t> indices = rng.sample_without_replacement(train_size, subset_size);
    std::sort(indices.begin(), indices.end());
    return indices;
}

double score_subset(const Dataset& train, const Dataset& validation,
                    const SubsetSearchConfig& config, const std::vector<std::size_t>& indices) {
    const Dataset subset = train.select(indices);
    if (config.scorer == SubsetSearchConfig::Scorer::MajorityBaseline) {
        const int majority = subset.majority_class();
        std::size_t correct = 0;
        for (int label : validation.labels) {
            if (label == majority) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(validation.size());
    }
    const SvmModel model =
        train_svm(subset, config.gamma, config.regularization, config.kernel);
    return svm_accuracy(model, validation);
}

}  // namespace

void SubsetSearchConfig::validate() const {
    if (subset_size == 0) throw ConfigError("subset search: subset size must be positive");
    if (iterations < 1) throw ConfigError("subset search: need at least one iteration");
    if (scorer == Scorer::Svm && regularization <= 0.0) {
        throw ConfigError("subset search: svm regularization must be positive");
    }
}

SubsetSelection select_training_subset(const Dataset& train, const Dataset& validation,
                                       const SubsetSearchConfig& config) {
    config.validate();
    if (validation.size() == 0) {
        throw ConfigError("subset search: validation fold is empty");
    }
    train.validate();
    validation.validate();
    if (validation.feature_count() != train.feature_count()) {
        throw DataError("subset search: validation has " +
                        std::to_string(validation.feature_count()) +
                        " features, training has " + std::to_string(train.feature_count()));
    }
    if (train.size() < config.subset_size) {
        throw ConfigError("subset search: subset size " + std::to_string(config.subset_size) +
                          " exceeds training fold size " + std::to_string(train.size()));
    }

    const std::size_t count = static_cast<std::size_t>(config.iterations);
    std::vector<double> accuracies(count, 0.0);
    auto score_one = [&](std::size_t k) {
        // Draw k is a function of (seed, k) alone, so candidates are identical
        // no matter how many iterations run or how work is scheduled.
        const std::vector<std::size_t> indices = draw_subset(
            config.seed, static_cast<int>(k), train.size(), config.subset_size);
        accuracies[k] = score_subset(train, validation, config, indices);
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>({count, hw, 8});
    if (workers <= 1 || count < 32) {
        for (std::size_t k = 0; k < count; ++k) score_one(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < count; k = next.fetch_add(1))
                    score_one(k);
            });
        }
        for (auto& t : pool) t.join();
    }

    // Strict improvement only: the earliest iteration wins every tie.
    std::size_t best = 0;
    for (std::size_t k = 1; k < count; ++k) {
        if (accuracies[k] > accuracies[best]) best = k;
    }

    SubsetSelection selection;
    selection.iteration = static_cast<int>(best);
    selection.validation_accuracy = accuracies[best];
    selection.indices =
        draw_subset(config.seed, static_cast<int>(best), train.size(), config.subset_size);
    return selection;
}

}  // namespace ocf
