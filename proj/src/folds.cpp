#include "ocf/folds.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ocf/errors.hpp"
#include "ocf/rng.hpp"

namespace ocf {

FoldTriple FoldPlan::triple(int repeat, int rotation) const {
    if (repeat < 0 || repeat >= repeat_count) {
        throw ConfigError("fold plan: repeat " + std::to_string(repeat) + " out of range");
    }
    if (rotation < 0 || rotation >= fold_count) {
        throw ConfigError("fold plan: rotation " + std::to_string(rotation) + " out of range");
    }
    const std::vector<std::vector<std::size_t>>& repeat_folds =
        folds[static_cast<std::size_t>(repeat)];
    FoldTriple triple;
    triple.test = repeat_folds[static_cast<std::size_t>(rotation)];
    triple.validation = repeat_folds[static_cast<std::size_t>((rotation + 1) % fold_count)];
    for (int f = 0; f < fold_count; ++f) {
        if (f == rotation || f == (rotation + 1) % fold_count) continue;
        const std::vector<std::size_t>& fold = repeat_folds[static_cast<std::size_t>(f)];
        triple.train.insert(triple.train.end(), fold.begin(), fold.end());
    }
    std::sort(triple.train.begin(), triple.train.end());
    return triple;
}

void FoldPlan::validate() const {
    if (folds.size() != static_cast<std::size_t>(repeat_count)) {
        throw InternalError("fold plan: repeat count mismatch");
    }
    for (const auto& repeat_folds : folds) {
        if (repeat_folds.size() != static_cast<std::size_t>(fold_count)) {
            throw InternalError("fold plan: fold count mismatch");
        }
        std::size_t smallest = observation_count;
        std::size_t largest = 0;
        std::vector<bool> seen(observation_count, false);
        std::size_t total = 0;
        for (const auto& fold : repeat_folds) {
            smallest = std::min(smallest, fold.size());
            largest = std::max(largest, fold.size());
            for (std::size_t index : fold) {
                if (index >= observation_count || seen[index]) {
                    throw InternalError("fold plan: index " + std::to_string(index) +
                                        " repeated or out of range");
                }
                seen[index] = true;
                ++total;
            }
        }
        if (total != observation_count) {
            throw InternalError("fold plan: folds do not cover every observation");
        }
        if (largest - smallest > 1) {
            throw InternalError("fold plan: fold sizes differ by more than one");
        }
    }
}

FoldPlan make_folds(std::size_t n, std::uint64_t seed) {
    FoldPlan plan;
    plan.seed = seed;
    plan.observation_count = n;
    if (n < static_cast<std::size_t>(2 * plan.fold_count)) {
        throw ConfigError("fold plan: need at least " + std::to_string(2 * plan.fold_count) +
                          " observations, got " + std::to_string(n));
    }
    plan.folds.resize(static_cast<std::size_t>(plan.repeat_count));
    for (int repeat = 0; repeat < plan.repeat_count; ++repeat) {
        // Each repeat draws from its own stream, so adding repeats later
        // would not disturb the existing ones.
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(repeat));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);

        auto& repeat_folds = plan.folds[static_cast<std::size_t>(repeat)];
        repeat_folds.resize(static_cast<std::size_t>(plan.fold_count));
        for (std::size_t i = 0; i < n; ++i) {
            repeat_folds[i % static_cast<std::size_t>(plan.fold_count)].push_back(order[i]);
        }
        for (auto& fold : repeat_folds) std::sort(fold.begin(), fold.end());
    }
    plan.validate();
    return plan;
}

std::string fold_plan_to_text(const FoldPlan& plan) {
    std::ostringstream out;
    out << "seed " << plan.seed << "\n";
    out << "observations " << plan.observation_count << "\n";
    out << "repeats " << plan.repeat_count << "\n";
    out << "folds " << plan.fold_count << "\n";
    for (int repeat = 0; repeat < plan.repeat_count; ++repeat) {
        for (int fold = 0; fold < plan.fold_count; ++fold) {
            out << "repeat " << repeat << " fold " << fold << ":";
            for (std::size_t index :
                 plan.folds[static_cast<std::size_t>(repeat)][static_cast<std::size_t>(fold)]) {
                out << ' ' << index;
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace ocf
