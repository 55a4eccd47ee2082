#include "ocf/harness.hpp"

#include "ocf/baselines.hpp"
#include "ocf/errors.hpp"
#include "ocf/folds.hpp"
#include "ocf/formulation.hpp"
#include "ocf/ingest.hpp"
#include "ocf/manifest.hpp"
#include "ocf/rng.hpp"
#include "ocf/tree.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <thread>
#include <utility>

namespace ocf {
namespace {

constexpr std::size_t kMaxWorkers = 4;

// Stream ids for seeds derived from the master. Fold shuffles use streams
// 0..repeat_count-1 inside make_folds, so cell-level draws start far above.
constexpr std::uint64_t kCellStreamBase = 1000;
constexpr int kSaltSmallForest = 0;
constexpr int kSaltLargeForest = 1;
constexpr int kSaltSubsetDraw = 2;

std::uint64_t cell_seed(const ExperimentSpec& spec, int repeat, int rotation, int salt) {
    const std::uint64_t cell =
        static_cast<std::uint64_t>(repeat) * static_cast<std::uint64_t>(spec.rotation_count) +
        static_cast<std::uint64_t>(rotation);
    return Rng::stream(spec.seed, kCellStreamBase + cell * 8 + static_cast<std::uint64_t>(salt))
        .next();
}

double percent_correct(std::size_t correct, std::size_t total) {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

double tree_accuracy_percent(const DecisionTree& tree, const Dataset& data) {
    const std::size_t p = data.feature_count();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (tree.predict(std::span<const double>(data.row(i), p)) == data.labels[i]) ++correct;
    return percent_correct(correct, data.size());
}

double forest_accuracy_percent(const Forest& forest, const Dataset& data) {
    const std::size_t p = data.feature_count();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (forest.predict(std::span<const double>(data.row(i), p)) == data.labels[i]) ++correct;
    return percent_correct(correct, data.size());
}

// Train, validation and test views of one fold triple, rescaled to the
// training fold's feature ranges (validation and test values clip to [0,1]).
struct FoldData {
    Dataset train;
    Dataset validation;
    Dataset test;
};

void audit_triple(const FoldTriple& t, std::size_t n) {
    std::vector<char> role(n, 0);
    auto mark = [&](const std::vector<std::size_t>& ids, char bit) {
        for (std::size_t i : ids) {
            if (i >= n) throw InternalError("fold audit: index out of range");
            if (role[i] != 0) throw InternalError("fold audit: observation in two roles");
            role[i] = bit;
        }
    };
    mark(t.train, 1);
    mark(t.validation, 2);
    mark(t.test, 3);
    for (std::size_t i = 0; i < n; ++i)
        if (role[i] == 0) throw InternalError("fold audit: observation unassigned");
}

FoldData materialize_triple(const Dataset& data, const FoldTriple& t) {
    audit_triple(t, data.size());
    FoldData f{data.select(t.train), data.select(t.validation), data.select(t.test)};
    const std::size_t p = data.feature_count();
    const ScalingParams scale = fit_scaling(f.train.features, f.train.size(), p);
    f.train.features = normalize_with(scale, f.train.features, f.train.size(), p);
    f.validation.features = normalize_with(scale, f.validation.features, f.validation.size(), p);
    f.test.features = normalize_with(scale, f.test.features, f.test.size(), p);
    return f;
}

// Grid-search bookkeeping. Preference order: higher validation accuracy,
// then smaller split budget, then earlier downsample slot.
struct Choice {
    double validation_accuracy = 0.0;
    int budget = 0;
    int slot = -1;
};

bool improves(const Choice& challenger, const std::optional<Choice>& incumbent) {
    if (!incumbent) return true;
    if (challenger.validation_accuracy != incumbent->validation_accuracy)
        return challenger.validation_accuracy > incumbent->validation_accuracy;
    if (challenger.budget != incumbent->budget) return challenger.budget < incumbent->budget;
    return challenger.slot < incumbent->slot;
}

void note_error(ExperimentRecord& rec, const std::string& message) {
    if (rec.error.empty()) rec.error = message;
}

void run_greedy_tree(const FoldData& f, const ExperimentSpec& spec, ExperimentRecord& rec) {
    std::optional<Choice> best;
    std::optional<DecisionTree> best_tree;
    for (int budget : spec.split_budgets) {
        try {
            CartConfig cfg;
            cfg.depth = spec.tree_depth;
            cfg.min_leaf_size = spec.min_leaf_size;
            cfg.split_budget = budget;
            DecisionTree tree = train_cart(f.train, cfg);
            Choice c{tree_accuracy_percent(tree, f.validation), budget, -1};
            if (improves(c, best)) {
                best = c;
                best_tree = std::move(tree);
            }
        } catch (const std::exception& e) {
            note_error(rec, e.what());
        }
    }
    if (!best_tree) {
        rec.failed = true;
        return;
    }
    rec.chosen_budget = best->budget;
    rec.validation_accuracy = best->validation_accuracy;
    rec.test_accuracy = tree_accuracy_percent(*best_tree, f.test);
}

void run_random_forest(const FoldData& f, const ExperimentSpec& spec, ExperimentRecord& rec,
                       int tree_count, int salt) {
    try {
        RfConfig cfg;
        cfg.tree_count = tree_count;
        cfg.depth = spec.forest_depth;
        cfg.sample_size = spec.downsample_size;
        cfg.seed = cell_seed(spec, rec.repeat, rec.rotation, salt);
        const Forest forest = train_rf(f.train, cfg);
        rec.subset_seed = cfg.seed;
        rec.validation_accuracy = forest_accuracy_percent(forest, f.validation);
        rec.test_accuracy = forest_accuracy_percent(forest, f.test);
    } catch (const std::exception& e) {
        rec.failed = true;
        note_error(rec, e.what());
    }
}

// One MILP training attempt: build, warm-start, solve, read the forest
// back. Returns nothing when the solver produced no usable incumbent (the
// failure is noted on the record).
std::optional<Forest> solve_to_forest(const Dataset& train, const OcfConfig& config,
                                      const ExperimentSpec& spec, ExperimentRecord& rec,
                                      SolveOutcome& outcome) {
    OcfModel built = build_ocf_model(train, config);
    std::vector<double> warm;
    const std::vector<double>* warm_ptr = nullptr;
    if (config.warm_start) {
        std::vector<std::size_t> all(train.feature_count());
        for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
        warm = warm_start_assignment(train, config,
                                     std::vector<std::vector<std::size_t>>(
                                         static_cast<std::size_t>(config.tree_count), all));
        warm_ptr = &warm;
    }
    ++rec.solve_count;
    outcome = solve_ocf(built, spec.solver, warm_ptr);
    if (outcome.status == SolveStatus::FeasibleTimeLimit) ++rec.time_limited_count;
    if (!has_assignment(outcome.status)) {
        note_error(rec, std::string("solver: ") + to_string(outcome.status) +
                            (outcome.message.empty() ? "" : " (" + outcome.message + ")"));
        return std::nullopt;
    }
    return extract_forest(outcome.assignment, built.registry, built.config);
}

void run_milp_tree(const FoldData& f, const ExperimentSpec& spec, ExperimentRecord& rec) {
    std::optional<Choice> best;
    std::optional<Forest> best_forest;
    SolveOutcome best_outcome;
    for (int budget : spec.split_budgets) {
        try {
            OcfConfig cfg;
            cfg.tree_count = 1;
            cfg.depth = spec.tree_depth;
            cfg.split_budget = budget;
            cfg.min_leaf_size = spec.min_leaf_size;
            cfg.epsilon = spec.epsilon;
            cfg.symmetry_breaking = false;  // one tree, nothing to permute
            SolveOutcome outcome;
            std::optional<Forest> forest = solve_to_forest(f.train, cfg, spec, rec, outcome);
            if (!forest) continue;
            Choice c{forest_accuracy_percent(*forest, f.validation), budget, -1};
            if (improves(c, best)) {
                best = c;
                best_forest = std::move(forest);
                best_outcome = std::move(outcome);
            }
        } catch (const std::exception& e) {
            note_error(rec, e.what());
        }
    }
    if (!best_forest) {
        rec.failed = true;
        return;
    }
    rec.chosen_budget = best->budget;
    rec.validation_accuracy = best->validation_accuracy;
    rec.test_accuracy = forest_accuracy_percent(*best_forest, f.test);
    rec.solve_status = best_outcome.status;
    rec.gap = best_outcome.gap;
}

void run_joint_forest(const FoldData& f, const ExperimentSpec& spec, ExperimentRecord& rec) {
    const bool downsampled = f.train.size() > spec.downsample_size;
    const int slots = downsampled ? spec.downsample_candidates : 1;
    const std::uint64_t draw_base = cell_seed(spec, rec.repeat, rec.rotation, kSaltSubsetDraw);

    std::optional<Choice> best;
    std::optional<Forest> best_forest;
    SolveOutcome best_outcome;
    std::uint64_t best_subset_seed = 0;

    for (int slot = 0; slot < slots; ++slot) {
        Dataset subset;
        std::uint64_t subset_seed = 0;
        if (downsampled) {
            subset_seed = Rng::stream(draw_base, static_cast<std::uint64_t>(slot)).next();
            std::vector<std::size_t> rows =
                Rng(subset_seed).sample_without_replacement(f.train.size(), spec.downsample_size);
            std::sort(rows.begin(), rows.end());
            subset = f.train.select(rows);
        } else {
            subset = f.train;
        }
        for (int budget : spec.split_budgets) {
            try {
                OcfConfig cfg;
                cfg.tree_count = spec.joint_tree_count;
                cfg.depth = spec.forest_depth;
                cfg.split_budget = budget;
                cfg.min_leaf_size = spec.min_leaf_size;
                cfg.epsilon = spec.epsilon;
                SolveOutcome outcome;
                std::optional<Forest> forest = solve_to_forest(subset, cfg, spec, rec, outcome);
                if (!forest) continue;
                Choice c{forest_accuracy_percent(*forest, f.validation), budget,
                         downsampled ? slot : -1};
                if (improves(c, best)) {
                    best = c;
                    best_forest = std::move(forest);
                    best_outcome = std::move(outcome);
                    best_subset_seed = subset_seed;
                }
            } catch (const std::exception& e) {
                note_error(rec, e.what());
            }
        }
    }
    if (!best_forest) {
        rec.failed = true;
        return;
    }
    rec.chosen_budget = best->budget;
    rec.chosen_candidate = best->slot;
    rec.subset_seed = best_subset_seed;
    rec.validation_accuracy = best->validation_accuracy;
    rec.test_accuracy = forest_accuracy_percent(*best_forest, f.test);
    rec.solve_status = best_outcome.status;
    rec.gap = best_outcome.gap;
}

ExperimentRecord run_cell(const FoldData& f, const ExperimentSpec& spec, int repeat, int rotation,
                          Method m) {
    ExperimentRecord rec;
    rec.repeat = repeat;
    rec.rotation = rotation;
    rec.method = m;
    const auto started = std::chrono::steady_clock::now();
    try {
        switch (m) {
            case Method::Cart: run_greedy_tree(f, spec, rec); break;
            case Method::Oct: run_milp_tree(f, spec, rec); break;
            case Method::SmallForest:
                run_random_forest(f, spec, rec, spec.small_forest_trees, kSaltSmallForest);
                break;
            case Method::LargeForest:
                run_random_forest(f, spec, rec, spec.large_forest_trees, kSaltLargeForest);
                break;
            case Method::JointForest: run_joint_forest(f, spec, rec); break;
        }
    } catch (const std::exception& e) {
        rec.failed = true;
        note_error(rec, e.what());
    } catch (...) {
        rec.failed = true;
        note_error(rec, "unknown failure");
    }
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

std::pair<double, double> mean_and_sample_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

}  // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::Cart: return "CART";
        case Method::Oct: return "OCT";
        case Method::SmallForest: return "3-RF";
        case Method::LargeForest: return "500-RF";
        case Method::JointForest: return "3-OCF";
    }
    return "?";
}

Method method_from_name(const std::string& text) {
    std::string up;
    for (char c : text) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Method m : all_methods())
        if (up == method_name(m)) return m;
    throw ConfigError("unknown method '" + text +
                      "' (expected CART, OCT, 3-RF, 500-RF or 3-OCF)");
}

std::vector<Method> all_methods() {
    return {Method::Cart, Method::Oct, Method::SmallForest, Method::LargeForest,
            Method::JointForest};
}

ExperimentSpec::ExperimentSpec() { solver.time_limit_s = 60.0; }

void ExperimentSpec::validate() const {
    if (methods.empty()) throw ConfigError("experiment needs at least one method");
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j)
            if (methods[i] == methods[j])
                throw ConfigError(std::string("method listed twice: ") + method_name(methods[i]));
    if (split_budgets.empty()) throw ConfigError("split budget grid must not be empty");
    for (int b : split_budgets)
        if (b < 1) throw ConfigError("split budgets must be positive");
    for (std::size_t i = 0; i < split_budgets.size(); ++i)
        for (std::size_t j = i + 1; j < split_budgets.size(); ++j)
            if (split_budgets[i] == split_budgets[j])
                throw ConfigError("split budget listed twice: " +
                                  std::to_string(split_budgets[i]));
    if (repeat_count < 1 || repeat_count > 5)
        throw ConfigError("repeat count must be between 1 and 5");
    if (rotation_count < 1 || rotation_count > 4)
        throw ConfigError("rotation count must be between 1 and 4");
    if (tree_depth < 1 || forest_depth < 1) throw ConfigError("depths must be at least 1");
    if (joint_tree_count < 1 || joint_tree_count % 2 == 0)
        throw ConfigError("joint forest needs an odd number of trees");
    if (small_forest_trees < 1 || large_forest_trees < 1)
        throw ConfigError("forest sizes must be at least 1");
    if (min_leaf_size < 1) throw ConfigError("minimum leaf size must be at least 1");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (downsample_size < 1) throw ConfigError("downsample size must be at least 1");
    if (downsample_candidates < 1) throw ConfigError("need at least one downsample candidate");
    if (dataset.size() == 0 && manifest_path.empty())
        throw ConfigError("experiment needs a dataset or a manifest path");
}

std::vector<MethodSummary> ExperimentResult::summaries() const {
    std::vector<MethodSummary> out;
    for (Method m : methods) {
        MethodSummary s;
        s.method = m;
        for (const ExperimentRecord& rec : records) {
            if (rec.method != m) continue;
            ++s.cell_count;
            s.solve_count += rec.solve_count;
            s.time_limited_count += rec.time_limited_count;
            if (rec.failed)
                ++s.failed_count;
            else
                s.test_accuracies.push_back(rec.test_accuracy);
        }
        const auto [mean, sd] = mean_and_sample_std(s.test_accuracies);
        s.mean_test_accuracy = mean;
        s.std_test_accuracy = sd;
        out.push_back(std::move(s));
    }
    return out;
}

bool ExperimentResult::any_method_fully_failed() const {
    for (const MethodSummary& s : summaries())
        if (s.fully_failed()) return true;
    return false;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    if (spec.dataset.size() > 0) return run_experiment(spec, spec.dataset);
    const DatasetManifest manifest = read_manifest_file(spec.manifest_path);
    return run_experiment(spec, load_dataset(manifest));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset& data) {
    spec.validate();
    data.validate();

    const FoldPlan plan = make_folds(data.size(), spec.seed);

    struct Job {
        int repeat;
        int rotation;
        std::size_t triple_index;
        Method method;
    };
    std::vector<FoldData> folds;
    std::vector<Job> jobs;
    for (int r = 0; r < spec.repeat_count; ++r) {
        for (int k = 0; k < spec.rotation_count; ++k) {
            folds.push_back(materialize_triple(data, plan.triple(r, k)));
            for (Method m : spec.methods) jobs.push_back({r, k, folds.size() - 1, m});
        }
    }

    std::vector<ExperimentRecord> records(jobs.size());
    auto run_job = [&](std::size_t j) {
        const Job& job = jobs[j];
        records[j] = run_cell(folds[job.triple_index], spec, job.repeat, job.rotation, job.method);
    };

    const std::size_t workers =
        std::min({jobs.size(), static_cast<std::size_t>(std::thread::hardware_concurrency()),
                  kMaxWorkers});
    if (workers >= 2 && jobs.size() >= 2) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t j = next.fetch_add(1); j < jobs.size(); j = next.fetch_add(1))
                    run_job(j);
            });
        for (std::thread& t : pool) t.join();
    } else {
        for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
    }

    ExperimentResult result;
    result.dataset_name =
        data.provenance.source.empty() ? std::string("(in-memory)") : data.provenance.source;
    result.observation_count = data.size();
    result.seed = spec.seed;
    result.repeat_count = spec.repeat_count;
    result.rotation_count = spec.rotation_count;
    result.methods = spec.methods;
    result.records = std::move(records);
    return result;
}

std::string format_mean_std(const std::vector<double>& values) {
    if (values.empty()) return "n/a";
    const auto [mean, sd] = mean_and_sample_std(values);
    return format_fixed(mean, 2) + " ± " + format_fixed(sd, 2);
}

ExperimentReport summarize(const ExperimentResult& result) {
    if (result.records.empty()) throw ConfigError("cannot summarize an empty result");

    std::ostringstream csv;
    csv << "repeat,rotation,method,failed,error,chosen_budget,chosen_candidate,subset_seed,"
           "validation_accuracy,test_accuracy,solve_status,gap,solve_count,time_limited_count\n";
    for (const ExperimentRecord& rec : result.records) {
        csv << rec.repeat << ',' << rec.rotation << ',' << method_name(rec.method) << ','
            << (rec.failed ? 1 : 0) << ',' << csv_escape(rec.error) << ',' << rec.chosen_budget
            << ',' << rec.chosen_candidate << ',' << rec.subset_seed << ','
            << format_fixed(rec.validation_accuracy, 4) << ','
            << format_fixed(rec.test_accuracy, 4) << ',' << to_string(rec.solve_status) << ',';
        char gap_buf[64];
        std::snprintf(gap_buf, sizeof(gap_buf), "%.6g", rec.gap);
        csv << gap_buf << ',' << rec.solve_count << ',' << rec.time_limited_count << '\n';
    }

    const std::vector<MethodSummary> sums = result.summaries();

    std::vector<std::string> headers{"dataset"};
    std::vector<std::string> row{result.dataset_name};
    for (const MethodSummary& s : sums) {
        headers.push_back(method_name(s.method));
        row.push_back(s.fully_failed() ? "failed" : format_mean_std(s.test_accuracies));
    }
    std::vector<std::size_t> widths(headers.size());
    for (std::size_t c = 0; c < headers.size(); ++c)
        widths[c] = std::max(headers[c].size(), row[c].size());

    std::ostringstream table;
    table << "benchmark: " << result.dataset_name << " (" << result.observation_count
          << " observations, seed " << result.seed << ", " << result.repeat_count
          << " repeats x " << result.rotation_count << " rotations)\n\n";
    auto emit_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            table << cells[c];
            if (c + 1 < cells.size())
                table << std::string(widths[c] - cells[c].size() + 2, ' ');
        }
        table << '\n';
    };
    emit_row(headers);
    emit_row(row);
    table << '\n';
    for (const MethodSummary& s : sums) {
        table << method_name(s.method) << ": " << (s.cell_count - s.failed_count) << "/"
              << s.cell_count << " cells usable";
        if (s.fully_failed()) table << " -- METHOD FAILED";
        if (s.solve_count > 0)
            table << "; " << s.solve_count << " solves, " << s.time_limited_count << "/"
                  << s.solve_count << " time-limited";
        table << '\n';
    }

    return {csv.str(), table.str()};
}

}  // namespace ocf
