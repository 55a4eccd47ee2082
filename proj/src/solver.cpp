#include "ocf/solver.hpp"

#include "ocf/errors.hpp"
#include "ocf/lp_format.hpp"

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace ocf {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::atomic<std::uint64_t> workspace_counter{0};

fs::path make_workspace(const std::string& root) {
    fs::path base = root.empty() ? fs::temp_directory_path() / "ocf-solver" : fs::path(root);
    std::error_code ec;
    fs::create_directories(base, ec);
    if (ec) throw SolverError("cannot create workspace root '" + base.string() + "': " + ec.message());
    auto ticks = std::chrono::steady_clock::now().time_since_epoch().count();
    fs::path dir = base / ("solve-" + std::to_string(::getpid()) + "-" +
                           std::to_string(workspace_counter.fetch_add(1)) + "-" +
                           std::to_string(static_cast<unsigned long long>(ticks) % 1000000));
    if (!fs::create_directory(dir, ec) || ec)
        throw SolverError("cannot create workspace '" + dir.string() + "': " + ec.message());
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw SolverError("cannot write '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct RunResult {
    int exit_code = -1;
    bool launch_failed = false;
    bool timed_out = false;
    double wall_s = 0.0;
};

// Runs argv with stdout+stderr redirected into log_path. The process group is
// killed outright once the deadline passes — the solver's own time limit is
// the polite mechanism, this is the backstop against hangs.
RunResult run_process(const std::vector<std::string>& argv, const fs::path& log_path,
                      double deadline_s) {
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    const auto start = std::chrono::steady_clock::now();
    pid_t pid = ::fork();
    if (pid < 0) throw SolverError(std::string("fork failed: ") + std::strerror(errno));
    if (pid == 0) {
        ::setpgid(0, 0);
        int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            ::dup2(fd, 1);
            ::dup2(fd, 2);
            if (fd > 2) ::close(fd);
        }
        ::execvp(cargv[0], cargv.data());
        std::fprintf(stderr, "exec '%s' failed: %s\n", cargv[0], std::strerror(errno));
        ::_exit(127);
    }
    ::setpgid(pid, pid);  // also from the parent; closes the race either way

    RunResult result;
    for (;;) {
        int status = 0;
        pid_t done = ::waitpid(pid, &status, WNOHANG);
        if (done == pid) {
            if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
            else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
            break;
        }
        if (done < 0) throw SolverError(std::string("waitpid failed: ") + std::strerror(errno));
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > deadline_s) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            result.exit_code = -1;
            break;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    result.launch_failed = result.exit_code == 127;
    result.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<std::string> highs_argv(const SolverConfig& config, const fs::path& lp,
                                    const fs::path& sol, const fs::path& options,
                                    const fs::path& warm, bool have_warm) {
    std::vector<std::string> argv{config.binary_path, lp.string(), "--solution_file", sol.string(),
                                  "--time_limit",     num(config.time_limit_s),
                                  "--random_seed",    std::to_string(config.seed),
                                  "--options_file",   options.string()};
    if (have_warm) {
        argv.push_back("--read_solution_file");
        argv.push_back(warm.string());
    }
    return argv;
}

std::vector<std::string> template_argv(const SolverConfig& config, const fs::path& lp,
                                       const fs::path& sol, const fs::path& warm, bool have_warm) {
    if (config.command_template.empty())
        throw ConfigError("solver: the generic adapter needs a command template");
    std::vector<std::string> argv;
    std::istringstream in(config.command_template);
    std::string token;
    while (in >> token) {
        auto replace = [&](const std::string& key, const std::string& value) {
            for (std::size_t at; (at = token.find(key)) != std::string::npos;)
                token.replace(at, key.size(), value);
        };
        replace("{bin}", config.binary_path);
        replace("{lp}", lp.string());
        replace("{sol}", sol.string());
        replace("{time_limit}", num(config.time_limit_s));
        replace("{seed}", std::to_string(config.seed));
        replace("{threads}", std::to_string(config.threads));
        replace("{mip_gap}", config.mip_gap >= 0 ? num(config.mip_gap) : "");
        replace("{warm}", have_warm ? warm.string() : "");
        if (!token.empty()) argv.push_back(token);
    }
    if (argv.empty()) throw ConfigError("solver: the command template expands to nothing");
    return argv;
}

}  // namespace

std::string resolve_solver_binary(const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* env = std::getenv("OCF_SOLVER"); env && *env) return env;
    throw SolverError(
        "no solver binary configured: pass a path or set the OCF_SOLVER environment variable");
}

SolveOutcome solve(const MilpModel& model, const SolverConfig& config,
                   const std::vector<double>* warm_start) {
    SolverConfig cfg = config;
    cfg.binary_path = resolve_solver_binary(config.binary_path);
    if (cfg.binary_path.find('/') != std::string::npos && ::access(cfg.binary_path.c_str(), X_OK) != 0)
        throw SolverError("solver binary '" + cfg.binary_path + "' is not executable: " +
                          std::strerror(errno));

    const fs::path dir = make_workspace(cfg.workspace_root);
    const fs::path lp = dir / "model.lp";
    const fs::path sol = dir / "model.sol";
    const fs::path log = dir / "solve.log";
    const fs::path options = dir / "solver.opt";
    const fs::path warm = dir / "warm.sol";

    write_file(lp, write_lp(model));
    const bool have_warm = warm_start != nullptr;
    if (have_warm)
        write_file(warm, write_solution_file(model, *warm_start, model.evaluate_objective(*warm_start)));

    std::vector<std::string> argv;
    SolutionFormat format = cfg.solution_format;
    if (cfg.adapter == SolverAdapter::HighsCli) {
        std::ostringstream opts;
        opts << "threads = " << cfg.threads << "\n";
        if (cfg.mip_gap >= 0) opts << "mip_rel_gap = " << num(cfg.mip_gap) << "\n";
        write_file(options, opts.str());
        argv = highs_argv(cfg, lp, sol, options, warm, have_warm);
        format = SolutionFormat::HighsStyle;
    } else {
        argv = template_argv(cfg, lp, sol, warm, have_warm);
    }

    // The solver enforces time_limit_s itself; the kill deadline adds slack
    // for startup and solution writing so it only fires on a genuine hang.
    const double deadline = cfg.time_limit_s + std::max(30.0, 0.25 * cfg.time_limit_s);
    RunResult run = run_process(argv, log, deadline);

    SolveOutcome outcome;
    outcome.wall_time_s = run.wall_s;
    outcome.solver_log_path = log.string();

    auto fail = [&](const std::string& message) {
        outcome.status = SolveStatus::Error;
        outcome.message = message + " (log: " + log.string() + ")";
        outcome.assignment.clear();
        return outcome;  // workspace retained for inspection
    };

    if (run.launch_failed) return fail("solver failed to launch");
    if (run.timed_out) return fail("solver hung past its kill deadline and was terminated");

    const std::string sol_text = read_file(sol);
    if (sol_text.empty()) {
        if (run.exit_code != 0)
            return fail("solver exited with code " + std::to_string(run.exit_code) +
                        " and wrote no solution file");
        return fail("solver wrote no solution file");
    }

    try {
        SolveOutcome parsed = parse_solution(format, sol_text, model);
        parsed.wall_time_s = outcome.wall_time_s;
        parsed.solver_log_path = outcome.solver_log_path;
        outcome = parsed;
    } catch (const ParseError& e) {
        return fail(std::string("unreadable solution file: ") + e.what());
    }

    if (outcome.status != SolveStatus::Error && !cfg.keep_workspace) {
        std::error_code ec;
        fs::remove_all(dir, ec);  // best effort; leftover files are harmless
        outcome.solver_log_path.clear();
    }
    return outcome;
}

}  // namespace ocf
