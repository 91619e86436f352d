#pragma once

// Bridge to an external DIMACS solver. The instance is written to a temporary
// file whose path is appended to the command; standard output is parsed for
// SAT-competition "s" and "v" lines and any model is checked before use.

#include "kyoto/solver.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace kyoto {

enum class BridgeErrorKind { process, output, verification };

class BridgeError : public Error {
public:
  BridgeError(BridgeErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  [[nodiscard]] BridgeErrorKind kind() const noexcept { return kind_; }

private:
  BridgeErrorKind kind_;
};

struct ExternalSolver {
  std::string command;  // shell command; the instance path is appended

  /// Reads KYOTO_SOLVER; empty command when unset.
  static ExternalSolver from_environment() {
    const char* env = std::getenv("KYOTO_SOLVER");
    return ExternalSolver{env ? env : ""};
  }
};

namespace detail {

class TempFile {
public:
  explicit TempFile(const std::string& contents) {
    std::string templ = (std::filesystem::temp_directory_path() / "kyoto-XXXXXX.cnf").string();
    const int fd = ::mkstemps(templ.data(), 4);
    if (fd < 0)
      throw BridgeError(BridgeErrorKind::process, "cannot create temporary instance file");
    ::close(fd);
    path_ = templ;
    std::ofstream out(path_);
    out << contents;
    if (!out)
      throw BridgeError(BridgeErrorKind::process, "cannot write temporary instance file");
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

}  // namespace detail

/// Parses solver output. Returns the status and, for SAT, the model.
inline std::pair<SolveStatus, Model> parse_solver_output(const std::string& output, int num_vars) {
  std::istringstream in(output);
  std::string line;
  std::optional<SolveStatus> status;
  Model model(num_vars + 1, 0);
  bool terminated = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.rfind("s ", 0) == 0) {
      const std::string s = line.substr(2);
      SolveStatus parsed;
      if (s == "SATISFIABLE")
        parsed = SolveStatus::sat;
      else if (s == "UNSATISFIABLE")
        parsed = SolveStatus::unsat;
      else if (s == "UNKNOWN")
        parsed = SolveStatus::unknown;
      else
        throw BridgeError(BridgeErrorKind::output, "unrecognised status line: " + line);
      if (status && *status != parsed)
        throw BridgeError(BridgeErrorKind::output, "conflicting status lines");
      status = parsed;
    } else if (line.rfind("v ", 0) == 0 || line == "v") {
      std::istringstream vs(line.substr(1));
      for (long long lit; vs >> lit;) {
        if (lit == 0) {
          terminated = true;
          continue;
        }
        if (std::llabs(lit) > num_vars)
          throw BridgeError(BridgeErrorKind::output, "value line names unknown variable " + std::to_string(lit));
        model[std::llabs(lit)] = lit > 0 ? 1 : -1;
      }
      if (!vs.eof())
        throw BridgeError(BridgeErrorKind::output, "malformed value line: " + line);
    }
  }
  if (!status)
    throw BridgeError(BridgeErrorKind::output, "solver printed no status line");
  if (*status == SolveStatus::sat) {
    if (!terminated)
      throw BridgeError(BridgeErrorKind::output, "value lines not terminated by 0");
    // Variables the solver left out are free; fix them to false.
    for (int v = 1; v <= num_vars; ++v)
      if (model[v] == 0)
        model[v] = -1;
  }
  return {*status, std::move(model)};
}

inline SolveOutcome solve_external(const Cnf& cnf, const ExternalSolver& solver) {
  if (solver.command.empty())
    throw BridgeError(BridgeErrorKind::process, "no external solver command configured");
  const auto t0 = std::chrono::steady_clock::now();
  detail::TempFile instance(emit_dimacs(cnf));
  const std::string cmd = solver.command + " " + detail::shell_quote(instance.path()) + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe)
    throw BridgeError(BridgeErrorKind::process, "cannot start solver: " + solver.command);
  std::string output;
  char buf[4096];
  for (std::size_t got; (got = std::fread(buf, 1, sizeof buf, pipe)) > 0;)
    output.append(buf, got);
  const int rc = ::pclose(pipe);
  if (rc == -1 || !WIFEXITED(rc))
    throw BridgeError(BridgeErrorKind::process, "solver terminated abnormally: " + solver.command);
  const int code = WEXITSTATUS(rc);
  // 10 and 20 are the conventional SAT/UNSAT exit codes.
  if (code != 0 && code != 10 && code != 20)
    throw BridgeError(BridgeErrorKind::process,
                      "solver exited with code " + std::to_string(code) + ": " + solver.command);

  auto [status, model] = parse_solver_output(output, cnf.num_vars);
  SolveStats stats;
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  switch (status) {
  case SolveStatus::sat:
    if (!model_satisfies(cnf, model))
      throw BridgeError(BridgeErrorKind::verification, "solver model violates the formula");
    return SolveOutcome::sat(cnf, std::move(model), stats);
  case SolveStatus::unsat:
    return SolveOutcome::unsat(stats);
  case SolveStatus::unknown:
    break;
  }
  return SolveOutcome::unknown(stats);
}

inline SolveOutcome solve_external(const std::string& dimacs, const ExternalSolver& solver) {
  return solve_external(parse_dimacs(dimacs), solver);
}

}  // namespace kyoto
