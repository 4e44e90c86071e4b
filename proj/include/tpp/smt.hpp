#ifndef TPP_SMT_HPP
#define TPP_SMT_HPP

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tpp/encoding.hpp"
#include "tpp/formula.hpp"
#include "tpp/sexpr.hpp"

// SMT-LIB2 emission, external solver process handling and model read-back.
// The solver is a configured command line (one-shot per call), not a linked
// library; anything speaking SMT-LIB2 text works.

namespace tpp {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmittedScript {
  std::string text;
  std::vector<std::string> decls;  // declared variable names, sorted
};

inline const char* sort_name(Sort s) {
  switch (s) {
    case Sort::Bool: return "Bool";
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
  }
  return "?";
}

// Deterministic script: set-logic, declarations sorted by name, assertions
// in construction order (family comments kept), check-sat, get-model.
inline EmittedScript emit_smtlib(const FormulaManager& m, const Encoding& enc) {
  EmittedScript out;
  std::ostringstream os;
  os << "(set-logic " << (m.nonlinear() ? "QF_NIRA" : "QF_LIRA") << ")\n";
  std::vector<std::pair<std::string, Sort>> decls;
  for (size_t v = 0; v < m.var_names().size(); ++v)
    decls.emplace_back(m.var_names()[v], m.var_sort((int)v));
  std::sort(decls.begin(), decls.end());
  for (const auto& [name, sort] : decls) {
    os << "(declare-fun " << name << " () " << sort_name(sort) << ")\n";
    out.decls.push_back(name);
  }
  for (const auto& [family, formulas] : enc.families) {
    if (formulas.empty()) continue;
    os << "; " << family << "\n";
    for (Formula f : formulas) {
      std::string s;
      print_smt(s, m, f);
      os << "(assert " << s << ")\n";
    }
  }
  os << "(check-sat)\n(get-model)\n";
  out.text = os.str();
  return out;
}

// ---------------------------------------------------------------------------
// External process

struct ProcessResult {
  std::string out, err;
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string spawn_error;
};

// Runs argv with stdout/stderr captured; kills the process after timeout_ms
// (0 = no limit). exec failures are reported through a CLOEXEC status pipe.
inline ProcessResult run_process(const std::vector<std::string>& argv, long timeout_ms) {
  ProcessResult res;
  int outp[2], errp[2], statp[2];
  if (pipe(outp) || pipe(errp) || pipe(statp)) throw SolverError("pipe() failed");
  fcntl(statp[1], F_SETFD, FD_CLOEXEC);
  pid_t pid = fork();
  if (pid < 0) throw SolverError("fork() failed");
  if (pid == 0) {
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, 0);
    dup2(outp[1], 1);
    dup2(errp[1], 2);
    close(outp[0]); close(outp[1]);
    close(errp[0]); close(errp[1]);
    close(statp[0]);
    std::vector<char*> cargv;
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);
    execvp(cargv[0], cargv.data());
    int err = errno;
    ssize_t ignored = write(statp[1], &err, sizeof err);
    (void)ignored;
    _exit(127);
  }
  close(outp[1]);
  close(errp[1]);
  close(statp[1]);
  auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  struct Stream {
    int fd;
    std::string* sink;
    bool open = true;
  };
  int exec_errno = 0;
  std::string statbuf;
  Stream streams[3] = {{outp[0], &res.out}, {errp[0], &res.err}, {statp[0], &statbuf}};
  bool killed = false;
  while (streams[0].open || streams[1].open || streams[2].open) {
    pollfd fds[3];
    int n = 0;
    for (auto& s : streams)
      if (s.open) fds[n++] = {s.fd, POLLIN, 0};
    long wait_ms = -1;
    if (timeout_ms > 0 && !killed) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                      deadline - std::chrono::steady_clock::now())
                      .count();
      wait_ms = left < 0 ? 0 : left;
    }
    int rc = poll(fds, n, (int)wait_ms);
    if (rc == 0 && !killed && timeout_ms > 0) {
      kill(pid, SIGKILL);
      killed = true;
      res.timed_out = true;
      continue;
    }
    for (int k = 0; k < n; ++k) {
      if (!(fds[k].revents & (POLLIN | POLLHUP))) continue;
      char buf[4096];
      ssize_t got = read(fds[k].fd, buf, sizeof buf);
      for (auto& s : streams) {
        if (s.fd != fds[k].fd) continue;
        if (got > 0)
          s.sink->append(buf, (size_t)got);
        else {
          close(s.fd);
          s.open = false;
        }
      }
    }
  }
  if (statbuf.size() >= sizeof exec_errno) {
    memcpy(&exec_errno, statbuf.data(), sizeof exec_errno);
    res.spawn_failed = true;
    res.spawn_error = strerror(exec_errno);
  }
  int status = 0;
  waitpid(pid, &status, 0);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -WTERMSIG(status);
  return res;
}

// ---------------------------------------------------------------------------
// Models

struct Model {
  std::map<std::string, FormulaManager::Value> values;

  bool has(const std::string& name) const { return values.count(name) != 0; }
  bool get_bool(const std::string& name) const { return std::get<bool>(values.at(name)); }
  const Rat& get_rat(const std::string& name) const { return std::get<Rat>(values.at(name)); }
};

namespace detail {

inline Rat parse_model_number(const Sexpr& s) {
  if (s.is_atom) {
    auto r = parse_rat(s.atom);
    if (!r) throw SolverError("malformed model output: bad numeral " + s.atom);
    return *r;
  }
  const std::string op = s.head();
  if (op == "-" && s.size() == 2) return -parse_model_number(s[1]);
  if (op == "/" && s.size() == 3) {
    Rat den = parse_model_number(s[2]);
    if (den == 0) throw SolverError("malformed model output: division by zero");
    return parse_model_number(s[1]) / den;
  }
  if (op == "to_real" && s.size() == 2) return parse_model_number(s[1]);
  throw SolverError("malformed model output: unsupported value term");
}

}  // namespace detail

// Accepts both "(model (define-fun ...))" and the bare "((define-fun ...))".
inline Model parse_model(const std::vector<Sexpr>& forms) {
  Model model;
  for (const auto& top : forms) {
    if (top.is_atom) continue;
    size_t from = 0;
    if (top.size() > 0 && top[0].is_atom && top[0].atom == "model") from = 1;
    for (size_t i = from; i < top.size(); ++i) {
      const Sexpr& df = top[i];
      if (df.head() != "define-fun" || df.size() < 5) continue;
      const std::string& name = df[1].atom;
      const Sexpr& sort = df[3];
      const Sexpr& value = df[4];
      if (sort.is_atom && sort.atom == "Bool") {
        if (!value.is_atom) throw SolverError("malformed model output: bad boolean");
        model.values[name] = value.atom == "true";
      } else {
        model.values[name] = detail::parse_model_number(value);
      }
    }
  }
  return model;
}

struct SmtResult {
  enum Status { Sat, Unsat, Unknown } status = Unknown;
  Model model;
  std::string reason;  // for Unknown
};

struct SmtOptions {
  // Command line prefix; the script path is appended as the last argument.
  std::string command = "z3";
  long timeout_ms = 0;  // 0 = unlimited
  // When set, the script is written here (and kept); otherwise a temp file
  // is used and removed.
  std::string dump_path;
};

inline std::string default_solver_command() {
  const char* env = std::getenv("TPP_SMT_SOLVER");
  return env && *env ? env : "z3";
}

inline std::vector<std::string> split_command(const std::string& cmd) {
  std::vector<std::string> parts;
  std::istringstream is(cmd);
  std::string tok;
  while (is >> tok) parts.push_back(tok);
  if (parts.empty()) throw SolverError("empty solver command");
  return parts;
}

// One-shot satisfiability check of an emitted script. Timeouts map to
// Unknown; missing binary, crash and malformed model are distinct errors.
inline SmtResult check(const EmittedScript& script, const SmtOptions& opts) {
  namespace fs = std::filesystem;
  fs::path path;
  bool keep = !opts.dump_path.empty();
  if (keep) {
    path = opts.dump_path;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
  } else {
    path = fs::temp_directory_path() /
           ("tpp_" + std::to_string(getpid()) + "_" +
            std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()) +
            ".smt2");
  }
  {
    std::ofstream of(path);
    if (!of) throw SolverError("cannot write SMT script to " + path.string());
    of << script.text;
  }
  std::vector<std::string> argv = split_command(opts.command);
  argv.push_back(path.string());
  ProcessResult pr = run_process(argv, opts.timeout_ms);
  if (!keep) fs::remove(path);
  if (pr.spawn_failed)
    throw SolverError("solver binary not found or not executable: " + argv[0] + " (" +
                      pr.spawn_error + ")");
  if (pr.timed_out) return {SmtResult::Unknown, {}, "timeout"};
  std::istringstream head(pr.out);
  std::string verdict;
  head >> verdict;
  SmtResult res;
  if (verdict == "sat") {
    res.status = SmtResult::Sat;
    std::string rest = pr.out.substr(pr.out.find("sat") + 3);
    res.model = parse_model(parse_sexprs(rest));
    for (const auto& name : script.decls)
      if (!res.model.has(name))
        throw SolverError("malformed model output: missing variable " + name);
  } else if (verdict == "unsat") {
    res.status = SmtResult::Unsat;
  } else if (verdict == "unknown" || verdict == "timeout") {
    res.status = SmtResult::Unknown;
    res.reason = verdict;
  } else {
    throw SolverError("solver crash or unparseable output (exit " +
                      std::to_string(pr.exit_code) + "): " +
                      (pr.err.empty() ? pr.out.substr(0, 200) : pr.err.substr(0, 200)));
  }
  return res;
}

// Exact re-evaluation of every assertion under the returned model; guards
// against printer/parser drift. Throws on any falsified assertion.
inline void verify_model(const FormulaManager& m, const Encoding& enc, const Model& model) {
  std::vector<FormulaManager::Value> asg;
  asg.reserve(m.var_names().size());
  for (size_t v = 0; v < m.var_names().size(); ++v) {
    const std::string& name = m.var_names()[v];
    auto it = model.values.find(name);
    if (it == model.values.end())
      throw SolverError("malformed model output: missing variable " + name);
    asg.push_back(it->second);
  }
  for (const auto& [family, formulas] : enc.families)
    for (Formula f : formulas) {
      auto val = m.eval(f, asg);
      if (!std::get<bool>(val))
        throw SolverError("model fails re-evaluation of a " + family + " assertion");
    }
}

}  // namespace tpp

#endif  // TPP_SMT_HPP
