// SPDX-License-Identifier: Apache-2.0

#include "mugie/harness.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <thread>

#include <nlohmann/json.hpp>

namespace mugie {

namespace {

constexpr std::string_view kFilesPlaceholder = "{files}";

std::size_t count_occurrences(std::string_view s, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string_view::npos;
       pos = s.find(needle, pos + needle.size()))
    ++n;
  return n;
}

std::vector<std::string> split_words(const std::string &text) {
  std::vector<std::string> words;
  std::string cur;
  bool in_word = false;
  char quote = 0;
  for (char c : text) {
    if (quote) {
      if (c == quote)
        quote = 0;
      else
        cur += c;
    } else if (c == '\'' || c == '"') {
      quote = c;
      in_word = true;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (in_word)
        words.push_back(std::move(cur));
      cur.clear();
      in_word = false;
    } else {
      cur += c;
      in_word = true;
    }
  }
  if (quote)
    throw std::invalid_argument("unterminated quote in command template");
  if (in_word)
    words.push_back(std::move(cur));
  return words;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd &) = delete;
  Fd &operator=(const Fd &) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0)
      ::close(fd);
    fd = -1;
  }
};

} // namespace

void validate(const ToolSpec &tool) {
  if (count_occurrences(tool.command_template, kFilesPlaceholder) != 1)
    throw std::invalid_argument("command template must contain {files} exactly once: " +
                                tool.command_template);
  if (!(tool.timeout_seconds > 0))
    throw std::invalid_argument("timeout must be positive");
  if (tool.timeout_confirm_runs < 1)
    throw std::invalid_argument("timeout confirmation runs must be at least 1");
  try {
    std::regex(tool.success_pattern);
    for (const auto &p : tool.failure_patterns)
      std::regex{p};
  } catch (const std::regex_error &e) {
    throw std::invalid_argument(std::string("bad classification pattern: ") + e.what());
  }
}

std::string_view to_string(VerdictKind k) {
  switch (k) {
  case VerdictKind::Verified: return "Verified";
  case VerdictKind::VerificationFailure: return "VerificationFailure";
  case VerdictKind::ToolError: return "ToolError";
  case VerdictKind::Timeout: return "Timeout";
  }
  return "?";
}

std::optional<VerdictKind> parse_verdict_kind(std::string_view text) {
  for (auto k : {VerdictKind::Verified, VerdictKind::VerificationFailure,
                 VerdictKind::ToolError, VerdictKind::Timeout})
    if (to_string(k) == text)
      return k;
  return std::nullopt;
}

VerdictKind classify(const ToolSpec &tool, std::optional<int> exit_code,
                     bool timed_out, const std::string &output) {
  if (timed_out)
    return VerdictKind::Timeout;
  if (exit_code == 0 && std::regex_search(output, std::regex(tool.success_pattern)))
    return VerdictKind::Verified;
  for (const auto &p : tool.failure_patterns)
    if (std::regex_search(output, std::regex(p)))
      return VerdictKind::VerificationFailure;
  return VerdictKind::ToolError;
}

std::vector<std::string> expand_command(const ToolSpec &tool,
                                        const std::vector<std::filesystem::path> &files) {
  if (count_occurrences(tool.command_template, kFilesPlaceholder) != 1)
    throw LaunchError("command template must contain {files} exactly once");
  std::vector<std::string> argv;
  for (auto &word : split_words(tool.command_template)) {
    auto pos = word.find(kFilesPlaceholder);
    if (pos == std::string::npos) {
      argv.push_back(std::move(word));
    } else if (word == kFilesPlaceholder) {
      for (const auto &f : files)
        argv.push_back(f.string());
    } else {
      std::string joined;
      for (std::size_t i = 0; i < files.size(); ++i)
        joined += (i ? " " : "") + files[i].string();
      word.replace(pos, kFilesPlaceholder.size(), joined);
      argv.push_back(std::move(word));
    }
  }
  if (argv.empty())
    throw LaunchError("empty command");
  return argv;
}

Verdict run_one(const ToolSpec &tool, const std::vector<std::filesystem::path> &files) {
  for (const auto &f : files) {
    std::ifstream probe(f);
    if (!probe)
      throw std::runtime_error("cannot read " + f.string());
  }
  std::vector<std::string> args = expand_command(tool, files);
  std::vector<char *> argv;
  for (auto &a : args)
    argv.push_back(a.data());
  argv.push_back(nullptr);

  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0)
    throw LaunchError(std::string("pipe: ") + std::strerror(errno));
  Fd out_read(out_pipe[0]), out_write(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0)
    throw LaunchError(std::string("pipe: ") + std::strerror(errno));
  Fd exec_read(err_pipe[0]), exec_write(err_pipe[1]);

  auto start = Clock::now();
  pid_t pid = ::fork();
  if (pid < 0)
    throw LaunchError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_write.fd, STDOUT_FILENO);
    ::dup2(out_write.fd, STDERR_FILENO);
    ::execvp(argv[0], argv.data());
    int e = errno;
    [[maybe_unused]] auto n = ::write(exec_write.fd, &e, sizeof e);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  out_write.reset();
  exec_write.reset();

  int exec_errno = 0;
  if (::read(exec_read.fd, &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    ::waitpid(pid, nullptr, 0);
    throw LaunchError("cannot execute '" + args.front() +
                      "': " + std::strerror(exec_errno));
  }

  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(tool.timeout_seconds));
  std::string output;
  char buf[4096];
  bool eof = false;
  bool exited = false;
  bool timed_out = false;
  int status = 0;

  while (true) {
    if (::waitpid(pid, &status, WNOHANG) == pid) {
      exited = true;
      break;
    }
    auto now = Clock::now();
    if (now >= deadline) {
      ::kill(-pid, SIGKILL);
      timed_out = true;
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
    wait_ms = std::clamp(wait_ms, 1, 20);
    if (eof) {
      std::this_thread::sleep_for(std::chrono::milliseconds(wait_ms));
      continue;
    }
    pollfd pfd{out_read.fd, POLLIN, 0};
    if (::poll(&pfd, 1, wait_ms) > 0) {
      ssize_t n = ::read(out_read.fd, buf, sizeof buf);
      if (n > 0)
        output.append(buf, static_cast<std::size_t>(n));
      else if (n == 0)
        eof = true;
    }
  }
  double wall = seconds_since(start);
  if (timed_out) {
    ::waitpid(pid, &status, 0);
  } else {
    // Stragglers left in the group (solver subprocesses) go too.
    ::kill(-pid, SIGKILL);
  }
  // Drain whatever is still buffered without blocking on orphans.
  while (!eof) {
    pollfd pfd{out_read.fd, POLLIN, 0};
    if (::poll(&pfd, 1, 50) <= 0)
      break;
    ssize_t n = ::read(out_read.fd, buf, sizeof buf);
    if (n <= 0)
      break;
    output.append(buf, static_cast<std::size_t>(n));
  }

  Verdict v;
  v.wall_time_seconds = wall;
  v.captured_output = std::move(output);
  if (exited) {
    if (WIFEXITED(status))
      v.raw_exit = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
      v.raw_exit = 128 + WTERMSIG(status);
  }
  v.kind = classify(tool, v.raw_exit, timed_out, v.captured_output);
  return v;
}

Verdict run_confirmed(const ToolSpec &tool,
                      const std::vector<std::filesystem::path> &files) {
  Verdict v = run_one(tool, files);
  int runs = 1;
  while (v.kind == VerdictKind::Timeout && runs < tool.timeout_confirm_runs) {
    v = run_one(tool, files);
    ++runs;
  }
  v.runs = runs;
  return v;
}

std::vector<CampaignRow> check_batch(const ToolSpec &tool,
                                     const std::vector<ProgramJob> &jobs,
                                     unsigned workers) {
  std::vector<CampaignRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const ProgramJob &job = jobs[i];
      CampaignRow &row = rows[i];
      row.seed = job.seed;
      row.mutant_id = job.mutant_id;
      row.lineage = job.lineage;
      row.tool = tool.name;
      row.batch = job.batch;
      try {
        row.verdict = run_confirmed(tool, job.files);
      } catch (const std::exception &e) {
        row.launch_error = e.what();
      }
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
  if (workers <= 1) {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back(work);
  for (auto &t : pool)
    t.join();
  return rows;
}

void write_results(std::ostream &out, const std::vector<CampaignRow> &rows) {
  for (const auto &row : rows) {
    if (!row.verdict)
      continue;
    nlohmann::ordered_json j;
    j["seed"] = row.seed;
    j["mutant_id"] = row.mutant_id;
    j["lineage"] = row.lineage;
    j["tool"] = row.tool;
    j["batch"] = row.batch;
    j["kind"] = std::string(to_string(row.verdict->kind));
    j["wall_time_seconds"] = row.verdict->wall_time_seconds;
    if (row.verdict->raw_exit)
      j["raw_exit"] = *row.verdict->raw_exit;
    else
      j["raw_exit"] = "timeout";
    out << j.dump() << '\n';
  }
}

std::vector<CampaignRow> read_results(std::istream &in) {
  std::vector<CampaignRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    auto fail = [&](const std::string &why) {
      throw MalformedResults("results line " + std::to_string(lineno) + ": " + why);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      fail(e.what());
    }
    if (!j.is_object())
      fail("not a JSON object");
    auto str = [&](const char *key) -> std::string {
      if (!j.contains(key) || !j[key].is_string())
        fail(std::string("missing string field '") + key + "'");
      return j[key].get<std::string>();
    };
    CampaignRow row;
    row.seed = str("seed");
    row.mutant_id = str("mutant_id");
    row.lineage = str("lineage");
    row.tool = str("tool");
    row.batch = j.contains("batch") ? str("batch") : std::string(kDefaultBatch);
    auto kind = parse_verdict_kind(str("kind"));
    if (!kind)
      fail("unknown verdict kind");
    Verdict v;
    v.kind = *kind;
    if (!j.contains("wall_time_seconds") || !j["wall_time_seconds"].is_number())
      fail("missing numeric field 'wall_time_seconds'");
    v.wall_time_seconds = j["wall_time_seconds"].get<double>();
    if (!j.contains("raw_exit"))
      fail("missing field 'raw_exit'");
    if (j["raw_exit"].is_number_integer())
      v.raw_exit = j["raw_exit"].get<int>();
    else if (!(j["raw_exit"].is_string() && j["raw_exit"] == "timeout"))
      fail("raw_exit must be an integer or \"timeout\"");
    row.verdict = std::move(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

} // namespace mugie
