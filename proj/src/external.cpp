#include "hypabc/external.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace hypabc {

namespace {

struct ChildOutput {
  int status = 0;
  bool timed_out = false;
  std::string out;
  std::string err;
};

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
  for (auto pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

std::string shell_quote(const std::string& s) {
  return "'" + replace_all(s, "'", "'\\''") + "'";
}

ChildOutput run_shell(const std::string& command, double timeout_s) {
  int out_pipe[2];
  int err_pipe[2];
  if (pipe2(out_pipe, O_CLOEXEC) != 0 || pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw ObjectiveError(std::string("pipe failed: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) throw ObjectiveError(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(out_pipe[1]);
  close(err_pipe[1]);

  ChildOutput result;
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&result.out, &result.err};
  int open_fds = 2;
  char buf[4096];
  while (open_fds > 0) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    if (left <= 0) {
      result.timed_out = true;
      break;
    }
    const int ready = poll(fds, 2, static_cast<int>(std::min<long long>(left, 1000)));
    if (ready < 0 && errno != EINTR) break;
    for (int f = 0; f < 2; ++f) {
      if (fds[f].fd < 0 || !(fds[f].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t n = read(fds[f].fd, buf, sizeof(buf));
      if (n > 0) {
        sinks[f]->append(buf, static_cast<std::size_t>(n));
      } else {
        close(fds[f].fd);
        fds[f].fd = -1;
        --open_fds;
      }
    }
  }
  if (result.timed_out) {
    kill(-pid, SIGKILL);
    kill(pid, SIGKILL);
  }
  for (auto& fd : fds) {
    if (fd.fd >= 0) close(fd.fd);
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.status = status;
  return result;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

ObjectiveHandle external_objective(std::string command_template, double timeout_s) {
  if (command_template.empty()) throw ObjectiveError("external objective needs a command");
  if (!(timeout_s > 0.0)) throw ObjectiveError("external objective timeout must be positive");
  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
  ObjectiveHandle h;
  h.description = "external: " + command_template;
  h.deterministic = false;
  h.evaluate = [command_template, timeout_s, counter](const Assignment& a) {
    const auto path = std::filesystem::temp_directory_path() /
                      ("hypabc-" + std::to_string(getpid()) + "-" +
                       std::to_string(counter->fetch_add(1)) + ".json");
    {
      std::ofstream out(path);
      if (!out) throw ObjectiveError("cannot write " + path.string());
      out << a.to_json().dump() << '\n';
    }
    const auto command = replace_all(command_template, kConfigPlaceholder, shell_quote(path.string()));
    ChildOutput child;
    try {
      child = run_shell(command, timeout_s);
    } catch (...) {
      std::filesystem::remove(path);
      throw;
    }
    std::filesystem::remove(path);

    if (child.timed_out) {
      throw ObjectiveError("external command timed out after " + std::to_string(timeout_s) + " s");
    }
    if (!WIFEXITED(child.status) || WEXITSTATUS(child.status) != 0) {
      const int code = WIFEXITED(child.status) ? WEXITSTATUS(child.status) : -1;
      throw ObjectiveError("external command exited with status " + std::to_string(code) +
                           "; stderr: " + trim(child.err));
    }
    const auto text = trim(child.out);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (text.empty() || used != text.size()) {
      throw ObjectiveError("external command output is not a single number: '" + text + "'");
    }
    return value;
  };
  return h;
}

}  // namespace hypabc
