// Copyright 2026 the amredit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Line-oriented external adapter protocol: the adapter command runs as a
// child process; each exchange writes one UTF-8 line to its stdin and reads
// one line back from its stdout, in order. Internal newlines in the payload
// are replaced by spaces before writing. A child that exits early, closes
// its pipes, or returns nonzero is an AdapterError.

#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace amredit {

class AdapterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

inline std::string sanitize_line(const std::string& payload) {
  std::string line = payload;
  for (char& c : line)
    if (c == '\n' || c == '\r') c = ' ';
  return line;
}

}  // namespace detail

class LineProcess {
 public:
  explicit LineProcess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw AdapterError("adapter command is empty");
    detail::ignore_sigpipe_once();

    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) throw AdapterError("pipe failed");
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw AdapterError("pipe failed");
    }

    pid_ = ::fork();
    if (pid_ < 0) throw AdapterError("fork failed");
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      std::vector<char*> args;
      args.reserve(argv.size() + 1);
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      ::execvp(args[0], args.data());
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    stdin_fd_ = to_child[1];
    stdout_fd_ = from_child[0];
    command_ = argv[0];
  }

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  ~LineProcess() {
    close_fds();
    if (pid_ > 0 && !reaped_) {
      ::kill(pid_, SIGTERM);
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
  }

  // One protocol round trip. The returned line has its trailing newline
  // stripped.
  std::string exchange(const std::string& payload) {
    std::string line = detail::sanitize_line(payload);
    line.push_back('\n');
    write_all(line);
    return read_line();
  }

  // Closes the child's stdin and waits; returns the exit code. A child
  // killed by a signal reports 128 + signal.
  int close_and_wait() {
    close_fds();
    if (pid_ <= 0 || reaped_) return exit_code_;
    int status = 0;
    ::waitpid(pid_, &status, 0);
    reaped_ = true;
    if (WIFEXITED(status)) {
      exit_code_ = WEXITSTATUS(status);
    } else if (WIFSIGNALED(status)) {
      exit_code_ = 128 + WTERMSIG(status);
    }
    return exit_code_;
  }

 private:
  void close_fds() {
    if (stdin_fd_ >= 0) {
      ::close(stdin_fd_);
      stdin_fd_ = -1;
    }
    if (stdout_fd_ >= 0) {
      ::close(stdout_fd_);
      stdout_fd_ = -1;
    }
  }

  void write_all(const std::string& data) {
    std::size_t written = 0;
    while (written < data.size()) {
      ssize_t n = ::write(stdin_fd_, data.data() + written, data.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw AdapterError("adapter '" + command_ + "': write failed (" +
                           std::strerror(errno) + ")");
      }
      written += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    std::string line;
    for (;;) {
      auto newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      char chunk[4096];
      ssize_t n = ::read(stdout_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw AdapterError("adapter '" + command_ + "': read failed (" +
                           std::strerror(errno) + ")");
      }
      if (n == 0)
        throw AdapterError("adapter '" + command_ +
                           "': closed its output before answering (malformed line count)");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  bool reaped_ = false;
  int exit_code_ = 0;
  std::string buffer_;
  std::string command_;
};

}  // namespace amredit
