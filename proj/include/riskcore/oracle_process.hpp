// Copyright 2026 The riskcore Authors.
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

#ifndef RISKCORE_ORACLE_PROCESS_HPP_
#define RISKCORE_ORACLE_PROCESS_HPP_

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "riskcore/error.hpp"
#include "riskcore/io.hpp"

namespace riskcore {

/// Estimator backed by a child process speaking the line protocol: one
/// whitespace-separated sample per request line on its stdin, one decimal number
/// per response line on its stdout. The command runs under /bin/sh -c.
class OracleProcess {
 public:
  explicit OracleProcess(const std::string& command) : command_(command) {
    std::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    require(::pipe(to_child) == 0 && ::pipe(from_child) == 0, ErrorCode::kOracleFailure,
            "cannot create pipes for oracle");
    pid_ = ::fork();
    require(pid_ >= 0, ErrorCode::kOracleFailure, "cannot fork oracle process");
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      std::_Exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    request_ = ::fdopen(to_child[1], "w");
    response_ = ::fdopen(from_child[0], "r");
    require(request_ != nullptr && response_ != nullptr, ErrorCode::kOracleFailure,
            "cannot open oracle streams");
  }

  OracleProcess(const OracleProcess&) = delete;
  OracleProcess& operator=(const OracleProcess&) = delete;

  ~OracleProcess() {
    if (request_) std::fclose(request_);
    if (response_) std::fclose(response_);
    if (pid_ > 0) {
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
  }

  double operator()(std::span<const double> x) {
    std::string line;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i > 0) line += ' ';
      line += format_double(x[i]);
    }
    line += '\n';
    if (!(std::fputs(line.c_str(), request_) >= 0 && std::fflush(request_) == 0)) {
      fail(ErrorCode::kOracleFailure,
           "oracle '" + command_ + "' stopped reading");
    }
    std::string reply;
    int c;
    while ((c = std::fgetc(response_)) != EOF && c != '\n') reply += static_cast<char>(c);
    if (!(c != EOF || !reply.empty())) {
      fail(ErrorCode::kOracleFailure,
           "oracle '" + command_ + "' closed its output");
    }
    char* end = nullptr;
    const double v = std::strtod(reply.c_str(), &end);
    while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
    if (!(end != reply.c_str() && end && *end == '\0')) {
      fail(ErrorCode::kOracleFailure,
           "oracle reply is not a number: '" + reply + "'");
    }
    return v;
  }

 private:
  std::string command_;
  pid_t pid_ = -1;
  std::FILE* request_ = nullptr;
  std::FILE* response_ = nullptr;
};

}  // namespace riskcore

#endif  // RISKCORE_ORACLE_PROCESS_HPP_
