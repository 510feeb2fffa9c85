// Copyright (c) 2026 The itnaug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Drives an external model over a line protocol on its stdin/stdout:
//   request   {"id": ..., "text": ...}
//   response  {"id": ..., "text": ...} or {"id": ..., "error": ...}
// POSIX only.

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "itnaug/domain.hpp"
#include "itnaug/pipeline.hpp"

namespace itnaug {

class SpawnError : public Error {
 public:
  using Error::Error;
};

struct BridgeSpec {
  std::vector<std::string> command;
  std::chrono::milliseconds timeout{10'000};  // per item, from the moment it is sent
  std::size_t max_batch = 64;                  // outstanding requests at most
  bool restart_on_crash = true;

  void validate() const {
    if (command.empty()) throw ValidationError("bridge command is empty");
    if (timeout.count() <= 0) throw ValidationError("bridge timeout must be positive");
    if (max_batch < 1) throw ValidationError("bridge max-batch must be at least 1");
  }
};

inline BridgeSpec bridge_spec_from_json(const json& j) {
  BridgeSpec s;
  try {
    s.command = j.at("command").get<std::vector<std::string>>();
    if (j.contains("timeout-ms")) s.timeout = std::chrono::milliseconds(j.at("timeout-ms").get<std::int64_t>());
    if (j.contains("max-batch")) s.max_batch = j.at("max-batch").get<std::size_t>();
    if (j.contains("restart-on-crash")) s.restart_on_crash = j.at("restart-on-crash").get<bool>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bridge spec: ") + e.what());
  }
  s.validate();
  return s;
}

inline BridgeSpec load_bridge_spec(const std::filesystem::path& path) {
  auto text = detail::read_file(path);
  try {
    return bridge_spec_from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

struct BridgeResult {
  std::string id;
  std::optional<std::string> text;
  std::string error;  // set iff !text
  bool ok() const { return text.has_value(); }
  bool operator==(const BridgeResult&) const = default;
};

namespace detail {

class Child {
 public:
  explicit Child(const std::vector<std::string>& argv) {
    int in[2], out[2], err[2];
    if (::pipe2(in, O_CLOEXEC) || ::pipe2(out, O_CLOEXEC) || ::pipe2(err, O_CLOEXEC))
      throw SpawnError(std::string("pipe: ") + std::strerror(errno));
    pid_ = ::fork();
    if (pid_ < 0) throw SpawnError(std::string("fork: ") + std::strerror(errno));
    if (pid_ == 0) {
      ::dup2(in[0], 0);
      ::dup2(out[1], 1);
      std::vector<char*> args;
      for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
      args.push_back(nullptr);
      ::execvp(args[0], args.data());
      int e = errno;
      [[maybe_unused]] auto n = ::write(err[1], &e, sizeof e);
      ::_exit(127);
    }
    ::close(in[0]);
    ::close(out[1]);
    ::close(err[1]);
    int e = 0;
    auto n = ::read(err[0], &e, sizeof e);
    ::close(err[0]);
    if (n == static_cast<ssize_t>(sizeof e)) {
      ::close(in[1]);
      ::close(out[0]);
      ::waitpid(pid_, nullptr, 0);
      pid_ = -1;
      throw SpawnError("cannot run '" + argv[0] + "': " + std::strerror(e));
    }
    to_ = in[1];
    from_ = out[0];
    ::fcntl(to_, F_SETFL, ::fcntl(to_, F_GETFL) | O_NONBLOCK);
    ::fcntl(from_, F_SETFL, ::fcntl(from_, F_GETFL) | O_NONBLOCK);
  }

  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  ~Child() { stop(); }

  int to() const { return to_; }
  int from() const { return from_; }

  void close_input() {
    if (to_ >= 0) ::close(to_);
    to_ = -1;
  }

  // Closes stdin, waits briefly, then kills.
  void stop() {
    close_input();
    if (from_ >= 0) ::close(from_);
    from_ = -1;
    if (pid_ <= 0) return;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

 private:
  pid_t pid_ = -1;
  int to_ = -1;
  int from_ = -1;
};

inline void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

}  // namespace detail

// One child process; results come back in input order, one per item.
inline std::vector<BridgeResult> run_batch(const std::vector<TextItem>& items, const BridgeSpec& spec) {
  using Clock = std::chrono::steady_clock;
  spec.validate();
  detail::ignore_sigpipe();

  std::vector<BridgeResult> results(items.size());
  std::vector<bool> done(items.size(), false);
  for (std::size_t i = 0; i < items.size(); ++i) results[i].id = items[i].id;
  std::size_t remaining = items.size();
  if (!remaining) return results;

  auto fail = [&](std::size_t i, std::string why) {
    if (done[i]) return;
    done[i] = true;
    results[i].error = std::move(why);
    --remaining;
  };

  std::size_t next = 0;
  std::map<std::string, std::deque<std::size_t>> waiting;  // id -> indices in send order
  std::map<std::size_t, Clock::time_point> deadline;       // index -> when it times out
  int idle_crashes = 0;

  auto child = std::make_unique<detail::Child>(spec.command);
  std::string outbuf, inbuf;

  auto drop_outstanding = [&](const std::string& why) {
    for (auto& [i, _] : deadline) fail(i, why);
    deadline.clear();
    waiting.clear();
    outbuf.clear();
    inbuf.clear();
  };

  auto accept = [&](const std::string& line) {
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      return;  // unattributable; the id will time out
    }
    if (!j.is_object() || !j.contains("id")) return;
    std::string id;
    try {
      id = id_from_json(j.at("id"));
    } catch (const std::exception&) {
      return;
    }
    auto w = waiting.find(id);
    if (w == waiting.end()) return;  // late or unknown
    std::size_t i = w->second.front();
    w->second.pop_front();
    if (w->second.empty()) waiting.erase(w);
    deadline.erase(i);
    if (j.contains("text") && j["text"].is_string()) {
      results[i].text = j["text"].get<std::string>();
      done[i] = true;
      --remaining;
    } else if (j.contains("error")) {
      fail(i, "model error: " + (j["error"].is_string() ? j["error"].get<std::string>() : j["error"].dump()));
    } else {
      fail(i, "malformed response");
    }
  };

  while (remaining) {
    // Fill the window.
    while (next < items.size() && deadline.size() < spec.max_batch && child) {
      json req{{"id", items[next].id}, {"text", items[next].text}};
      outbuf += req.dump() + "\n";
      waiting[items[next].id].push_back(next);
      deadline[next] = Clock::now() + spec.timeout;
      ++next;
    }

    // Everything sent: let models that flush at end of input do so.
    if (child && next == items.size() && outbuf.empty()) child->close_input();

    bool crashed = false;
    if (child) {
      pollfd fds[2] = {{child->from(), POLLIN, 0}, {child->to(), static_cast<short>(outbuf.empty() ? 0 : POLLOUT), 0}};
      int nfds = child->to() >= 0 ? 2 : 1;
      auto now = Clock::now();
      auto wait = std::chrono::milliseconds(50);
      for (auto& [_, d] : deadline)
        wait = std::min(wait, std::max(std::chrono::milliseconds(0),
                                       std::chrono::duration_cast<std::chrono::milliseconds>(d - now) +
                                           std::chrono::milliseconds(1)));
      int rc = ::poll(fds, static_cast<nfds_t>(nfds), static_cast<int>(wait.count()));
      if (rc < 0 && errno != EINTR) throw Error(std::string("poll: ") + std::strerror(errno));

      if (rc > 0 && nfds == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
        ssize_t n = ::write(child->to(), outbuf.data(), outbuf.size());
        if (n > 0) {
          outbuf.erase(0, static_cast<std::size_t>(n));
        } else if (n < 0 && errno != EAGAIN && errno != EINTR) {
          crashed = true;
        }
      }
      if (rc > 0 && (fds[0].revents & (POLLIN | POLLHUP | POLLERR))) {
        char buf[65536];
        for (;;) {
          ssize_t n = ::read(child->from(), buf, sizeof buf);
          if (n > 0) {
            inbuf.append(buf, static_cast<std::size_t>(n));
            continue;
          }
          if (n == 0) crashed = true;
          break;
        }
        std::size_t pos;
        while ((pos = inbuf.find('\n')) != std::string::npos) {
          std::string line = inbuf.substr(0, pos);
          inbuf.erase(0, pos + 1);
          accept(line);
          idle_crashes = 0;
        }
      }
    }

    // Timeouts.
    auto now = Clock::now();
    for (auto it = deadline.begin(); it != deadline.end();) {
      if (it->second <= now) {
        std::size_t i = it->first;
        auto w = waiting.find(items[i].id);
        if (w != waiting.end()) {
          std::erase(w->second, i);
          if (w->second.empty()) waiting.erase(w);
        }
        it = deadline.erase(it);
        fail(i, "timeout");
      } else {
        ++it;
      }
    }

    if (crashed) {
      bool progress = !deadline.empty();
      // After end of input an exit is normal; whatever is unanswered was dropped.
      drop_outstanding(child->to() < 0 && next == items.size() ? "no response" : "model crashed");
      child.reset();
      if (!progress) ++idle_crashes;
      if (spec.restart_on_crash && idle_crashes < 3 && next < items.size()) {
        child = std::make_unique<detail::Child>(spec.command);
      }
    }
    if (!child) {
      for (std::size_t i = next; i < items.size(); ++i) fail(i, "model crashed");
      next = items.size();
    }
    if (child && next == items.size() && deadline.empty() && outbuf.empty()) break;
  }
  return results;
}

// Contiguous shards, one child each; order is preserved.
inline std::vector<BridgeResult> run_parallel(const std::vector<TextItem>& items, const BridgeSpec& spec,
                                              std::size_t jobs) {
  jobs = std::max<std::size_t>(1, std::min(jobs, items.size()));
  if (jobs <= 1) return run_batch(items, spec);
  std::vector<std::vector<TextItem>> shards(jobs);
  std::size_t per = (items.size() + jobs - 1) / jobs;
  for (std::size_t i = 0; i < items.size(); ++i) shards[i / per].push_back(items[i]);
  std::vector<std::vector<BridgeResult>> parts(jobs);
  std::vector<std::exception_ptr> errs(jobs);
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < jobs; ++k)
    pool.emplace_back([&, k] {
      try {
        parts[k] = run_batch(shards[k], spec);
      } catch (...) {
        errs[k] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  std::vector<BridgeResult> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace itnaug
