#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "pacsafe/mealy.hpp"
#include "pacsafe/random.hpp"

namespace pacsafe {

/// A system under learning, reduced to the one question the learner asks:
/// does this input sequence end safe? Answers must be deterministic.
class SystemUnderLearning {
 public:
  virtual ~SystemUnderLearning() = default;

  virtual const Alphabet& input_alphabet() const = 0;

  /// Validates symbols, counts the query, and asks the system.
  bool is_safe(std::span<const SymbolId> seq);

  std::uint64_t query_count() const noexcept { return queries_.load(std::memory_order_relaxed); }

 protected:
  virtual bool answer(std::span<const SymbolId> seq) = 0;

 private:
  std::atomic<std::uint64_t> queries_{0};
};

/// In-process adapter: the verdict is the safe-state label of the final state.
class MachineSul final : public SystemUnderLearning {
 public:
  explicit MachineSul(MealyMachine machine) : machine_(std::move(machine)) {}

  const Alphabet& input_alphabet() const override { return machine_.inputs(); }
  const MealyMachine& machine() const noexcept { return machine_; }

 protected:
  bool answer(std::span<const SymbolId> seq) override;

 private:
  MealyMachine machine_;
};

/// `n` symbols drawn i.i.d. uniformly from the system's alphabet.
InputSequence random_input(const SystemUnderLearning& sul, std::size_t n, Rng& rng);

// ---------------------------------------------------------------------------
// Line transport for black-box systems

class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write_line(std::string_view line) = 0;
  /// Throws TransportError on timeout or end of stream.
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

/// Newline-delimited I/O over a pair of file descriptors (pipes or a socket).
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void write_line(std::string_view line) override;
  std::string read_line(std::chrono::milliseconds timeout) override;

 private:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

/// Runs `command` under /bin/sh and talks to it over its stdin/stdout.
std::unique_ptr<LineChannel> spawn_process(const std::string& command);

/// Connects to `host:port`.
std::unique_ptr<LineChannel> connect_tcp(const std::string& address, std::chrono::milliseconds timeout);

struct BlackBoxConfig {
  enum class Transport { Subprocess, Tcp };

  Transport transport = Transport::Subprocess;
  /// Command line for Subprocess, `host:port` for Tcp.
  std::string endpoint;
  std::set<std::string> unsafe_outputs;
  std::chrono::milliseconds timeout{5000};
  unsigned max_retries = 2;

  void validate() const;
};

/// Black-box adapter speaking the line protocol:
///   ALPHABET -> OK <symbols...>
///   RESET    -> OK
///   STEP <i> -> OUT <output>
/// A sequence is unsafe iff its final output is in `unsafe_outputs`.
class BlackBoxSul final : public SystemUnderLearning {
 public:
  using Connector = std::function<std::unique_ptr<LineChannel>()>;

  explicit BlackBoxSul(BlackBoxConfig config);
  BlackBoxSul(BlackBoxConfig config, Connector connector);

  const Alphabet& input_alphabet() const override { return alphabet_; }
  std::uint64_t reconnects() const noexcept { return reconnects_; }

 protected:
  bool answer(std::span<const SymbolId> seq) override;

 private:
  std::string request(std::string_view command);
  bool run_once(std::span<const SymbolId> seq);
  void reconnect();

  BlackBoxConfig config_;
  Connector connector_;
  std::unique_ptr<LineChannel> channel_;
  Alphabet alphabet_;
  std::uint64_t reconnects_ = 0;
};

// ---------------------------------------------------------------------------
// Reference wire-protocol server for a machine

/// One protocol session; holds the current state.
class WireSession {
 public:
  explicit WireSession(const MealyMachine& machine) : machine_(machine), state_(machine.initial()) {}

  /// Reply line for one request line; empty string on QUIT.
  std::string handle(std::string_view request);

 private:
  const MealyMachine& machine_;
  StateId state_;
};

/// Serves one session over text streams until EOF or QUIT.
void serve_stream(const MealyMachine& machine, std::istream& in, std::ostream& out);

/// Serves sessions on 127.0.0.1, one thread per connection.
class TcpModelServer {
 public:
  /// Port 0 picks a free port.
  explicit TcpModelServer(MealyMachine machine, std::uint16_t port = 0);
  ~TcpModelServer();
  TcpModelServer(const TcpModelServer&) = delete;
  TcpModelServer& operator=(const TcpModelServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::string address() const { return "127.0.0.1:" + std::to_string(port_); }

  void stop();
  /// Blocks until stop() is called from elsewhere.
  void wait();

 private:
  void accept_loop();
  void serve_connection(int fd);

  MealyMachine machine_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

}  // namespace pacsafe
