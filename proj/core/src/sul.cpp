#include "pacsafe/sul.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "pacsafe/errors.hpp"

namespace pacsafe {

bool SystemUnderLearning::is_safe(std::span<const SymbolId> seq) {
  const std::size_t size = input_alphabet().size();
  if (size == 0) throw ValidationError("system has an empty input alphabet");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] >= size) {
      throw ValidationError("input symbol at position " + std::to_string(i + 1) + " is not in the system's alphabet");
    }
  }
  bool verdict = answer(seq);
  queries_.fetch_add(1, std::memory_order_relaxed);
  return verdict;
}

bool MachineSul::answer(std::span<const SymbolId> seq) {
  return machine_.is_safe_state(machine_.run(machine_.initial(), seq));
}

InputSequence random_input(const SystemUnderLearning& sul, std::size_t n, Rng& rng) {
  const std::size_t size = sul.input_alphabet().size();
  if (size == 0) throw ValidationError("system has an empty input alphabet");
  if (n < 1) throw ValidationError("horizon must be at least 1");
  std::uniform_int_distribution<SymbolId> pick(0, static_cast<SymbolId>(size - 1));
  InputSequence seq(n);
  for (auto& s : seq) s = pick(rng);
  return seq;
}

// ---------------------------------------------------------------------------

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

class ProcessChannel final : public LineChannel {
 public:
  ProcessChannel(pid_t pid, int read_fd, int write_fd) : pid_(pid), io_(read_fd, write_fd) {}
  ~ProcessChannel() override {
    ::kill(pid_, SIGTERM);
    int status = 0;
    ::waitpid(pid_, &status, 0);
  }

  void write_line(std::string_view line) override { io_.write_line(line); }
  std::string read_line(std::chrono::milliseconds timeout) override { return io_.read_line(timeout); }

 private:
  pid_t pid_;
  FdChannel io_;
};

}  // namespace

FdChannel::FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) { ignore_sigpipe(); }

FdChannel::~FdChannel() {
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  if (read_fd_ >= 0) ::close(read_fd_);
}

void FdChannel::write_line(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::write(write_fd_, data.data() + sent, data.size() - sent);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("write failed"));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string FdChannel::read_line(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw TimeoutError("timed out waiting for a reply");
    pollfd pfd{read_fd_, POLLIN, 0};
    int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("poll failed"));
    }
    if (ready == 0) throw TimeoutError("timed out waiting for a reply");
    char chunk[4096];
    ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("read failed"));
    }
    if (n == 0) throw TransportError("connection closed by peer");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::unique_ptr<LineChannel> spawn_process(const std::string& command) {
  ignore_sigpipe();
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) throw TransportError(errno_text("pipe failed"));
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError(errno_text("pipe failed"));
  }
  pid_t pid = ::fork();
  if (pid < 0) throw TransportError(errno_text("fork failed"));
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::make_unique<ProcessChannel>(pid, from_child[0], to_child[1]);
}

std::unique_ptr<LineChannel> connect_tcp(const std::string& address, std::chrono::milliseconds timeout) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos) throw ValidationError("endpoint must be host:port, got '" + address + "'");
  std::string host = address.substr(0, colon);
  std::string port = address.substr(colon + 1);

  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (int rc = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &found); rc != 0) {
    throw TransportError("cannot resolve '" + address + "': " + ::gai_strerror(rc));
  }
  std::unique_ptr<addrinfo, decltype(&::freeaddrinfo)> guard(found, &::freeaddrinfo);

  for (addrinfo* ai = found; ai != nullptr; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC | SOCK_NONBLOCK, ai->ai_protocol);
    if (fd < 0) continue;
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      pollfd pfd{fd, POLLOUT, 0};
      if (::poll(&pfd, 1, static_cast<int>(timeout.count())) == 1) {
        int err = 0;
        socklen_t len = sizeof err;
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        rc = err == 0 ? 0 : -1;
      }
    }
    if (rc == 0) {
      ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) & ~O_NONBLOCK);
      return std::make_unique<FdChannel>(fd, fd);
    }
    ::close(fd);
  }
  throw TransportError("cannot connect to '" + address + "'");
}

// ---------------------------------------------------------------------------

void BlackBoxConfig::validate() const {
  if (endpoint.empty()) throw ValidationError("black-box endpoint is empty");
  if (timeout.count() <= 0) throw ValidationError("black-box timeout must be positive");
  if (unsafe_outputs.empty()) throw ValidationError("black-box systems need at least one unsafe output token");
}

BlackBoxSul::BlackBoxSul(BlackBoxConfig config)
    : BlackBoxSul(config, [config]() -> std::unique_ptr<LineChannel> {
        if (config.transport == BlackBoxConfig::Transport::Tcp) return connect_tcp(config.endpoint, config.timeout);
        return spawn_process(config.endpoint);
      }) {}

BlackBoxSul::BlackBoxSul(BlackBoxConfig config, Connector connector)
    : config_(std::move(config)), connector_(std::move(connector)) {
  config_.validate();
  for (unsigned attempt = 0;; ++attempt) {
    try {
      channel_ = connector_();
      auto words = split_words(request("ALPHABET"));
      if (words.empty() || words.front() != "OK" || words.size() < 2) {
        throw TransportError("malformed ALPHABET reply");
      }
      alphabet_ = Alphabet(std::vector<std::string>(words.begin() + 1, words.end()));
      return;
    } catch (const TransportError&) {
      channel_.reset();
      if (attempt >= config_.max_retries) throw;
    }
  }
}

std::string BlackBoxSul::request(std::string_view command) {
  channel_->write_line(command);
  return channel_->read_line(config_.timeout);
}

void BlackBoxSul::reconnect() {
  channel_.reset();
  channel_ = connector_();
  ++reconnects_;
}

bool BlackBoxSul::run_once(std::span<const SymbolId> seq) {
  if (request("RESET") != "OK") throw TransportError("RESET not acknowledged");
  std::string last_output;
  for (SymbolId s : seq) {
    auto words = split_words(request("STEP " + alphabet_.name(s)));
    if (words.size() != 2 || words[0] != "OUT") throw TransportError("malformed STEP reply");
    last_output = words[1];
  }
  return !config_.unsafe_outputs.contains(last_output);
}

bool BlackBoxSul::answer(std::span<const SymbolId> seq) {
  for (unsigned attempt = 0;; ++attempt) {
    try {
      if (!channel_) reconnect();
      return run_once(seq);
    } catch (const TransportError& e) {
      channel_.reset();
      if (attempt >= config_.max_retries) {
        throw TransportError(std::string("query failed after ") + std::to_string(attempt + 1) +
                             " attempt(s): " + e.what());
      }
    }
  }
}

// ---------------------------------------------------------------------------

std::string WireSession::handle(std::string_view request) {
  auto words = split_words(request);
  if (words.empty()) return "ERR empty request";
  const std::string& cmd = words.front();
  if (cmd == "ALPHABET" && words.size() == 1) {
    std::string reply = "OK";
    for (const auto& s : machine_.inputs().names()) reply += " " + s;
    return reply;
  }
  if (cmd == "RESET" && words.size() == 1) {
    state_ = machine_.initial();
    return "OK";
  }
  if (cmd == "STEP" && words.size() == 2) {
    auto input = machine_.inputs().find(words[1]);
    if (!input) return "ERR unknown input " + words[1];
    const auto& e = machine_.edge(state_, *input);
    state_ = e.target;
    return "OUT " + machine_.outputs().name(e.output);
  }
  if (cmd == "QUIT") return {};
  return "ERR unknown request";
}

void serve_stream(const MealyMachine& machine, std::istream& in, std::ostream& out) {
  WireSession session(machine);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string reply = session.handle(line);
    if (reply.empty()) break;
    out << reply << '\n' << std::flush;
  }
}

TcpModelServer::TcpModelServer(MealyMachine machine, std::uint16_t port) : machine_(std::move(machine)) {
  ignore_sigpipe();
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw TransportError(errno_text("socket failed"));
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
    std::string err = errno_text("bind/listen failed");
    ::close(listen_fd_);
    throw TransportError(err);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

TcpModelServer::~TcpModelServer() { stop(); }

void TcpModelServer::stop() {
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

void TcpModelServer::wait() {
  while (!stopping_) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

void TcpModelServer::accept_loop() {
  while (!stopping_) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 50) <= 0) continue;
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void TcpModelServer::serve_connection(int fd) {
  FdChannel channel(fd, fd);
  WireSession session(machine_);
  while (!stopping_) {
    std::string line;
    try {
      line = channel.read_line(std::chrono::milliseconds(100));
    } catch (const TimeoutError&) {
      continue;
    } catch (const TransportError&) {
      return;
    }
    std::string reply = session.handle(line);
    if (reply.empty()) return;
    try {
      channel.write_line(reply);
    } catch (const TransportError&) {
      return;
    }
  }
}

}  // namespace pacsafe
