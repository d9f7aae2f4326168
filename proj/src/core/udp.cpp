#include "core/udp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>

namespace mlink::udp {

namespace {

int64_t system_now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

int64_t mono_now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void set_error(std::string* error, const std::string& what) {
  if (error != nullptr) *error = what + ": " + std::strerror(errno);
}

class Socket {
 public:
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }

  Status open_bound(const Endpoint& ep, std::string* error) {
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) {
      set_error(error, "socket");
      return Status::SocketError;
    }
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(ep.port);
    if (::inet_pton(AF_INET, ep.host.c_str(), &addr.sin_addr) != 1) {
      if (error != nullptr) *error = "bad address: " + ep.host;
      return Status::InvalidArg;
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
      set_error(error, "bind " + ep.host + ":" + std::to_string(ep.port));
      return Status::SocketError;
    }
    return Status::Ok;
  }

  uint16_t local_port() const {
    sockaddr_in addr{};
    socklen_t len = sizeof addr;
    if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) return 0;
    return ntohs(addr.sin_port);
  }

  Status send_to(const sockaddr_in& to, const std::vector<uint8_t>& bytes,
                 std::string* error) {
    const ssize_t n = ::sendto(fd_, bytes.data(), bytes.size(), 0,
                               reinterpret_cast<const sockaddr*>(&to), sizeof to);
    if (n != static_cast<ssize_t>(bytes.size())) {
      set_error(error, "sendto");
      return Status::SocketError;
    }
    return Status::Ok;
  }

  // Waits up to timeout_ms; false on timeout, true with the datagram
  // otherwise. Errors come back as SocketError through st.
  bool recv_with_timeout(int timeout_ms, std::vector<uint8_t>& bytes, sockaddr_in& from,
                         Status& st, std::string* error) {
    st = Status::Ok;
    pollfd pfd{fd_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, timeout_ms);
    if (pr < 0) {
      set_error(error, "poll");
      st = Status::SocketError;
      return false;
    }
    if (pr == 0) return false;
    bytes.resize(2048);
    socklen_t len = sizeof from;
    const ssize_t n = ::recvfrom(fd_, bytes.data(), bytes.size(), 0,
                                 reinterpret_cast<sockaddr*>(&from), &len);
    if (n < 0) {
      set_error(error, "recvfrom");
      st = Status::SocketError;
      return false;
    }
    bytes.resize(static_cast<size_t>(n));
    return true;
  }

  int fd() const { return fd_; }

 private:
  int fd_ = -1;
};

Status resolve(const Endpoint& ep, sockaddr_in& out, std::string* error) {
  out = sockaddr_in{};
  out.sin_family = AF_INET;
  out.sin_port = htons(ep.port);
  if (::inet_pton(AF_INET, ep.host.c_str(), &out.sin_addr) != 1) {
    if (error != nullptr) *error = "bad address: " + ep.host;
    return Status::InvalidArg;
  }
  return Status::Ok;
}

}  // namespace

Status parse_endpoint(const std::string& text, Endpoint& out) {
  const size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    return Status::InvalidArg;
  out.host = text.substr(0, colon);
  char* end = nullptr;
  errno = 0;
  const unsigned long port = std::strtoul(text.c_str() + colon + 1, &end, 10);
  if (errno != 0 || *end != '\0' || port > 65535) return Status::InvalidArg;
  out.port = static_cast<uint16_t>(port);
  return Status::Ok;
}

Status run_controller(const Endpoint& bind_ep, const Endpoint& peer, const ControllerParams& p,
                      session::SessionLog& out_log, uint16_t* bound, std::string* error) {
  if (!(p.rate_hz > 0) || p.samples.empty()) return Status::InvalidArg;

  Socket sock;
  Status st = sock.open_bound(bind_ep, error);
  if (st != Status::Ok) return st;
  if (bound != nullptr) *bound = sock.local_port();

  sockaddr_in peer_addr{};
  st = resolve(peer, peer_addr, error);
  if (st != Status::Ok) return st;

  session::ControllerCore core(p.session_id, p.rate_hz, p.key);
  const auto tick_us = static_cast<int64_t>(std::llround(1e6 / p.rate_hz));
  const int64_t start_us = mono_now_us();

  std::vector<uint8_t> frame_bytes;
  std::vector<uint8_t> in_bytes;
  sockaddr_in from{};

  for (uint32_t i = 0; i < p.frames; ++i) {
    const int64_t due_us = start_us + static_cast<int64_t>(i) * tick_us;
    for (;;) {
      const int64_t wait_us = due_us - mono_now_us();
      if (wait_us <= 0) break;
      // Sleep in short slices so haptic replies are collected while pacing.
      Status rst = Status::Ok;
      const int slice_ms = static_cast<int>(std::min<int64_t>((wait_us + 999) / 1000, 20));
      if (sock.recv_with_timeout(slice_ms, in_bytes, from, rst, error)) {
        core.on_datagram(in_bytes, system_now_us());
      } else if (rst != Status::Ok) {
        return rst;
      }
    }
    st = core.next_frame(p.samples[i % p.samples.size()], system_now_us(), frame_bytes);
    if (st != Status::Ok) return st;
    st = sock.send_to(peer_addr, frame_bytes, error);
    if (st != Status::Ok) return st;
  }

  const int64_t drain_end = mono_now_us() + p.drain_ms * 1000;
  while (mono_now_us() < drain_end) {
    Status rst = Status::Ok;
    if (sock.recv_with_timeout(20, in_bytes, from, rst, error)) {
      core.on_datagram(in_bytes, system_now_us());
    } else if (rst != Status::Ok) {
      return rst;
    }
  }

  out_log = std::move(core.log());
  return Status::Ok;
}

Status run_host(const Endpoint& bind_ep, const HostParams& p, session::SessionLog& out_log,
                uint16_t* bound, uint64_t* actions, std::string* error) {
  Socket sock;
  Status st = sock.open_bound(bind_ep, error);
  if (st != Status::Ok) return st;
  if (bound != nullptr) *bound = sock.local_port();
  if (p.on_bound) p.on_bound(sock.local_port());

  session::HostCore::Config hc;
  hc.session_id = p.session_id;
  hc.key = p.key;
  hc.detector = p.detector;
  hc.haptic_intensity = p.haptic_intensity;
  hc.haptic_sharpness = p.haptic_sharpness;
  hc.haptic_duration_ms = p.haptic_duration_ms;
  session::HostCore core(hc);
  core.log().rate_hz = p.rate_hz;

  std::vector<uint8_t> in_bytes;
  std::vector<uint8_t> reply;
  sockaddr_in from{};
  bool started = false;
  int64_t last_rx_us = mono_now_us();
  const int64_t startup_deadline = mono_now_us() + p.startup_timeout_ms * 1000;

  for (;;) {
    Status rst = Status::Ok;
    if (sock.recv_with_timeout(20, in_bytes, from, rst, error)) {
      started = true;
      last_rx_us = mono_now_us();
      std::optional<session::HostCore::Pending> pending;
      st = core.on_motion(in_bytes, system_now_us(), pending);
      if (st != Status::Ok) return st;
      if (pending) {
        st = core.seal_haptic(*pending, system_now_us(), reply);
        if (st != Status::Ok) return st;
        st = sock.send_to(from, reply, error);
        if (st != Status::Ok) return st;
      }
      if (p.expect_frames > 0 && core.log().counters.received >= p.expect_frames) break;
    } else if (rst != Status::Ok) {
      return rst;
    }
    const int64_t now = mono_now_us();
    if (started) {
      if (now - last_rx_us >= p.idle_timeout_ms * 1000) break;
    } else if (now >= startup_deadline) {
      break;
    }
  }

  if (actions != nullptr) *actions = core.actions();
  out_log = std::move(core.log());
  return Status::Ok;
}

}  // namespace mlink::udp
