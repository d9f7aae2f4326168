#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/gesture.hpp"
#include "core/session.hpp"
#include "core/sessionlog.hpp"
#include "core/wire.hpp"

namespace mlink::udp {

// IPv4 UDP endpoints; one wire frame per datagram. Loss, duplication, and
// reordering of the real network surface through the same counters the
// simulator feeds.
struct Endpoint {
  std::string host = "127.0.0.1";
  uint16_t port = 0;  // 0 = ephemeral bind
};

Status parse_endpoint(const std::string& text, Endpoint& out);  // "host:port"

struct ControllerParams {
  uint32_t frames = 1000;
  double rate_hz = 10;
  uint32_t session_id = 1;
  wire::SessionKey key{};
  std::vector<wire::MotionFrame> samples;  // cycled when shorter than frames
  int64_t drain_ms = 500;  // listen window for in-flight haptics after the last send
};

// Sends `frames` paced by the monotonic clock, stamping records from the
// system clock in microseconds, and collects haptic replies. Returns the
// controller-side log; `bound` reports the actual local port.
Status run_controller(const Endpoint& bind_ep, const Endpoint& peer, const ControllerParams& p,
                      session::SessionLog& out_log, uint16_t* bound = nullptr,
                      std::string* error = nullptr);

struct HostParams {
  uint32_t session_id = 1;
  wire::SessionKey key{};
  gesture::DetectorConfig detector{};
  float haptic_intensity = 1.0f;
  float haptic_sharpness = 1.0f;
  uint16_t haptic_duration_ms = 20;
  double rate_hz = 10;          // informational, stamped into the log
  uint32_t expect_frames = 0;   // stop once this many frames arrived (0 = idle rule only)
  int64_t idle_timeout_ms = 2000;     // stop after silence once traffic has started
  int64_t startup_timeout_ms = 30000;  // give up if nothing ever arrives
  // Called once the socket is bound, before the receive loop; the safe
  // rendezvous point when the host runs on its own thread.
  std::function<void(uint16_t port)> on_bound;
};

// Serves one session: decodes motion frames, answers detections with haptic
// triggers to the datagram's source address, stops on the frame-count or
// idle rule. Returns the host-side log.
Status run_host(const Endpoint& bind_ep, const HostParams& p, session::SessionLog& out_log,
                uint16_t* bound = nullptr, uint64_t* actions = nullptr,
                std::string* error = nullptr);

}  // namespace mlink::udp
