#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sagin/env.hpp"

namespace sagin {

/// Runs one protocol session over a line stream until EOF or session close.
void serve_stream(const SimConfig& config, std::istream& in, std::ostream& out);

/// Line-protocol TCP server; one thread and one environment per connection.
class TcpServer {
public:
    /// Binds and listens immediately. Port 0 picks an ephemeral port.
    /// Throws std::runtime_error when the address cannot be bound.
    TcpServer(SimConfig config, const std::string& host, std::uint16_t port);
    ~TcpServer();
    TcpServer(const TcpServer&) = delete;
    TcpServer& operator=(const TcpServer&) = delete;

    std::uint16_t port() const { return port_; }
    /// Accept loop; returns after stop().
    void run();
    void stop();

private:
    void session(int fd);

    SimConfig config_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex mu_;
    std::vector<std::thread> workers_;
    std::vector<int> client_fds_;
};

/// Endpoint is "stdio" or "host:port". Blocks until shutdown.
void serve(const SimConfig& config, const std::string& endpoint);

}  // namespace sagin
