#include "sagin/server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <iostream>
#include <stdexcept>

#include "sagin/protocol.hpp"

namespace sagin {

void serve_stream(const SimConfig& config, std::istream& in, std::ostream& out) {
    protocol::Session s(config);
    std::string line;
    while (!s.closed() && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out << s.handle_line(line) << '\n';
        out.flush();
    }
}

namespace {

bool send_all(int fd, const std::string& data) {
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) return false;
        off += static_cast<std::size_t>(n);
    }
    return true;
}

}  // namespace

TcpServer::TcpServer(SimConfig config, const std::string& host, std::uint16_t port)
    : config_(std::move(config)) {
    validate(config_);
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    const std::string h = host == "localhost" ? "127.0.0.1" : host;
    if (::inet_pton(AF_INET, h.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        throw std::runtime_error("invalid IPv4 bind address: " + host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listen_fd_, 16) < 0) {
        const std::string err = std::strerror(errno);
        ::close(listen_fd_);
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port) + ": " + err);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

TcpServer::~TcpServer() {
    stop();
    std::vector<std::thread> workers;
    {
        std::lock_guard lock(mu_);
        workers.swap(workers_);
    }
    for (auto& w : workers) {
        if (w.joinable()) w.join();
    }
}

void TcpServer::run() {
    while (!stopping_) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) continue;
            break;
        }
        std::lock_guard lock(mu_);
        if (stopping_) {
            ::close(fd);
            break;
        }
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        client_fds_.push_back(fd);
        workers_.emplace_back([this, fd] { session(fd); });
    }
}

void TcpServer::stop() {
    if (stopping_.exchange(true)) return;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    std::lock_guard lock(mu_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
}

void TcpServer::session(int fd) {
    protocol::Session s(config_);
    std::string buffer;
    char chunk[4096];
    bool open = true;
    while (open && !s.closed()) {
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) break;
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t pos;
        while (open && !s.closed() && (pos = buffer.find('\n')) != std::string::npos) {
            std::string line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            open = send_all(fd, s.handle_line(line) + "\n");
        }
    }
    std::lock_guard lock(mu_);
    client_fds_.erase(std::remove(client_fds_.begin(), client_fds_.end(), fd), client_fds_.end());
    ::close(fd);
}

void serve(const SimConfig& config, const std::string& endpoint) {
    if (endpoint == "stdio" || endpoint == "-") {
        serve_stream(config, std::cin, std::cout);
        return;
    }
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("bind address must be host:port or stdio");
    const std::string host = endpoint.substr(0, colon);
    const int port = std::stoi(endpoint.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::invalid_argument("port out of range");
    TcpServer server(config, host, static_cast<std::uint16_t>(port));
    std::cerr << "sagin: serving protocol v" << protocol::kVersion << " on " << host << ":" << server.port()
              << std::endl;
    server.run();
}

}  // namespace sagin
