#pragma once

#include <memory>
#include <string>
#include <thread>

#include "uipref/service/app.hpp"

namespace httplib {
class Server;
}

namespace uipref::service {

/// HTTP binding for App.
class Server {
public:
    explicit Server(App& app);
    ~Server();

    /// Binds and starts listening on a background thread. Port 0 picks a free
    /// port. Throws a configuration error when the address cannot be bound.
    void start(const std::string& host, int port);
    int port() const noexcept { return port_; }
    void stop();
    /// Blocks until stop() is called from another thread.
    void wait();

private:
    App& app_;
    std::unique_ptr<httplib::Server> http_;
    std::thread thread_;
    int port_ = 0;
};

/// Opens the store named by the config and serves until the process exits.
void serve(const ServiceConfig& config);

}  // namespace uipref::service
