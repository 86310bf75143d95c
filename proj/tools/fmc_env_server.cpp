// Serves a built-in environment over the bridge protocol, over stdio (for
// child-process pipes) or a single TCP connection.

#include <CLI11.hpp>

#include <cstring>
#include <iostream>
#include <string>

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "fmc/bridge/server.hpp"
#include "fmc/bridge/transport.hpp"
#include "fmc/envs/chain_trap.hpp"
#include "fmc/envs/point_navigator.hpp"
#include "fmc/envs/trap_gridworld.hpp"

namespace {

template <typename F>
int with_builtin(const std::string& name, F&& fn) {
    if (name == "chain_trap") return fn(fmc::envs::ChainTrap{});
    if (name == "trap_gridworld") return fn(fmc::envs::TrapGridworld{});
    if (name == "point_navigator") return fn(fmc::envs::PointNavigator{});
    std::cerr << "unknown environment '" << name << "'\n";
    return 2;
}

int serve_tcp_once(int port, const std::function<void(fmc::bridge::Transport&)>& serve) {
    const int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) {
        std::cerr << "socket failed: " << std::strerror(errno) << "\n";
        return 3;
    }
    const int one = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(listener, 1) != 0) {
        std::cerr << "bind/listen failed on port " << port << ": " << std::strerror(errno) << "\n";
        ::close(listener);
        return 3;
    }
    std::cerr << "listening on 127.0.0.1:" << port << "\n";
    const int conn = ::accept(listener, nullptr, nullptr);
    ::close(listener);
    if (conn < 0) {
        std::cerr << "accept failed: " << std::strerror(errno) << "\n";
        return 3;
    }
    fmc::bridge::FdTransport transport(conn, conn);
    serve(transport);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bridge-protocol server for the built-in environments"};
    std::string env_name = "chain_trap";
    int port = 0;
    app.add_option("--env", env_name, "Environment to serve")->capture_default_str();
    app.add_option("--port", port, "Serve a single TCP connection on 127.0.0.1:PORT (default: stdio)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    return with_builtin(env_name, [&](auto env) {
        fmc::bridge::EnvServer server(std::move(env));
        if (port > 0) {
            return serve_tcp_once(port, [&](fmc::bridge::Transport& t) { server.serve(t); });
        }
        fmc::bridge::StreamTransport stdio(std::cin, std::cout);
        server.serve(stdio);
        return 0;
    });
}
