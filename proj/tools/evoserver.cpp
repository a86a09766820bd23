// REST server for the interactive evolution loop.

#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "shaderevo/rest_api.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Serve the shader evolution REST API"};

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string db_path = "shaderevo.db";
    std::string static_dir;

    app.add_option("--host", host, "Bind address")->capture_default_str();
    app.add_option("--port", port, "Port")->capture_default_str()->check(CLI::Range(1, 65535));
    app.add_option("--db", db_path, "Store database file")->capture_default_str();
    app.add_option("--static-dir", static_dir, "Directory served at / (browser front end)")->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        shaderevo::Store store(db_path);
        shaderevo::Service service(store);
        shaderevo::RestApi api(service);

        httplib::Server server;
        api.mount(server);
        if (!static_dir.empty()) {
            server.set_mount_point("/", static_dir);
        }
        std::cerr << "evoserver: listening on http://" << host << ':' << port << '\n';
        if (!server.listen(host, port)) {
            std::cerr << "evoserver: cannot bind " << host << ':' << port << '\n';
            return 1;
        }
    } catch (const shaderevo::StorageError& e) {
        std::cerr << "evoserver: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
