#include <httplib.h>

#include "shaderevo/rest_api.hpp"

namespace shaderevo {

void RestApi::mount(httplib::Server& server) {
    const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        HttpRequest request{req.method, req.path, {}, req.body};
        for (const auto& [key, value] : req.params) {
            request.query.emplace(key, value);
        }
        const auto response = handle(request);
        res.status = response.status;
        res.set_content(response.body, response.content_type);
    };
    const char* pattern = R"(/api/.*)";
    server.Get(pattern, forward);
    server.Post(pattern, forward);
    server.Put(pattern, forward);
    server.Delete(pattern, forward);
}

} // namespace shaderevo
