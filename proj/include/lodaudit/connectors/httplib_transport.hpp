#pragma once

// cpp-httplib backed transport (http for fixture endpoints, https for the
// live services). Kept in its own header so parser-only consumers avoid the
// socket headers.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "lodaudit/connectors/http.hpp"

namespace lodaudit::net {

class HttplibTransport : public Transport {
public:
    explicit HttplibTransport(std::chrono::seconds timeout = std::chrono::seconds(30))
        : timeout_(timeout) {}

    HttpResponse fetch(const HttpRequest& request) override {
        UrlParts parts = split_url(request.url);
        if (parts.scheme != "http" && parts.scheme != "https")
            throw AuditError("bad-url",
                             "transport supports http(s):// endpoints, got: " + request.url);
        httplib::Client client(parts.scheme + "://" + parts.host + ":" +
                               std::to_string(parts.port));
        client.set_connection_timeout(timeout_.count(), 0);
        client.set_read_timeout(timeout_.count(), 0);
        httplib::Headers headers;
        if (!request.accept.empty()) headers.emplace("Accept", request.accept);
        httplib::Result res =
            request.method == "POST"
                ? client.Post(parts.target, headers, request.body, request.content_type)
                : client.Get(parts.target, headers);
        if (!res) return HttpResponse{0, "transport error: " + httplib::to_string(res.error())};
        return HttpResponse{res->status, res->body};
    }

private:
    std::chrono::seconds timeout_;
};

}  // namespace lodaudit::net
