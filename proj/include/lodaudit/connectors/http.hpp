#pragma once

// Harvesting transport: pluggable HTTP client, per-host token-bucket rate
// limiting, and a content-addressed raw-response cache. Every response is
// persisted before parsing; offline runs replay the cache and fail loudly on
// a miss.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "lodaudit/core.hpp"
#include "lodaudit/csv.hpp"
#include "lodaudit/sha256.hpp"

namespace lodaudit::net {

struct HttpRequest {
    std::string method = "GET";
    std::string url;
    std::string body;          // POST payload
    std::string content_type;  // POST only
    std::string accept;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse fetch(const HttpRequest& request) = 0;
};

struct UrlParts {
    std::string scheme;
    std::string host;
    int port = 80;
    std::string target;  // path + query
};

inline UrlParts split_url(const std::string& url) {
    UrlParts parts;
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw AuditError("bad-url", "missing scheme in url: " + url);
    parts.scheme = url.substr(0, scheme_end);
    std::size_t host_begin = scheme_end + 3;
    std::size_t path_begin = url.find('/', host_begin);
    std::string authority = url.substr(host_begin, path_begin == std::string::npos
                                                       ? std::string::npos
                                                       : path_begin - host_begin);
    parts.target = path_begin == std::string::npos ? "/" : url.substr(path_begin);
    auto colon = authority.find(':');
    if (colon == std::string::npos) {
        parts.host = authority;
        parts.port = parts.scheme == "https" ? 443 : 80;
    } else {
        parts.host = authority.substr(0, colon);
        parts.port = std::stoi(authority.substr(colon + 1));
    }
    if (parts.host.empty()) throw AuditError("bad-url", "missing host in url: " + url);
    return parts;
}

inline std::string url_encode(std::string_view s) {
    static const char* hexd = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
            c == '-' || c == '_' || c == '.' || c == '~')
            out.push_back(char(c));
        else {
            out.push_back('%');
            out.push_back(hexd[c >> 4]);
            out.push_back(hexd[c & 0xF]);
        }
    }
    return out;
}

// Token bucket per host. Default capacity equals the rate, so short bursts up
// to one second's budget pass through unthrottled.
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_second = 5.0) : rate_(requests_per_second) {}

    void acquire(const std::string& host) {
        using clock = std::chrono::steady_clock;
        std::unique_lock lock(mutex_);
        Bucket& b = buckets_[host];
        auto now = clock::now();
        if (b.last.time_since_epoch().count() == 0) {
            b.last = now;
            b.tokens = rate_;
        }
        double elapsed = std::chrono::duration<double>(now - b.last).count();
        b.tokens = std::min(rate_, b.tokens + elapsed * rate_);
        b.last = now;
        if (b.tokens < 1.0) {
            double wait = (1.0 - b.tokens) / rate_;
            lock.unlock();
            std::this_thread::sleep_for(std::chrono::duration<double>(wait));
            lock.lock();
            Bucket& b2 = buckets_[host];
            b2.tokens = 0.0;
            b2.last = clock::now();
            return;
        }
        b.tokens -= 1.0;
    }

private:
    struct Bucket {
        double tokens = 0.0;
        std::chrono::steady_clock::time_point last{};
    };
    double rate_;
    std::mutex mutex_;
    std::map<std::string, Bucket> buckets_;
};

struct CachedResponse {
    int status = 0;
    std::string body;
    std::int64_t fetched_at = 0;  // unix seconds, recorded at first fetch
};

// One JSON document per request, named by the request hash.
class ResponseCache {
public:
    explicit ResponseCache(std::string dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    static std::string key_of(const HttpRequest& r) {
        return Sha256::hash(r.method + "\n" + r.url + "\n" + r.body);
    }

    std::optional<CachedResponse> get(const HttpRequest& r) const {
        std::filesystem::path p = path_of(r);
        if (!std::filesystem::exists(p)) return std::nullopt;
        nlohmann::json j = nlohmann::json::parse(csv::read_file(p.string()));
        CachedResponse c;
        c.status = j.at("status");
        c.body = j.at("body");
        c.fetched_at = j.at("fetched_at");
        return c;
    }

    void put(const HttpRequest& r, const CachedResponse& c) const {
        nlohmann::json j = {{"request", {{"method", r.method}, {"url", r.url}, {"body", r.body}}},
                            {"status", c.status},
                            {"body", c.body},
                            {"fetched_at", c.fetched_at}};
        csv::write_file(path_of(r).string(), j.dump(2) + "\n");
    }

    const std::string& dir() const { return dir_; }

    // Digest over every cache entry, for the run manifest.
    std::string content_hash() const {
        std::vector<std::string> names;
        for (const auto& e : std::filesystem::directory_iterator(dir_))
            if (e.is_regular_file()) names.push_back(e.path().filename().string());
        std::sort(names.begin(), names.end());
        Sha256 h;
        for (const auto& n : names) {
            h.update(n);
            h.update("\n");
            h.update(csv::read_file((std::filesystem::path(dir_) / n).string()));
        }
        return h.hex_digest();
    }

private:
    std::filesystem::path path_of(const HttpRequest& r) const {
        return std::filesystem::path(dir_) / (key_of(r) + ".json");
    }
    std::string dir_;
};

// Cache-first fetcher. Without a transport (offline) a cache miss is an error.
class CachingFetcher {
public:
    CachingFetcher(std::shared_ptr<Transport> transport, std::string cache_dir,
                   double requests_per_second = 5.0, int max_attempts = 3,
                   std::chrono::milliseconds backoff = std::chrono::milliseconds(200))
        : transport_(std::move(transport)),
          cache_(std::move(cache_dir)),
          limiter_(requests_per_second),
          max_attempts_(max_attempts),
          backoff_(backoff) {}

    const ResponseCache& cache() const { return cache_; }
    bool offline() const { return transport_ == nullptr; }

    CachedResponse fetch(const HttpRequest& request) {
        if (auto hit = cache_.get(request)) return *hit;
        if (!transport_)
            throw AuditError("offline-cache-miss",
                             "offline run, response not cached: " + request.method + " " +
                                 request.url);
        UrlParts parts = split_url(request.url);
        std::string error;
        for (int attempt = 1; attempt <= max_attempts_; ++attempt) {
            limiter_.acquire(parts.host);
            try {
                HttpResponse resp = transport_->fetch(request);
                if (resp.status >= 500) {
                    error = "server returned " + std::to_string(resp.status);
                } else if (resp.status == 0) {
                    error = "connection failed";
                } else {
                    CachedResponse c{resp.status,
                                     std::move(resp.body),
                                     std::chrono::duration_cast<std::chrono::seconds>(
                                         std::chrono::system_clock::now().time_since_epoch())
                                         .count()};
                    cache_.put(request, c);  // raw response persisted before parsing
                    return c;
                }
            } catch (const std::exception& e) {
                error = e.what();
            }
            if (attempt < max_attempts_)
                std::this_thread::sleep_for(backoff_ * attempt);
        }
        throw AuditError("network", request.method + " " + request.url + " failed after " +
                                        std::to_string(max_attempts_) + " attempts: " + error);
    }

private:
    std::shared_ptr<Transport> transport_;
    ResponseCache cache_;
    RateLimiter limiter_;
    int max_attempts_;
    std::chrono::milliseconds backoff_;
};

}  // namespace lodaudit::net
