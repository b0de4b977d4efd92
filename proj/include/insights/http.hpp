#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace insights::http {

using Headers = std::multimap<std::string, std::string>;

struct Response {
    int status = 0;
    std::string body;
};

/// Connection-level failure (DNS, refused, timeout). HTTP error statuses are
/// not exceptions; they come back in Response::status.
class TransportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Minimal blocking HTTP client surface. Implementations must be safe to call
/// from several threads at once.
class Transport {
public:
    virtual ~Transport() = default;
    virtual Response get(const std::string& url, const Headers& headers) = 0;
    virtual Response post(const std::string& url, const std::string& body,
                          const std::string& content_type, const Headers& headers) = 0;
};

/// Real network transport over cpp-httplib. https requires the build to have
/// found OpenSSL.
std::unique_ptr<Transport> make_default_transport(std::chrono::milliseconds timeout);

struct Url {
    std::string origin; // scheme://host[:port]
    std::string path;   // starts with '/'
};

/// Splits an absolute http(s) URL. Throws TransportError on anything else.
Url split_url(const std::string& url);

/// `base` joined with `path` using exactly one '/' between them. Absolute
/// `path` URLs are returned unchanged.
std::string join_url(const std::string& base, const std::string& path);

} // namespace insights::http
