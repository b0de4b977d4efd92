#include "insights/http.hpp"

#include "insights/text.hpp"

#include <httplib.h>

namespace insights::http {

Url split_url(const std::string& url)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("not an absolute URL: " + url);
    const std::string scheme = text::to_lower_ascii(url.substr(0, scheme_end));
    if (scheme != "http" && scheme != "https") throw TransportError("unsupported scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    Url out;
    if (path_start == std::string::npos) {
        out.origin = url;
        out.path = "/";
    } else {
        out.origin = url.substr(0, path_start);
        out.path = url.substr(path_start);
    }
    if (out.origin.size() <= scheme_end + 3) throw TransportError("missing host: " + url);
    return out;
}

std::string join_url(const std::string& base, const std::string& path)
{
    if (path.find("://") != std::string::npos) return path;
    std::string b = base;
    while (!b.empty() && b.back() == '/') b.pop_back();
    std::size_t i = 0;
    while (i < path.size() && path[i] == '/') ++i;
    return b + "/" + path.substr(i);
}

namespace {

class HttplibTransport final : public Transport {
public:
    explicit HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

    Response get(const std::string& url, const Headers& headers) override
    {
        const Url u = split_url(url);
        try {
            auto client = make_client(u);
            return unwrap(client.Get(u.path, to_httplib(headers)), url);
        } catch (const std::invalid_argument& e) {
            throw TransportError(url + ": " + e.what());
        }
    }

    Response post(const std::string& url, const std::string& body,
                  const std::string& content_type, const Headers& headers) override
    {
        const Url u = split_url(url);
        try {
            auto client = make_client(u);
            return unwrap(client.Post(u.path, to_httplib(headers), body, content_type), url);
        } catch (const std::invalid_argument& e) {
            throw TransportError(url + ": " + e.what());
        }
    }

private:
    httplib::Client make_client(const Url& u) const
    {
        httplib::Client client(u.origin);
        const auto sec = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
        const auto usec = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - sec);
        client.set_connection_timeout(sec.count(), usec.count());
        client.set_read_timeout(sec.count(), usec.count());
        client.set_write_timeout(sec.count(), usec.count());
        client.set_follow_location(true);
        return client;
    }

    static httplib::Headers to_httplib(const Headers& headers)
    {
        return httplib::Headers(headers.begin(), headers.end());
    }

    static Response unwrap(const httplib::Result& result, const std::string& url)
    {
        if (!result) {
            throw TransportError(url + ": " + httplib::to_string(result.error()));
        }
        return Response{result->status, result->body};
    }

    std::chrono::milliseconds timeout_;
};

} // namespace

std::unique_ptr<Transport> make_default_transport(std::chrono::milliseconds timeout)
{
    return std::make_unique<HttplibTransport>(timeout);
}

} // namespace insights::http
