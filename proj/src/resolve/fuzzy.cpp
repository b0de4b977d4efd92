#include "insights/resolve.hpp"

#include "insights/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace insights::resolve {

Score Score::from_value(double v)
{
    const double clamped = std::clamp(v, 0.0, 100.0);
    return Score(static_cast<std::int32_t>(std::floor(clamped * 100.0 + 0.5)));
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b)
{
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + cost});
            diag = up;
        }
    }
    return row[b.size()];
}

namespace {

Score ratio_score(std::string_view a, std::string_view b)
{
    const std::u32string ua = text::to_u32(a);
    const std::u32string ub = text::to_u32(b);
    const std::uint64_t longest = std::max(ua.size(), ub.size());
    if (longest == 0) return Score::from_hundredths(10000);
    const std::uint64_t dist = levenshtein(ua, ub);
    // round-half-up(10000 * (longest - dist) / longest) in integers
    const std::uint64_t num = 10000 * (longest - dist);
    auto h = static_cast<std::int32_t>((2 * num + longest) / (2 * longest));
    // Only identical strings may score a perfect 100.
    if (dist > 0 && h == 10000) h = 9999;
    return Score::from_hundredths(h);
}

std::vector<std::string> tokens(std::string_view s)
{
    std::vector<std::string> out;
    for (auto& t : text::split(s, ' ')) {
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

std::string concat(const std::string& head, const std::string& tail)
{
    if (head.empty()) return tail;
    if (tail.empty()) return head;
    return head + " " + tail;
}

} // namespace

MatchScore lev_ratio(std::string_view a, std::string_view b)
{
    return MatchScore{ratio_score(a, b), MatchMethod::lev_ratio};
}

MatchScore token_sort_ratio(std::string_view a, std::string_view b)
{
    auto ta = tokens(a);
    auto tb = tokens(b);
    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    return MatchScore{ratio_score(text::join(ta, " "), text::join(tb, " ")), MatchMethod::token_sort};
}

MatchScore token_set_ratio(std::string_view a, std::string_view b)
{
    auto ta = tokens(a);
    auto tb = tokens(b);
    std::sort(ta.begin(), ta.end());
    ta.erase(std::unique(ta.begin(), ta.end()), ta.end());
    std::sort(tb.begin(), tb.end());
    tb.erase(std::unique(tb.begin(), tb.end()), tb.end());

    std::vector<std::string> common, only_a, only_b;
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(common));
    std::set_difference(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(only_a));
    std::set_difference(tb.begin(), tb.end(), ta.begin(), ta.end(), std::back_inserter(only_b));

    const std::string t0 = text::join(common, " ");
    const std::string t1 = concat(t0, text::join(only_a, " "));
    const std::string t2 = concat(t0, text::join(only_b, " "));
    const Score best = std::max({ratio_score(t0, t1), ratio_score(t0, t2), ratio_score(t1, t2)});
    return MatchScore{best, MatchMethod::token_set};
}

} // namespace insights::resolve
