#include "firstpat/core.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string_view>

namespace firstpat {

namespace {

// lex_rank stays within uint64 for n up to this bound (C(n,3) < 2^63).
constexpr int kMaxRankSize = 2'000'000;

std::uint64_t choose2(std::uint64_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

std::uint64_t choose3(std::uint64_t m) { return m < 3 ? 0 : m * (m - 1) / 2 * (m - 2) / 3; }

void check_rank_size(int n) {
    if (n < 3) throw std::invalid_argument("lex rank: n must be >= 3");
    if (n > kMaxRankSize) throw std::invalid_argument("lex rank: n too large for 64-bit ranks");
}

} // namespace

Triple::Triple(std::int64_t a_, std::int64_t b_, std::int64_t c_) : a(a_), b(b_), c(c_) {
    if (a < 1 || a >= b || b >= c)
        throw std::invalid_argument("Triple: positions must satisfy 1 <= a < b < c");
}

std::strong_ordering lex_compare(const Triple& lhs, const Triple& rhs) {
    return lhs <=> rhs;
}

std::uint64_t triple_count(int n) {
    if (n < 0) throw std::invalid_argument("triple_count: n must be >= 0");
    return choose3(static_cast<std::uint64_t>(n));
}

std::uint64_t lex_rank(const Triple& t, int n) {
    check_rank_size(n);
    if (t.c > n) throw std::invalid_argument("lex_rank: triple out of range for n");
    const auto un = static_cast<std::uint64_t>(n);
    const auto a = static_cast<std::uint64_t>(t.a);
    const auto b = static_cast<std::uint64_t>(t.b);
    const auto c = static_cast<std::uint64_t>(t.c);
    // Triples before {a,b,c}: those with a smaller first entry, then those
    // sharing a with a smaller second entry, then smaller third entries.
    const std::uint64_t first = choose3(un) - choose3(un - a + 1);
    const std::uint64_t second = choose2(un - a) - choose2(un - b + 1);
    return first + second + (c - b - 1);
}

Triple lex_unrank(std::uint64_t rank, int n) {
    check_rank_size(n);
    if (rank >= triple_count(n)) throw std::out_of_range("lex_unrank: rank out of range");
    std::int64_t a = 1;
    while (rank >= choose2(static_cast<std::uint64_t>(n - a))) {
        rank -= choose2(static_cast<std::uint64_t>(n - a));
        ++a;
    }
    std::int64_t b = a + 1;
    while (rank >= static_cast<std::uint64_t>(n - b)) {
        rank -= static_cast<std::uint64_t>(n - b);
        ++b;
    }
    return Triple(a, b, b + 1 + static_cast<std::int64_t>(rank));
}

std::string to_string(const Triple& t) {
    return std::to_string(t.a) + ',' + std::to_string(t.b) + ',' + std::to_string(t.c);
}

std::string compact_string(const Triple& t) {
    if (t.c > 9) throw std::invalid_argument("compact_string: only valid when c <= 9");
    std::string out;
    out += static_cast<char>('0' + t.a);
    out += static_cast<char>('0' + t.b);
    out += static_cast<char>('0' + t.c);
    return out;
}

Triple parse_triple(const std::string& text) {
    const auto parse_int = [](std::string_view sv) {
        std::int64_t value = 0;
        const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), value);
        if (ec != std::errc() || ptr != sv.data() + sv.size())
            throw std::invalid_argument("parse_triple: bad integer '" + std::string(sv) + "'");
        return value;
    };
    if (text.find(',') != std::string::npos) {
        const auto p1 = text.find(',');
        const auto p2 = text.find(',', p1 + 1);
        if (p2 == std::string::npos || text.find(',', p2 + 1) != std::string::npos)
            throw std::invalid_argument("parse_triple: expected a,b,c");
        return Triple(parse_int(std::string_view(text).substr(0, p1)),
                      parse_int(std::string_view(text).substr(p1 + 1, p2 - p1 - 1)),
                      parse_int(std::string_view(text).substr(p2 + 1)));
    }
    if (text.size() == 3 && std::all_of(text.begin(), text.end(),
                                        [](char ch) { return ch >= '1' && ch <= '9'; }))
        return Triple(text[0] - '0', text[1] - '0', text[2] - '0');
    throw std::invalid_argument("parse_triple: expected \"a,b,c\" or compact \"abc\"");
}

Permutation::Permutation(std::vector<int> values) : values_(std::move(values)) {
    const int n = static_cast<int>(values_.size());
    if (n < 1) throw std::invalid_argument("Permutation: size must be >= 1");
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (const int v : values_) {
        if (v < 1 || v > n || seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("Permutation: values must be a rearrangement of 1..n");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int n) {
    if (n < 1) throw std::invalid_argument("Permutation: size must be >= 1");
    std::vector<int> values(static_cast<std::size_t>(n));
    std::iota(values.begin(), values.end(), 1);
    return Permutation(Unchecked{}, std::move(values));
}

int Permutation::operator()(int position) const {
    if (position < 1 || position > size())
        throw std::out_of_range("Permutation: position out of range");
    return values_[static_cast<std::size_t>(position) - 1];
}

std::string to_string(const FirstOccurrence& occurrence) {
    return occurrence ? to_string(*occurrence) : std::string("never");
}

FirstOccurrence first_123_occurrence_scan(std::span<const int> values) {
    const int n = static_cast<int>(values.size());
    for (int a = 0; a + 2 < n; ++a)
        for (int b = a + 1; b + 1 < n; ++b)
            for (int c = b + 1; c < n; ++c)
                if (values[a] < values[b] && values[b] < values[c])
                    return Triple(a + 1, b + 1, c + 1);
    return std::nullopt;
}

FirstOccurrence first_123_occurrence_scan(const Permutation& p) {
    return first_123_occurrence_scan(p.values());
}

namespace detail {

FirstOccurrence FirstPatternDetector::operator()(std::span<const int> values) {
    const int n = static_cast<int>(values.size());
    if (n < 3) return std::nullopt;
    next_greater_.assign(static_cast<std::size_t>(n), -1);
    stack_.clear();
    // next_greater_[i] = earliest position after i holding a larger value.
    for (int i = n - 1; i >= 0; --i) {
        while (!stack_.empty() && values[static_cast<std::size_t>(stack_.back())] <= values[static_cast<std::size_t>(i)])
            stack_.pop_back();
        next_greater_[static_cast<std::size_t>(i)] = stack_.empty() ? -1 : stack_.back();
        stack_.push_back(i);
    }
    // The first triple is the lex-least extendable increasing pair plus the
    // earliest extension; pairs sharing (a,b) are ordered by c already.
    for (int a = 0; a + 2 < n; ++a)
        for (int b = a + 1; b + 1 < n; ++b)
            if (values[static_cast<std::size_t>(a)] < values[static_cast<std::size_t>(b)] &&
                next_greater_[static_cast<std::size_t>(b)] != -1)
                return Triple(a + 1, b + 1, next_greater_[static_cast<std::size_t>(b)] + 1);
    return std::nullopt;
}

} // namespace detail

FirstOccurrence first_123_occurrence(std::span<const int> values) {
    detail::FirstPatternDetector detector;
    return detector(values);
}

FirstOccurrence first_123_occurrence(const Permutation& p) {
    return first_123_occurrence(p.values());
}

std::optional<int> first_prefix_k(std::span<const int> values) {
    const int n = static_cast<int>(values.size());
    // lowest = min prefix value; lowest_second = min value that has some
    // smaller value before it (the cheapest "b" of a future pattern).
    long long lowest = std::numeric_limits<long long>::max();
    long long lowest_second = std::numeric_limits<long long>::max();
    for (int j = 0; j < n; ++j) {
        const long long v = values[static_cast<std::size_t>(j)];
        if (v > lowest_second) return j + 1;
        if (v > lowest) lowest_second = std::min(lowest_second, v);
        lowest = std::min(lowest, v);
    }
    return std::nullopt;
}

std::optional<int> first_prefix_k(const Permutation& p) {
    return first_prefix_k(p.values());
}

} // namespace firstpat
