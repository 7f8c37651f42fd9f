#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace firstpat {

/// Ordered 3-subset {a < b < c} of positions, 1-indexed.
///
/// Triples compare lexicographically on (a, b, c), which is exactly the
/// order on 3-subsets used throughout this library:
///   {1,2,3} < {1,2,4} < ... < {1,2,n} < {1,3,4} < ... < {n-2,n-1,n}.
struct Triple {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    Triple() = default;
    Triple(std::int64_t a_, std::int64_t b_, std::int64_t c_);

    friend auto operator<=>(const Triple&, const Triple&) = default;
};

std::strong_ordering lex_compare(const Triple& lhs, const Triple& rhs);

/// C(n,3).
std::uint64_t triple_count(int n);

/// Bijection between the triples of [n] and 0 .. C(n,3)-1, order-isomorphic
/// to lex_compare: rank({1,2,3}) = 0, rank({n-2,n-1,n}) = C(n,3)-1.
std::uint64_t lex_rank(const Triple& t, int n);
Triple lex_unrank(std::uint64_t rank, int n);

/// "a,b,c" (no spaces).
std::string to_string(const Triple& t);
/// Compact "abc" shorthand; only valid when c <= 9.
std::string compact_string(const Triple& t);
/// Accepts both "a,b,c" and (when all of a,b,c are single digits) "abc".
Triple parse_triple(const std::string& text);

/// A bijection on {1..n}; values are validated on construction.
class Permutation {
public:
    /// values[i] = pi(i+1); must be a rearrangement of 1..n.
    explicit Permutation(std::vector<int> values);

    static Permutation identity(int n);

    int size() const { return static_cast<int>(values_.size()); }
    /// pi(position), 1-indexed.
    int operator()(int position) const;
    std::span<const int> values() const { return values_; }

private:
    struct Unchecked {};
    Permutation(Unchecked, std::vector<int> values) : values_(std::move(values)) {}
    std::vector<int> values_;
};

/// Position of the first 123 pattern; empty = the permutation avoids 123.
using FirstOccurrence = std::optional<Triple>;

std::string to_string(const FirstOccurrence& occurrence);

/// Reference semantics: scan every triple of positions in lex order and
/// return the first {a,b,c} with v[a] < v[b] < v[c]. O(n^3).
FirstOccurrence first_123_occurrence_scan(std::span<const int> values);
FirstOccurrence first_123_occurrence_scan(const Permutation& p);

/// Fast path: the answer is the lex-least increasing pair (a,b) that has
/// some later value above v[b], extended by the earliest such position.
/// Agrees with the scan on every input (differentially tested). O(n^2).
FirstOccurrence first_123_occurrence(std::span<const int> values);
FirstOccurrence first_123_occurrence(const Permutation& p);

/// Smallest k such that the length-k prefix contains a 123 pattern,
/// i.e. min{c : {a,b,c} is an increasing triple}; empty if none. O(n).
std::optional<int> first_prefix_k(std::span<const int> values);
std::optional<int> first_prefix_k(const Permutation& p);

namespace detail {

/// Reusable-scratch detector for hot loops (census, sampling); one instance
/// per worker, no allocation per call after warmup.
class FirstPatternDetector {
public:
    FirstOccurrence operator()(std::span<const int> values);

private:
    std::vector<int> next_greater_;
    std::vector<int> stack_;
};

} // namespace detail

} // namespace firstpat
