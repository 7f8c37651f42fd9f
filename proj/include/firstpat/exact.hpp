#pragma once

#include "firstpat/core.hpp"
#include "firstpat/rational.hpp"

#include <optional>
#include <vector>

namespace firstpat {

/// Finite(n >= 3), or the bijection-on-Z+ case ("n = infinity").
class SizeSpec {
public:
    static SizeSpec finite(int n);
    static SizeSpec infinite() { return SizeSpec(std::nullopt); }

    bool is_finite() const { return n_.has_value(); }
    bool is_infinite() const { return !n_.has_value(); }
    /// Throws when infinite.
    int n() const;

    friend bool operator==(const SizeSpec&, const SizeSpec&) = default;

private:
    explicit SizeSpec(std::optional<int> n) : n_(n) {}
    std::optional<int> n_;
};

/// P(X = {1,2,r}) = 1/(r-1) - 1/r, the same for every size with r <= n.
Rational p_12r(int r);

/// Infinite case: P(X = {1,s,r}) = 1/((s-1)(r-1)r), 2 <= s < r.
Rational p_1sr_infinite(int s, int r);

/// Finite case: P(X = {1,s,r}) as the sum over k = 0..s-2 of
///   C(s-2,k) C(r-k-2, s-k-1) (s-k-2)! (r-s-1)! / [n(n-1)...(n-k+1) (r-k)!]
/// with C(x,y) = 0 for y < 0 or y > x and the k = 0 falling factorial = 1.
Rational p_1sr_finite(int n, int s, int r);

/// Finite case, s = 3, as the two-term closed form
///   (1/2)(1/(r-1) - 1/r) + (1/n)(1/(r-2) - 1/(r-1));
/// identical to p_1sr_finite(n, 3, r), kept as a redundancy check.
Rational p_13r_finite(int n, int r);

/// P(X >= {2,3,4} or never) = (1/n) * sum_{m=0}^{n-1} 1/m!, exactly;
/// asymptotically e/n.
Rational p_x_ge_234_exact(int n);

/// Probability that a uniform permutation of [n] avoids 123: C(2n,n)/(n+1)!.
Rational avoid_probability(int n);

/// Probability that k is the first prefix length containing a 123 pattern:
/// C(2k-2,k-1)/k! - C(2k,k)/(k+1)!. Valid for any n >= k and for n = inf.
Rational prefix_first_k_probability(int k);

/// Infinite case, exact mass of {X = {1,s,r} : r > r_max} for one s
/// (telescopes to 1/((s-1) r_max); requires r_max >= s).
Rational tail_beyond_r(int s, int r_max);

/// Infinite case, exact mass of {X = {1,s,*} : s > s_max} (telescopes to 1/s_max).
Rational tail_beyond_s(int s_max);

/// Infinite case, exact mass beyond the truncation box {s <= s_max, r <= r_max}.
/// No numeric series summation anywhere; entries + this tail = 1 exactly.
Rational infinite_tail_mass(int s_max, int r_max);

enum class Provenance { formula, oracle };

const char* to_string(Provenance provenance);

struct TableEntry {
    Triple triple;
    Rational probability;
    Provenance provenance = Provenance::formula;
};

/// The full law of X: lex-ordered entries, a never mass, and (infinite case)
/// an exact analytic tail beyond the truncation box.
struct DistributionTable {
    SizeSpec size = SizeSpec::infinite();
    std::vector<TableEntry> entries;
    Rational never_mass = 0;
    std::optional<Triple> truncation;  ///< infinite tables: {1, s_max, r_max}
    Rational tail_mass = 0;

    Rational total_mass() const;
    const TableEntry* find(const Triple& t) const;
};

inline constexpr int kDefaultTruncationS = 50;
inline constexpr int kDefaultTruncationR = 200;
inline const Triple kDefaultTruncation{1, kDefaultTruncationS, kDefaultTruncationR};

/// Finite(n): full support; a = 1 entries from the closed forms, a >= 2
/// entries from the enumeration census (requires n within the census cap),
/// never mass C(2n,n)/(n+1)!. Infinite: requires a truncation {1,s_max,r_max};
/// entries from p_1sr_infinite, exact tail attached, never mass 0.
DistributionTable distribution_table(const SizeSpec& size,
                                     std::optional<Triple> truncation = std::nullopt,
                                     int threads = 1);

/// Lex-least m with P(X <= m) >= 1/2 and P(X >= m) >= 1/2, "never" ordered
/// above every triple; empty = the never side is the median (possible only
/// for small finite n where the avoidance mass exceeds 1/2).
FirstOccurrence median(const SizeSpec& size);

} // namespace firstpat
