#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace genuslab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Two versions of the quadratic coefficient B(n) in the genus recurrence for
// rooted bipartite quadrangulation counts Q(n, g):
//
//   (n+1) Q(n,g) = 4(2n-1) Q(n-1,g) + B(n) Q(n-2,g-1)
//                + 3 * sum_{n1+n2=n-2} sum_{g1+g2=g} (2n1+1)(2n2+1) Q(n1,g1) Q(n2,g2)
//
// The `corrected` variant uses B(n) = (2n-3)(n-1)(2n-1) and yields integral
// Q throughout. The `printed` variant uses B(n) = (2n-2)(n-1)(2n-1); it gives
// Q(2,1) = 2 instead of 1 and the right-hand side stops being divisible by
// n+1 at n = 4, so a table built from it truncates there.
enum class RecurrenceVariant { corrected, printed };

inline const char* to_string(RecurrenceVariant v) {
    return v == RecurrenceVariant::corrected ? "corrected" : "printed";
}

inline BigInt recurrence_b(int n, RecurrenceVariant v) {
    BigInt a = v == RecurrenceVariant::corrected ? 2 * n - 3 : 2 * n - 2;
    return a * (n - 1) * (2 * n - 1);
}

class CountTable {
public:
    explicit CountTable(int n_max, RecurrenceVariant variant = RecurrenceVariant::corrected)
        : variant_(variant) {
        rows_.push_back({BigInt(1)});  // Q(0,0) = 1
        for (int n = 1; n <= n_max; ++n) {
            if (!grow_row(n)) break;
        }
    }

    // Zero outside the table's triangular support. Asking beyond the built
    // range is an error (distinct from a structural zero).
    const BigInt& q(int n, int g) const {
        static const BigInt zero = 0;
        if (n < 0 || g < 0) return zero;
        if (n >= static_cast<int>(rows_.size()))
            throw std::out_of_range("CountTable: n beyond built range");
        if (g >= static_cast<int>(rows_[n].size())) return zero;
        return rows_[n][g];
    }

    int n_max() const { return static_cast<int>(rows_.size()) - 1; }
    RecurrenceVariant variant() const { return variant_; }
    std::optional<int> integrality_failure() const { return integrality_failure_; }

private:
    bool grow_row(int n) {
        int g_max = n / 2;
        std::vector<BigInt> row(g_max + 1);
        for (int g = 0; g <= g_max; ++g) {
            BigInt rhs = 4 * (2 * n - 1) * q(n - 1, g);
            if (n >= 2 && g >= 1) rhs += recurrence_b(n, variant_) * q(n - 2, g - 1);
            if (n >= 2) {
                BigInt cross = 0;
                for (int n1 = 0; n1 <= n - 2; ++n1) {
                    int n2 = n - 2 - n1;
                    for (int g1 = 0; g1 <= g; ++g1) {
                        const BigInt& a = q(n1, g1);
                        if (a == 0) continue;
                        const BigInt& b = q(n2, g - g1);
                        if (b == 0) continue;
                        cross += (2 * n1 + 1) * (2 * n2 + 1) * a * b;
                    }
                }
                rhs += 3 * cross;
            }
            if (rhs % (n + 1) != 0) {
                integrality_failure_ = n;
                if (variant_ == RecurrenceVariant::corrected)
                    throw std::logic_error("quadrangulation recurrence not divisible at n=" +
                                           std::to_string(n));
                return false;  // printed variant: truncate the table here
            }
            row[g] = rhs / (n + 1);
        }
        rows_.push_back(std::move(row));
        return true;
    }

    RecurrenceVariant variant_;
    std::vector<std::vector<BigInt>> rows_;
    std::optional<int> integrality_failure_;
};

inline BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) { r *= n - i; r /= i + 1; }
    return r;
}

inline BigInt catalan(int n) { return binomial(2 * n, n) / (n + 1); }

// (2k-1)!! = 1 * 3 * ... * (2k-1); the number of perfect matchings of 2k points.
inline BigInt odd_double_factorial(int k) {
    BigInt r = 1;
    for (int i = 1; i < 2 * k; i += 2) r *= i;
    return r;
}

// Planar rooted bipartite quadrangulations with n faces: 2 * 3^n (2n)! / (n! (n+2)!).
inline BigInt planar_quadrangulation_count(int n) {
    BigInt num = 2 * factorial(2 * n);
    for (int i = 0; i < n; ++i) num *= 3;
    BigInt den = factorial(n) * factorial(n + 2);
    if (num % den != 0) throw std::logic_error("planar count not integral");
    return num / den;
}

// c(N, k): permutations of N elements with exactly k cycles, every cycle of
// odd length. Built by conditioning on the cycle of element N: pick 2j
// companions and one of (2j)! cyclic arrangements... each odd cycle of length
// 2j+1 through a fixed element can be completed in (2j)! ways.
class OddCycleTable {
public:
    explicit OddCycleTable(int n_max) {
        c_.assign(n_max + 1, {});
        c_[0] = {BigInt(1)};
        std::vector<BigInt> fact(n_max + 1, 1);
        for (int i = 1; i <= n_max; ++i) fact[i] = fact[i - 1] * i;
        for (int n = 1; n <= n_max; ++n) {
            c_[n].assign(n + 1, 0);
            for (int k = 1; k <= n; ++k) {
                BigInt s = 0;
                for (int j = 0; 1 + 2 * j <= n; ++j) {
                    const BigInt& rest = cell(n - 1 - 2 * j, k - 1);
                    if (rest == 0) continue;
                    s += binomial(n - 1, 2 * j) * fact[2 * j] * rest;
                }
                c_[n][k] = s;
            }
        }
    }

    const BigInt& count(int n, int k) const { return cell(n, k); }

    BigInt total(int n) const {
        BigInt s = 0;
        for (const auto& x : c_[n]) s += x;
        return s;
    }

private:
    const BigInt& cell(int n, int k) const {
        static const BigInt zero = 0;
        if (n < 0 || k < 0 || n >= static_cast<int>(c_.size()) ||
            k >= static_cast<int>(c_[n].size()))
            return zero;
        return c_[n][k];
    }
    std::vector<std::vector<BigInt>> c_;
};

// Rooted unicellular maps with n edges and genus g. A unicellular map
// decomposes into a plane tree plus an odd-cycle permutation of its n+1
// vertices with n+1-2g cycles, with multiplicity 4^g.
inline BigInt unicellular_count(int n, int g) {
    if (g < 0 || 2 * g > n) return 0;
    static thread_local std::optional<OddCycleTable> table;
    static thread_local int table_n = -1;
    if (table_n < n + 1) { table.emplace(n + 1); table_n = n + 1; }
    BigInt num = catalan(n) * table->count(n + 1, n + 1 - 2 * g);
    BigInt den = 1;
    den <<= 2 * g;
    if (num % den != 0) throw std::logic_error("unicellular count not integral");
    return num / den;
}

// Well-labeled unicellular maps with n edges and genus g: each of the
// n+2-2g vertex choices of a pointed quadrangulation corresponds to a
// labeling-plus-sign, so the count is (n+2-2g) Q(n,g) / 2.
inline BigInt well_labeled_unicellular_count(int n, int g, const CountTable& t) {
    BigInt num = (n + 2 - 2 * g) * t.q(n, g);
    if (num % 2 != 0) throw std::logic_error("well-labeled count not integral");
    return num / 2;
}

// One-step genus monotonicity bound: 2g Q(n,g) <= (2n)^3 Q(n,g-1).
inline BigRat genus_step_ratio(int n, int g, const CountTable& t) {
    BigInt num = 2 * g * t.q(n, g);
    BigInt den = BigInt(2 * n) * (2 * n) * (2 * n) * t.q(n, g - 1);
    if (den == 0) throw std::logic_error("genus step ratio: empty denominator class");
    return BigRat(num, den);
}

inline bool genus_step_bound_holds(int n, int g, const CountTable& t) {
    return 2 * g * t.q(n, g) <= BigInt(2 * n) * (2 * n) * (2 * n) * t.q(n, g - 1);
}

}  // namespace genuslab
