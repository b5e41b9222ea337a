#pragma once

// Exact discrete spectra. All values are rationals; p^2 = eps^2 - m^2.
//
//   F1: (j+2+2n)^2 - 1     F2: (j+1+2n)^2 - 1
//   F3: (j+2+2n)^2         F4: (j+1+2n)^2          (j >= 1)
//   J0: (2+n)^2 - 1                                (j = 0)
//   Dirac comparison: (n+J+1)^2, J = 1/2, 3/2, ...
//
// F3 is indexed by the degree n of its terminating polynomial
// F(-n, j+2+n; 3/2; x); the lowest F3 level is (j+2)^2.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rational.hpp"

namespace dksphere {

enum class Family { F1, F2, F3, F4, J0, Dirac };

inline std::string_view family_name(Family f)
{
    switch (f) {
        case Family::F1: return "F1";
        case Family::F2: return "F2";
        case Family::F3: return "F3";
        case Family::F4: return "F4";
        case Family::J0: return "J0";
        case Family::Dirac: return "DIRAC";
    }
    return "?";
}

inline Family parse_family(std::string_view s)
{
    if (s == "f1" || s == "F1") return Family::F1;
    if (s == "f2" || s == "F2") return Family::F2;
    if (s == "f3" || s == "F3") return Family::F3;
    if (s == "f4" || s == "F4") return Family::F4;
    if (s == "j0" || s == "J0") return Family::J0;
    if (s == "dirac" || s == "DIRAC") return Family::Dirac;
    throw std::invalid_argument("unknown family '" + std::string(s) + "'");
}

inline bool is_dk_family(Family f) { return f != Family::Dirac; }

struct StateLabel {
    Family family;
    Rational j;
    int n;

    friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

inline std::string to_string(const StateLabel& s)
{
    return std::string(family_name(s.family)) + "(j=" + to_string(s.j) + ",n=" + std::to_string(s.n) + ")";
}

struct SpectrumEntry {
    Family family;
    Rational j;  // total angular momentum; half-odd for DIRAC, 0 for J0
    int n;
    Rational p_sq;
    Rational eps_sq;
    std::optional<StateLabel> degenerate_partner;

    StateLabel label() const { return {family, j, n}; }
};

namespace spectrum_detail {

inline void require_integer_j(Family f, const Rational& j)
{
    if (j.denominator() != 1 || j.numerator() < 1) {
        throw std::invalid_argument(std::string(family_name(f)) + " requires integer j >= 1, got " + to_string(j));
    }
}

}  // namespace spectrum_detail

/// p^2 of a family level; throws on invalid quantum numbers.
inline Rational family_p_sq(Family family, const Rational& j, int n)
{
    if (n < 0) {
        throw std::invalid_argument("radial index n must be non-negative");
    }
    switch (family) {
        case Family::F1: {
            spectrum_detail::require_integer_j(family, j);
            const auto k = j.numerator() + 2 + 2 * n;
            return Rational(k * k - 1);
        }
        case Family::F2: {
            spectrum_detail::require_integer_j(family, j);
            const auto k = j.numerator() + 1 + 2 * n;
            return Rational(k * k - 1);
        }
        case Family::F3: {
            spectrum_detail::require_integer_j(family, j);
            const auto k = j.numerator() + 2 + 2 * n;
            return Rational(k * k);
        }
        case Family::F4: {
            spectrum_detail::require_integer_j(family, j);
            const auto k = j.numerator() + 1 + 2 * n;
            return Rational(k * k);
        }
        case Family::J0: {
            const std::int64_t k = 2 + n;
            return Rational(k * k - 1);
        }
        case Family::Dirac: {
            if (j.denominator() != 2 || j < Rational(1, 2)) {
                throw std::invalid_argument("DIRAC requires half-odd J >= 1/2, got " + to_string(j));
            }
            const Rational k = Rational(n) + j + 1;
            return k * k;
        }
    }
    throw std::logic_error("unhandled family");
}

/// The j-shift partner: F1(j,n) <-> F2(j+1,n) and F3(j,n) <-> F4(j+1,n).
inline std::optional<StateLabel> degenerate_partner(Family family, const Rational& j, int n)
{
    switch (family) {
        case Family::F1: return StateLabel{Family::F2, j + 1, n};
        case Family::F3: return StateLabel{Family::F4, j + 1, n};
        case Family::F2:
            if (j >= 2) return StateLabel{Family::F1, j - 1, n};
            return std::nullopt;
        case Family::F4:
            if (j >= 2) return StateLabel{Family::F3, j - 1, n};
            return std::nullopt;
        default: return std::nullopt;
    }
}

inline SpectrumEntry spectrum(Family family, const Rational& j_or_J, int n, const Rational& mass)
{
    if (mass < 0) {
        throw std::invalid_argument("mass must be non-negative");
    }
    const Rational j = family == Family::J0 ? Rational(0) : j_or_J;
    const Rational p_sq = family_p_sq(family, j, n);
    return {family, j, n, p_sq, p_sq + mass * mass, degenerate_partner(family, j, n)};
}

struct DegeneracyPair {
    StateLabel upper;  // F2 or F4 at j+1
    StateLabel lower;  // F1 or F3 at j
    Rational p_sq;
    bool distinct_wavefunctions;
};

/// All j-shift pairs with both members inside 1 <= j <= j_max, 0 <= n <= n_max.
inline std::vector<DegeneracyPair> degeneracy_map(int j_max, int n_max)
{
    if (j_max < 2 || n_max < 0) {
        throw std::invalid_argument("degeneracy_map requires j_max >= 2 and n_max >= 0");
    }
    std::vector<DegeneracyPair> pairs;
    for (int j = 1; j < j_max; ++j) {
        for (int n = 0; n <= n_max; ++n) {
            for (auto [lo, hi] : {std::pair{Family::F1, Family::F2}, std::pair{Family::F3, Family::F4}}) {
                const auto p_lo = family_p_sq(lo, Rational(j), n);
                const auto p_hi = family_p_sq(hi, Rational(j + 1), n);
                if (p_lo != p_hi) {
                    throw std::logic_error("j-shift identity violated at j=" + std::to_string(j));
                }
                // The constructors differ (x^{1/2} vs x^0 prefactor, different (1-x) powers),
                // so paired states are never the same function.
                pairs.push_back({{hi, Rational(j + 1), n}, {lo, Rational(j), n}, p_lo, true});
            }
        }
    }
    return pairs;
}

/// Distinct p^2 values of the four j >= 1 families plus J0 over the given ranges.
inline std::set<Rational> dk_p_sq_set(int j_max, int n_max)
{
    std::set<Rational> s;
    for (int n = 0; n <= n_max; ++n) {
        s.insert(family_p_sq(Family::J0, Rational(0), n));
        for (int j = 1; j <= j_max; ++j) {
            for (auto f : {Family::F1, Family::F2, Family::F3, Family::F4}) {
                s.insert(family_p_sq(f, Rational(j), n));
            }
        }
    }
    return s;
}

/// Dirac p^2 values for J = 1/2 .. J_max_twice/2 (odd numerators), 0 <= n <= n_max.
inline std::set<Rational> dirac_p_sq_set(int J_max_twice, int n_max)
{
    std::set<Rational> s;
    for (int twice = 1; twice <= J_max_twice; twice += 2) {
        for (int n = 0; n <= n_max; ++n) {
            s.insert(family_p_sq(Family::Dirac, Rational(twice, 2), n));
        }
    }
    return s;
}

}  // namespace dksphere
