#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sdeffect {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline BigInt numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Always "num/den", also for integers, so consumers parse a single shape.
inline std::string to_fraction_string(const Rational& q) {
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Row-by-row Pascal triangle, C(n, k) for 0 <= k <= n <= max_n.
class BinomialTable {
public:
    explicit BinomialTable(int max_n) : rows_(static_cast<std::size_t>(max_n) + 1) {
        for (int n = 0; n <= max_n; ++n) {
            auto& row = rows_[static_cast<std::size_t>(n)];
            row.resize(static_cast<std::size_t>(n) + 1);
            row[0] = 1;
            row[static_cast<std::size_t>(n)] = 1;
            for (int k = 1; k < n; ++k) {
                const auto& prev = rows_[static_cast<std::size_t>(n) - 1];
                row[static_cast<std::size_t>(k)] =
                    prev[static_cast<std::size_t>(k) - 1] + prev[static_cast<std::size_t>(k)];
            }
        }
    }

    int max_n() const { return static_cast<int>(rows_.size()) - 1; }

    const BigInt& operator()(int n, int k) const {
        return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
    }

private:
    std::vector<std::vector<BigInt>> rows_;
};

} // namespace sdeffect
