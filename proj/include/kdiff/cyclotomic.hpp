#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_N).
//
// Every boundary verdict in this library reduces to exact zero tests of
// Z-linear combinations of roots of unity times rationals, so the number type
// is a polynomial in zeta_N with rational coefficients, reduced modulo the
// N-th cyclotomic polynomial. Mixed-order arithmetic embeds both operands
// into Q(zeta_lcm) first. Floating point appears only in approx(), which is
// for diagnostics and is never consulted by a verdict.

#include <gmpxx.h>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kdiff {

using Integer = mpz_class;
using Rational = mpq_class;

namespace detail {

// Dense little-endian polynomials; the degrees here stay tiny (phi(N) for the
// working order N), so schoolbook arithmetic is the right tool.

inline void trim(std::vector<Rational>& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline std::vector<Rational> poly_mul(const std::vector<Rational>& a,
                                      const std::vector<Rational>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rational> out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    trim(out);
    return out;
}

// Remainder of p modulo a monic integer polynomial m, in place.
inline void poly_mod(std::vector<Rational>& p, const std::vector<Integer>& m) {
    const std::size_t deg_m = m.size() - 1;
    while (p.size() > deg_m) {
        Rational lead = p.back();
        std::size_t shift = p.size() - 1 - deg_m;
        if (lead != 0)
            for (std::size_t i = 0; i < deg_m; ++i)
                p[shift + i] -= lead * Rational(m[i]);
        p.pop_back();
        trim(p);
    }
}

// Exact division of integer polynomials by a monic divisor.
inline std::vector<Integer> poly_div_exact(std::vector<Integer> num,
                                           const std::vector<Integer>& den) {
    const std::size_t deg_d = den.size() - 1;
    if (num.size() < den.size()) throw std::logic_error("poly_div_exact: degree underflow");
    std::vector<Integer> quot(num.size() - deg_d, Integer(0));
    for (std::size_t qi = quot.size(); qi-- > 0;) {
        Integer c = num[qi + deg_d];
        quot[qi] = c;
        if (c != 0)
            for (std::size_t i = 0; i <= deg_d; ++i) num[qi + i] -= c * den[i];
    }
    for (const Integer& c : num)
        if (c != 0) throw std::logic_error("poly_div_exact: division not exact");
    return quot;
}

}  // namespace detail

// N-th cyclotomic polynomial, monic with integer coefficients, little-endian.
// Computed as (x^N - 1) / prod(Phi_d : d | N, d < N); results are cached.
inline const std::vector<Integer>& cyclotomic_polynomial(unsigned n) {
    if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: order must be positive");
    static std::map<unsigned, std::vector<Integer>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    // Recursion bottoms out at Phi_1 = x - 1; compute the divisor chain
    // iteratively so the cache lock need not be re-entrant.
    std::vector<unsigned> todo{n};
    while (!todo.empty()) {
        unsigned m = todo.back();
        if (cache.count(m)) {
            todo.pop_back();
            continue;
        }
        bool ready = true;
        for (unsigned d = 1; d < m; ++d)
            if (m % d == 0 && !cache.count(d)) {
                todo.push_back(d);
                ready = false;
            }
        if (!ready) continue;
        std::vector<Integer> f(m + 1, Integer(0));
        f[0] = -1;
        f[m] = 1;
        for (unsigned d = 1; d < m; ++d)
            if (m % d == 0) f = detail::poly_div_exact(std::move(f), cache.at(d));
        cache.emplace(m, std::move(f));
        todo.pop_back();
    }
    return cache.at(n);
}

inline unsigned euler_phi(unsigned n) {
    return static_cast<unsigned>(cyclotomic_polynomial(n).size() - 1);
}

class Cyclotomic {
public:
    // Zero, represented in Q(zeta_1) = Q.
    Cyclotomic() : order_(1), coeffs_(1, Rational(0)) {}

    // mpq_class built from a (num, den) pair is not canonical until told so;
    // canonicalize here so comparisons never see a denormalized value.
    explicit Cyclotomic(const Rational& c) : order_(1), coeffs_(1, c) {
        coeffs_[0].canonicalize();
    }
    explicit Cyclotomic(long c) : order_(1), coeffs_(1, Rational(c)) {}

    // Arbitrary polynomial in zeta_order; reduced on construction. The stored
    // coefficient vector always has length phi(order).
    Cyclotomic(unsigned order, std::vector<Rational> coeffs) : order_(order) {
        if (order == 0) throw std::invalid_argument("Cyclotomic: order must be positive");
        const auto& phi = cyclotomic_polynomial(order);
        detail::trim(coeffs);
        detail::poly_mod(coeffs, phi);
        coeffs.resize(phi.size() - 1, Rational(0));
        coeffs_ = std::move(coeffs);
        for (Rational& c : coeffs_) c.canonicalize();
    }

    static Cyclotomic root_of_unity(unsigned n, long j) {
        if (n == 0) throw std::invalid_argument("root_of_unity: order must be positive");
        long r = j % static_cast<long>(n);
        if (r < 0) r += n;
        std::vector<Rational> p(static_cast<std::size_t>(r) + 1, Rational(0));
        p.back() = 1;
        return Cyclotomic(n, std::move(p));
    }

    unsigned order() const { return order_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const {
        for (const Rational& c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    // The value lies in Q iff the reduced representation is constant. True in
    // particular for every element of order 1 or 2.
    std::optional<Rational> as_rational() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) return std::nullopt;
        return coeffs_.empty() ? Rational(0) : coeffs_[0];
    }

    // Same value viewed in Q(zeta_m); requires order() | m.
    Cyclotomic promoted(unsigned m) const {
        if (m % order_ != 0) throw std::invalid_argument("promoted: target order not a multiple");
        if (m == order_) return *this;
        unsigned step = m / order_;
        std::vector<Rational> p;
        p.resize(static_cast<std::size_t>(step) * (coeffs_.empty() ? 1 : coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            std::size_t pos = i * step;
            if (pos >= p.size()) p.resize(pos + 1, Rational(0));
            p[pos] = coeffs_[i];
        }
        return Cyclotomic(m, std::move(p));
    }

    // Inverse of promoted(): succeeds iff the value lies in the subfield
    // Q(zeta_m), m | order(). Solved as an exact linear system over Q in the
    // power bases; the dimensions involved are phi of the working order.
    std::optional<Cyclotomic> demoted(unsigned m) const {
        if (order_ % m != 0) throw std::invalid_argument("demoted: target order not a divisor");
        if (m == order_) return *this;
        unsigned cols = euler_phi(m);
        unsigned rows = euler_phi(order_);
        // Column j is zeta_m^j expressed in the basis of Q(zeta_order).
        std::vector<std::vector<Rational>> mat(rows, std::vector<Rational>(cols + 1, Rational(0)));
        for (unsigned j = 0; j < cols; ++j) {
            Cyclotomic b = root_of_unity(m, j).promoted(order_);
            for (unsigned i = 0; i < rows; ++i) mat[i][j] = b.coeffs_[i];
        }
        for (unsigned i = 0; i < rows; ++i) mat[i][cols] = coeffs_[i];

        // Gaussian elimination with exact pivots.
        std::vector<int> pivot_col_of_row(rows, -1);
        unsigned rank_row = 0;
        for (unsigned col = 0; col < cols && rank_row < rows; ++col) {
            unsigned sel = rank_row;
            while (sel < rows && mat[sel][col] == 0) ++sel;
            if (sel == rows) continue;
            std::swap(mat[sel], mat[rank_row]);
            Rational inv = 1 / mat[rank_row][col];
            for (unsigned j = col; j <= cols; ++j) mat[rank_row][j] *= inv;
            for (unsigned i = 0; i < rows; ++i) {
                if (i == rank_row || mat[i][col] == 0) continue;
                Rational f = mat[i][col];
                for (unsigned j = col; j <= cols; ++j) mat[i][j] -= f * mat[rank_row][j];
            }
            pivot_col_of_row[rank_row] = static_cast<int>(col);
            ++rank_row;
        }
        for (unsigned i = rank_row; i < rows; ++i)
            if (mat[i][cols] != 0) return std::nullopt;  // inconsistent: not in the subfield
        std::vector<Rational> sol(cols, Rational(0));
        for (unsigned i = 0; i < rank_row; ++i)
            sol[static_cast<std::size_t>(pivot_col_of_row[i])] = mat[i][cols];
        return Cyclotomic(m, std::move(sol));
    }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = aligned(a, b);
        for (std::size_t i = 0; i < y.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
        return Cyclotomic(x.order_, std::move(x.coeffs_));
    }
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = aligned(a, b);
        for (std::size_t i = 0; i < y.coeffs_.size(); ++i) x.coeffs_[i] -= y.coeffs_[i];
        return Cyclotomic(x.order_, std::move(x.coeffs_));
    }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        auto [x, y] = aligned(a, b);
        return Cyclotomic(x.order_, detail::poly_mul(x.coeffs_, y.coeffs_));
    }
    Cyclotomic operator-() const {
        Cyclotomic r = *this;
        for (Rational& c : r.coeffs_) c = -c;
        return r;
    }
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    Cyclotomic pow(unsigned long e) const {
        Cyclotomic base = *this;
        Cyclotomic acc(Rational(1));
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    // Equality across different orders compares in the common field.
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.order_ == b.order_) return a.coeffs_ == b.coeffs_;
        auto [x, y] = aligned(a, b);
        return x.coeffs_ == y.coeffs_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    // Numeric image under zeta_N -> exp(2*pi*i/N). Diagnostics only.
    std::complex<double> approx() const {
        std::complex<double> acc(0.0, 0.0);
        const double tau = 6.283185307179586476925287;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            double c = mpq_get_d(coeffs_[i].get_mpq_t());
            double ang = tau * static_cast<double>(i) / static_cast<double>(order_);
            acc += c * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return acc;
    }

    // Readable form like "2 - z6" (z6 denotes a primitive 6th root of unity).
    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream out;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            const Rational& c = coeffs_[i];
            if (c == 0) continue;
            Rational a = c > 0 ? c : Rational(-c);
            if (first) {
                if (c < 0) out << "-";
                first = false;
            } else {
                out << (c < 0 ? " - " : " + ");
            }
            bool unit = (a == 1);
            if (i == 0 || !unit) out << a.get_str();
            if (i > 0) {
                if (!unit) out << "*";
                out << "z" << order_;
                if (i > 1) out << "^" << i;
            }
        }
        return out.str();
    }

private:
    static std::pair<Cyclotomic, Cyclotomic> aligned(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.order_ == b.order_) return {a, b};
        unsigned m = std::lcm(a.order_, b.order_);
        return {a.promoted(m), b.promoted(m)};
    }

    unsigned order_ = 1;
    std::vector<Rational> coeffs_;
};

inline Cyclotomic operator*(const Rational& c, const Cyclotomic& x) { return Cyclotomic(c) * x; }

}  // namespace kdiff
