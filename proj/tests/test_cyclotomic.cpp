#include <catch2/catch_amalgamated.hpp>

#include <kdiff/cyclotomic.hpp>

#include <numeric>
#include <random>
#include <vector>

using kdiff::Cyclotomic;
using kdiff::Integer;
using kdiff::Rational;

namespace {

// Independent oracle for Phi_N: the Moebius product
//   Phi_N(x) = prod_{d | N} (x^{N/d} - 1)^{mu(d)},
// computed with its own polynomial arithmetic (multiply by the positive-mu
// factors, then exact-divide by the negative-mu ones). The library route is
// recursive division of x^N - 1 instead, so the two share no code path.

int moebius(unsigned n) {
    int mu = 1;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

std::vector<Integer> x_pow_minus_one(unsigned e) {
    std::vector<Integer> f(e + 1, Integer(0));
    f[0] = -1;
    f[e] = 1;
    return f;
}

std::vector<Integer> mul(const std::vector<Integer>& a, const std::vector<Integer>& b) {
    std::vector<Integer> out(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Long division by a polynomial with leading coefficient +-1; asserts exactness.
std::vector<Integer> div_exact(std::vector<Integer> num, const std::vector<Integer>& den) {
    REQUIRE(den.back() != 0);
    std::vector<Integer> quot(num.size() - den.size() + 1, Integer(0));
    for (std::size_t qi = quot.size(); qi-- > 0;) {
        Integer c = num[qi + den.size() - 1] / den.back();
        quot[qi] = c;
        for (std::size_t i = 0; i < den.size(); ++i) num[qi + i] -= c * den[i];
    }
    for (const Integer& c : num) REQUIRE(c == 0);
    return quot;
}

std::vector<Integer> oracle_cyclotomic(unsigned n) {
    std::vector<Integer> num{Integer(1)};
    std::vector<Integer> den{Integer(1)};
    for (unsigned d = 1; d <= n; ++d) {
        if (n % d) continue;
        int mu = moebius(d);
        if (mu == 1) num = mul(num, x_pow_minus_one(n / d));
        if (mu == -1) den = mul(den, x_pow_minus_one(n / d));
    }
    return div_exact(std::move(num), den);
}

Cyclotomic random_element(std::mt19937_64& rng, unsigned order) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::vector<Rational> c(kdiff::euler_phi(order));
    for (auto& x : c) x = Rational(num(rng), den(rng));
    return Cyclotomic(order, std::move(c));
}

}  // namespace

TEST_CASE("cyclotomic polynomials match hand values and the Moebius oracle") {
    // Frozen small cases, plus Phi_12 = x^4 - x^2 + 1 derived by dividing
    // x^12 - 1 by Phi_1 Phi_2 Phi_3 Phi_4 Phi_6 by hand.
    CHECK(kdiff::cyclotomic_polynomial(1) == std::vector<Integer>{-1, 1});
    CHECK(kdiff::cyclotomic_polynomial(2) == std::vector<Integer>{1, 1});
    CHECK(kdiff::cyclotomic_polynomial(4) == std::vector<Integer>{1, 0, 1});
    CHECK(kdiff::cyclotomic_polynomial(6) == std::vector<Integer>{1, -1, 1});
    CHECK(kdiff::cyclotomic_polynomial(12) == std::vector<Integer>{1, 0, -1, 0, 1});

    for (unsigned n = 1; n <= 40; ++n) CHECK(kdiff::cyclotomic_polynomial(n) == oracle_cyclotomic(n));
    // Degrees are the Euler totient.
    CHECK(kdiff::euler_phi(1) == 1);
    CHECK(kdiff::euler_phi(9) == 6);
    CHECK(kdiff::euler_phi(105) == 48);
}

TEST_CASE("roots of unity satisfy the defining identities") {
    for (unsigned n : {1u, 2u, 3u, 4u, 5u, 6u, 8u, 9u, 12u, 15u}) {
        Cyclotomic z = Cyclotomic::root_of_unity(n, 1);
        CHECK(z.pow(n) == Cyclotomic(1L));
        // Exponents reduce mod n, including negatives.
        CHECK(Cyclotomic::root_of_unity(n, static_cast<long>(n) + 3) ==
              Cyclotomic::root_of_unity(n, 3));
        CHECK(Cyclotomic::root_of_unity(n, -1) == Cyclotomic::root_of_unity(n, static_cast<long>(n) - 1));
        if (n >= 2) {
            Cyclotomic sum(0L);
            for (unsigned j = 0; j < n; ++j) sum += Cyclotomic::root_of_unity(n, j);
            CHECK(sum.is_zero());
        }
    }
    // zeta_{2k}^k = -1: the sign that pairs plus and minus residue roots.
    for (unsigned k : {1u, 2u, 3u, 4u, 5u, 6u})
        CHECK(Cyclotomic::root_of_unity(2 * k, 1).pow(k) == Cyclotomic(-1L));
}

TEST_CASE("arithmetic reduces modulo the cyclotomic polynomial") {
    // (1 + z6)(1 - z6) = 1 - z6^2 = 2 - z6 after reducing z6^2 = z6 - 1.
    Cyclotomic z6 = Cyclotomic::root_of_unity(6, 1);
    Cyclotomic one(1L);
    Cyclotomic prod = (one + z6) * (one - z6);
    CHECK(prod == Cyclotomic(6, {Rational(2), Rational(-1)}));
    CHECK((prod - Cyclotomic(2L) + z6).is_zero());
    CHECK(prod.str() == "2 - z6");

    // Mixed orders embed into the lcm: zeta_4 * zeta_6 is a primitive 12th root.
    Cyclotomic z4 = Cyclotomic::root_of_unity(4, 1);
    CHECK(z4 * z6 == Cyclotomic::root_of_unity(12, 5));
    CHECK((z4 * z6).order() == 12);
}

TEST_CASE("promotion round-trips and subfield recognition") {
    std::mt19937_64 rng(20240817);
    for (unsigned order : {1u, 2u, 3u, 4u, 6u, 12u}) {
        for (int trial = 0; trial < 20; ++trial) {
            Cyclotomic x = random_element(rng, order);
            Cyclotomic lifted = x.promoted(2 * order);
            CHECK(lifted == x);
            auto back = lifted.demoted(order);
            REQUIRE(back.has_value());
            CHECK(*back == x);
        }
    }
    // zeta_12 does not lie in Q(zeta_6).
    CHECK_FALSE(Cyclotomic::root_of_unity(12, 1).demoted(6).has_value());
    // But zeta_12^2 does: it equals zeta_6.
    auto down = Cyclotomic::root_of_unity(12, 2).demoted(6);
    REQUIRE(down.has_value());
    CHECK(*down == Cyclotomic::root_of_unity(6, 1));
}

TEST_CASE("ring axioms hold on random elements of mixed orders") {
    std::mt19937_64 rng(7);
    const unsigned orders[] = {1, 2, 3, 4, 6, 8, 12};
    std::uniform_int_distribution<std::size_t> pick(0, std::size(orders) - 1);
    for (int trial = 0; trial < 60; ++trial) {
        Cyclotomic a = random_element(rng, orders[pick(rng)]);
        Cyclotomic b = random_element(rng, orders[pick(rng)]);
        Cyclotomic c = random_element(rng, orders[pick(rng)]);
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - a).is_zero());
        CHECK(a + (-a) == Cyclotomic());
        CHECK(a * Cyclotomic(1L) == a);
        CHECK((a * Cyclotomic()).is_zero());
    }
}

TEST_CASE("powers agree with repeated multiplication") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Cyclotomic a = random_element(rng, 12);
        Cyclotomic acc(1L);
        for (unsigned e = 0; e <= 6; ++e) {
            CHECK(a.pow(e) == acc);
            acc *= a;
        }
    }
}

TEST_CASE("rational recognition") {
    Cyclotomic z6 = Cyclotomic::root_of_unity(6, 1);
    // z6 + z6^5 = z6 + conj = 1 (real part doubled): 2cos(60deg) = 1.
    Cyclotomic s = z6 + Cyclotomic::root_of_unity(6, 5);
    auto r = s.as_rational();
    REQUIRE(r.has_value());
    CHECK(*r == 1);
    CHECK_FALSE(z6.as_rational().has_value());
}

TEST_CASE("denormalized rationals are canonicalized on entry") {
    // mpq_class(num, den) leaves 0/3 denormalized; comparisons on such a value
    // are unreliable, so the constructor must canonicalize.
    Cyclotomic zero(Rational(0, 3));
    CHECK(zero.is_zero());
    CHECK(zero == Cyclotomic(0));

    Cyclotomic half(Rational(2, 4));
    CHECK(half == Cyclotomic(Rational(1, 2)));
    CHECK((half + half) == Cyclotomic(1));

    Cyclotomic mixed(4, {Rational(0, 5), Rational(3, 6)});
    CHECK(mixed == Cyclotomic(Rational(1, 2)) * Cyclotomic::root_of_unity(4, 1));
}
