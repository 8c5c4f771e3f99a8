#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

#include "covario/combinatorics.hpp"

using namespace covario;

namespace {

// Independent factorial oracle.
BigInt factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt binom_oracle(unsigned n, unsigned k) {
    return factorial(n) / (factorial(k) * factorial(n - k));
}

} // namespace

TEST_CASE("binomial coefficients match the factorial oracle") {
    CHECK(binom_int(4, 2) == 6);
    CHECK(binom_int(2, 1) == 2);
    CHECK(binom_int(6, 2) == 15);
    CHECK(binom_int(0, 0) == 1);
    for (unsigned n = 0; n <= 40; ++n)
        for (unsigned k = 0; k <= n; ++k) CHECK(binom_int(n, k) == binom_oracle(n, k));
    CHECK_THROWS_AS(binom_int(3, 4), std::domain_error);
}

TEST_CASE("Catalan numbers: closed form and recurrence") {
    CHECK(catalan(1) == 1);
    CHECK(catalan(2) == 2);
    CHECK(catalan(3) == 5);
    CHECK(catalan(4) == 14);
    for (unsigned n = 1; n <= 120; ++n) {
        CHECK(catalan(n) == binom_int(2 * n, n) / (n + 1));
        // (n+2) C_{n+1} = 2 (2n+1) C_n exactly
        CHECK(catalan(n + 1) * (n + 2) == BigInt(2) * (2 * n + 1) * catalan(n));
    }
    CHECK_THROWS_AS(catalan(0), std::domain_error);
}

TEST_CASE("exact certificate of D_n <= sqrt(2)") {
    // n = 1: 2^3 = 8 <= 4 * 4 = 16; n = 2: 6^4 = 1296 <= 16 * 225 = 3600.
    CHECK(dn_le_sqrt2_exact(1));
    CHECK(boost::multiprecision::pow(BigInt(2), 3) == 8);
    CHECK(boost::multiprecision::pow(BigInt(4), 1) * boost::multiprecision::pow(binom_int(4, 1), 1) == 16);
    CHECK(dn_le_sqrt2_exact(2));
    CHECK(boost::multiprecision::pow(BigInt(6), 4) == 1296);
    CHECK(BigInt(16) * 225 == 3600);
    CHECK(dn_le_sqrt2_exact(100));
}

TEST_CASE("auxiliary inequality (empty power at n = 1)") {
    CHECK(lemma41_holds(1)); // left side 4/3
    CHECK(lemma41_holds(2)); // 2 * (3/2) * (4/9) = 4/3
    CHECK(lemma41_holds(50));
}

TEST_CASE("induction-step inequality") {
    CHECK(lemma42_holds(1)); // 16/3 >= 4
    CHECK(lemma42_holds(2)); // 64 >= 36
    CHECK(lemma42_holds(3)); // (48/5)^3 >= 400
}

TEST_CASE("D_n values") {
    CHECK(dn(1).value_d() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(dn(2).value_d() == doctest::Approx(6.0 / std::sqrt(30.0)).epsilon(1e-13));
    // D_3 from the formula with binom(6,3) = 20, binom(8,3) = 56.
    const double d3 = std::pow(20.0, 0.5 + 1.0 / 3.0) / std::sqrt(2.0 * 56.0);
    CHECK(dn(3).value_d() == doctest::Approx(d3).epsilon(1e-13));
    CHECK(dn(3).value_d() == doctest::Approx(1.1472).epsilon(1e-4));
}

TEST_CASE("dn_table: certificates and the sqrt(2) ceiling") {
    const auto table = dn_table(64);
    REQUIRE(table.size() == 64);
    CHECK(table[0].value_d() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(table[1].value_d() == doctest::Approx(1.095445).epsilon(1e-6));
    CHECK(table[2].value_d() == doctest::Approx(1.1472).epsilon(1e-4));
    for (const DnValue& d : table) {
        CHECK(d.certified);
        CHECK(d.value_d() <= std::sqrt(2.0));
    }
    const auto single = dn_table(1);
    REQUIRE(single.size() == 1);
    CHECK(single[0].value_d() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("float path cross-checked against exact integers") {
    // 2 dn(n)^2 C(2n+2,n) = C(2n,n)^{(n+2)/n} within relative 2^-50.
    namespace mp = boost::multiprecision;
    for (unsigned n : {1u, 2u, 3u, 5u, 8u, 13u, 21u, 34u, 55u, 89u}) {
        const BigFloat lhs =
            BigFloat(2) * dn(n).value * dn(n).value * BigFloat(binom_int(2 * n + 2, n));
        const BigFloat rhs = mp::exp((BigFloat(n) + 2) / BigFloat(n) *
                                     mp::log(BigFloat(binom_int(2 * n, n))));
        const BigFloat rel = mp::abs(lhs / rhs - 1);
        CHECK(static_cast<double>(rel) <= std::ldexp(1.0, -50));
    }
}

TEST_CASE("sampled monotone approach to sqrt(2)") {
    const auto table = dn_table(100);
    for (unsigned n = 1; n <= 50; ++n)
        CHECK(table[2 * n - 1].value > table[n - 1].value);
}
