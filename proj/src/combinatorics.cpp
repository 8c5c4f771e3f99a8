#include "covario/combinatorics.hpp"

#include <stdexcept>

namespace covario {

namespace mp = boost::multiprecision;

BigInt binom_int(unsigned n, unsigned k) {
    if (k > n) throw std::domain_error("binom_int: requires k <= n");
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (unsigned i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i; // exact at every step
    }
    return result;
}

BigInt catalan(unsigned n) {
    if (n < 1) throw std::domain_error("catalan: requires n >= 1");
    return binom_int(2 * n, n) / (n + 1);
}

bool dn_le_sqrt2_exact(unsigned n) {
    if (n < 1) throw std::domain_error("dn_le_sqrt2_exact: requires n >= 1");
    const BigInt lhs = mp::pow(binom_int(2 * n, n), n + 2);
    const BigInt rhs = mp::pow(BigInt(4), n) * mp::pow(binom_int(2 * n + 2, n), n);
    return lhs <= rhs;
}

bool lemma41_holds(unsigned n) {
    if (n < 1) throw std::domain_error("lemma41_holds: requires n >= 1");
    BigRational lhs(BigInt(4) * n, BigInt(n) + 2);
    if (n > 1) {
        const BigRational bracket(BigInt(n) * (n + 1), BigInt(n - 1) * (n + 2));
        BigRational powed(mp::pow(mp::numerator(bracket), n - 1),
                          mp::pow(mp::denominator(bracket), n - 1));
        lhs *= powed;
    }
    lhs *= BigRational(BigInt(n) * n, BigInt(2 * n - 1) * (2 * n - 1));
    return lhs >= 1;
}

bool lemma42_holds(unsigned n) {
    if (n < 1) throw std::domain_error("lemma42_holds: requires n >= 1");
    // (16n)^n >= (n+1)^2 C_n^2 (n+2)^n after clearing denominators.
    const BigInt lhs = mp::pow(BigInt(16) * n, n);
    const BigInt cn = catalan(n);
    const BigInt rhs =
        BigInt(n + 1) * (n + 1) * cn * cn * mp::pow(BigInt(n) + 2, n);
    return lhs >= rhs;
}

DnValue dn(unsigned n) {
    if (n < 1) throw std::domain_error("dn: requires n >= 1");
    const BigFloat b1(binom_int(2 * n, n));
    const BigFloat b2(binom_int(2 * n + 2, n));
    const BigFloat half(0.5);
    const BigFloat expo = half + BigFloat(1) / n;
    const BigFloat value =
        mp::exp(expo * mp::log(b1) - half * mp::log(b2) - half * mp::log(BigFloat(2)));
    return DnValue{n, value, dn_le_sqrt2_exact(n)};
}

std::vector<DnValue> dn_table(unsigned n_max) {
    if (n_max < 1) throw std::domain_error("dn_table: requires n_max >= 1");
    std::vector<DnValue> table;
    table.reserve(n_max);
    for (unsigned n = 1; n <= n_max; ++n) table.push_back(dn(n));
    return table;
}

BigFloat ballbody_volume_bound(unsigned n) {
    if (n < 1) throw std::domain_error("ballbody_volume_bound: requires n >= 1");
    const BigFloat b1(binom_int(2 * n, n));
    const BigFloat b2(binom_int(2 * n + 2, n));
    return mp::exp(mp::log(b1) - (BigFloat(n) / (n + 2)) * mp::log(b2));
}

} // namespace covario
