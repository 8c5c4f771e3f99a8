#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace covario {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
// ~168 bits of mantissa; comfortably past the 64 fractional bits we promise.
using BigFloat = boost::multiprecision::cpp_bin_float_50;

// Exact binomial coefficient; requires k <= n.
BigInt binom_int(unsigned n, unsigned k);

// n-th Catalan number C(2n,n)/(n+1), n >= 1.
BigInt catalan(unsigned n);

// Exact integer restatement of D_n <= sqrt(2):
// C(2n,n)^{n+2} <= 4^n C(2n+2,n)^n.
bool dn_le_sqrt2_exact(unsigned n);

// (4n/(n+2)) (n(n+1)/((n-1)(n+2)))^{n-1} (n/(2n-1))^2 >= 1, exact rationals.
// At n = 1 the bracket carries exponent 0 and is the empty product.
bool lemma41_holds(unsigned n);

// (16n/(n+2))^n >= (n+1)^2 C_n^2, exact rationals.
bool lemma42_holds(unsigned n);

struct DnValue {
    unsigned n = 0;
    BigFloat value{0};
    bool certified = false; // exact integer comparison behind D_n <= sqrt(2)

    double value_d() const { return static_cast<double>(value); }
};

// D_n = (1/sqrt 2) C(2n,n)^{1/2+1/n} / C(2n+2,n)^{1/2}, evaluated from the
// exact binomials in high precision.
DnValue dn(unsigned n);

std::vector<DnValue> dn_table(unsigned n_max);

// C(2n,n) / C(2n+2,n)^{n/(n+2)}: the volume bound for |K_{n+2}(g_K)|.
BigFloat ballbody_volume_bound(unsigned n);

} // namespace covario
