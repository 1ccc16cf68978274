#include "cornerhom/universal_coefficients.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "cornerhom/smith.hpp"

namespace cornerhom {

IntegerVector cyclic_sum_factors(const IntegerVector& orders) {
    IntegerVector finite;
    for (const auto& a : orders)
        if (a > 1) finite.push_back(a);
    IntegerVector out;
    for (const auto& d : smith_normal_form(IntegerMatrix::diagonal(finite, finite.size(), finite.size())).invariant_factors())
        if (d > 1) out.push_back(d);
    return out;
}

bool UctReport::passes() const {
    return std::all_of(degrees.begin(), degrees.end(), [](const UctDegree& d) { return d.rank_identity && d.isomorphic; });
}

std::string UctReport::to_string() const {
    std::ostringstream os;
    for (const auto& d : degrees)
        os << "k=" << d.degree << "  " << d.mod_rank << " = " << d.tensor_rank << " + " << d.tor_rank
           << (d.rank_identity && d.isomorphic ? "  ok" : "  FAIL") << "\n";
    return os.str();
}

UctReport universal_coefficients_check(const GradedFreeComplex& x, int m) {
    if (m <= 1) throw std::invalid_argument("universal coefficients: modulus must be >= 2");
    const auto hz = homology(x);
    UctReport rep;
    rep.modulus = m;
    const Integer mm = m;
    auto gcd_m = [&](const Integer& d) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), mm.get_mpz_t());
        return g;
    };
    for (std::size_t i = 0; i < hz.size(); ++i) {
        UctDegree d;
        d.degree = hz[i].degree;
        d.mod_factors = modular_invariant_factors(x, d.degree, m);
        d.mod_rank = d.mod_factors.size();

        IntegerVector predicted(hz[i].betti, mm);
        for (const auto& t : hz[i].torsion) predicted.push_back(gcd_m(t));
        d.tensor_rank = hz[i].betti;
        for (const auto& t : hz[i].torsion) d.tensor_rank += gcd_m(t) > 1 ? 1 : 0;
        if (i > 0)
            for (const auto& t : hz[i - 1].torsion) {
                const Integer g = gcd_m(t);
                predicted.push_back(g);
                d.tor_rank += g > 1 ? 1 : 0;
            }
        d.predicted_factors = cyclic_sum_factors(predicted);
        d.rank_identity = d.mod_rank == d.tensor_rank + d.tor_rank;
        d.isomorphic = d.mod_factors == d.predicted_factors;
        rep.degrees.push_back(std::move(d));
    }
    return rep;
}

}  // namespace cornerhom
