#ifndef CMVLAB_SECONDKIND_HPP
#define CMVLAB_SECONDKIND_HPP

#include <vector>

#include "functional.hpp"
#include "gaussborel.hpp"

namespace cmvlab {

// C_{1,k}(z) = <phi_{1,k}(z1), 1/(conj z - z2)>,
// C_{2,k}(z) = conj(<1/(conj z - z1), phi_{2,k}(z2)>); both holomorphic in z.

// d^order C_{family,k}(z) for every k < count, through the Cauchy pairing
std::vector<cplx> c_pairing_all(const FunctionalSpec& spec, const BiorthSystem<cplx>& sys, int family, cplx z, int order,
                                int count, const CauchyOptions& opt = {});
cplx c_pairing(const FunctionalSpec& spec, const BiorthSystem<cplx>& sys, int family, int k, cplx z, int order = 0,
               const CauchyOptions& opt = {});

struct SeriesValue {
    cplx value;
    double tail_bound = 0.0;
    int terms = 0;
    bool outside = true;
};

constexpr double default_tail_tolerance = 1e-12;

// row k of S1 G chi_1^*(z) (outside) or -S1 G chi_2(z) (inside); family 2 uses G^dagger and S2
SeriesValue c_series(const BiorthSystem<cplx>& sys, const GramTruncation<cplx>& G, int family, int k, cplx z,
                     int order = 0, double tail_tol = default_tail_tolerance);

enum class MixedKind { c_phi, phi_c };

// c_phi: sum_{k<l} conj(C_{2,k}^{(d1)}(x1)) H_k^{-1} phi_{1,k}^{(d2)}(x2)
// phi_c: sum_{k<l} conj(phi_{2,k}^{(d1)}(x1)) H_k^{-1} C_{1,k}^{(d2)}(x2)
cplx mixed_kernel(const BiorthSystem<cplx>& sys, const FunctionalSpec& spec, MixedKind which, int l, cplx x1, cplx x2,
                  int d1 = 0, int d2 = 0, const CauchyOptions& opt = {});

} // namespace cmvlab

#endif
