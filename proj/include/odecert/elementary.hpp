#pragma once

#include "odecert/interval.hpp"

#include <functional>

namespace odecert {

// Rigorous elementary functions on boxes. The *_raw variants compute a single
// enclosure at the requested accuracy; the public entry points additionally
// intersect down an 8-bit precision ladder so that results at bits and bits+8
// are nested (the precision-monotonicity contract).

// e^z for a complex dyadic point, via 2^-k argument scaling, Taylor series with
// an explicit tail bound, and k interval squarings. `w` is the working
// precision in bits.
ComplexBox exp_point(const Dyadic& re, const Dyadic& im, long w);

// Monotone endpoint enclosure of e^x over a real interval.
RealInterval exp_real(const RealInterval& x, long w);

// cos/sin over a real interval: midpoint series plus 1-Lipschitz widening.
struct CosSin {
    RealInterval cos, sin;
};
CosSin cossin_real(const RealInterval& theta, long w);

ComplexBox exp_box_raw(const ComplexBox& z, long bits);
ComplexBox exp_box(const ComplexBox& z, long bits);

// Complex sine/cosine through e^{iz}; exact scaling by i/2 keeps these
// rounding-free beyond the two exponentials.
ComplexBox sin_box_raw(const ComplexBox& z, long bits);
ComplexBox cos_box_raw(const ComplexBox& z, long bits);

// Intersect `raw` down the 8-bit ladder; enclosures at bits and bits+8 nest by
// construction. Throws if the levels fail to overlap (enclosure violation).
ComplexBox nested_box_eval(const std::function<ComplexBox(long)>& raw, long bits);

// Smallest long >= x.
long dyadic_ceil_long(const Dyadic& x);

} // namespace odecert
