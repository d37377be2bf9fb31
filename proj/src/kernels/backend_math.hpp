#pragma once

#include <cstdint>

namespace twostage::kernels::detail {

// Branch-free double-precision ln and sin/cos(2*pi*u) written against the
// pack interface. The algorithms are the classical table-free reduction +
// minimax polynomial schemes; every step is an IEEE add/sub/mul/div/sqrt, so
// the scalar and AVX2 instantiations agree bit for bit.
template <class P>
struct VecMath {
  using D = typename P::D;
  using U = typename P::U;

  static constexpr double kTwo52 = 4503599627370496.0;  // 2^52

  /// ln(x) for normal, strictly positive x (no zero/inf/NaN handling).
  static D vlog(D x) {
    const D one = P::dset(1.0);
    const D two = P::dset(2.0);
    const D half = P::dset(0.5);
    const D ln2_hi = P::dset(6.93147180369123816490e-01);
    const D ln2_lo = P::dset(1.90821492927058770002e-10);
    const D lg1 = P::dset(6.666666666666735130e-01);
    const D lg2 = P::dset(3.999999999940941908e-01);
    const D lg3 = P::dset(2.857142874366239149e-01);
    const D lg4 = P::dset(2.222219843214978396e-01);
    const D lg5 = P::dset(1.818357216161805012e-01);
    const D lg6 = P::dset(1.531383769920937332e-01);
    const D lg7 = P::dset(1.479819860511658591e-01);

    // Reduce x = 2^k * m with m in [sqrt(1/2), sqrt(2)).
    const U bx = P::d2u(x);
    const U hx = P::template shr<32>(bx);
    const U hman = P::uand(hx, P::uset(0xFFFFFu));
    const U i = P::uand(P::uadd(hman, P::uset(0x95f64u)), P::uset(0x100000u));
    const U kbiased =
        P::uadd(P::template shr<20>(hx), P::template shr<20>(i));
    const U newhx = P::uor(hman, P::uxor(i, P::uset(0x3FF00000u)));
    const U nbits =
        P::uor(P::uand(bx, P::uset(0xFFFFFFFFu)), P::template shl<32>(newhx));
    const D m = P::u2d(nbits);
    const D dk = P::sub(small_u64_to_f64(kbiased), P::dset(1023.0));

    const D f = P::sub(m, one);
    const D s = P::div(f, P::add(two, f));
    const D z = P::mul(s, s);
    const D w = P::mul(z, z);
    const D t1 =
        P::mul(w, P::add(lg2, P::mul(w, P::add(lg4, P::mul(w, lg6)))));
    const D t2 = P::mul(
        z, P::add(lg1, P::mul(w, P::add(lg3, P::mul(w, P::add(lg5,
                                                      P::mul(w, lg7)))))));
    const D r = P::add(t2, t1);
    const D hfsq = P::mul(half, P::mul(f, f));
    const D inner = P::add(P::mul(s, P::add(hfsq, r)), P::mul(dk, ln2_lo));
    return P::sub(P::mul(dk, ln2_hi), P::sub(P::sub(hfsq, inner), f));
  }

  /// sin and cos of 2*pi*u for u in [0, 1). The quadrant reduction happens in
  /// u-space (exact), so there is no large-angle cancellation.
  static void sincos2pi(D u, D& sin_out, D& cos_out) {
    const D one = P::dset(1.0);
    const D half = P::dset(0.5);
    const D pio2 = P::dset(1.57079632679489661923);
    const D big = P::dset(kTwo52);

    const D w4 = P::mul(u, P::dset(4.0));
    const D t = P::add(w4, big);          // round-to-nearest-even of w4
    const D qf = P::sub(t, big);
    const U q = P::uand(P::d2u(t), P::uset(3));
    const D r = P::mul(P::sub(w4, qf), pio2);  // in [-pi/4, pi/4]
    const D z = P::mul(r, r);

    // kernel sin on [-pi/4, pi/4]
    const D s1 = P::dset(-1.66666666666666324348e-01);
    const D s2 = P::dset(8.33333333332248946124e-03);
    const D s3 = P::dset(-1.98412698298579493134e-04);
    const D s4 = P::dset(2.75573137070700676789e-06);
    const D s5 = P::dset(-2.50507602534068634195e-08);
    const D s6 = P::dset(1.58969099521155010221e-10);
    const D sp = P::add(
        s2, P::mul(z, P::add(s3, P::mul(z, P::add(s4, P::mul(z, P::add(
                                                      s5, P::mul(z, s6))))))));
    const D sinr =
        P::add(r, P::mul(P::mul(z, r), P::add(s1, P::mul(z, sp))));

    // kernel cos on [-pi/4, pi/4]
    const D c1 = P::dset(4.16666666666666019037e-02);
    const D c2 = P::dset(-1.38888888888741095749e-03);
    const D c3 = P::dset(2.48015872894767294178e-05);
    const D c4 = P::dset(-2.75573143513906633035e-07);
    const D c5 = P::dset(2.08757232129817482790e-09);
    const D c6 = P::dset(-1.13596475577881948265e-11);
    const D cp = P::mul(
        z, P::add(c1, P::mul(z, P::add(c2, P::mul(z, P::add(c3, P::mul(
            z, P::add(c4, P::mul(z, P::add(c5, P::mul(z, c6)))))))))));
    const D hz = P::mul(half, z);
    const D wc = P::sub(one, hz);
    const D cosr =
        P::add(wc, P::add(P::sub(P::sub(one, wc), hz), P::mul(z, cp)));

    // Quadrant: swap for odd q; sign flips from bit 1 of q (sin) and q+1 (cos).
    const U swap = P::template shl<63>(P::uand(q, P::uset(1)));
    const U ssign = P::template shl<62>(P::uand(q, P::uset(2)));
    const U csign =
        P::template shl<62>(P::uand(P::uadd(q, P::uset(1)), P::uset(2)));
    const D sa = P::blend(sinr, cosr, swap);
    const D ca = P::blend(cosr, sinr, swap);
    sin_out = P::u2d(P::uxor(P::d2u(sa), ssign));
    cos_out = P::u2d(P::uxor(P::d2u(ca), csign));
  }

  /// 64 random bits -> [0, 1) with 52-bit resolution.
  static D unit_halfopen(U bits) {
    const U m = P::uor(P::template shr<12>(bits), P::uset(0x3FF0000000000000ull));
    return P::sub(P::u2d(m), P::dset(1.0));
  }

  /// Box-Muller: two 64-bit words -> two unit normals.
  static void gaussian_pair(U lo, U hi, D& z0, D& z1) {
    const D u1 = P::sub(P::dset(1.0), unit_halfopen(lo));  // (0, 1]
    const D u2 = unit_halfopen(hi);
    const D rad = P::vsqrt(P::mul(P::dset(-2.0), vlog(u1)));
    D s, c;
    sincos2pi(u2, s, c);
    z0 = P::mul(rad, c);
    z1 = P::mul(rad, s);
  }

  /// Exact integer-valued conversion for v < 2^52.
  static D small_u64_to_f64(U v) {
    return P::sub(P::u2d(P::uor(v, P::uset(0x4330000000000000ull))),
                  P::dset(kTwo52));
  }
};

}  // namespace twostage::kernels::detail
