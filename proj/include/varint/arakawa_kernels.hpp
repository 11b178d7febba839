#ifndef VARINT_ARAKAWA_KERNELS_HPP
#define VARINT_ARAKAWA_KERNELS_HPP

namespace varint {

/// 3x3 neighbourhood of one grid node; first letter x offset, second v
/// offset (m = -1, z = 0, p = +1).
struct Patch {
  double mm, mz, mp;
  double zm, zz, zp;
  double pm, pz, pp;
};

/// Arakawa's four second-order discretisations of [f,h], scale is
/// 1/(4 h_x h_v). The equal-weight combination of the first three is the
/// conservative bracket.
inline double j_pp(const Patch& f, const Patch& h, double scale) {
  return scale * ((f.pz - f.mz) * (h.zp - h.zm) -
                  (f.zp - f.zm) * (h.pz - h.mz));
}

inline double j_px(const Patch& f, const Patch& h, double scale) {
  return scale * (f.pz * (h.pp - h.pm) - f.mz * (h.mp - h.mm) -
                  f.zp * (h.pp - h.mp) + f.zm * (h.pm - h.mm));
}

inline double j_xp(const Patch& f, const Patch& h, double scale) {
  return scale * (f.pp * (h.zp - h.pz) - f.mm * (h.mz - h.zm) -
                  f.mp * (h.zp - h.mz) + f.pm * (h.pz - h.zm));
}

inline double j_xx(const Patch& f, const Patch& h, double scale) {
  return 0.5 * scale *
         ((f.pp - f.mm) * (h.mp - h.pm) - (f.mp - f.pm) * (h.pp - h.mm));
}

inline double arakawa_combined(const Patch& f, const Patch& h, double scale) {
  return (j_pp(f, h, scale) + j_px(f, h, scale) + j_xp(f, h, scale)) / 3.0;
}

}  // namespace varint

#endif
