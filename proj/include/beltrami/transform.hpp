#pragma once

#include "beltrami/field.hpp"

namespace beltrami {

/// Physical samples -> Fourier coefficients. Throws Error on non-finite input.
template <int C>
Spectral<C> forward_transform(const Physical<C>& f);

/// Fourier coefficients -> physical samples (exact trigonometric interpolant at grid points).
template <int C>
Physical<C> inverse_transform(const Spectral<C>& f);

namespace detail {
void forward_component(const GridSpec& g, const Eigen::ArrayXd& in, Eigen::ArrayXcd& out);
void inverse_component(const GridSpec& g, const Eigen::ArrayXcd& in, Eigen::ArrayXd& out);
}  // namespace detail

template <int C>
Spectral<C> forward_transform(const Physical<C>& f) {
  if (!f.all_finite()) throw Error("forward_transform: non-finite input");
  Spectral<C> out(f.grid);
  for (int c = 0; c < C; ++c) detail::forward_component(f.grid, f.comp[c], out.comp[c]);
  return out;
}

template <int C>
Physical<C> inverse_transform(const Spectral<C>& f) {
  Physical<C> out(f.grid);
  for (int c = 0; c < C; ++c) detail::inverse_component(f.grid, f.comp[c], out.comp[c]);
  return out;
}

}  // namespace beltrami
