#pragma once

namespace carpet {

/// Complete elliptic integral of the first kind K(k), modulus k in [0, 1),
/// via the arithmetic-geometric mean.
double elliptic_K(double k);

/// Grotzsch ring modulus mu(r) = (pi/2) K(sqrt(1 - r^2)) / K(r), r in (0, 1).
/// Strictly decreasing from +infinity to 0.
double grotzsch_mu(double r);

/// The unique r in (0, 1) with grotzsch_mu(r) == m, m > 0.
double mu_inverse(double m);

/// Lower bound on the relative distance of the boundary curves of an annulus
/// of modulus >= m: (1/2)(1/mu_inverse(m/2)^2 - 1).
double separation_lower_bound(double m);

/// Upper bound on the modulus of a ring separating {0, -1} from {w, infinity}
/// with |w| = R: 2 mu(sqrt(1/(1+R))).
double teichmuller_upper_bound(double R);

struct KoebeBounds {
  double growth_lower = 0.0;      ///< lower bound for |f(z) - f(0)|
  double growth_upper = 0.0;      ///< upper bound for |f(z) - f(0)|
  double derivative_lower = 0.0;  ///< lower bound for |f'(z)|
  double derivative_upper = 0.0;  ///< upper bound for |f'(z)|
};

/// Koebe growth and distortion bounds for a univalent map of the unit disk,
/// at |z| = t with |f'(0)| = deriv_at_0.
KoebeBounds koebe_growth_bounds(double t, double deriv_at_0);

/// ((1 + r)/(1 - r))^8 with r = mu_inverse(m): the cross-ratio distortion
/// constant for conformal maps across an annulus of modulus >= m.
double distortion_constant(double m);

/// log(r_out / r_in) / (2 pi).
double round_annulus_modulus(double r_in, double r_out);

}  // namespace carpet
