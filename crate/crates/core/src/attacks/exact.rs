//! Exact rational evaluation of the intercept-resend detection sum
//!
//!   P = sum over basis offsets D = 1..d-1, weight 1/d, of
//!       sum over resend outcomes a' of  x (1 - x),
//!       with x = |<A_a | A'_{a'}>|^2,
//!
//! computed without floating point and without the closed-form rate
//! formulas, so it can serve as an independent oracle for them.
//!
//! Quadratic-phase route: expand |<.|.>|^2 and its square as root-of-unity
//! sums and exchange summation order; after summing over a' and D every
//! phase collapses through sum_k zeta^(mk) = d[m = 0 mod d], leaving the
//! integer lattice count
//!
//!   N2 = #{(j1,k1,j2,k2) in Z_d^4 : j1-k1+j2-k2 = 0 and
//!                                    j1^2-k1^2+j2^2-k2^2 = 0 (mod d)}
//!
//! and P = 1 - N2/d^3.
//!
//! Near-flat route: for basis offset D the overlaps are polynomials in
//! z = zeta^D with rational coefficients independent of D, so the full sum
//! over a' is one fixed polynomial F(z) mod z^d - 1, and summing over
//! D = 1..d-1 uses sum_D z^(kD) = d[k = 0] - 1, giving
//! P = (d f_0 - sum_k f_k)/d from F's coefficient vector alone.

use num_rational::Ratio;
use num_traits::Zero;

/// Exact detection rate for the quadratic-phase family, by lattice counting.
/// Caller guarantees d is an odd prime (the construction is only orthonormal
/// there), though the count itself is defined for any d.
pub(crate) fn quadratic_phase_rate(d: usize) -> Ratio<i128> {
    let m = d as i128;
    let mut n2: i128 = 0;
    for j1 in 0..m {
        for k1 in 0..m {
            for j2 in 0..m {
                // j1 - k1 + j2 - k2 = 0 fixes k2.
                let k2 = (j1 - k1 + j2).rem_euclid(m);
                let quad = (j1 * j1 - k1 * k1 + j2 * j2 - k2 * k2).rem_euclid(m);
                if quad == 0 {
                    n2 += 1;
                }
            }
        }
    }
    Ratio::new(1, 1) - Ratio::new(n2, m * m * m)
}

/// Cyclic polynomial over the rationals: coefficient k multiplies z^k, with
/// exponents reduced mod d (z^d = 1).
#[derive(Clone, Debug, PartialEq)]
struct CyclicPoly {
    coeffs: Vec<Ratio<i128>>,
}

impl CyclicPoly {
    fn zero(d: usize) -> Self {
        Self {
            coeffs: vec![Ratio::zero(); d],
        }
    }

    fn monomial(d: usize, exponent: usize, value: Ratio<i128>) -> Self {
        let mut p = Self::zero(d);
        p.coeffs[exponent % d] = value;
        p
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let d = self.coeffs.len();
        let mut out = Self::zero(d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[(i + j) % d] += a * b;
            }
        }
        out
    }

    fn scale(&self, s: Ratio<i128>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// Exact detection rate for the near-flat family, any d >= 2, through the
/// cyclic-polynomial route. Returns 0 at d = 2, where the two bases share
/// one projector set and the attack is undetectable.
pub(crate) fn near_flat_rate(d: usize) -> Ratio<i128> {
    let inv_d = Ratio::new(1, d as i128);
    let one = CyclicPoly::monomial(d, 0, Ratio::new(1, 1));

    // u = (z - 1)/d, ubar = (z^(d-1) - 1)/d: the off-component overlap
    // factors; w_neq = u * ubar is |off overlap|^2 as a polynomial in z.
    let u = CyclicPoly::monomial(d, 1, inv_d).sub(&CyclicPoly::monomial(d, 0, inv_d));
    let ubar = CyclicPoly::monomial(d, d - 1, inv_d).sub(&CyclicPoly::monomial(d, 0, inv_d));
    // e = 1 + u, ebar = 1 + ubar: the equal-row overlap factors.
    let e = one.add(&u);
    let ebar = one.add(&ubar);

    let w_eq = e.mul(&ebar);
    let w_neq = u.mul(&ubar);

    // Per-offset contribution summed over the d resend outcomes:
    // one equal-row term plus d-1 off-row terms, each of the form x - x^2.
    let eq_term = w_eq.sub(&w_eq.mul(&w_eq));
    let neq_term = w_neq.sub(&w_neq.mul(&w_neq));
    let f = eq_term.add(&neq_term.scale(Ratio::new(d as i128 - 1, 1)));

    // Sum over offsets D = 1..d-1 of F(zeta^D), using
    // sum_D zeta^(kD) = d[k = 0 mod d] - 1.
    let total: Ratio<i128> = f.coeffs[0] * Ratio::new(d as i128, 1)
        - f.coeffs.iter().sum::<Ratio<i128>>();
    total * inv_d
}
