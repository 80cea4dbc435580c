//! Discriminant groups `A_L = L*/L` with their finite quadratic forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gram::GramMatrix;
use super::mat::IntMat;
use super::reduce_mod;
use super::snf::smith_normal_form;

/// `x * gram * y^T` for rational coordinate vectors in the lattice basis.
pub(crate) fn pairing(gram: &IntMat, x: &[BigRational], y: &[BigRational]) -> BigRational {
    let n = gram.rows();
    assert!(x.len() == n && y.len() == n);
    let mut acc = BigRational::zero();
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            acc += &x[i] * BigRational::from(gram[(i, j)].clone()) * &y[j];
        }
    }
    acc
}

/// The finite abelian group `L*/L` as cyclic summands `Z_{d_1} + ... + Z_{d_m}`
/// with `d_1 | d_2 | ...`, each generator carrying a rational lift in the
/// lattice basis, together with the induced quadratic form.
///
/// Form values live in Q/2Z when the lattice is even and in Q/Z otherwise;
/// they are always returned reduced into `[0, modulus)`.
pub struct DiscriminantGroup {
    invariant_factors: Vec<BigInt>,
    generator_lifts: Vec<Vec<BigRational>>,
    gram: IntMat,
    snf_u: IntMat,
    snf_diag: Vec<BigInt>,
    nontrivial_positions: Vec<usize>,
    form_modulus: u64,
}

/// Computes `L*/L` from the Gram matrix of `L` via Smith normal form.
pub fn discriminant_group(g: &GramMatrix) -> DiscriminantGroup {
    let snf = smith_normal_form(g.matrix());
    let n = g.rank();
    let diag: Vec<BigInt> = (0..n).map(|i| snf.d[(i, i)].clone()).collect();
    debug_assert!(diag.iter().all(|x| !x.is_zero()));

    let mut invariant_factors = Vec::new();
    let mut generator_lifts = Vec::new();
    let mut nontrivial_positions = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        nontrivial_positions.push(i);
        invariant_factors.push(d.clone());
        let lift: Vec<BigRational> = (0..n)
            .map(|r| BigRational::new(snf.v[(r, i)].clone(), d.clone()))
            .collect();
        generator_lifts.push(lift);
    }

    DiscriminantGroup {
        invariant_factors,
        generator_lifts,
        gram: g.matrix().clone(),
        snf_u: snf.u,
        snf_diag: diag,
        nontrivial_positions,
        form_modulus: if g.is_even() { 2 } else { 1 },
    }
}

impl DiscriminantGroup {
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    /// Number of cyclic summands.
    pub fn num_generators(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn order(&self) -> BigInt {
        self.invariant_factors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }

    /// Rational lift of the `i`-th generator, in the lattice basis.
    pub fn generator_lift(&self, i: usize) -> &[BigRational] {
        &self.generator_lifts[i]
    }

    /// 2 when the lattice is even (form in Q/2Z), 1 otherwise (Q/Z).
    pub fn form_modulus(&self) -> u64 {
        self.form_modulus
    }

    /// Quadratic-form value of an arbitrary rational lift, reduced into
    /// `[0, form_modulus)`.
    pub fn q_of_lift(&self, lift: &[BigRational]) -> BigRational {
        reduce_mod(&pairing(&self.gram, lift, lift), self.form_modulus)
    }

    /// Bilinear pairing of two lifts, reduced into `[0, 1)`.
    pub fn bilinear_of_lifts(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        reduce_mod(&pairing(&self.gram, x, y), 1)
    }

    /// Quadratic-form value of the element `sum coeffs[i] * generator[i]`.
    pub fn q_element(&self, coeffs: &[BigInt]) -> BigRational {
        assert_eq!(coeffs.len(), self.num_generators());
        let n = self.gram.rows();
        let mut lift = vec![BigRational::zero(); n];
        for (c, g) in coeffs.iter().zip(&self.generator_lifts) {
            if c.is_zero() {
                continue;
            }
            let c = BigRational::from(c.clone());
            for (acc, x) in lift.iter_mut().zip(g) {
                *acc += &c * x;
            }
        }
        self.q_of_lift(&lift)
    }

    pub fn q_generator(&self, i: usize) -> BigRational {
        let mut coeffs = vec![BigInt::zero(); self.num_generators()];
        coeffs[i] = BigInt::one();
        self.q_element(&coeffs)
    }

    /// Coefficients (one per cyclic summand, reduced mod its order) of the
    /// class of a dual vector given by its rational lift; `None` when the
    /// lift does not pair integrally with the lattice.
    pub fn class_of(&self, lift: &[BigRational]) -> Option<Vec<BigInt>> {
        let n = self.gram.rows();
        assert_eq!(lift.len(), n);
        // y = G * lift must be integral exactly when lift is in the dual
        let mut y = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = BigRational::zero();
            for j in 0..n {
                acc += BigRational::from(self.gram[(i, j)].clone()) * &lift[j];
            }
            if !acc.is_integer() {
                return None;
            }
            y.push(acc.to_integer());
        }
        // image under U, then reduce against the SNF diagonal
        let mut coeffs = Vec::with_capacity(self.nontrivial_positions.len());
        for &p in &self.nontrivial_positions {
            let mut acc = BigInt::zero();
            for j in 0..n {
                acc += &self.snf_u[(p, j)] * &y[j];
            }
            coeffs.push(acc.mod_floor(&self.snf_diag[p]));
        }
        Some(coeffs)
    }

    /// All elements as coefficient tuples. Only sensible for small groups;
    /// callers are expected to bound the order themselves.
    pub fn element_coefficients(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![]];
        for d in &self.invariant_factors {
            let d = u64::try_from(d.clone()).expect("group too large to enumerate");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for c in 0..d {
                    let mut t = prefix.clone();
                    t.push(BigInt::from(c));
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }
}

impl std::fmt::Debug for DiscriminantGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z{d}"))
            .collect();
        write!(
            f,
            "DiscriminantGroup({})",
            if parts.is_empty() {
                "0".into()
            } else {
                parts.join(" + ")
            }
        )
    }
}
