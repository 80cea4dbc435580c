//! Counts of Fourier-Mukai partners via even overlattices of `S + T`.
//!
//! The classification of glue subgroups splits into Type I (split group
//! `Z_3 + Z_{2d'}`) and Type II (cyclic `Z_{6d'}`); the evenness of the
//! resulting overlattice is a pair of explicit congruences on the glue
//! parameters. Three routes to the partner count are implemented: the
//! closed formula in [`fm_count`], the parameter enumeration behind
//! [`count_m_st`], and the subgroup scans [`glue_oracle_count`] /
//! [`glue_oracle_exhaustive`]. They are compared by tests, never trusted
//! individually.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::lattice::{is_saturated, overlattice_from_glue, GlueDatum, LatticeError, Overlattice};
use crate::modarith::{unit_square_root_count, ModArithError};
use crate::mukai::{
    build_s, build_t, ell_ambient, t1_ambient, t2_ambient, AdmissibilityError, SpecialDiscriminant,
    AMBIENT_RANK,
};

#[derive(Debug, Error)]
pub enum CountError {
    #[error(transparent)]
    Inadmissible(#[from] AdmissibilityError),
    #[error("d = {0} is not divisible by 18, so the overlattice enumeration does not apply")]
    NotDivisibleBy18(u64),
    #[error("d' = {d_prime} exceeds the {what} bound {bound}")]
    BoundExceeded {
        d_prime: u64,
        what: &'static str,
        bound: u64,
    },
    #[error(transparent)]
    ModArith(#[from] ModArithError),
}

/// Glue parameters of one even overlattice in `M_{S,T}`.
///
/// Type I is the split glue group generated by `(b1 l + t1)/3` and
/// `(b2 l + t2)/2d'`; Type II is the cyclic one generated by
/// `(b3 l + 2d'k t1 + t2)/6d'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OverlatticeDescriptor {
    TypeI { b1: u64, b2: u64 },
    TypeII { k: u64, b3: u64 },
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

fn exact_div(n: u64, by: u64, what: &str) -> u64 {
    assert!(
        n.is_multiple_of(by),
        "invariant breach: {what} = {n} is not divisible by {by}"
    );
    n / by
}

/// All Type I descriptors for `d'`: empty unless `d' = 2 (mod 3)`, else
/// the pairs `b1 in {1, 2}`, `0 <= b2 < 2d'` with `b2^2 = 1 (mod 4d')`.
pub fn enumerate_type_i(d_prime: u64) -> Vec<OverlatticeDescriptor> {
    assert!(d_prime >= 1);
    if d_prime % 3 != 2 {
        return Vec::new();
    }
    let modulus = 4 * d_prime as u128;
    let mut out = Vec::new();
    for b1 in [1u64, 2] {
        for b2 in 0..2 * d_prime {
            if (b2 as u128 * b2 as u128) % modulus == 1 {
                // b2^2 = 1 (mod 4d') already forces gcd(b2, 2d') = 1
                debug_assert_eq!(gcd(b2, 2 * d_prime), 1);
                out.push(OverlatticeDescriptor::TypeI { b1, b2 });
            }
        }
    }
    out
}

/// All Type II descriptors for `d'` and `k in {0, 1, 2}`: the residues
/// `0 <= b3 < 6d'` coprime to `6d'` with `b3^2 + 4d'k^2 = 1 (mod 12d')`.
pub fn enumerate_type_ii(d_prime: u64, k: u64) -> Vec<OverlatticeDescriptor> {
    assert!(d_prime >= 1 && k <= 2);
    let modulus = 12 * d_prime as u128;
    let shift = (4 * d_prime as u128 * (k * k) as u128) % modulus;
    let mut out = Vec::new();
    for b3 in 0..6 * d_prime {
        if gcd(b3, 6 * d_prime) != 1 {
            continue;
        }
        if (b3 as u128 * b3 as u128 + shift) % modulus == 1 {
            out.push(OverlatticeDescriptor::TypeII { k, b3 });
        }
    }
    out
}

/// Sizes of the four descriptor families for one `d'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountsByType {
    pub type_i: u64,
    pub type_ii_k0: u64,
    pub type_ii_k1: u64,
    pub type_ii_k2: u64,
}

impl CountsByType {
    pub fn total(&self) -> u64 {
        self.type_i + self.type_ii_k0 + self.type_ii_k1 + self.type_ii_k2
    }
}

pub fn counts_by_type(d_prime: u64) -> CountsByType {
    CountsByType {
        type_i: enumerate_type_i(d_prime).len() as u64,
        type_ii_k0: enumerate_type_ii(d_prime, 0).len() as u64,
        type_ii_k1: enumerate_type_ii(d_prime, 1).len() as u64,
        type_ii_k2: enumerate_type_ii(d_prime, 2).len() as u64,
    }
}

/// `|M_{S,T}|` by direct enumeration of both descriptor types.
pub fn count_m_st(d_prime: u64) -> u64 {
    counts_by_type(d_prime).total()
}

/// `|M_{S,T}|` by the closed form: `|(Z_{4d'})_2|` times 3/2, 1 or 2
/// according to `d' = 0, 1, 2 (mod 3)`.
pub fn count_m_st_closed_form(d_prime: u64) -> Result<u64, CountError> {
    let u = unit_square_root_count(4 * d_prime)?;
    Ok(match d_prime % 3 {
        0 => 3 * exact_div(u, 2, "|(Z_4d')_2| in the d' = 0 (mod 3) case"),
        1 => u,
        _ => 2 * u,
    })
}

/// Scan bound for [`glue_oracle_count`].
pub const ORACLE_BOUND: u64 = 10_000;
/// Scan bound for [`glue_oracle_exhaustive`].
pub const EXHAUSTIVE_BOUND: u64 = 10;

/// The pairs `(y, z)` such that the cyclic subgroup generated by
/// `(1, y, z)` in `A_S + A_T = Z_{6d'} + Z_3 + Z_{6d'}` is an admissible
/// glue group: order `6d'`, trivial intersection with `A_S` and `A_T`,
/// and isotropic for the quadratic form.
///
/// In this graph form the first coordinate already forces order `6d'`
/// and trivial intersection with `A_T`; the `A_S` intersection is trivial
/// iff `lcm(3/gcd(y,3), 6d'/gcd(z,6d')) = 6d'`, and isotropy of the
/// generator means `z^2 - 1 - 4d'y^2 = 0 (mod 12d')`.
pub fn glue_oracle_pairs(d_prime: u64) -> Result<Vec<(u64, u64)>, CountError> {
    if d_prime == 0 || d_prime > ORACLE_BOUND {
        return Err(CountError::BoundExceeded {
            d_prime,
            what: "glue oracle",
            bound: ORACLE_BOUND,
        });
    }
    let n = 6 * d_prime;
    let modulus = 2 * n as u128; // 12 d'
    let mut out = Vec::new();
    for y in 0..3u64 {
        let shift = (4 * d_prime as u128 * (y * y) as u128) % modulus;
        for z in 0..n {
            let isotropic = (z as u128 * z as u128 + modulus - shift) % modulus == 1;
            if !isotropic {
                continue;
            }
            // gcd(0, m) = m, so y = 0 and z = 0 fall out correctly
            let m_y = 3 / gcd(y, 3);
            let m_z = n / gcd(z, n);
            let lcm = m_y / gcd(m_y, m_z) * m_z;
            if lcm == n {
                out.push((y, z));
            }
        }
    }
    Ok(out)
}

/// `|M_{S,T}|` counted through glue subgroups, independent of the
/// `b1/b2/b3` parametrization.
pub fn glue_oracle_count(d_prime: u64) -> Result<u64, CountError> {
    Ok(glue_oracle_pairs(d_prime)?.len() as u64)
}

/// `|M_{S,T}|` by generic subgroup enumeration: all subgroups of
/// `Z_{6d'} + Z_3 + Z_{6d'}` of order `6d'` with trivial intersections
/// and `q = 0` on every element.
///
/// Subgroups are enumerated as Hermite-form sublattices of `Z^3`
/// containing the relation lattice, so nothing here assumes the graph
/// normalization used by [`glue_oracle_pairs`].
pub fn glue_oracle_exhaustive(d_prime: u64) -> Result<u64, CountError> {
    if d_prime == 0 || d_prime > EXHAUSTIVE_BOUND {
        return Err(CountError::BoundExceeded {
            d_prime,
            what: "exhaustive subgroup enumeration",
            bound: EXHAUSTIVE_BOUND,
        });
    }
    let lambda = [6 * d_prime as i128, 3, 6 * d_prime as i128];
    let target_order = 6 * d_prime as i128;
    let index = lambda.iter().product::<i128>() / target_order; // 18 d'

    // membership of v in the row lattice of the HNF matrix
    let contains = |h: &[[i128; 3]; 3], v: [i128; 3]| -> bool {
        if v[0] % h[0][0] != 0 {
            return false;
        }
        let alpha = v[0] / h[0][0];
        let r1 = v[1] - alpha * h[0][1];
        if r1 % h[1][1] != 0 {
            return false;
        }
        let beta = r1 / h[1][1];
        let r2 = v[2] - alpha * h[0][2] - beta * h[1][2];
        r2 % h[2][2] == 0
    };

    let mut count = 0u64;
    let divisors: Vec<i128> = (1..=index).filter(|x| index % x == 0).collect();
    for &a in &divisors {
        for &dd in &divisors {
            if index % (a * dd) != 0 {
                continue;
            }
            let f = index / (a * dd);
            for b in 0..dd {
                for c in 0..f {
                    for e in 0..f {
                        let h = [[a, b, c], [0, dd, e], [0, 0, f]];
                        // the sublattice must contain the relations
                        if !contains(&h, [lambda[0], 0, 0])
                            || !contains(&h, [0, lambda[1], 0])
                            || !contains(&h, [0, 0, lambda[2]])
                        {
                            continue;
                        }
                        if subgroup_is_admissible(&h, d_prime) {
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(count)
}

/// Closure of the subgroup generated by the rows of `h` modulo the
/// relation lattice, then the intersection and isotropy checks.
fn subgroup_is_admissible(h: &[[i128; 3]; 3], d_prime: u64) -> bool {
    let n = 6 * d_prime as i128;
    let lambda = [n, 3, n];
    let reduce = |v: [i128; 3]| -> [i128; 3] {
        [
            v[0].rem_euclid(lambda[0]),
            v[1].rem_euclid(lambda[1]),
            v[2].rem_euclid(lambda[2]),
        ]
    };
    let mut elements: BTreeSet<[i128; 3]> = BTreeSet::new();
    elements.insert([0, 0, 0]);
    let gens: Vec<[i128; 3]> = h.iter().map(|&r| reduce(r)).collect();
    let mut frontier: Vec<[i128; 3]> = vec![[0, 0, 0]];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = reduce([x[0] + g[0], x[1] + g[1], x[2] + g[2]]);
            if elements.insert(y) {
                frontier.push(y);
            }
        }
    }
    debug_assert_eq!(elements.len() as i128, n, "index predicts the order");

    let twelve_dp = 12 * d_prime as i128;
    for &[x, y, z] in &elements {
        if x == 0 && y == 0 && z == 0 {
            continue;
        }
        if y == 0 && z == 0 {
            return false; // meets A_S
        }
        if x == 0 {
            return false; // meets A_T
        }
        // q(x, y, z) = (z^2 - x^2 - 4d'y^2)/(6d') mod 2
        let num = z * z - x * x - 4 * d_prime as i128 * y * y;
        if num.rem_euclid(twelve_dp) != 0 {
            return false;
        }
    }
    true
}

/// Number of Fourier-Mukai partners of a very general member of the
/// special divisor of discriminant `d`, by the closed formula.
///
/// With `u = |(Z_2d)_2|` the value is `u/4` when `3` does not divide
/// `d`; `u/8` when `3 | d` but `9` does not divide `d`; and for `9 | d`
/// (so `d = 18 d'`) it is `u/4`, `u/2`, `3u/4` according to
/// `d' = 1, 2, 0 (mod 3)`.
pub fn fm_count(d: u64) -> Result<u64, CountError> {
    let sd = SpecialDiscriminant::new(d)?;
    let n2d = d.checked_mul(2).ok_or(ModArithError::OutOfRange(d))?;
    let u = unit_square_root_count(n2d)?;
    let value = if !d.is_multiple_of(3) {
        exact_div(u, 4, "|(Z_2d)_2| with 3 not dividing d")
    } else if !d.is_multiple_of(9) {
        exact_div(u, 8, "|(Z_2d)_2| with 3 | d, 9 not dividing d")
    } else {
        let dp = sd.d_prime().expect("9 | d implies 18 | d");
        match dp % 3 {
            1 => exact_div(u, 4, "|(Z_2d)_2| with d' = 1 (mod 3)"),
            2 => exact_div(u, 2, "|(Z_2d)_2| with d' = 2 (mod 3)"),
            _ => 3 * exact_div(u, 4, "|(Z_2d)_2| with 27 | d"),
        }
    };
    Ok(value)
}

/// The partner count through the overlattice classification:
/// `|FM| = |M_{S,T}| / 2`, for `18 | d`.
///
/// The two reduction steps are kept visible: the triple count is
/// `2 |M_{S,T}|` and the forgetful map divides it by 4.
pub fn fm_count_via_overlattices(d: u64) -> Result<u64, CountError> {
    if !d.is_multiple_of(18) || d == 0 {
        return Err(CountError::NotDivisibleBy18(d));
    }
    let m = count_m_st(d / 18);
    let triples = 2 * m;
    let via_triples = exact_div(triples, 4, "|FM~| from the 4-to-1 forgetful map");
    let direct = exact_div(m, 2, "|M_{S,T}| halved");
    assert_eq!(via_triples, direct, "the two reductions must agree");
    Ok(direct)
}

/// Glue datum of a descriptor: rational generators in the `S + T` basis.
pub fn descriptor_glue(d_prime: u64, desc: &OverlatticeDescriptor) -> GlueDatum {
    let scale = |v: Vec<BigInt>, mult: i64, den: u64| -> Vec<BigRational> {
        v.into_iter()
            .map(|x| BigRational::new(x * BigInt::from(mult), BigInt::from(den)))
            .collect()
    };
    let add = |a: Vec<BigRational>, b: Vec<BigRational>| -> Vec<BigRational> {
        a.into_iter().zip(b).map(|(x, y)| x + y).collect()
    };
    match *desc {
        OverlatticeDescriptor::TypeI { b1, b2 } => {
            let g1 = add(
                scale(ell_ambient(), b1 as i64, 3),
                scale(t1_ambient(), 1, 3),
            );
            let g2 = add(
                scale(ell_ambient(), b2 as i64, 2 * d_prime),
                scale(t2_ambient(), 1, 2 * d_prime),
            );
            GlueDatum {
                generators: vec![g1, g2],
            }
        }
        OverlatticeDescriptor::TypeII { k, b3 } => {
            let den = 6 * d_prime;
            let g = add(
                add(
                    scale(ell_ambient(), b3 as i64, den),
                    scale(t1_ambient(), (2 * d_prime * k) as i64, den),
                ),
                scale(t2_ambient(), 1, den),
            );
            GlueDatum {
                generators: vec![g],
            }
        }
    }
}

/// Assembles the overlattice of a descriptor with the lattice engine.
pub fn assemble_overlattice(
    d_prime: u64,
    desc: &OverlatticeDescriptor,
) -> Result<Overlattice, LatticeError> {
    let s = build_s(d_prime);
    let t = build_t(d_prime);
    overlattice_from_glue(&s, &t, &descriptor_glue(d_prime, desc))
}

/// Outcome of assembling one descriptor and certifying it against the
/// defining conditions of `M_{S,T}`.
#[derive(Debug, Clone)]
pub struct GramCheck {
    pub even: bool,
    pub rank: usize,
    pub det: BigInt,
    pub index: BigInt,
    pub s_saturated: bool,
    pub t_saturated: bool,
}

impl GramCheck {
    pub fn all_good(&self, d_prime: u64) -> bool {
        self.even
            && self.rank == AMBIENT_RANK
            && self.det.abs() == BigInt::from(3)
            && self.index == BigInt::from(6 * d_prime)
            && self.s_saturated
            && self.t_saturated
    }
}

/// Assembles the descriptor's overlattice and checks evenness, rank,
/// determinant, glue index, and saturation of the images of `S` and `T`.
pub fn check_descriptor_lattice(
    d_prime: u64,
    desc: &OverlatticeDescriptor,
) -> Result<GramCheck, LatticeError> {
    let over = assemble_overlattice(d_prime, desc)?;
    let rank = over.gram.rank();

    let to_rat =
        |v: Vec<BigInt>| -> Vec<BigRational> { v.into_iter().map(BigRational::from).collect() };
    let mut ambient_vectors = vec![to_rat(ell_ambient())];
    for i in 0..AMBIENT_RANK - 1 {
        let mut v = vec![BigInt::from(0); AMBIENT_RANK];
        v[i + 1] = BigInt::from(1);
        ambient_vectors.push(to_rat(v));
    }
    let coords = over
        .ambient_many_in_basis(&ambient_vectors)
        .expect("S + T embeds in its overlattice");
    let s_saturated = is_saturated(&coords[..1], &over.gram)?;
    let t_saturated = is_saturated(&coords[1..], &over.gram)?;

    Ok(GramCheck {
        even: over.gram.is_even(),
        rank,
        det: over.gram.det().clone(),
        index: over.index.clone(),
        s_saturated,
        t_saturated,
    })
}

/// Canonical generator `(1, y, z)` of the glue subgroup of a descriptor
/// in the coordinates of `A_S + A_T = Z_{6d'} + Z_3 + Z_{6d'}`.
///
/// Every admissible glue subgroup projects bijectively onto `A_S`, so the
/// unique element over `1` is a canonical marker: two descriptors give
/// the same subgroup iff they share it.
pub fn canonical_generator(d_prime: u64, desc: &OverlatticeDescriptor) -> (u64, u64, u64) {
    canonical_generator_signed(d_prime, desc, false)
}

/// Same as [`canonical_generator`] after negating the `l`-coordinate of
/// the glue generators (the effect of replacing `l` by `-l`).
pub fn canonical_generator_neg_ell(d_prime: u64, desc: &OverlatticeDescriptor) -> (u64, u64, u64) {
    canonical_generator_signed(d_prime, desc, true)
}

fn canonical_generator_signed(
    d_prime: u64,
    desc: &OverlatticeDescriptor,
    negate_ell: bool,
) -> (u64, u64, u64) {
    let n = 6 * d_prime;
    let neg = |x: u64| -> u64 {
        if negate_ell {
            (n - x % n) % n
        } else {
            x % n
        }
    };
    match *desc {
        OverlatticeDescriptor::TypeII { k, b3 } => {
            let first = neg(b3);
            let u = mod_inverse(first, n).expect("b3 is a unit mod 6d'");
            (1, (u * k) % 3, u % n)
        }
        OverlatticeDescriptor::TypeI { b1, b2 } => {
            // generators (A1, 1, 0) and (A2, 0, 3) with A1 = +-2d'b1,
            // A2 = +-3b2; solve a*A1 + b*A2 = 1 (mod 6d')
            let a1 = neg((2 * d_prime * b1) % n);
            let a2 = neg((3 * b2) % n);
            debug_assert_eq!(a2 % 3, 0);
            let a2_third = a2 / 3;
            for a in 0..3u64 {
                let c = (1 + n - (a * a1) % n) % n;
                if !c.is_multiple_of(3) {
                    continue;
                }
                let inv = mod_inverse(a2_third % (2 * d_prime), 2 * d_prime)
                    .expect("b2 is a unit mod 2d'");
                let b = ((c / 3) % (2 * d_prime) * inv) % (2 * d_prime);
                // verify the solve before accepting this a
                if (a * a1 + b * a2) % n == 1 {
                    return (1, a % 3, (3 * b) % n);
                }
            }
            unreachable!("the glue subgroup always projects onto A_S");
        }
    }
}

/// Per-discriminant report: the counts along every route that applies,
/// plus the agreement verdict.
#[derive(Debug, Clone)]
pub struct FMRecord {
    pub d: u64,
    pub d_prime: Option<u64>,
    /// `|(Z_2d)_2|`.
    pub u_2d: u64,
    pub count_formula: u64,
    pub counts_by_type: Option<CountsByType>,
    /// `|M_{S,T}| / 2`, when the enumeration ran.
    pub count_enumeration: Option<u64>,
    /// `glue_oracle_count / 2`, when the oracle ran.
    pub count_oracle: Option<u64>,
    pub agree: bool,
}

/// Bounds that decide which routes [`FMRecord::compute`] runs.
#[derive(Debug, Clone, Copy)]
pub struct RecordOptions {
    /// Enumerate descriptors and run the glue oracle for `d' <=` this.
    pub enumeration_limit: u64,
}

impl Default for RecordOptions {
    fn default() -> Self {
        RecordOptions {
            enumeration_limit: ORACLE_BOUND,
        }
    }
}

impl FMRecord {
    pub fn compute(d: u64, opts: &RecordOptions) -> Result<FMRecord, CountError> {
        let sd = SpecialDiscriminant::new(d)?;
        let count_formula = fm_count(d)?;
        let n2d = d.checked_mul(2).ok_or(ModArithError::OutOfRange(d))?;
        let u_2d = unit_square_root_count(n2d)?;

        let mut counts = None;
        let mut count_enumeration = None;
        let mut count_oracle = None;
        if let Some(dp) = sd.d_prime() {
            if dp <= opts.enumeration_limit {
                let by_type = counts_by_type(dp);
                count_enumeration = Some(exact_div(by_type.total(), 2, "|M_{S,T}| halved"));
                counts = Some(by_type);
                if dp <= ORACLE_BOUND {
                    let oracle = glue_oracle_count(dp)?;
                    count_oracle = Some(exact_div(oracle, 2, "oracle |M_{S,T}| halved"));
                }
            }
        }
        let agree = [count_enumeration, count_oracle]
            .iter()
            .flatten()
            .all(|&c| c == count_formula);
        Ok(FMRecord {
            d,
            d_prime: sd.d_prime(),
            u_2d,
            count_formula,
            counts_by_type: counts,
            count_enumeration,
            count_oracle,
            agree,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn type_i_pairs(d_prime: u64) -> Vec<(u64, u64)> {
        enumerate_type_i(d_prime)
            .iter()
            .map(|d| match *d {
                OverlatticeDescriptor::TypeI { b1, b2 } => (b1, b2),
                _ => unreachable!(),
            })
            .collect()
    }

    fn type_ii_values(d_prime: u64, k: u64) -> Vec<u64> {
        enumerate_type_ii(d_prime, k)
            .iter()
            .map(|d| match *d {
                OverlatticeDescriptor::TypeII { b3, .. } => b3,
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn type_i_examples() {
        assert!(enumerate_type_i(1).is_empty());
        assert_eq!(type_i_pairs(2), vec![(1, 1), (1, 3), (2, 1), (2, 3)]);
        assert_eq!(type_i_pairs(5), vec![(1, 1), (1, 9), (2, 1), (2, 9)]);
    }

    #[test]
    fn type_ii_examples() {
        assert_eq!(type_ii_values(1, 0), vec![1, 5]);
        assert_eq!(type_ii_values(3, 1), vec![5, 13]);
        assert!(enumerate_type_ii(1, 1).is_empty());
        assert_eq!(type_ii_values(3, 0), vec![1, 17]);
        assert_eq!(type_ii_values(3, 2), vec![5, 13]);
    }

    #[test]
    fn count_m_st_examples() {
        assert_eq!(count_m_st(1), 2);
        assert_eq!(count_m_st(2), 8);
        assert_eq!(count_m_st(3), 6);
    }

    #[test]
    fn count_m_st_matches_closed_form() {
        for dp in 1..=120u64 {
            assert_eq!(
                count_m_st(dp),
                count_m_st_closed_form(dp).unwrap(),
                "mismatch at d' = {dp}"
            );
        }
    }

    #[test]
    fn per_family_closed_forms() {
        for dp in 1..=60u64 {
            let u4 = unit_square_root_count(4 * dp).unwrap();
            let u12 = unit_square_root_count(12 * dp).unwrap();
            let c = counts_by_type(dp);
            let expected_i = if dp % 3 == 2 { u4 } else { 0 };
            assert_eq!(c.type_i, expected_i, "type I at d' = {dp}");
            assert_eq!(c.type_ii_k0, u12 / 2, "type II k=0 at d' = {dp}");
            let expected_k12 = if dp % 3 == 0 { u4 / 2 } else { 0 };
            assert_eq!(c.type_ii_k1, expected_k12, "type II k=1 at d' = {dp}");
            assert_eq!(c.type_ii_k2, expected_k12, "type II k=2 at d' = {dp}");
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(glue_oracle_count(1).unwrap(), 2);
        assert_eq!(glue_oracle_count(2).unwrap(), 8);
        assert_eq!(glue_oracle_count(3).unwrap(), 6);
        // the closed form, the enumeration and the subgroup scans all give
        // 8 for d' = 5
        assert_eq!(glue_oracle_count(5).unwrap(), 8);
        assert_eq!(glue_oracle_pairs(1).unwrap(), vec![(0, 1), (0, 5)]);
    }

    #[test]
    fn oracle_rejects_past_bound() {
        assert!(matches!(
            glue_oracle_count(ORACLE_BOUND + 1),
            Err(CountError::BoundExceeded { .. })
        ));
        assert!(matches!(
            glue_oracle_exhaustive(EXHAUSTIVE_BOUND + 1),
            Err(CountError::BoundExceeded { .. })
        ));
    }

    /// The lcm-based intersection test against a literal scan over all
    /// multiples of the generator.
    #[test]
    fn oracle_intersection_shortcut_matches_literal_scan() {
        for dp in 1..=25u64 {
            let n = 6 * dp;
            let literal = |y: u64, z: u64| -> bool {
                (1..n).all(|m| !((m * y).is_multiple_of(3) && (m * z).is_multiple_of(n)))
            };
            for y in 0..3 {
                for z in 0..n {
                    let m_y = 3 / gcd(y, 3);
                    let m_z = n / gcd(z, n);
                    let lcm = m_y / gcd(m_y, m_z) * m_z;
                    assert_eq!(
                        lcm == n,
                        literal(y, z),
                        "intersection test differs at d'={dp}, y={y}, z={z}"
                    );
                }
            }
        }
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(glue_oracle_exhaustive(1).unwrap(), 2);
        assert_eq!(glue_oracle_exhaustive(2).unwrap(), 8);
        // resolves the suspect value: all routes agree on 8, not 12
        assert_eq!(glue_oracle_exhaustive(5).unwrap(), 8);
    }

    #[test]
    fn exhaustive_matches_oracle_small() {
        for dp in 1..=6u64 {
            assert_eq!(
                glue_oracle_exhaustive(dp).unwrap(),
                glue_oracle_count(dp).unwrap(),
                "oracle reduction mismatch at d' = {dp}"
            );
        }
    }

    #[test]
    fn fm_count_golden_values() {
        assert_eq!(fm_count(18).unwrap(), 1);
        assert_eq!(fm_count(36).unwrap(), 4);
        assert_eq!(fm_count(54).unwrap(), 3);
        assert_eq!(fm_count(90).unwrap(), 4);
        assert_eq!(fm_count(8).unwrap(), 1);
        assert_eq!(fm_count(12).unwrap(), 1);
    }

    #[test]
    fn fm_count_rejects_inadmissible() {
        assert!(matches!(fm_count(10), Err(CountError::Inadmissible(_))));
        assert!(fm_count(7).is_err());
        assert!(fm_count(2).is_err());
    }

    #[test]
    fn via_overlattices_examples() {
        assert_eq!(fm_count_via_overlattices(18).unwrap(), 1);
        assert_eq!(fm_count_via_overlattices(36).unwrap(), 4);
        assert_eq!(fm_count_via_overlattices(90).unwrap(), 4);
        assert!(matches!(
            fm_count_via_overlattices(20),
            Err(CountError::NotDivisibleBy18(20))
        ));
    }

    #[test]
    fn three_paths_agree_up_to_360() {
        for d in (18..=360u64).step_by(18) {
            let dp = d / 18;
            let formula = fm_count(d).unwrap();
            let enumeration = fm_count_via_overlattices(d).unwrap();
            let oracle = glue_oracle_count(dp).unwrap();
            assert_eq!(formula, enumeration, "formula vs enumeration at d = {d}");
            assert_eq!(oracle % 2, 0);
            assert_eq!(formula, oracle / 2, "formula vs oracle at d = {d}");
        }
    }

    /// Descriptors and oracle pairs parametrize the same subgroups.
    #[test]
    fn descriptors_and_oracle_enumerate_the_same_subgroups() {
        for dp in 1..=50u64 {
            let mut from_desc = BTreeSet::new();
            for desc in all_descriptors(dp) {
                from_desc.insert(canonical_generator(dp, &desc));
            }
            let from_oracle: BTreeSet<(u64, u64, u64)> = glue_oracle_pairs(dp)
                .unwrap()
                .into_iter()
                .map(|(y, z)| (1, y, z))
                .collect();
            assert_eq!(
                from_desc, from_oracle,
                "parametrizations differ at d' = {dp}"
            );
        }
    }

    fn all_descriptors(dp: u64) -> Vec<OverlatticeDescriptor> {
        let mut v = enumerate_type_i(dp);
        for k in 0..3 {
            v.extend(enumerate_type_ii(dp, k));
        }
        v
    }

    /// Distinct descriptors generate distinct subgroups.
    #[test]
    fn descriptor_parametrization_is_injective() {
        for dp in 1..=50u64 {
            let descs = all_descriptors(dp);
            let canon: BTreeSet<_> = descs.iter().map(|d| canonical_generator(dp, d)).collect();
            assert_eq!(
                canon.len(),
                descs.len(),
                "descriptor collision at d' = {dp}"
            );
        }
    }

    /// Negating the l-coordinate always lands on a different subgroup.
    #[test]
    fn ell_sign_flip_changes_the_subgroup() {
        for dp in 1..=50u64 {
            for desc in all_descriptors(dp) {
                let plus = canonical_generator(dp, &desc);
                let minus = canonical_generator_neg_ell(dp, &desc);
                assert_ne!(plus, minus, "sign symmetry at d' = {dp}, {desc:?}");
            }
        }
    }

    #[test]
    fn assembled_lattices_are_sound_small() {
        for dp in 1..=6u64 {
            for desc in all_descriptors(dp) {
                let check = check_descriptor_lattice(dp, &desc).unwrap();
                assert!(
                    check.all_good(dp),
                    "bad overlattice at d' = {dp}, {desc:?}: {check:?}"
                );
                assert_eq!(check.det, BigInt::from(3));
            }
        }
    }

    /// `(l + t1 + t2)/6` is not even in the dual of `S + T` (the t1/6 part
    /// pairs fractionally), so assembly must reject it outright.
    #[test]
    fn glue_outside_the_dual_is_rejected() {
        let s = build_s(1);
        let t = build_t(1);
        let bad: Vec<BigRational> = ell_ambient()
            .iter()
            .zip(&t1_ambient())
            .zip(&t2_ambient())
            .map(|((l, t1), t2)| BigRational::new(l + t1 + t2, BigInt::from(6)))
            .collect();
        let glue = GlueDatum {
            generators: vec![bad],
        };
        assert!(matches!(
            overlattice_from_glue(&s, &t, &glue),
            Err(LatticeError::NonIntegralPairing { .. })
        ));
    }

    /// The k=1, b3=1, d'=1 generator `(l + 2 t1 + t2)/6` fails the
    /// evenness congruence (1 + 4 - 1 = 4 is not in 12Z); its square is
    /// -2/3, so the span is not even an integral lattice and assembly
    /// rejects it. The enumeration rightly never emits the descriptor.
    #[test]
    fn failed_evenness_congruence_is_rejected_at_assembly() {
        assert!(enumerate_type_ii(1, 1).is_empty());
        assert!(matches!(
            assemble_overlattice(1, &OverlatticeDescriptor::TypeII { k: 1, b3: 1 }),
            Err(LatticeError::NonIntegralPairing { .. })
        ));
    }

    /// When the congruence fails by exactly 6d' mod 12d' the generator
    /// squares to an odd integer: the lattice assembles fine but is odd,
    /// so it is excluded from M_{S,T} by the evenness test, not by
    /// integrality. First example: d' = 4, k = 0, b3 = 5 with q = -1.
    #[test]
    fn odd_integral_overlattice_is_assembled_but_not_even() {
        assert!(!enumerate_type_ii(4, 0)
            .iter()
            .any(|d| matches!(d, OverlatticeDescriptor::TypeII { k: 0, b3: 5 })));
        let over = assemble_overlattice(4, &OverlatticeDescriptor::TypeII { k: 0, b3: 5 }).unwrap();
        assert!(!over.gram.is_even());
        assert_eq!(over.index, BigInt::from(24));
        assert_eq!(over.gram.det().abs(), BigInt::from(3));
    }

    #[test]
    fn record_reports_agreement() {
        let rec = FMRecord::compute(54, &RecordOptions::default()).unwrap();
        assert_eq!(rec.count_formula, 3);
        assert_eq!(rec.count_enumeration, Some(3));
        assert_eq!(rec.count_oracle, Some(3));
        assert_eq!(rec.d_prime, Some(3));
        let c = rec.counts_by_type.unwrap();
        assert_eq!(
            (c.type_i, c.type_ii_k0, c.type_ii_k1, c.type_ii_k2),
            (0, 2, 2, 2)
        );
        assert!(rec.agree);

        let rec8 = FMRecord::compute(8, &RecordOptions::default()).unwrap();
        assert_eq!(rec8.count_formula, 1);
        assert!(rec8.counts_by_type.is_none());
        assert!(rec8.agree);
    }
}
