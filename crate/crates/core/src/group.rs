//! Finite abelian groups `Z_{n1} x ... x Z_{nk}`, their self-dual
//! character pairing, and the Haar normalization used everywhere else:
//! counting measure on the group, `1/|G|`-weighted counting measure on
//! the dual.

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Element of a finite abelian group, stored as a residue tuple.
///
/// The same representation carries dual-group elements (the groups are
/// canonically self-dual through [`FiniteAbelianGroup::pairing`]).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    residues: Vec<u64>,
}

/// A character of the group, represented by the same residue tuples.
pub type DualElement = GroupElement;

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.residues
    }
}

/// `Z_{n1} x ... x Z_{nk}` with a fixed, lexicographic element
/// enumeration (first factor most significant).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: usize,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(CoreError::Structural("group needs at least one factor".into()));
        }
        if factors.iter().any(|&n| n < 1) {
            return Err(CoreError::Structural("invariant factors must be >= 1".into()));
        }
        let mut order: u64 = 1;
        for &n in &factors {
            order = order
                .checked_mul(n)
                .ok_or_else(|| CoreError::Structural("group order overflow".into()))?;
        }
        Ok(FiniteAbelianGroup { factors, order: order as usize })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { residues: vec![0; self.factors.len()] }
    }

    /// Element from arbitrary integers, reduced mod the factors.
    pub fn make(&self, residues: &[i64]) -> Result<GroupElement> {
        if residues.len() != self.factors.len() {
            return Err(CoreError::Structural(format!(
                "element has {} residues, group has {} factors",
                residues.len(),
                self.factors.len()
            )));
        }
        let reduced = residues
            .iter()
            .zip(&self.factors)
            .map(|(&r, &n)| (r.rem_euclid(n as i64)) as u64)
            .collect();
        Ok(GroupElement { residues: reduced })
    }

    fn check_member(&self, g: &GroupElement) -> Result<()> {
        if g.residues.len() != self.factors.len()
            || g.residues.iter().zip(&self.factors).any(|(&r, &n)| r >= n)
        {
            return Err(CoreError::Structural(
                "element does not belong to this group".into(),
            ));
        }
        Ok(())
    }

    /// Index of `g` in the fixed enumeration.
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.check_member(g)?;
        let mut idx: u64 = 0;
        for (&r, &n) in g.residues.iter().zip(&self.factors) {
            idx = idx * n + r;
        }
        Ok(idx as usize)
    }

    /// The `idx`-th element of the enumeration.
    pub fn element(&self, idx: usize) -> GroupElement {
        debug_assert!(idx < self.order);
        let mut rest = idx as u64;
        let mut residues = vec![0u64; self.factors.len()];
        for (slot, &n) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = rest % n;
            rest /= n;
        }
        GroupElement { residues }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |i| self.element(i))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        self.check_member(b)?;
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .zip(&self.factors)
            .map(|((&x, &y), &n)| (x + y) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        let residues = a
            .residues
            .iter()
            .zip(&self.factors)
            .map(|(&x, &n)| (n - x) % n)
            .collect();
        Ok(GroupElement { residues })
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    // Index-space group arithmetic, allocation-free; used by the inner
    // loops over kernels and modulus tables.

    pub fn add_idx(&self, i: usize, j: usize) -> usize {
        let mut ii = i as u64;
        let mut jj = j as u64;
        let mut out: u64 = 0;
        let mut mult: u64 = 1;
        for &n in self.factors.iter().rev() {
            let di = ii % n;
            ii /= n;
            let dj = jj % n;
            jj /= n;
            out += ((di + dj) % n) * mult;
            mult *= n;
        }
        out as usize
    }

    pub fn neg_idx(&self, i: usize) -> usize {
        let mut ii = i as u64;
        let mut out: u64 = 0;
        let mut mult: u64 = 1;
        for &n in self.factors.iter().rev() {
            let di = ii % n;
            ii /= n;
            out += ((n - di) % n) * mult;
            mult *= n;
        }
        out as usize
    }

    pub fn sub_idx(&self, i: usize, j: usize) -> usize {
        self.add_idx(i, self.neg_idx(j))
    }

    /// Character pairing `<x, t> = exp(2 pi i sum_j x_j t_j / n_j)`.
    ///
    /// The phase is accumulated as an exact rational over the lcm of the
    /// factors before the single trig call, so the pairing is a bitwise
    /// stable root of unity.
    pub fn pairing(&self, x: &DualElement, t: &GroupElement) -> Result<Complex64> {
        self.check_member(x)?;
        self.check_member(t)?;
        Ok(self.pairing_idx(self.index_of(x)?, self.index_of(t)?))
    }

    pub fn pairing_idx(&self, x: usize, t: usize) -> Complex64 {
        let lcm = self.factors.iter().fold(1u64, |acc, &n| lcm_u64(acc, n));
        let mut xx = x as u64;
        let mut tt = t as u64;
        let mut num: u64 = 0;
        for &n in self.factors.iter().rev() {
            let dx = xx % n;
            xx /= n;
            let dt = tt % n;
            tt /= n;
            num = (num + (dx * dt % n) * (lcm / n)) % lcm;
        }
        let angle = 2.0 * std::f64::consts::PI * (num as f64) / (lcm as f64);
        Complex64::new(angle.cos(), angle.sin())
    }

    /// Conjugate pairing `<x, t>` bar, the weight used by the dual
    /// unitaries and the scalar Fourier transform.
    pub fn pairing_conj_idx(&self, x: usize, t: usize) -> Complex64 {
        self.pairing_idx(x, t).conj()
    }

    /// `sum_t <x, t>`: equals `|G|` at the trivial character and zero
    /// elsewhere.
    pub fn character_sum(&self, x: &DualElement) -> Result<Complex64> {
        let xi = self.index_of(x)?;
        let mut s = Complex64::new(0.0, 0.0);
        for t in 0..self.order {
            s += self.pairing_idx(xi, t);
        }
        Ok(s)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}
