use rand::Rng;

use super::{FieldElement, FiniteField, PrimeField};

/// Largest extension degree the sampler needs.
pub const MAX_EXTENSION_DEGREE: usize = 4;

/// An element of `F_p[u]/(f)`, stored as `k` coefficients (lowest first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtElement(pub Vec<u32>);

/// `F_{p^k} = F_p[u]/(f)` with `f` monic irreducible of degree `k <= 4`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    base: PrimeField,
    /// Monic modulus, `k + 1` coefficients, lowest first.
    modulus: Vec<u32>,
}

type Poly = Vec<u32>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(f: &PrimeField, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let t = f.mul(FieldElement(x), FieldElement(y));
            out[i + j] = f.add(FieldElement(out[i + j]), t).0;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo a nonzero polynomial `m`.
fn poly_rem(f: &PrimeField, mut a: Poly, m: &[u32]) -> Poly {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = f.inverse(FieldElement(m[dm])).expect("nonzero leading coefficient");
    a = trim(a);
    while a.len() > dm {
        let shift = a.len() - 1 - dm;
        let c = f.mul(FieldElement(*a.last().unwrap()), lead_inv);
        for (i, &mi) in m.iter().enumerate() {
            let t = f.mul(c, FieldElement(mi));
            a[shift + i] = f.sub(FieldElement(a[shift + i]), t).0;
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(f: &PrimeField, a: &[u32], b: &[u32]) -> Poly {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let r = poly_rem(f, x, &y);
        x = y;
        y = r;
    }
    x
}

fn poly_powmod(f: &PrimeField, base: &[u32], mut e: u64, m: &[u32]) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = poly_rem(f, base.to_vec(), m);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(f, poly_mul(f, &acc, &b), m);
        }
        b = poly_rem(f, poly_mul(f, &b, &b), m);
        e >>= 1;
    }
    acc
}

/// Ben-Or test: a degree-`k` polynomial is irreducible iff it shares no
/// factor with `u^(p^i) - u` for `i <= k/2`.
fn is_irreducible(f: &PrimeField, poly: &[u32]) -> bool {
    let k = poly.len() - 1;
    if k <= 1 {
        return k == 1;
    }
    let p = u64::from(f.modulus());
    let mut h: Poly = vec![0, 1];
    for _ in 0..k / 2 {
        h = poly_powmod(f, &h, p, poly);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = f.sub(FieldElement(diff[1]), FieldElement::ONE).0;
        let g = poly_gcd(f, poly, &trim(diff));
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl ExtensionField {
    /// Finds the first irreducible modulus of degree `k` in a fixed
    /// enumeration order, so the same `(p, k)` always yields the same field.
    pub fn new(base: PrimeField, k: usize) -> Self {
        assert!(
            (1..=MAX_EXTENSION_DEGREE).contains(&k),
            "extension degree {k} outside 1..={MAX_EXTENSION_DEGREE}"
        );
        if k == 1 {
            return ExtensionField { base, modulus: vec![0, 1] };
        }
        let p = u64::from(base.modulus());
        for n in 1u64.. {
            let mut coeffs = Vec::with_capacity(k + 1);
            let mut rest = n;
            for _ in 0..k {
                coeffs.push((rest % p) as u32);
                rest /= p;
            }
            if rest != 0 {
                break;
            }
            if coeffs[0] == 0 {
                continue;
            }
            coeffs.push(1);
            if is_irreducible(&base, &coeffs) {
                return ExtensionField { base, modulus: coeffs };
            }
        }
        unreachable!("irreducible polynomials of every degree exist")
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    fn pad(&self, mut v: Poly) -> ExtElement {
        v.resize(self.degree(), 0);
        ExtElement(v)
    }

    /// `p^k - 1`, the order of the multiplicative group.
    fn group_order(&self) -> u128 {
        u128::from(self.base.modulus()).pow(self.degree() as u32) - 1
    }

    pub fn pow(&self, x: &ExtElement, mut e: u128) -> ExtElement {
        let mut acc = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = FiniteField::mul(self, &acc, &b);
            }
            b = FiniteField::mul(self, &b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, c: FieldElement, x: &ExtElement) -> ExtElement {
        ExtElement(x.0.iter().map(|&v| self.base.mul(c, FieldElement(v)).0).collect())
    }
}

impl FiniteField for ExtensionField {
    type Elem = ExtElement;

    fn zero(&self) -> ExtElement {
        ExtElement(vec![0; self.degree()])
    }

    fn one(&self) -> ExtElement {
        self.pad(vec![1])
    }

    fn is_zero(&self, x: &ExtElement) -> bool {
        x.0.iter().all(|&c| c == 0)
    }

    fn add(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.base.add(FieldElement(x), FieldElement(y)).0)
                .collect(),
        )
    }

    fn sub(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        ExtElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| self.base.sub(FieldElement(x), FieldElement(y)).0)
                .collect(),
        )
    }

    fn mul(&self, a: &ExtElement, b: &ExtElement) -> ExtElement {
        let prod = poly_mul(&self.base, &trim(a.0.clone()), &trim(b.0.clone()));
        self.pad(poly_rem(&self.base, prod, &self.modulus))
    }

    fn inv(&self, a: &ExtElement) -> Option<ExtElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(self.pow(a, self.group_order() - 1))
    }

    fn embed(&self, c: FieldElement) -> ExtElement {
        self.pad(vec![c.0])
    }

    fn random_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElement {
        ExtElement((0..self.degree()).map(|_| self.base.random(rng).0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moduli_are_irreducible_and_deterministic() {
        let base = PrimeField::new(7).unwrap();
        for k in 1..=4 {
            let a = ExtensionField::new(base, k);
            let b = ExtensionField::new(base, k);
            assert_eq!(a, b);
            assert_eq!(a.degree(), k);
        }
        // u^2 + 1 is reducible mod 5 (2^2 = -1); the search must skip it
        let f5 = PrimeField::new(5).unwrap();
        assert!(!is_irreducible(&f5, &[1, 0, 1]));
        assert!(is_irreducible(&f5, &[2, 0, 1]));
        // (u^2 + 2)^2 has no roots mod 5 but is reducible
        let sq = poly_mul(&f5, &[2, 0, 1], &[2, 0, 1]);
        assert!(!is_irreducible(&f5, &sq));
    }

    #[test]
    fn degree_four_modulus_has_no_roots_by_brute_force() {
        let base = PrimeField::new(11).unwrap();
        let ext = ExtensionField::new(base, 4);
        let m = ext.modulus();
        for x in 0..11u64 {
            let mut acc = FieldElement::ZERO;
            for &c in m.iter().rev() {
                acc = base.add(base.mul(acc, base.elem(x)), FieldElement(c));
            }
            assert!(!acc.is_zero());
        }
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        let base = PrimeField::new(5).unwrap();
        let ext = ExtensionField::new(base, 2);
        for a in 0..5 {
            for b in 0..5 {
                let x = ExtElement(vec![a, b]);
                if ext.is_zero(&x) {
                    assert!(ext.inv(&x).is_none());
                    continue;
                }
                let y = ext.inv(&x).unwrap();
                assert_eq!(ext.mul(&x, &y), ext.one());
            }
        }
    }

    #[test]
    fn frobenius_has_order_k() {
        let base = PrimeField::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 2..=4 {
            let ext = ExtensionField::new(base, k);
            let x = ext.random_elem(&mut rng);
            let mut y = x.clone();
            for _ in 0..k {
                y = ext.pow(&y, u128::from(base.modulus()));
            }
            assert_eq!(x, y);
        }
    }
}
