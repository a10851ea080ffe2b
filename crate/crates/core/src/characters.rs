//! Dirichlet characters built from the unit-group generators of each prime-power
//! component, with exact rational angles for the values.

use crate::mp::{Complex, Prec};

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(q: u64) -> u64 {
    factorize(q)
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

fn divisors(q: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
    d.sort_unstable();
    d
}

fn is_primitive_root(g: u64, m: u64, order: u64) -> bool {
    factorize(order)
        .iter()
        .all(|&(r, _)| pow_mod(g, order / r, m) != 1)
}

/// One cyclic generator of the unit group: residue mod q (lifted by CRT) and its order.
#[derive(Clone, Debug)]
struct Generator {
    order: u64,
}

/// Discrete-log tables for every residue mod q.
struct UnitGroup {
    q: u64,
    gens: Vec<Generator>,
    /// `logs[n]` is `None` off the units, else exponents w.r.t. `gens`.
    logs: Vec<Option<Vec<u64>>>,
}

impl UnitGroup {
    fn new(q: u64) -> Self {
        let mut gens = Vec::new();
        // Per component: modulus and residue -> exponent vector.
        let mut comps: Vec<(u64, Vec<Option<Vec<u64>>>)> = Vec::new();
        for (p, e) in factorize(q) {
            let m = p.pow(e);
            let mut table: Vec<Option<Vec<u64>>> = vec![None; m as usize];
            if p == 2 {
                match e {
                    1 => {
                        table[1] = Some(vec![]);
                    }
                    2 => {
                        gens.push(Generator { order: 2 });
                        table[1] = Some(vec![0]);
                        table[3] = Some(vec![1]);
                    }
                    _ => {
                        let ord5 = m / 4;
                        gens.push(Generator { order: 2 });
                        gens.push(Generator { order: ord5 });
                        for a in 0..2u64 {
                            let mut x = if a == 0 { 1 } else { m - 1 };
                            for b in 0..ord5 {
                                table[x as usize] = Some(vec![a, b]);
                                x = x * 5 % m;
                            }
                        }
                    }
                }
            } else {
                let order = m / p * (p - 1);
                let g = (2..m)
                    .find(|&g| gcd(g, p) == 1 && is_primitive_root(g, m, order))
                    .expect("odd prime powers have primitive roots");
                gens.push(Generator { order });
                let mut x = 1u64;
                for l in 0..order {
                    table[x as usize] = Some(vec![l]);
                    x = x * g % m;
                }
            }
            comps.push((m, table));
        }

        let logs = (0..q)
            .map(|n| {
                let mut v = Vec::with_capacity(gens.len());
                for (m, table) in &comps {
                    v.extend(table[(n % m) as usize].as_ref()?.iter().copied());
                }
                Some(v)
            })
            .collect();
        UnitGroup { q, gens, logs }
    }
}

/// A Dirichlet character mod `q`.
///
/// `χ(n) = e(num[n] / denom)` on units and `0` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    index: usize,
    gen_orders: Vec<u64>,
    gen_exps: Vec<u64>,
    denom: u64,
    num: Vec<Option<u64>>,
    conductor: u64,
    even: bool,
}

impl DirichletCharacter {
    fn build(group: &UnitGroup, exps: Vec<u64>, index: usize) -> Self {
        let gen_orders: Vec<u64> = group.gens.iter().map(|g| g.order).collect();
        let denom = gen_orders.iter().fold(1, |a, &b| lcm(a, b));
        let num = group
            .logs
            .iter()
            .map(|l| {
                l.as_ref().map(|ls| {
                    ls.iter()
                        .zip(&exps)
                        .zip(&gen_orders)
                        .map(|((&l, &k), &o)| (l * k % o) * (denom / o))
                        .sum::<u64>()
                        % denom
                })
            })
            .collect::<Vec<_>>();
        let q = group.q;
        let even = num[((q + q - 1) % q) as usize] == Some(0);
        let mut chi = DirichletCharacter {
            modulus: q,
            index,
            gen_orders,
            gen_exps: exps,
            denom,
            num,
            conductor: q,
            even,
        };
        chi.conductor = chi.conductor_bruteforce();
        chi
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Position in the lexicographic enumeration of generator exponents.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generator_exponents(&self) -> &[u64] {
        &self.gen_exps
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn is_principal(&self) -> bool {
        self.num.iter().all(|v| matches!(v, None | Some(0)))
    }

    /// Real-valued (all values in {0, ±1}).
    pub fn is_real(&self) -> bool {
        self.num
            .iter()
            .all(|v| v.map_or(true, |a| (2 * a) % self.denom == 0))
    }

    /// Reduced angle `(a, b)` with `χ(n) = e(a/b)`, or `None` when `gcd(n, q) > 1`.
    pub fn angle(&self, n: u64) -> Option<(u64, u64)> {
        let a = self.num[(n % self.modulus) as usize]?;
        let g = gcd(a, self.denom);
        Some((a / g, self.denom / g))
    }

    /// Raw numerator over the common denominator [`Self::denominator`].
    pub fn numerator(&self, n: u64) -> Option<u64> {
        self.num[(n % self.modulus) as usize]
    }

    pub fn denominator(&self) -> u64 {
        self.denom
    }

    pub fn value(&self, n: u64, prec: Prec) -> Complex {
        match self.numerator(n) {
            None => Complex::zero(prec),
            Some(a) => Complex::unit_root(prec, a, self.denom),
        }
    }

    /// Complex conjugate character.
    pub fn conj(&self) -> Self {
        let gen_exps: Vec<u64> = self
            .gen_exps
            .iter()
            .zip(&self.gen_orders)
            .map(|(&k, &o)| (o - k) % o)
            .collect();
        let index = gen_exps
            .iter()
            .zip(&self.gen_orders)
            .fold(0usize, |acc, (&k, &o)| acc * o as usize + k as usize);
        let num = self
            .num
            .iter()
            .map(|v| v.map(|a| (self.denom - a) % self.denom))
            .collect();
        DirichletCharacter {
            gen_exps,
            index,
            num,
            ..self.clone()
        }
    }

    /// Smallest `d | q` such that `χ(n) = 1` whenever `n ≡ 1 (mod d)` and `gcd(n, q) = 1`.
    pub fn conductor_bruteforce(&self) -> u64 {
        let q = self.modulus;
        for d in divisors(q) {
            let induced = (0..q / d)
                .map(|k| (1 + k * d) % q)
                .all(|n| matches!(self.num[n as usize], None | Some(0)));
            if induced {
                return d;
            }
        }
        q
    }
}

/// All `φ(q)` characters mod `q`, lexicographic in generator exponents.
pub fn enumerate_characters(q: u64) -> Vec<DirichletCharacter> {
    assert!(q >= 1, "modulus must be positive");
    let group = UnitGroup::new(q);
    let orders: Vec<u64> = group.gens.iter().map(|g| g.order).collect();
    let total: u64 = orders.iter().product();
    (0..total)
        .map(|idx| {
            let mut rem = idx;
            let mut exps = vec![0u64; orders.len()];
            for (j, &o) in orders.iter().enumerate().rev() {
                exps[j] = rem % o;
                rem /= o;
            }
            DirichletCharacter::build(&group, exps, idx as usize)
        })
        .collect()
}

pub fn character(q: u64, index: usize) -> Option<DirichletCharacter> {
    enumerate_characters(q).into_iter().nth(index)
}

#[derive(Clone, Debug)]
pub struct GaussSumValue {
    pub value: Complex,
    pub modulus: u64,
    pub index: usize,
}

impl GaussSumValue {
    /// `||G|² − q|`.
    pub fn norm_residual(&self) -> f64 {
        let n = self.value.norm_sqr();
        (n - self.modulus as f64).abs().to_f64()
    }
}

/// `G(1, χ) = Σ_{l=1}^{q} χ(l) e(l/q)`, each term a single exact angle.
pub fn gauss_sum(chi: &DirichletCharacter, prec: Prec) -> GaussSumValue {
    let q = chi.modulus;
    let d = chi.denom;
    let wp = prec + 16;
    let mut acc = Complex::zero(wp);
    for l in 1..=q {
        if let Some(a) = chi.numerator(l) {
            // a/d + l/q = (a q + l d) / (d q)
            let num = (a * q + (l % q) * d) % (d * q);
            acc += &Complex::unit_root(wp, num, d * q);
        }
    }
    GaussSumValue {
        value: acc.with_prec(prec),
        modulus: q,
        index: chi.index,
    }
}

/// Number of primitive characters mod `q`, from the multiplicative formula.
pub fn phi_star(q: u64) -> u64 {
    factorize(q)
        .iter()
        .map(|&(p, e)| {
            if e == 1 {
                p - 2
            } else {
                p.pow(e - 2) * (p - 1) * (p - 1)
            }
        })
        .product()
}

pub fn phi_star_enumerated(q: u64) -> u64 {
    enumerate_characters(q)
        .iter()
        .filter(|c| c.is_primitive())
        .count() as u64
}

/// Number of even primitive characters mod `q`, by enumeration.
pub fn phi_flat(q: u64) -> u64 {
    enumerate_characters(q)
        .iter()
        .filter(|c| c.is_primitive() && c.is_even())
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quadratic(q: u64) -> DirichletCharacter {
        enumerate_characters(q)
            .into_iter()
            .find(|c| c.is_real() && !c.is_principal() && c.is_primitive())
            .unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_characters(1).len(), 1);
        assert_eq!(enumerate_characters(5).len(), 4);
        assert_eq!(enumerate_characters(8).len(), 4);
        assert_eq!(enumerate_characters(360).len(), 96);
    }

    #[test]
    fn trivial_modulus_one() {
        let c = &enumerate_characters(1)[0];
        assert!(c.is_even() && c.is_primitive() && c.is_principal());
        assert_eq!(c.angle(0), Some((0, 1)));
    }

    #[test]
    fn conductors() {
        let chars = enumerate_characters(5);
        assert_eq!(chars[0].conductor(), 1);
        assert_eq!(quadratic(5).conductor(), 5);
        let nine = enumerate_characters(9);
        assert!(nine.iter().any(|c| c.conductor() == 3 && c.is_real()));
        assert_eq!(nine.iter().filter(|c| c.conductor() == 3).count(), 1);
    }

    #[test]
    fn parity() {
        assert!(enumerate_characters(7)[0].is_even());
        assert!(quadratic(5).is_even());
        assert!(!quadratic(3).is_even());
    }

    #[test]
    fn gauss_sum_quadratic_five() {
        let g = gauss_sum(&quadratic(5), 128);
        let (re, im) = g.value.to_f64();
        assert!((re - 5f64.sqrt()).abs() < 1e-15);
        assert!(im.abs() < 1e-15);
    }

    #[test]
    fn gauss_sum_imprimitive_nine() {
        let nine = enumerate_characters(9);
        let c = nine.iter().find(|c| c.conductor() == 3).unwrap();
        let g = gauss_sum(c, 128);
        assert!((g.value.abs().to_f64() - 3.0).abs() > 1e-3);
    }

    #[test]
    fn phi_counts() {
        assert_eq!(phi_star(7), 5);
        assert_eq!(phi_star(4), 1);
        assert_eq!(phi_flat(5), 1);
        for q in 1..=120 {
            assert_eq!(phi_star(q), phi_star_enumerated(q), "q={q}");
        }
    }

    #[test]
    fn phi_flat_is_half_phi_star() {
        for q in 1..=500u64 {
            let d = phi_flat(q) as f64 - phi_star(q) as f64 / 2.0;
            assert!(d.abs() <= 1.0, "q={q}");
        }
    }

    #[test]
    fn orthogonality() {
        for q in 2..=100 {
            for c in enumerate_characters(q).iter().filter(|c| c.is_primitive()) {
                let s = (0..q).fold(Complex::zero(96), |acc, n| acc + c.value(n, 96));
                assert!(s.abs() < 1e-20, "q={q} idx={}", c.index());
            }
        }
    }

    #[test]
    fn conjugate_index_round_trips() {
        for c in enumerate_characters(63) {
            let b = c.conj();
            assert_eq!(enumerate_characters(63)[b.index()], b);
            assert_eq!(b.conj(), c);
        }
    }

    proptest! {
        #[test]
        fn multiplicative_and_periodic(q in 1u64..120, seed in 0usize..1000, m in 0u64..500, n in 0u64..500) {
            let chars = enumerate_characters(q);
            let c = &chars[seed % chars.len()];
            let d = c.denominator();
            match (c.numerator(m), c.numerator(n), c.numerator(m * n)) {
                (Some(a), Some(b), Some(ab)) => prop_assert_eq!((a + b) % d, ab),
                (_, _, None) => prop_assert!(gcd(m, q) > 1 || gcd(n, q) > 1),
                (x, y, Some(_)) => prop_assert!(x.is_some() && y.is_some()),
            }
            prop_assert_eq!(c.numerator(n), c.numerator(n + q));
            prop_assert_eq!(c.numerator(n).is_none(), gcd(n, q) > 1);
        }
    }
}
