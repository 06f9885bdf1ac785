//! Brute-force ground truth for finite abelian groups: every answer is read
//! off from explicit enumeration of group elements or a Smith normal form.

pub mod snf;
pub mod sweep;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::Error;
use crate::group::GroupExpr;
use crate::homalg::Kind;
use crate::primes::{as_prime_power, factorize, is_prime};

pub use snf::{smith_normal_form, IntMatrix, Snf};

/// Ambient groups are enumerated element by element up to this size.
pub const MAX_ENUMERATION: u64 = 4096;

/// Enumeration caps: per argument and for the product of the two orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub per_argument: u64,
    pub joint: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { per_argument: 256, joint: 1 << 16 }
    }
}

impl Bounds {
    pub fn with_per_argument(n: u64) -> Bounds {
        Bounds { per_argument: n, joint: n.saturating_mul(n) }
    }

    fn check(&self, a: &FiniteAb, b: &FiniteAb) -> Result<(), Error> {
        for g in [a, b] {
            if g.order() > self.per_argument.min(MAX_ENUMERATION) {
                return Err(Error::BoundExceeded { order: g.order(), bound: self.per_argument.min(MAX_ENUMERATION) });
            }
        }
        let joint = a.order().saturating_mul(b.order());
        if joint > self.joint {
            return Err(Error::BoundExceeded { order: joint, bound: self.joint });
        }
        Ok(())
    }
}

/// A finite abelian group `(+)_i Z/q_i` with each `q_i` a prime power, sorted by prime then order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteAb {
    orders: Vec<u64>,
}

impl FiniteAb {
    pub fn new<I: IntoIterator<Item = u64>>(orders: I) -> Result<FiniteAb, Error> {
        let mut out = Vec::new();
        for q in orders {
            if q == 1 {
                continue;
            }
            if as_prime_power(q).is_none() {
                return Err(Error::NotPrime(q));
            }
            out.push(q);
        }
        out.sort_by_key(|&q| (as_prime_power(q).unwrap().0, q));
        Ok(FiniteAb { orders: out })
    }

    pub fn trivial() -> FiniteAb {
        FiniteAb { orders: Vec::new() }
    }

    /// `Z/n` in primary form.
    pub fn cyclic(n: u64) -> FiniteAb {
        FiniteAb::new(factorize(n).into_iter().map(|(p, k)| p.pow(k))).unwrap()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn direct_sum(&self, other: &FiniteAb) -> FiniteAb {
        FiniteAb::new(self.orders.iter().chain(&other.orders).copied()).unwrap()
    }

    pub fn from_group(g: &GroupExpr) -> Result<FiniteAb, Error> {
        g.require_abelian_fragment()?;
        let mut orders = Vec::new();
        for s in g.summands() {
            match s {
                GroupExpr::Cyclic { p, k } => orders.push(p.pow(k)),
                _ => return Err(Error::NotFinite(g.to_string())),
            }
        }
        FiniteAb::new(orders)
    }

    pub fn to_group(&self) -> GroupExpr {
        GroupExpr::sum(self.orders.iter().map(|&q| GroupExpr::cyclic(q)))
    }

    /// Rebuild a group from `c_j = log_p |G[p^j]|` for each prime.
    fn from_counts(counts: &BTreeMap<u64, Vec<u32>>) -> FiniteAb {
        let mut orders = Vec::new();
        for (&p, c) in counts {
            // c[j] = sum_i min(j, lambda_i); parts >= j number c[j] - c[j-1]
            let ge = |j: usize| c[j] - c[j - 1];
            for j in 1..c.len() {
                let next = if j + 1 < c.len() { ge(j + 1) } else { 0 };
                for _ in 0..(ge(j) - next) {
                    orders.push(p.pow(j as u32));
                }
            }
        }
        FiniteAb::new(orders).unwrap()
    }
}

impl fmt::Display for FiniteAb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_group())
    }
}

impl Serialize for FiniteAb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The elements of a finite group, indexed in mixed radix.
pub(crate) struct Ambient {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    size: usize,
    /// Row-major coordinates: element `x` occupies `coords[x * rank..(x + 1) * rank]`.
    coords: Vec<u64>,
    element_order: Vec<u64>,
}

/// A subset of an ambient group.
type Subset = Vec<bool>;

impl Ambient {
    pub(crate) fn new(g: &FiniteAb) -> Ambient {
        let moduli = g.orders.clone();
        let size = g.order() as usize;
        let mut strides = Vec::with_capacity(moduli.len());
        let mut st = 1u64;
        for &m in &moduli {
            strides.push(st);
            st *= m;
        }
        let mut coords = Vec::with_capacity(size * moduli.len());
        for mut i in 0..size as u64 {
            for &m in &moduli {
                coords.push(i % m);
                i /= m;
            }
        }
        let rank = moduli.len();
        let element_order = (0..size)
            .map(|x| {
                coords[x * rank..(x + 1) * rank]
                    .iter()
                    .zip(&moduli)
                    .fold(1u64, |acc, (&c, &m)| num_integer::lcm(acc, m / num_integer::gcd(c, m)))
            })
            .collect();
        Ambient { moduli, strides, size, coords, element_order }
    }

    fn coord(&self, x: usize) -> &[u64] {
        let r = self.moduli.len();
        &self.coords[x * r..(x + 1) * r]
    }

    fn scale(&self, x: usize, n: u64) -> usize {
        let mut idx = 0;
        for ((&c, &m), &st) in self.coord(x).iter().zip(&self.moduli).zip(&self.strides) {
            idx += (c * (n % m)) % m * st;
        }
        idx as usize
    }

    /// The table `x -> n x`.
    fn scale_table(&self, n: u64) -> Vec<usize> {
        (0..self.size).map(|x| self.scale(x, n)).collect()
    }

    fn add(&self, x: usize, y: usize) -> usize {
        let mut idx = 0;
        for (((&a, &b), &m), &st) in self.coord(x).iter().zip(self.coord(y)).zip(&self.moduli).zip(&self.strides) {
            idx += (a + b) % m * st;
        }
        idx as usize
    }

    fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.moduli.iter().map(|&q| as_prime_power(q).unwrap().0).collect();
        ps.dedup();
        ps
    }

    fn count(&self, s: &Subset) -> usize {
        s.iter().filter(|&&b| b).count()
    }

    /// The subgroup generated by `gens`.
    fn generate(&self, gens: impl IntoIterator<Item = usize>) -> Subset {
        let mut h = vec![false; self.size];
        h[0] = true;
        let mut members = vec![0usize];
        for g in gens {
            if h[g] {
                continue;
            }
            // H + <g> = union of cosets H + k g
            let base = members.clone();
            let mut mult = g;
            while !h[mult] {
                for &x in &base {
                    let y = self.add(x, mult);
                    if !h[y] {
                        h[y] = true;
                        members.push(y);
                    }
                }
                mult = self.add(mult, g);
            }
        }
        h
    }

    fn preimage_by_table(table: &[usize], s: &Subset) -> Subset {
        table.iter().map(|&y| s[y]).collect()
    }

    /// Structure of a subgroup `s`, from the sizes of its `p^j`-torsion.
    fn subgroup_structure(&self, s: &Subset) -> FiniteAb {
        let mut counts = BTreeMap::new();
        for p in self.primes() {
            let mut c = vec![0u32];
            let mut pj = 1u64;
            loop {
                pj *= p;
                let n = (0..self.size).filter(|&x| s[x] && pj.is_multiple_of(self.element_order[x])).count();
                let log = log_p(n as u64, p);
                if log == *c.last().unwrap() {
                    break;
                }
                c.push(log);
            }
            counts.insert(p, c);
        }
        FiniteAb::from_counts(&counts)
    }

    /// Structure of the quotient by a subgroup `s`: `|Q[p^j]| = |{x : p^j x in s}| / |s|`.
    fn quotient_structure(&self, s: &Subset) -> FiniteAb {
        let sub = self.count(s) as u64;
        let mut counts = BTreeMap::new();
        for p in self.primes() {
            let mut c = vec![0u32];
            let mut pj = 1u64;
            loop {
                pj *= p;
                let n = (0..self.size).filter(|&x| s[self.scale(x, pj)]).count() as u64;
                let log = log_p(n / sub, p);
                if log == *c.last().unwrap() {
                    break;
                }
                c.push(log);
            }
            counts.insert(p, c);
        }
        FiniteAb::from_counts(&counts)
    }

    fn zero_subgroup(&self) -> Subset {
        let mut s = vec![false; self.size];
        s[0] = true;
        s
    }
}

fn log_p(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert_eq!(n % p, 0, "order of a p-group is a power of p");
        n /= p;
        k += 1;
    }
    k
}

/// `kind(a, b)` by enumeration: `Hom(Z/n, B) = Tor(Z/n, B) = B[n]` and
/// `Ext(Z/n, B) = B/nB` are enumerated in `B`; `Z/n (x) Z/m` is read off from
/// the Smith normal form of its relation matrix `[n; m]`.
pub fn finite_bifunctor(kind: Kind, a: &FiniteAb, b: &FiniteAb, bounds: Bounds) -> Result<FiniteAb, Error> {
    bounds.check(a, b)?;
    Ok(Prepared::new(b).bifunctor(kind, a))
}

/// Fixed point of the image-sum iteration computing `T_G N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteRadical {
    pub radical: FiniteAb,
    pub reduction: FiniteAb,
    /// Number of strictly increasing steps `S_0 = 0 < S_1 < ... < S_k = T`.
    pub stages: u32,
    /// Exhaustive minimality verdict; `None` when `|N|` is too large to enumerate subgroups.
    pub minimal: Option<bool>,
}

/// Largest `|N|` for which all subgroups are enumerated in the minimality check.
pub const MINIMALITY_LIMIT: u64 = 64;

pub fn finite_radical(g: &FiniteAb, n: &FiniteAb, bounds: Bounds) -> Result<FiniteRadical, Error> {
    bounds.check(g, n)?;
    Ok(Prepared::new(n).radical(g))
}

/// `T_G N` for each `G` in `gs`, sharing the enumeration of `N`.
pub fn finite_radicals(gs: &[FiniteAb], n: &FiniteAb, bounds: Bounds) -> Result<Vec<FiniteRadical>, Error> {
    for g in gs {
        bounds.check(g, n)?;
    }
    let mut prep = Prepared::new(n);
    Ok(gs.iter().map(|g| prep.radical(g)).collect())
}

/// A group `B` prepared for repeated queries with `B` as second argument.
/// Per-generator pieces are memoized; every piece is still computed by enumeration.
pub(crate) struct Prepared {
    amb: Ambient,
    scale_tables: HashMap<u64, Vec<usize>>,
    torsion: HashMap<u64, FiniteAb>,
    cotorsion: HashMap<u64, FiniteAb>,
    tensor: HashMap<u64, FiniteAb>,
    lattice: Option<Vec<u64>>,
    radicals: HashMap<Vec<u64>, FiniteRadical>,
}

impl Prepared {
    pub(crate) fn new(b: &FiniteAb) -> Prepared {
        Prepared {
            amb: Ambient::new(b),
            scale_tables: HashMap::new(),
            torsion: HashMap::new(),
            cotorsion: HashMap::new(),
            tensor: HashMap::new(),
            lattice: None,
            radicals: HashMap::new(),
        }
    }

    fn table(&mut self, n: u64) -> &[usize] {
        let amb = &self.amb;
        self.scale_tables.entry(n).or_insert_with(|| amb.scale_table(n))
    }

    /// `B[n]`.
    fn torsion_part(&mut self, n: u64) -> FiniteAb {
        if let Some(t) = self.torsion.get(&n) {
            return t.clone();
        }
        let zero = self.amb.zero_subgroup();
        let pre = Ambient::preimage_by_table(self.table(n), &zero);
        let t = self.amb.subgroup_structure(&pre);
        self.torsion.insert(n, t.clone());
        t
    }

    /// `B/nB`.
    fn cotorsion_part(&mut self, n: u64) -> FiniteAb {
        if let Some(t) = self.cotorsion.get(&n) {
            return t.clone();
        }
        let images: Vec<usize> = self.table(n).to_vec();
        let nb = self.amb.generate(images);
        let t = self.amb.quotient_structure(&nb);
        self.cotorsion.insert(n, t.clone());
        t
    }

    /// `Z/n (x) B`, one Smith normal form per summand of `B`.
    fn tensor_part(&mut self, n: u64) -> FiniteAb {
        if let Some(t) = self.tensor.get(&n) {
            return t.clone();
        }
        let mut out = FiniteAb::trivial();
        for &m in &self.amb.moduli {
            let s = smith_normal_form(&IntMatrix::from_rows(&[vec![n], vec![m]]));
            for d in &s.divisors {
                let d = u64::try_from(d).expect("divisor of a small matrix");
                out = out.direct_sum(&FiniteAb::cyclic(d));
            }
        }
        self.tensor.insert(n, out.clone());
        out
    }

    pub(crate) fn bifunctor(&mut self, kind: Kind, a: &FiniteAb) -> FiniteAb {
        let mut orders = Vec::new();
        for &n in &a.orders {
            let part = match kind {
                Kind::Hom | Kind::Tor => self.torsion_part(n),
                Kind::Ext => self.cotorsion_part(n),
                Kind::Tensor => self.tensor_part(n),
            };
            orders.extend_from_slice(&part.orders);
        }
        FiniteAb::new(orders).unwrap()
    }

    /// `S_{i+1} = < x : n_j x in S_i for some generator order n_j of G >`, which is
    /// the preimage of the subgroup generated by all images of maps `G -> N/S_i`.
    fn image_sum_step(&mut self, gens: &[u64], s: &Subset) -> Subset {
        let mut hit = Vec::new();
        for &n in gens {
            let pre = Ambient::preimage_by_table(self.table(n), s);
            hit.extend((0..self.amb.size).filter(|&x| pre[x] && !s[x]));
        }
        let mut closed = self.amb.generate(hit.into_iter().chain((0..self.amb.size).filter(|&x| s[x])));
        for (x, b) in s.iter().enumerate() {
            closed[x] |= *b;
        }
        closed
    }

    /// Every subgroup as a bitmask, found by adjoining one element at a time.
    fn lattice(&mut self) -> &[u64] {
        let amb = &self.amb;
        self.lattice.get_or_insert_with(|| all_subgroups(amb).iter().map(to_bits).collect())
    }

    pub(crate) fn radical(&mut self, g: &FiniteAb) -> FiniteRadical {
        let mut gens = g.orders.clone();
        gens.sort_unstable();
        gens.dedup();
        if let Some(r) = self.radicals.get(&gens) {
            return r.clone();
        }
        let mut s = self.amb.zero_subgroup();
        let mut stages = 0;
        loop {
            let next = self.image_sum_step(&gens, &s);
            if next == s {
                break;
            }
            s = next;
            stages += 1;
        }
        let tables: Vec<Vec<usize>> = gens.iter().map(|&n| self.table(n).to_vec()).collect();
        debug_assert!(tables.iter().all(|t| g_free_quotient(t, |x| s[x])));
        let minimal = (self.amb.size as u64 <= MINIMALITY_LIMIT).then(|| {
            let t = to_bits(&s);
            self.lattice()
                .iter()
                .filter(|&&sub| tables.iter().all(|tb| g_free_quotient(tb, |x| sub >> x & 1 == 1)))
                .all(|&sub| t & !sub == 0)
        });
        let r = FiniteRadical {
            radical: self.amb.subgroup_structure(&s),
            reduction: self.amb.quotient_structure(&s),
            stages,
            minimal,
        };
        self.radicals.insert(gens, r.clone());
        r
    }
}

/// No nonzero map `Z/n -> N/S`: every `x` with `n x in S` already lies in `S`.
fn g_free_quotient(table: &[usize], member: impl Fn(usize) -> bool) -> bool {
    table.iter().enumerate().all(|(x, &nx)| member(x) || !member(nx))
}

fn to_bits(s: &Subset) -> u64 {
    s.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
}

/// Every subgroup of a small group.
fn all_subgroups(amb: &Ambient) -> Vec<Subset> {
    assert!(amb.size as u64 <= MINIMALITY_LIMIT);
    let zero = amb.zero_subgroup();
    let mut seen = HashSet::from([to_bits(&zero)]);
    let mut stack = vec![zero];
    let mut out = Vec::new();
    while let Some(h) = stack.pop() {
        for x in 0..amb.size {
            if h[x] {
                continue;
            }
            let members = (0..amb.size).filter(|&y| h[y]).chain(std::iter::once(x));
            let bigger = amb.generate(members);
            if seen.insert(to_bits(&bigger)) {
                stack.push(bigger);
            }
        }
        out.push(h);
    }
    out
}

/// Whether `N` is generated by its elements of order `p^l` with `l <= bounds[p]`.
pub fn generated_by_bounded_orders(n: &FiniteAb, bounds: &BTreeMap<u64, u32>, caps: Bounds) -> Result<bool, Error> {
    if n.order() > caps.per_argument.min(MAX_ENUMERATION) {
        return Err(Error::BoundExceeded { order: n.order(), bound: caps.per_argument.min(MAX_ENUMERATION) });
    }
    for &p in bounds.keys() {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
    }
    let amb = Ambient::new(n);
    let good = (0..amb.size).filter(|&x| match as_prime_power(amb.element_order[x]) {
        Some((p, l)) => bounds.get(&p).is_some_and(|&k| l <= k),
        None => false,
    });
    let h = amb.generate(good);
    Ok(amb.count(&h) == amb.size)
}

/// Cokernel of an integer matrix acting on row vectors, `Z^cols / rowspace`,
/// as a finite group; `None` if the cokernel is infinite.
pub fn cokernel(m: &IntMatrix) -> Option<FiniteAb> {
    let s = smith_normal_form(m);
    if s.rank < m.cols() {
        return None;
    }
    let mut out = FiniteAb::trivial();
    for d in &s.divisors {
        let d: u64 = u64::try_from(d).ok()?;
        out = out.direct_sum(&FiniteAb::cyclic(d));
    }
    Some(out)
}

/// Convenience for tests and the CLI: `BigInt` entries from machine integers.
pub fn matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(
        &rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect::<Vec<Vec<BigInt>>>(),
    )
}
