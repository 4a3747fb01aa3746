//! 3-cocycle tables on finite abelian groups, the six-term commutator of a
//! 3-cocycle, induced 2-cocycles for the two partial multiplication laws on
//! the associated torsor, and the bilinear commutator of a 2-cocycle.

use thiserror::Error;

use crate::field::{Fp, PrimeField};

/// Guard for exhaustive |G|^4 cocycle checks.
pub const MAX_EXHAUSTIVE_ORDER: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrcatError {
    #[error("group of order {0} exceeds the exhaustive-check guard {MAX_EXHAUSTIVE_ORDER}")]
    TooLarge(usize),
    #[error("malformed table file: {0}")]
    BadFile(String),
    #[error("element has wrong rank: expected {expected}, got {got}")]
    BadElement { expected: usize, got: usize },
    #[error("table value {0} is zero mod p; cocycle values live in k*")]
    ZeroValue(i64),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}

/// Finite abelian group as a product of cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<u32>,
}

/// Group element: componentwise residues against the cyclic orders.
pub type GroupElem = Vec<u32>;

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u32>) -> Self {
        assert!(!orders.is_empty() && orders.iter().all(|&m| m >= 1));
        FiniteAbelianGroup { orders }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&m| m as usize).product()
    }

    pub fn identity(&self) -> GroupElem {
        vec![0; self.orders.len()]
    }

    pub fn reduce(&self, e: &[i64]) -> Result<GroupElem, GrcatError> {
        if e.len() != self.orders.len() {
            return Err(GrcatError::BadElement { expected: self.orders.len(), got: e.len() });
        }
        Ok(e.iter()
            .zip(&self.orders)
            .map(|(&x, &m)| x.rem_euclid(m as i64) as u32)
            .collect())
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }

    pub fn index_of(&self, e: &GroupElem) -> usize {
        let mut idx = 0usize;
        for (&x, &m) in e.iter().zip(&self.orders) {
            idx = idx * m as usize + x as usize;
        }
        idx
    }

    pub fn elements(&self) -> Vec<GroupElem> {
        let mut out = vec![self.identity()];
        for (pos, &m) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for e in &out {
                for x in 0..m {
                    let mut e = e.clone();
                    e[pos] = x;
                    next.push(e);
                }
            }
            out = next;
        }
        out
    }
}

/// Dense table of a map `G^3 -> k*`.
#[derive(Debug, Clone)]
pub struct CocycleTable {
    group: FiniteAbelianGroup,
    field: PrimeField,
    values: Vec<Fp>,
}

impl CocycleTable {
    pub fn constant_one(group: FiniteAbelianGroup, field: PrimeField) -> Self {
        let n = group.order();
        CocycleTable { group, field, values: vec![field.one(); n * n * n] }
    }

    /// Build from a rule; the rule must return nonzero values.
    pub fn from_rule(
        group: FiniteAbelianGroup,
        field: PrimeField,
        rule: impl Fn(&GroupElem, &GroupElem, &GroupElem) -> Fp,
    ) -> Self {
        let elems = group.elements();
        let n = elems.len();
        let mut values = vec![field.one(); n * n * n];
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let v = rule(a, b, c);
                    assert!(!field.is_zero(v), "cocycle values live in k*");
                    values
                        [(group.index_of(a) * n + group.index_of(b)) * n + group.index_of(c)] = v;
                }
            }
        }
        CocycleTable { group, field, values }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn get(&self, a: &GroupElem, b: &GroupElem, c: &GroupElem) -> Fp {
        let n = self.group.order();
        self.values
            [(self.group.index_of(a) * n + self.group.index_of(b)) * n + self.group.index_of(c)]
    }

    pub fn set(&mut self, a: &GroupElem, b: &GroupElem, c: &GroupElem, v: Fp) {
        assert!(!self.field.is_zero(v));
        let n = self.group.order();
        self.values
            [(self.group.index_of(a) * n + self.group.index_of(b)) * n + self.group.index_of(c)] =
            v;
    }

    /// Multiply pointwise by the coboundary of a 2-cochain `mu: G^2 -> k*`:
    /// `(d mu)(a,b,c) = mu(b,c) mu(a,bc) mu(ab,c)^{-1} mu(a,b)^{-1}`.
    pub fn multiply_by_coboundary(
        &self,
        mu: impl Fn(&GroupElem, &GroupElem) -> Fp,
    ) -> Result<Self, GrcatError> {
        let g = &self.group;
        let k = self.field;
        let elems = g.elements();
        let mut out = self.clone();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let num = k.mul(mu(b, c), mu(a, &g.add(b, c)));
                    let den = k.mul(mu(&g.add(a, b), c), mu(a, b));
                    let cob = k.mul(num, k.inv(den)?);
                    out.set(a, b, c, k.mul(self.get(a, b, c), cob));
                }
            }
        }
        Ok(out)
    }
}

/// The cup-product table on (Z/2)^3: `f(a, b, c) = (-1)^{a_1 b_2 c_3}`.
pub fn cup_product_z2_cubed(field: PrimeField) -> CocycleTable {
    let g = FiniteAbelianGroup::new(vec![2, 2, 2]);
    CocycleTable::from_rule(g, field, |a, b, c| field.sign((a[0] * b[1] * c[2]) as i64))
}

/// Product of the standard carry cocycles on (Z/4)^2, using the smallest
/// primitive 4th root of unity in `field` (requires p = 1 mod 4).
pub fn carry_cocycle_z4_squared(field: PrimeField) -> CocycleTable {
    let p = field.modulus();
    assert_eq!(p % 4, 1, "needs a 4th root of unity");
    let zeta = (2..p)
        .map(Fp)
        .find(|&z| {
            let z2 = field.mul(z, z);
            field.mul(z2, z2) == field.one() && z2 != field.one()
        })
        .expect("primitive 4th root exists");
    let g = FiniteAbelianGroup::new(vec![4, 4]);
    CocycleTable::from_rule(g, field, |a, b, c| {
        let carry = |x: u32, y: u32| ((x + y) / 4) as i64;
        let e = a[0] as i64 * carry(b[0], c[0]) + a[1] as i64 * carry(b[1], c[1]);
        field.pow(zeta, e).expect("zeta is invertible")
    })
}

/// Exhaustive 3-cocycle condition with trivial action:
/// `f(b,c,d) f(ab,c,d)^{-1} f(a,bc,d) f(a,b,cd)^{-1} f(a,b,c) = 1`.
pub fn check_cocycle3(f: &CocycleTable) -> Result<bool, GrcatError> {
    let g = f.group();
    if g.order() > MAX_EXHAUSTIVE_ORDER {
        return Err(GrcatError::TooLarge(g.order()));
    }
    let k = f.field();
    let elems = g.elements();
    for a in &elems {
        for b in &elems {
            for c in &elems {
                for d in &elems {
                    let mut acc = f.get(b, c, d);
                    acc = k.mul(acc, k.inv(f.get(&g.add(a, b), c, d))?);
                    acc = k.mul(acc, f.get(a, &g.add(b, c), d));
                    acc = k.mul(acc, k.inv(f.get(a, b, &g.add(c, d)))?);
                    acc = k.mul(acc, f.get(a, b, c));
                    if acc != k.one() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Six-term alternating commutator of a 3-cocycle:
/// `phi(g1,g2,g3) = f(g1,g2,g3) f(g3,g1,g2) f(g2,g3,g1)
///               / (f(g1,g3,g2) f(g3,g2,g1) f(g2,g1,g3))`.
pub fn phi_from_cocycle(
    f: &CocycleTable,
    g1: &GroupElem,
    g2: &GroupElem,
    g3: &GroupElem,
) -> Result<Fp, GrcatError> {
    let k = f.field();
    let num = k.mul(k.mul(f.get(g1, g2, g3), f.get(g3, g1, g2)), f.get(g2, g3, g1));
    let den = k.mul(k.mul(f.get(g1, g3, g2), f.get(g3, g2, g1)), f.get(g2, g1, g3));
    Ok(k.mul(num, k.inv(den)?))
}

/// Dense table of a map `G^2 -> k*`.
#[derive(Debug, Clone)]
pub struct TwoCocycleTable {
    group: FiniteAbelianGroup,
    field: PrimeField,
    values: Vec<Fp>,
}

impl TwoCocycleTable {
    pub fn from_rule(
        group: FiniteAbelianGroup,
        field: PrimeField,
        rule: impl Fn(&GroupElem, &GroupElem) -> Fp,
    ) -> Self {
        let elems = group.elements();
        let n = elems.len();
        let mut values = vec![field.one(); n * n];
        for a in &elems {
            for b in &elems {
                let v = rule(a, b);
                assert!(!field.is_zero(v));
                values[group.index_of(a) * n + group.index_of(b)] = v;
            }
        }
        TwoCocycleTable { group, field, values }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn get(&self, a: &GroupElem, b: &GroupElem) -> Fp {
        self.values[self.group.index_of(a) * self.group.order() + self.group.index_of(b)]
    }

    /// Exhaustive 2-cocycle condition: `f(b,c) f(a,bc) = f(ab,c) f(a,b)`.
    pub fn check(&self) -> Result<bool, GrcatError> {
        let g = &self.group;
        if g.order() > MAX_EXHAUSTIVE_ORDER {
            return Err(GrcatError::TooLarge(g.order()));
        }
        let k = self.field;
        let elems = g.elements();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    let lhs = k.mul(self.get(b, c), self.get(a, &g.add(b, c)));
                    let rhs = k.mul(self.get(&g.add(a, b), c), self.get(a, b));
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Which slot of the torsor fibres stays fixed in the induced extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
}

/// The 2-cocycle of the extension induced by fixing one slot:
/// slot 1: `f_{h,1}(b1,b2) = f(b1,b2,h) f(h,b1,b2) / f(b1,h,b2)`;
/// slot 2: `f_{g,2}(b1,b2) = f(b1,g,b2) / (f(g,b1,b2) f(b1,b2,g))`.
pub fn induced_2cocycle(
    f: &CocycleTable,
    fixed: &GroupElem,
    slot: Slot,
) -> Result<TwoCocycleTable, GrcatError> {
    let k = f.field();
    let group = f.group().clone();
    let fixed = fixed.clone();
    let table = match slot {
        Slot::First => TwoCocycleTable::from_rule(group, k, |b1, b2| {
            let num = k.mul(f.get(b1, b2, &fixed), f.get(&fixed, b1, b2));
            k.mul(num, k.inv(f.get(b1, &fixed, b2)).expect("k* value"))
        }),
        Slot::Second => TwoCocycleTable::from_rule(group, k, |b1, b2| {
            let den = k.mul(f.get(&fixed, b1, b2), f.get(b1, b2, &fixed));
            k.mul(f.get(b1, &fixed, b2), k.inv(den).expect("k* value"))
        }),
    };
    Ok(table)
}

/// Commutator of a 2-cocycle: `psi(b1, b2) = f2(b1,b2) / f2(b2,b1)`.
pub fn psi_from_2cocycle(
    f2: &TwoCocycleTable,
    b1: &GroupElem,
    b2: &GroupElem,
) -> Result<Fp, GrcatError> {
    let k = f2.field;
    Ok(k.mul(f2.get(b1, b2), k.inv(f2.get(b2, b1))?))
}

/// Which partial multiplication law of the torsor to compose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartialLaw {
    PlusOne,
    PlusTwo,
}

/// An element of the fibre `E_{g,h}`, realized as a scalar after
/// trivializing all Hom-sets by chosen representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorElem {
    pub g: GroupElem,
    pub h: GroupElem,
    pub scalar: Fp,
}

/// Compose two fibre elements under a partial law. The six steps of the
/// displayed composite are multiplied in order; unlabelled associativity
/// arrows contribute their cocycle factors and the connecting morphism
/// `c_choice` must cancel against its inverse (verified by tests under
/// random alternate choices).
pub fn partial_law(
    f: &CocycleTable,
    law: PartialLaw,
    u: &TorsorElem,
    v: &TorsorElem,
    c_choice: Fp,
) -> Result<TorsorElem, GrcatError> {
    let k = f.field();
    let grp = f.group();
    assert!(!k.is_zero(c_choice));
    match law {
        PartialLaw::PlusOne => {
            assert_eq!(u.h, v.h, "+1 composes fibres with a common h");
            let (g, gp, h) = (&u.g, &v.g, &u.h);
            let mut s = c_choice; //                 c_{g,g'}
            s = k.mul(s, f.get(h, g, gp)); //        associator
            s = k.mul(s, u.scalar); //               u tensor id
            s = k.mul(s, k.inv(f.get(g, h, gp))?); // inverse associator
            s = k.mul(s, v.scalar); //               id tensor v
            s = k.mul(s, f.get(g, gp, h)); //        associator
            s = k.mul(s, k.inv(c_choice)?); //       c_{g,g'}^{-1}
            Ok(TorsorElem { g: grp.add(g, gp), h: h.clone(), scalar: s })
        }
        PartialLaw::PlusTwo => {
            assert_eq!(u.g, v.g, "+2 composes fibres with a common g");
            let (g, h, hp) = (&u.g, &u.h, &v.h);
            let mut s = c_choice; //                 c_{h,h'}
            s = k.mul(s, k.inv(f.get(h, hp, g))?); // inverse associator
            s = k.mul(s, v.scalar); //               id tensor w
            s = k.mul(s, f.get(h, g, hp)); //        associator
            s = k.mul(s, u.scalar); //               u tensor id
            s = k.mul(s, k.inv(f.get(g, h, hp))?); // inverse associator
            s = k.mul(s, k.inv(c_choice)?); //       c_{h,h'}^{-1}
            Ok(TorsorElem { g: g.clone(), h: grp.add(h, hp), scalar: s })
        }
    }
}

/// Load a cocycle table from the text format: header `group m1 m2 ... mr`,
/// then lines `g1 g2 g3 value` with elements as comma-separated vectors.
/// Omitted triples default to 1; `#` starts a comment line.
pub fn load_cocycle_table(field: PrimeField, text: &str) -> Result<CocycleTable, GrcatError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| GrcatError::BadFile("empty file".into()))?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("group") {
        return Err(GrcatError::BadFile("header must start with 'group'".into()));
    }
    let orders: Vec<u32> = parts
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| GrcatError::BadFile(format!("bad cyclic order '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    if orders.is_empty() {
        return Err(GrcatError::BadFile("no cyclic orders in header".into()));
    }
    let group = FiniteAbelianGroup::new(orders);
    let mut table = CocycleTable::constant_one(group.clone(), field);
    let parse_elem = |tok: &str| -> Result<GroupElem, GrcatError> {
        let comps: Vec<i64> = tok
            .split(',')
            .map(|c| {
                c.parse::<i64>()
                    .map_err(|_| GrcatError::BadFile(format!("bad element '{tok}'")))
            })
            .collect::<Result<_, _>>()?;
        group.reduce(&comps)
    };
    for line in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 4 {
            return Err(GrcatError::BadFile(format!("expected 'g1 g2 g3 value': '{line}'")));
        }
        let a = parse_elem(toks[0])?;
        let b = parse_elem(toks[1])?;
        let c = parse_elem(toks[2])?;
        let raw: i64 = toks[3]
            .parse()
            .map_err(|_| GrcatError::BadFile(format!("bad value '{}'", toks[3])))?;
        let v = field.elt(raw);
        if field.is_zero(v) {
            return Err(GrcatError::ZeroValue(raw));
        }
        table.set(&a, &b, &c, v);
    }
    Ok(table)
}
