//! Based directed augmented complexes over the integers.
//!
//! Generators are indexed per degree; a [`Chain`] is a sparse integer
//! combination of generators of a single degree. All arithmetic is checked.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use petgraph::algo::is_cyclic_directed;
use petgraph::graph::DiGraph;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::theta::{SimplicialMap, ThetaCell, ThetaMorphism};

/// Sparse integer combination of generators, sorted by index, no zero terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Chain(Vec<(u32, i64)>);

impl Chain {
    pub fn zero() -> Self {
        Chain(Vec::new())
    }

    pub fn gen(g: u32) -> Self {
        Chain(vec![(g, 1)])
    }

    /// Collect terms, merging repeated generators.
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> Result<Self> {
        let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
        for (g, c) in terms {
            let slot = acc.entry(g).or_insert(0);
            *slot = slot.checked_add(c).ok_or(Error::Overflow)?;
        }
        Ok(Chain(acc.into_iter().filter(|&(_, c)| c != 0).collect()))
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, g: u32) -> i64 {
        self.0
            .binary_search_by_key(&g, |&(h, _)| h)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&(g, _)| g)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&(_, c)| c > 0)
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &Chain, k: i64) -> Result<Chain> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            let next = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(&&x), None) => {
                    a.next();
                    x
                }
                (None, Some(&&(g, c))) => {
                    b.next();
                    (g, c.checked_mul(k).ok_or(Error::Overflow)?)
                }
                (Some(&&(g, c)), Some(&&(h, e))) => {
                    if g < h {
                        a.next();
                        (g, c)
                    } else if h < g {
                        b.next();
                        (h, e.checked_mul(k).ok_or(Error::Overflow)?)
                    } else {
                        a.next();
                        b.next();
                        let s = e
                            .checked_mul(k)
                            .and_then(|e| c.checked_add(e))
                            .ok_or(Error::Overflow)?;
                        (g, s)
                    }
                }
            };
            if next.1 != 0 {
                out.push(next);
            }
        }
        Ok(Chain(out))
    }

    pub fn add(&self, other: &Chain) -> Result<Chain> {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        self.add_scaled(other, -1)
    }

    pub fn scale(&self, k: i64) -> Result<Chain> {
        Chain::zero().add_scaled(self, k)
    }

    /// Positive part.
    pub fn plus(&self) -> Chain {
        Chain(self.0.iter().copied().filter(|&(_, c)| c > 0).collect())
    }

    /// Negated negative part, so that `self = plus − minus`.
    pub fn minus(&self) -> Chain {
        Chain(
            self.0
                .iter()
                .filter(|&&(_, c)| c < 0)
                .map(|&(g, c)| (g, -c))
                .collect(),
        )
    }

    /// Substitute `images[g]` for every generator `g`.
    pub fn map(&self, images: &[Chain]) -> Result<Chain> {
        let mut terms = Vec::new();
        for &(g, c) in &self.0 {
            let img = images
                .get(g as usize)
                .ok_or_else(|| Error::UnknownGenerator(format!("#{g}")))?;
            for &(h, e) in &img.0 {
                terms.push((h, e.checked_mul(c).ok_or(Error::Overflow)?));
            }
        }
        Chain::from_terms(terms)
    }

    /// Render with generator names from `names`.
    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, &(g, c)) in self.0.iter().enumerate() {
            let name = &names[g as usize];
            match (k, c) {
                (0, 1) => s.push_str(name),
                (0, -1) => s.push_str(&format!("-{name}")),
                (0, c) => s.push_str(&format!("{c}{name}")),
                (_, 1) => s.push_str(&format!(" + {name}")),
                (_, -1) => s.push_str(&format!(" - {name}")),
                (_, c) if c < 0 => s.push_str(&format!(" - {}{name}", -c)),
                (_, c) => s.push_str(&format!(" + {c}{name}")),
            }
        }
        s
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = match self.0.last() {
            Some(&(g, _)) => (0..=g).map(|g| format!("#{g}")).collect(),
            None => Vec::new(),
        };
        write!(f, "{}", self.display(&names))
    }
}

/// The group element of a given degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupElement {
    pub degree: usize,
    pub chain: Chain,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignSplit {
    pub support: Vec<u32>,
    pub plus: Chain,
    pub minus: Chain,
}

pub fn sign_split(x: &Chain) -> SignSplit {
    SignSplit {
        support: x.support().collect(),
        plus: x.plus(),
        minus: x.minus(),
    }
}

/// How the generators of a complex were produced, used to address them by
/// structure rather than by name.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Layout {
    Plain,
    /// Vertices `0..=width`, then one block per segment holding a suspended
    /// copy of that child's generators.
    Wreath {
        width: usize,
        child_ranks: Vec<Vec<usize>>,
    },
    /// Pairs ordered by left degree, then left index, then right index.
    Tensor {
        left_ranks: Vec<usize>,
        right_ranks: Vec<usize>,
    },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DAComplex {
    names: Vec<Vec<String>>,
    d: Vec<Vec<Chain>>,
    e: Vec<i64>,
    layout: Layout,
    index: HashMap<String, (usize, u32)>,
}

impl DAComplex {
    /// Build and validate. `d[0]` is ignored and may be empty.
    pub fn new(names: Vec<Vec<String>>, d: Vec<Vec<Chain>>, e: Vec<i64>) -> Result<Self> {
        let k = DAComplex::assemble(names, d, e, Layout::Plain)?;
        k.validate()?;
        Ok(k)
    }

    fn assemble(
        names: Vec<Vec<String>>,
        mut d: Vec<Vec<Chain>>,
        e: Vec<i64>,
        layout: Layout,
    ) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidComplex("no degrees".into()));
        }
        if d.is_empty() {
            d.push(Vec::new());
        }
        d[0] = vec![Chain::zero(); names[0].len()];
        if d.len() != names.len() {
            return Err(Error::InvalidComplex(format!(
                "{} degrees of names but {} of differentials",
                names.len(),
                d.len()
            )));
        }
        if e.len() != names[0].len() {
            return Err(Error::InvalidComplex("augmentation size".into()));
        }
        let mut index = HashMap::new();
        for (deg, ns) in names.iter().enumerate() {
            if d[deg].len() != ns.len() {
                return Err(Error::InvalidComplex(format!("degree {deg} size mismatch")));
            }
            for (g, n) in ns.iter().enumerate() {
                if index.insert(n.clone(), (deg, g as u32)).is_some() {
                    return Err(Error::InvalidComplex(format!("duplicate generator {n}")));
                }
            }
        }
        Ok(DAComplex {
            names,
            d,
            e,
            layout,
            index,
        })
    }

    /// Check `d∘d = 0`, `e∘d = 0` and that differentials stay in range.
    pub fn validate(&self) -> Result<()> {
        for deg in 1..self.names.len() {
            let below = self.rank(deg - 1) as u32;
            for (g, c) in self.d[deg].iter().enumerate() {
                if c.support().any(|h| h >= below) {
                    return Err(Error::InvalidComplex(format!(
                        "d({}) leaves degree {}",
                        self.names[deg][g],
                        deg - 1
                    )));
                }
                if deg == 1 {
                    if self.augment(c)? != 0 {
                        return Err(Error::InvalidComplex(format!(
                            "e(d({})) != 0",
                            self.names[deg][g]
                        )));
                    }
                } else if !self.apply_d(deg - 1, c)?.is_zero() {
                    return Err(Error::InvalidComplex(format!(
                        "d(d({})) != 0",
                        self.names[deg][g]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn top_degree(&self) -> usize {
        self.names.len() - 1
    }

    pub fn rank(&self, deg: usize) -> usize {
        self.names.get(deg).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, deg: usize) -> &[String] {
        self.names.get(deg).map_or(&[], Vec::as_slice)
    }

    pub fn name(&self, deg: usize, g: u32) -> &str {
        &self.names[deg][g as usize]
    }

    pub fn lookup(&self, name: &str) -> Result<(usize, u32)> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn d(&self, deg: usize, g: u32) -> &Chain {
        &self.d[deg][g as usize]
    }

    pub fn e(&self, g: u32) -> i64 {
        self.e[g as usize]
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// `d` applied to a chain of degree `deg ≥ 1`.
    pub fn apply_d(&self, deg: usize, x: &Chain) -> Result<Chain> {
        match self.d.get(deg) {
            Some(d) => x.map(d),
            None if x.is_zero() => Ok(Chain::zero()),
            None => Err(Error::Mismatch(format!("no degree {deg}"))),
        }
    }

    pub fn augment(&self, x: &Chain) -> Result<i64> {
        let mut s: i64 = 0;
        for &(g, c) in x.terms() {
            let t = c.checked_mul(self.e(g)).ok_or(Error::Overflow)?;
            s = s.checked_add(t).ok_or(Error::Overflow)?;
        }
        Ok(s)
    }

    pub fn display(&self, deg: usize, x: &Chain) -> String {
        x.display(self.basis(deg))
    }

    /// Same ranks, differentials and augmentation, index by index.
    pub fn same_structure(&self, other: &DAComplex) -> bool {
        self.ranks() == other.ranks() && self.d == other.d && self.e == other.e
    }

    pub fn renamed(&self, rename: impl Fn(usize, &str) -> String) -> Result<DAComplex> {
        let names = self
            .names
            .iter()
            .enumerate()
            .map(|(deg, ns)| ns.iter().map(|n| rename(deg, n)).collect())
            .collect();
        DAComplex::assemble(names, self.d.clone(), self.e.clone(), self.layout.clone())
    }

    pub fn to_json(&self) -> Value {
        let mut d = Map::new();
        for deg in 1..self.names.len() {
            for (g, c) in self.d[deg].iter().enumerate() {
                let mut m = Map::new();
                for &(h, k) in c.terms() {
                    m.insert(self.names[deg - 1][h as usize].clone(), json!(k));
                }
                d.insert(self.names[deg][g].clone(), Value::Object(m));
            }
        }
        let mut e = Map::new();
        for (g, &k) in self.e.iter().enumerate() {
            e.insert(self.names[0][g].clone(), json!(k));
        }
        json!({ "degrees": self.names, "d": d, "e": e })
    }

    /// Index of the suspended copy of child generator `g` (degree `deg`) over
    /// segment `i` of a wreath complex.
    pub fn suspended(&self, i: usize, deg: usize, g: u32) -> u32 {
        match &self.layout {
            Layout::Wreath { child_ranks, .. } => {
                let before: usize = child_ranks[..i - 1]
                    .iter()
                    .map(|r| r.get(deg).copied().unwrap_or(0))
                    .sum();
                (before as u32) + g
            }
            _ => panic!("suspended() on a complex without wreath layout"),
        }
    }

    /// Inverse of [`DAComplex::suspended`]: the segment and child index of a
    /// generator of degree `deg ≥ 1`.
    pub fn desuspend(&self, deg: usize, g: u32) -> (usize, u32) {
        match &self.layout {
            Layout::Wreath { child_ranks, .. } => {
                let mut g = g as usize;
                for (i, r) in child_ranks.iter().enumerate() {
                    let n = r.get(deg - 1).copied().unwrap_or(0);
                    if g < n {
                        return (i + 1, g as u32);
                    }
                    g -= n;
                }
                panic!("generator out of range")
            }
            _ => panic!("desuspend() on a complex without wreath layout"),
        }
    }

    /// Index of `a⊗b` with `|a| = i`, `|b| = j` in a tensor complex.
    pub fn pair(&self, i: usize, a: u32, j: usize, b: u32) -> u32 {
        match &self.layout {
            Layout::Tensor {
                left_ranks,
                right_ranks,
            } => {
                let n = i + j;
                let mut off = 0;
                for (p, &lr) in left_ranks.iter().enumerate().take(i) {
                    if n - p < right_ranks.len() {
                        off += lr * right_ranks[n - p];
                    }
                }
                (off + a as usize * right_ranks[j] + b as usize) as u32
            }
            _ => panic!("pair() on a complex without tensor layout"),
        }
    }

    /// Inverse of [`DAComplex::pair`]: `(i, a, j, b)`.
    pub fn unpair(&self, n: usize, g: u32) -> (usize, u32, usize, u32) {
        match &self.layout {
            Layout::Tensor {
                left_ranks,
                right_ranks,
            } => {
                let mut g = g as usize;
                for (i, &lr) in left_ranks.iter().enumerate().take(n + 1) {
                    if n - i >= right_ranks.len() {
                        continue;
                    }
                    let rr = right_ranks[n - i];
                    if g < lr * rr {
                        return (i, (g / rr) as u32, n - i, (g % rr) as u32);
                    }
                    g -= lr * rr;
                }
                panic!("generator out of range")
            }
            _ => panic!("unpair() on a complex without tensor layout"),
        }
    }
}

fn segment_name(i: usize, name: &str) -> String {
    if name.contains('⊗') {
        format!("{i}:({name})")
    } else {
        format!("{i}:{name}")
    }
}

/// `λ(n̄)` with generators `b_k, t_k` below the top and `v_n` at the top.
pub fn lambda_globe(n: usize) -> DAComplex {
    let mut names = Vec::new();
    let mut d = Vec::new();
    for k in 0..n {
        names.push(vec![format!("b{k}"), format!("t{k}")]);
        if k == 0 {
            d.push(Vec::new());
        } else {
            let bd = Chain::from_terms([(0, -1), (1, 1)]).expect("small");
            d.push(vec![bd.clone(), bd]);
        }
    }
    names.push(vec![format!("v{n}")]);
    if n == 0 {
        d.push(Vec::new());
    } else {
        d.push(vec![Chain::from_terms([(0, -1), (1, 1)]).expect("small")]);
    }
    let e = vec![1; names[0].len()];
    DAComplex::assemble(names, d, e, Layout::Plain).expect("globe complex")
}

/// Wreath a list of complexes over the simplex `[n]`, `n = children.len()`.
pub fn wreath(children: &[&DAComplex]) -> DAComplex {
    let n = children.len();
    let top = children
        .iter()
        .map(|c| c.top_degree() + 1)
        .max()
        .unwrap_or(0);
    let mut names = vec![(0..=n).map(|p| format!("v{p}")).collect::<Vec<_>>()];
    let mut d = vec![Vec::new()];
    for deg in 1..=top {
        let mut ns = Vec::new();
        let mut ds = Vec::new();
        // start of each segment's block one degree down
        let below: Vec<u32> = children
            .iter()
            .scan(0u32, |acc, c| {
                let o = *acc;
                if deg >= 2 {
                    *acc += c.rank(deg - 2) as u32;
                }
                Some(o)
            })
            .collect();
        for (i, c) in children.iter().enumerate() {
            for g in 0..c.rank(deg - 1) as u32 {
                ns.push(segment_name(i + 1, c.name(deg - 1, g)));
                let bd = if deg == 1 {
                    let k = c.e(g);
                    Chain::from_terms([(i as u32, -k), (i as u32 + 1, k)]).expect("small")
                } else {
                    let child = c.d(deg - 1, g);
                    Chain(
                        child
                            .terms()
                            .iter()
                            .map(|&(h, k)| (below[i] + h, k))
                            .collect(),
                    )
                };
                ds.push(bd);
            }
        }
        names.push(ns);
        d.push(ds);
    }
    let e = vec![1; n + 1];
    let layout = Layout::Wreath {
        width: n,
        child_ranks: children.iter().map(|c| c.ranks()).collect(),
    };
    DAComplex::assemble(names, d, e, layout).expect("wreath complex")
}

/// `λ(T)` by recursion on the tree.
pub fn lambda(t: &ThetaCell) -> DAComplex {
    let children: Vec<DAComplex> = t.children().iter().map(lambda).collect();
    wreath(&children.iter().collect::<Vec<_>>())
}

/// `λ([1])` with generators named `l`, `r`, `h`.
pub fn interval() -> DAComplex {
    lambda(&ThetaCell::simplex(1))
        .renamed(|_, n| {
            match n {
                "v0" => "l",
                "v1" => "r",
                _ => "h",
            }
            .to_string()
        })
        .expect("renaming is injective")
}

fn pair_name(a: &str, b: &str) -> String {
    let wrap = |s: &str| {
        if s.contains('⊗') {
            format!("({s})")
        } else {
            s.to_string()
        }
    };
    format!("{}⊗{}", wrap(a), wrap(b))
}

pub fn tensor(k: &DAComplex, l: &DAComplex) -> DAComplex {
    let top = k.top_degree() + l.top_degree();
    let layout = Layout::Tensor {
        left_ranks: k.ranks(),
        right_ranks: l.ranks(),
    };
    let mut names = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut ns = Vec::new();
        for i in 0..=n.min(k.top_degree()) {
            let j = n - i;
            if j > l.top_degree() {
                continue;
            }
            for a in k.basis(i) {
                for b in l.basis(j) {
                    ns.push(pair_name(a, b));
                }
            }
        }
        names.push(ns);
    }
    let mut e = Vec::new();
    for a in 0..k.rank(0) as u32 {
        for b in 0..l.rank(0) as u32 {
            e.push(k.e(a) * l.e(b));
        }
    }
    // a skeleton so that `pair` works while differentials are filled in
    let mut out = DAComplex {
        names: names.clone(),
        d: vec![Vec::new(); top + 1],
        e,
        layout: layout.clone(),
        index: HashMap::new(),
    };
    let mut d = vec![Vec::new(); top + 1];
    for (n, slot) in d.iter_mut().enumerate().skip(1) {
        let mut ds = Vec::with_capacity(names[n].len());
        for i in 0..=n.min(k.top_degree()) {
            let j = n - i;
            if j > l.top_degree() {
                continue;
            }
            for a in 0..k.rank(i) as u32 {
                for b in 0..l.rank(j) as u32 {
                    let mut terms = Vec::new();
                    if i > 0 {
                        for &(x, c) in k.d(i, a).terms() {
                            terms.push((out.pair(i - 1, x, j, b), c));
                        }
                    }
                    if j > 0 {
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        for &(y, c) in l.d(j, b).terms() {
                            terms.push((out.pair(i, a, j - 1, y), sign * c));
                        }
                    }
                    ds.push(Chain::from_terms(terms).expect("unit coefficients"));
                }
            }
        }
        *slot = ds;
    }
    out.d = d;
    DAComplex::assemble(out.names, out.d, out.e, layout).expect("tensor complex")
}

/// Tensor of two chains of degrees `i` and `j` inside `kl = K⊗L`.
pub fn tensor_chain(kl: &DAComplex, i: usize, x: &Chain, j: usize, y: &Chain) -> Result<Chain> {
    let mut terms = Vec::with_capacity(x.len() * y.len());
    for &(a, c) in x.terms() {
        for &(b, e) in y.terms() {
            terms.push((
                kl.pair(i, a, j, b),
                c.checked_mul(e).ok_or(Error::Overflow)?,
            ));
        }
    }
    Chain::from_terms(terms)
}

/// A chain map sending generators to chains of the same degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DAMorphism {
    source: Arc<DAComplex>,
    target: Arc<DAComplex>,
    images: Vec<Vec<Chain>>,
}

impl DAMorphism {
    /// Build and check the chain-map, augmentation and positivity conditions.
    pub fn new(
        source: Arc<DAComplex>,
        target: Arc<DAComplex>,
        images: Vec<Vec<Chain>>,
    ) -> Result<Self> {
        let f = DAMorphism {
            source,
            target,
            images,
        };
        f.validate()?;
        Ok(f)
    }

    /// Build without checks; callers guarantee the invariants.
    pub fn new_unchecked(
        source: Arc<DAComplex>,
        target: Arc<DAComplex>,
        images: Vec<Vec<Chain>>,
    ) -> Self {
        DAMorphism {
            source,
            target,
            images,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.images.len() != s.top_degree() + 1 {
            return Err(Error::InvalidMorphism("degree count".into()));
        }
        for (deg, imgs) in self.images.iter().enumerate() {
            if imgs.len() != s.rank(deg) {
                return Err(Error::InvalidMorphism(format!("degree {deg} size")));
            }
            for (g, img) in imgs.iter().enumerate() {
                let name = s.name(deg, g as u32);
                if img.support().any(|h| h as usize >= t.rank(deg)) {
                    return Err(Error::InvalidMorphism(format!(
                        "image of {name} out of range"
                    )));
                }
                if !img.is_zero() && !img.is_nonnegative() {
                    return Err(Error::InvalidMorphism(format!(
                        "image of {name} is not positive: {}",
                        t.display(deg, img)
                    )));
                }
                if deg == 0 {
                    if t.augment(img)? != s.e(g as u32) {
                        return Err(Error::InvalidMorphism(format!(
                            "augmentation not preserved at {name}"
                        )));
                    }
                } else {
                    let lhs = s.d(deg, g as u32).map(&self.images[deg - 1])?;
                    let rhs = t.apply_d(deg, img)?;
                    if lhs != rhs {
                        return Err(Error::InvalidMorphism(format!(
                            "not a chain map at {name}: f(d x) = {}, d(f x) = {}",
                            t.display(deg - 1, &lhs),
                            t.display(deg - 1, &rhs)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(k: &Arc<DAComplex>) -> Self {
        let images = (0..=k.top_degree())
            .map(|deg| (0..k.rank(deg) as u32).map(Chain::gen).collect())
            .collect();
        DAMorphism::new_unchecked(k.clone(), k.clone(), images)
    }

    pub fn source(&self) -> &Arc<DAComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DAComplex> {
        &self.target
    }

    pub fn image(&self, deg: usize, g: u32) -> &Chain {
        &self.images[deg][g as usize]
    }

    pub fn images(&self) -> &[Vec<Chain>] {
        &self.images
    }

    /// Apply to a chain of degree `deg`. Degrees above the source top give 0.
    pub fn apply(&self, deg: usize, x: &Chain) -> Result<Chain> {
        match self.images.get(deg) {
            Some(imgs) => x.map(imgs),
            None if x.is_zero() => Ok(Chain::zero()),
            None => Err(Error::Mismatch(format!("no degree {deg} in the source"))),
        }
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &DAMorphism) -> Result<DAMorphism> {
        if !self.target.same_structure(&g.source) {
            return Err(Error::Mismatch("target is not the next source".into()));
        }
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(deg, imgs)| imgs.iter().map(|x| g.apply(deg, x)).collect())
            .collect::<Result<_>>()?;
        Ok(DAMorphism::new_unchecked(
            self.source.clone(),
            g.target.clone(),
            images,
        ))
    }

    /// Same images after identifying structurally equal complexes.
    pub fn same_as(&self, other: &DAMorphism) -> bool {
        self.images == other.images
            && self.source.same_structure(&other.source)
            && self.target.same_structure(&other.target)
    }

    /// Swap the target for a structurally identical complex.
    pub fn retarget(self, target: Arc<DAComplex>) -> Result<DAMorphism> {
        if !self.target.same_structure(&target) {
            return Err(Error::Mismatch("retarget to a different complex".into()));
        }
        Ok(DAMorphism { target, ..self })
    }

    /// Swap the source for a structurally identical complex.
    pub fn resource(self, source: Arc<DAComplex>) -> Result<DAMorphism> {
        if !self.source.same_structure(&source) {
            return Err(Error::Mismatch("resource to a different complex".into()));
        }
        Ok(DAMorphism { source, ..self })
    }

    /// Sends every generator to a distinct generator with coefficient 1.
    pub fn is_prerigid_mono(&self) -> bool {
        self.images.iter().all(|imgs| {
            let mut seen = std::collections::HashSet::new();
            imgs.iter()
                .all(|x| matches!(x.terms(), [(g, 1)] if seen.insert(*g)))
        })
    }
}

/// The map between wreath complexes induced by a base map and a component
/// for every `(i, j)` with `j ∈ F(base)(i)`.
pub fn wreath_map(
    source: &Arc<DAComplex>,
    target: &Arc<DAComplex>,
    base: &SimplicialMap,
    components: &BTreeMap<(usize, usize), DAMorphism>,
) -> Result<DAMorphism> {
    let width = match source.layout() {
        Layout::Wreath { width, .. } => *width,
        _ => return Err(Error::Shape("source is not a wreath complex".into())),
    };
    if !matches!(target.layout(), Layout::Wreath { .. }) {
        return Err(Error::Shape("target is not a wreath complex".into()));
    }
    if base.source() != width {
        return Err(Error::Shape("base width".into()));
    }
    let mut images = vec![(0..=width)
        .map(|p| Chain::gen(base.apply(p) as u32))
        .collect::<Vec<_>>()];
    for deg in 1..=source.top_degree() {
        let mut imgs = Vec::with_capacity(source.rank(deg));
        for g in 0..source.rank(deg) as u32 {
            let (i, b) = source.desuspend(deg, g);
            let mut terms = Vec::new();
            for j in base.segments(i) {
                let comp = components.get(&(i, j)).ok_or_else(|| {
                    Error::InvalidMorphism(format!("missing component ({i},{j})"))
                })?;
                for &(h, c) in comp.image(deg - 1, b).terms() {
                    terms.push((target.suspended(j, deg - 1, h), c));
                }
            }
            imgs.push(Chain::from_terms(terms)?);
        }
        images.push(imgs);
    }
    Ok(DAMorphism::new_unchecked(
        source.clone(),
        target.clone(),
        images,
    ))
}

/// `λ(f)`.
pub fn lambda_map(f: &ThetaMorphism) -> DAMorphism {
    let source = Arc::new(lambda(f.source()));
    let target = Arc::new(lambda(f.target()));
    lambda_map_between(&source, &target, f)
}

/// `λ(f)` between already built complexes `λ(source)` and `λ(target)`.
pub fn lambda_map_between(
    source: &Arc<DAComplex>,
    target: &Arc<DAComplex>,
    f: &ThetaMorphism,
) -> DAMorphism {
    let components = f
        .components()
        .iter()
        .map(|(&k, c)| (k, lambda_map(c)))
        .collect();
    wreath_map(source, target, f.base(), &components).expect("λ of a valid morphism")
}

/// `f ⊗ g : K⊗L → K'⊗L'` between given tensor complexes.
pub fn tensor_map_between(
    source: &Arc<DAComplex>,
    target: &Arc<DAComplex>,
    f: &DAMorphism,
    g: &DAMorphism,
) -> Result<DAMorphism> {
    let mut images = Vec::with_capacity(source.top_degree() + 1);
    for n in 0..=source.top_degree() {
        let mut imgs = Vec::with_capacity(source.rank(n));
        for x in 0..source.rank(n) as u32 {
            let (i, a, j, b) = source.unpair(n, x);
            imgs.push(tensor_chain(target, i, f.image(i, a), j, g.image(j, b))?);
        }
        images.push(imgs);
    }
    Ok(DAMorphism::new_unchecked(
        source.clone(),
        target.clone(),
        images,
    ))
}

pub fn tensor_map(f: &DAMorphism, g: &DAMorphism) -> Result<DAMorphism> {
    let source = Arc::new(tensor(f.source(), g.source()));
    let target = Arc::new(tensor(f.target(), g.target()));
    tensor_map_between(&source, &target, f, g)
}

/// The table `⟨x⟩` of a generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtomTable {
    pub rows: Vec<(Chain, Chain)>,
    pub valid: bool,
}

impl AtomTable {
    pub fn dimension(&self) -> usize {
        self.rows.len() - 1
    }
}

/// Check the table conditions: positive entries, `d(x_k^ε) = x_{k−1}^1 − x_{k−1}^0`,
/// `e(x_0^ε) = 1` and equal top entries.
pub fn is_valid_table(k: &DAComplex, rows: &[(Chain, Chain)]) -> Result<bool> {
    let Some((top0, top1)) = rows.last() else {
        return Ok(false);
    };
    if top0 != top1 {
        return Ok(false);
    }
    if rows
        .iter()
        .any(|(a, b)| !a.is_nonnegative() || !b.is_nonnegative())
    {
        return Ok(false);
    }
    for (deg, (a, b)) in rows.iter().enumerate() {
        if a.support()
            .chain(b.support())
            .any(|g| g as usize >= k.rank(deg))
        {
            return Ok(false);
        }
    }
    if k.augment(&rows[0].0)? != 1 || k.augment(&rows[0].1)? != 1 {
        return Ok(false);
    }
    for deg in 1..rows.len() {
        let diff = rows[deg - 1].1.sub(&rows[deg - 1].0)?;
        if k.apply_d(deg, &rows[deg].0)? != diff || k.apply_d(deg, &rows[deg].1)? != diff {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn atom(k: &DAComplex, deg: usize, g: u32) -> Result<AtomTable> {
    if deg > k.top_degree() || g as usize >= k.rank(deg) {
        return Err(Error::UnknownGenerator(format!("#{g} in degree {deg}")));
    }
    let mut rows = vec![(Chain::zero(), Chain::zero()); deg + 1];
    rows[deg] = (Chain::gen(g), Chain::gen(g));
    for i in (1..=deg).rev() {
        let lo = k.apply_d(i, &rows[i].0)?.minus();
        let hi = k.apply_d(i, &rows[i].1)?.plus();
        rows[i - 1] = (lo, hi);
    }
    let valid = is_valid_table(k, &rows)?;
    Ok(AtomTable { rows, valid })
}

pub fn atom_named(k: &DAComplex, name: &str) -> Result<AtomTable> {
    let (deg, g) = k.lookup(name)?;
    atom(k, deg, g)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BasisReport {
    pub unital: bool,
    pub loop_free: bool,
    pub strongly_loop_free: bool,
}

impl BasisReport {
    pub fn all(&self) -> bool {
        self.unital && self.loop_free && self.strongly_loop_free
    }
}

pub fn check_basis(k: &DAComplex) -> Result<BasisReport> {
    let mut atoms = Vec::new();
    let mut unital = true;
    for deg in 0..=k.top_degree() {
        let mut row = Vec::new();
        for g in 0..k.rank(deg) as u32 {
            let a = atom(k, deg, g)?;
            unital &= a.valid;
            row.push(a);
        }
        atoms.push(row);
    }
    // global node numbering
    let mut offset = vec![0usize; k.top_degree() + 2];
    for deg in 0..=k.top_degree() {
        offset[deg + 1] = offset[deg] + k.rank(deg);
    }
    let total = offset[k.top_degree() + 1];

    let mut loop_free = true;
    for i in 0..k.top_degree() {
        let mut graph: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = (0..total).map(|_| graph.add_node(())).collect();
        // generators whose i-th row mentions each degree-i generator
        let mut by_target: HashMap<u32, Vec<usize>> = HashMap::new();
        let mut by_source: HashMap<u32, Vec<usize>> = HashMap::new();
        for deg in i + 1..=k.top_degree() {
            for (g, a) in atoms[deg].iter().enumerate() {
                let node = offset[deg] + g;
                for h in a.rows[i].0.support() {
                    by_source.entry(h).or_default().push(node);
                }
                for h in a.rows[i].1.support() {
                    by_target.entry(h).or_default().push(node);
                }
            }
        }
        for (h, xs) in &by_target {
            if let Some(ys) = by_source.get(h) {
                for &x in xs {
                    for &y in ys {
                        if x != y {
                            graph.update_edge(nodes[x], nodes[y], ());
                        }
                    }
                }
            }
        }
        if is_cyclic_directed(&graph) {
            loop_free = false;
            break;
        }
    }

    let mut graph: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<_> = (0..total).map(|_| graph.add_node(())).collect();
    for deg in 1..=k.top_degree() {
        for g in 0..k.rank(deg) as u32 {
            let y = offset[deg] + g as usize;
            let d = k.d(deg, g);
            for h in d.minus().support() {
                graph.update_edge(nodes[offset[deg - 1] + h as usize], nodes[y], ());
            }
            for h in d.plus().support() {
                graph.update_edge(nodes[y], nodes[offset[deg - 1] + h as usize], ());
            }
        }
    }
    let strongly_loop_free = !is_cyclic_directed(&graph);
    Ok(BasisReport {
        unital,
        loop_free,
        strongly_loop_free,
    })
}

/// A pushout of complexes along prerigid monomorphisms, with its two legs.
#[derive(Clone, Debug)]
pub struct Amalgam {
    pub complex: Arc<DAComplex>,
    pub left: DAMorphism,
    pub right: DAMorphism,
}

/// Glue `K` and `L` along the images of `M`.
pub fn amalgamate(
    k: &Arc<DAComplex>,
    l: &Arc<DAComplex>,
    i: &DAMorphism,
    j: &DAMorphism,
) -> Result<Amalgam> {
    if !i.is_prerigid_mono() || !j.is_prerigid_mono() {
        return Err(Error::InvalidMorphism(
            "amalgamation legs must send generators injectively to generators".into(),
        ));
    }
    if !i.target().same_structure(k) || !j.target().same_structure(l) {
        return Err(Error::Mismatch(
            "legs do not land in the glued complexes".into(),
        ));
    }
    let top = k.top_degree().max(l.top_degree());
    let mut names: Vec<Vec<String>> = Vec::new();
    // where each generator of L goes in the result
    let mut l_to: Vec<Vec<u32>> = Vec::new();
    for deg in 0..=top {
        let mut ns: Vec<String> = k.basis(deg).to_vec();
        let mut glued: HashMap<u32, u32> = HashMap::new();
        if deg <= i.source().top_degree() {
            for m in 0..i.source().rank(deg) as u32 {
                let a = i.image(deg, m).terms()[0].0;
                let b = j.image(deg, m).terms()[0].0;
                glued.insert(b, a);
            }
        }
        let mut map = Vec::with_capacity(l.rank(deg));
        for b in 0..l.rank(deg) as u32 {
            match glued.get(&b) {
                Some(&a) => map.push(a),
                None => {
                    let mut name = l.name(deg, b).to_string();
                    while k.lookup(&name).is_ok() || ns.contains(&name) {
                        name = format!("r:{name}");
                    }
                    map.push(ns.len() as u32);
                    ns.push(name);
                }
            }
        }
        names.push(ns);
        l_to.push(map);
    }
    let lift = |deg: usize, x: &Chain| -> Chain {
        Chain::from_terms(x.terms().iter().map(|&(g, c)| (l_to[deg][g as usize], c)))
            .expect("relabelling")
    };
    let mut d = vec![Vec::new()];
    for deg in 1..=top {
        let mut ds: Vec<Chain> = (0..k.rank(deg) as u32)
            .map(|g| k.d(deg, g).clone())
            .collect();
        ds.resize(names[deg].len(), Chain::zero());
        for b in 0..l.rank(deg) as u32 {
            let target = l_to[deg][b as usize] as usize;
            let lifted = lift(deg - 1, l.d(deg, b));
            if target < k.rank(deg) {
                if ds[target] != lifted {
                    return Err(Error::InvalidComplex(format!(
                        "glued generator {} has different boundaries",
                        names[deg][target]
                    )));
                }
            } else {
                ds[target] = lifted;
            }
        }
        d.push(ds);
    }
    let mut e: Vec<i64> = (0..k.rank(0) as u32).map(|g| k.e(g)).collect();
    e.resize(names[0].len(), 0);
    for b in 0..l.rank(0) as u32 {
        e[l_to[0][b as usize] as usize] = l.e(b);
    }
    let complex = Arc::new(DAComplex::assemble(names, d, e, Layout::Plain)?);
    complex.validate()?;
    let left = DAMorphism::new_unchecked(
        k.clone(),
        complex.clone(),
        (0..=k.top_degree())
            .map(|deg| (0..k.rank(deg) as u32).map(Chain::gen).collect())
            .collect(),
    );
    let right = DAMorphism::new_unchecked(
        l.clone(),
        complex.clone(),
        (0..=l.top_degree())
            .map(|deg| l_to[deg].iter().map(|&g| Chain::gen(g)).collect())
            .collect(),
    );
    Ok(Amalgam {
        complex,
        left,
        right,
    })
}

/// Search for a degree-preserving bijection of generators that commutes with
/// `d` and `e`. Returns `perm[deg][g]`, the image of `g`.
pub fn find_isomorphism(a: &DAComplex, b: &DAComplex) -> Option<Vec<Vec<u32>>> {
    if a.ranks() != b.ranks() {
        return None;
    }
    let top = a.top_degree();
    // cofaces[deg][g]: generators of degree deg+1 whose boundary mentions g
    let cofaces = |k: &DAComplex| -> Vec<Vec<Vec<(u32, i64)>>> {
        let mut out: Vec<Vec<Vec<(u32, i64)>>> =
            (0..=top).map(|deg| vec![Vec::new(); k.rank(deg)]).collect();
        for deg in 1..=top {
            for y in 0..k.rank(deg) as u32 {
                for &(x, c) in k.d(deg, y).terms() {
                    out[deg - 1][x as usize].push((y, c));
                }
            }
        }
        out
    };
    let (ca, cb) = (cofaces(a), cofaces(b));
    let signature = |k: &DAComplex, co: &[Vec<Vec<(u32, i64)>>], deg: usize, g: u32| {
        let mut down: Vec<i64> = k.d(deg, g).terms().iter().map(|t| t.1).collect();
        down.sort_unstable();
        let mut up: Vec<i64> = co[deg][g as usize].iter().map(|t| t.1).collect();
        up.sort_unstable();
        let e = if deg == 0 { k.e(g) } else { 0 };
        (down, up, e)
    };
    // variable order: depth-first from the top, so most generators are
    // reached through an already assigned coface
    let mut order: Vec<(usize, u32)> = Vec::new();
    let mut seen: Vec<Vec<bool>> = (0..=top).map(|deg| vec![false; a.rank(deg)]).collect();
    fn visit(
        k: &DAComplex,
        deg: usize,
        g: u32,
        seen: &mut Vec<Vec<bool>>,
        order: &mut Vec<(usize, u32)>,
    ) {
        if seen[deg][g as usize] {
            return;
        }
        seen[deg][g as usize] = true;
        order.push((deg, g));
        if deg > 0 {
            for h in k.d(deg, g).support() {
                visit(k, deg - 1, h, seen, order);
            }
        }
    }
    for deg in (0..=top).rev() {
        for g in 0..a.rank(deg) as u32 {
            visit(a, deg, g, &mut seen, &mut order);
        }
    }
    let mut map: Vec<Vec<Option<u32>>> = (0..=top).map(|deg| vec![None; a.rank(deg)]).collect();
    let mut used: Vec<Vec<bool>> = (0..=top).map(|deg| vec![false; b.rank(deg)]).collect();

    #[allow(clippy::too_many_arguments)]
    fn search(
        pos: usize,
        order: &[(usize, u32)],
        a: &DAComplex,
        b: &DAComplex,
        ca: &[Vec<Vec<(u32, i64)>>],
        cb: &[Vec<Vec<(u32, i64)>>],
        map: &mut Vec<Vec<Option<u32>>>,
        used: &mut Vec<Vec<bool>>,
        sig: &dyn Fn(bool, usize, u32) -> (Vec<i64>, Vec<i64>, i64),
    ) -> bool {
        let Some(&(deg, x)) = order.get(pos) else {
            return true;
        };
        // candidates through an assigned coface, else everything
        let mut candidates: Option<Vec<u32>> = None;
        for &(y, c) in &ca[deg][x as usize] {
            if let Some(fy) = map[deg + 1][y as usize] {
                candidates = Some(
                    b.d(deg + 1, fy)
                        .terms()
                        .iter()
                        .filter(|t| t.1 == c)
                        .map(|t| t.0)
                        .collect(),
                );
                break;
            }
        }
        let candidates = candidates.unwrap_or_else(|| (0..b.rank(deg) as u32).collect());
        let want = sig(true, deg, x);
        for z in candidates {
            if used[deg][z as usize] || sig(false, deg, z) != want {
                continue;
            }
            let consistent_up = ca[deg][x as usize].iter().all(|&(y, c)| {
                map[deg + 1][y as usize].is_none_or(|fy| b.d(deg + 1, fy).coeff(z) == c)
            });
            let consistent_down = deg == 0
                || a.d(deg, x).terms().iter().all(|&(h, c)| {
                    map[deg - 1][h as usize].is_none_or(|fh| b.d(deg, z).coeff(fh) == c)
                });
            let _ = cb;
            if !consistent_up || !consistent_down {
                continue;
            }
            map[deg][x as usize] = Some(z);
            used[deg][z as usize] = true;
            if search(pos + 1, order, a, b, ca, cb, map, used, sig) {
                return true;
            }
            map[deg][x as usize] = None;
            used[deg][z as usize] = false;
        }
        false
    }
    let sig = |left: bool, deg: usize, g: u32| {
        if left {
            signature(a, &ca, deg, g)
        } else {
            signature(b, &cb, deg, g)
        }
    };
    if search(0, &order, a, b, &ca, &cb, &mut map, &mut used, &sig) {
        Some(
            map.into_iter()
                .map(|row| row.into_iter().map(|g| g.expect("assigned")).collect())
                .collect(),
        )
    } else {
        None
    }
}

/// Amalgamate the globes of a globular sum in order, gluing each new globe to
/// the previous one along the meet.
pub fn amalgamate_globular_sum(t: &ThetaCell) -> Result<Arc<DAComplex>> {
    use crate::theta::{globular_sum, leaf_embeddings, meet_embeddings};
    let sum = globular_sum(t);
    let leaves = leaf_embeddings(t);
    let meets = meet_embeddings(t);
    // the meet globe sits in the target of leaf i and the source of leaf i+1
    let mut acc = Arc::new(lambda(&ThetaCell::globe(sum.leaf_dims[0])));
    // the current copy of the last globe inside `acc`
    let mut last = DAMorphism::identity(&acc);
    for (k, m) in meets.iter().enumerate() {
        let leaf_prev = &leaves[k];
        let leaf_next = &leaves[k + 1];
        let meet = ThetaCell::globe(sum.meet_dims[k]);
        let prev_globe = leaf_prev.source();
        let next_globe = leaf_next.source();
        // meet inside each globe: factor the meet embedding through the leaf
        let into_prev = factor_through(m, leaf_prev, &meet, prev_globe)?;
        let into_next = factor_through(m, leaf_next, &meet, next_globe)?;
        let next = Arc::new(lambda(next_globe));
        let i = lambda_map(&into_prev).then(&last)?;
        let j = lambda_map(&into_next).retarget(next.clone())?;
        let glued = amalgamate(&acc, &next, &i, &j)?;
        last = glued.right.clone();
        acc = glued.complex;
    }
    Ok(acc)
}

/// The unique `g : meet → globe` with `leaf ∘ g = m`, found by search over
/// the globe inclusions.
fn factor_through(
    m: &ThetaMorphism,
    leaf: &ThetaMorphism,
    meet: &ThetaCell,
    globe: &ThetaCell,
) -> Result<ThetaMorphism> {
    let n = meet.dimension();
    let k = globe.dimension();
    for g in globe_faces(n, k) {
        debug_assert_eq!(g.source(), meet);
        if g.then(leaf)? == *m {
            return Ok(g);
        }
    }
    Err(Error::Shape(format!(
        "meet does not factor through {globe}"
    )))
}

/// The two inclusions `n̄ → k̄` (source and target) for `n < k`, or the
/// identity when `n = k`.
pub fn globe_faces(n: usize, k: usize) -> Vec<ThetaMorphism> {
    if n == k {
        return vec![ThetaMorphism::identity(&ThetaCell::globe(n))];
    }
    if n > k {
        return Vec::new();
    }
    let target = ThetaCell::globe(k);
    if n == 0 {
        return vec![
            ThetaMorphism::object(&target, 0),
            ThetaMorphism::object(&target, 1),
        ];
    }
    globe_faces(n - 1, k - 1)
        .into_iter()
        .map(|inner| {
            ThetaMorphism::new(
                ThetaCell::globe(n),
                target.clone(),
                SimplicialMap::identity(1),
                BTreeMap::from([((1, 1), inner)]),
            )
            .expect("suspended face")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{corpus, hyperfaces, parse_cell};

    fn cell(s: &str) -> ThetaCell {
        parse_cell(s).unwrap()
    }

    #[test]
    fn chain_arithmetic() {
        let a = Chain::from_terms([(0, 2), (1, -3), (2, 1)]).unwrap();
        let s = sign_split(&a);
        assert_eq!(s.support, vec![0, 1, 2]);
        assert_eq!(s.plus, Chain::from_terms([(0, 2), (2, 1)]).unwrap());
        assert_eq!(s.minus, Chain::from_terms([(1, 3)]).unwrap());
        assert_eq!(s.plus.sub(&s.minus).unwrap(), a);
        assert!(a.sub(&a).unwrap().is_zero());
        let big = Chain::from_terms([(0, i64::MAX)]).unwrap();
        assert_eq!(big.add(&big), Err(Error::Overflow));
        let z = sign_split(&Chain::zero());
        assert!(z.support.is_empty() && z.plus.is_zero() && z.minus.is_zero());
    }

    #[test]
    fn globes() {
        let g0 = lambda_globe(0);
        assert_eq!(g0.ranks(), vec![1]);
        assert_eq!(g0.e(0), 1);
        let g1 = lambda_globe(1);
        assert_eq!(g1.ranks(), vec![2, 1]);
        assert_eq!(g1.display(0, g1.d(1, 0)), "-b0 + t0");
        let g2 = lambda_globe(2);
        assert_eq!(g2.ranks(), vec![2, 2, 1]);
        for g in 0..2 {
            assert_eq!(g2.display(0, g2.d(1, g)), "-b0 + t0");
        }
        assert_eq!(g2.display(1, g2.d(2, 0)), "-b1 + t1");
        for n in 0..=5 {
            assert!(lambda(&ThetaCell::globe(n)).same_structure(&lambda_globe(n)));
        }
    }

    #[test]
    fn lambda_of_simplices_and_trees() {
        let l2 = lambda(&cell("[2]"));
        assert_eq!(l2.ranks(), vec![3, 2]);
        assert_eq!(l2.display(0, l2.d(1, 1)), "-v1 + v2");
        let l = lambda(&cell("[1]([2])"));
        assert_eq!(l.ranks(), vec![2, 3, 2]);
        l.validate().unwrap();
        assert_eq!(l.display(1, l.d(2, 0)), "-1:v0 + 1:v1");
    }

    #[test]
    fn every_corpus_complex_is_strong_steiner() {
        for t in corpus(5) {
            let k = lambda(&t);
            k.validate().unwrap();
            assert!(check_basis(&k).unwrap().all(), "{t}");
        }
    }

    #[test]
    fn non_unital_counterexample() {
        let k = DAComplex::new(
            vec![vec!["y".into()], vec!["x".into()]],
            vec![Vec::new(), vec![Chain::zero()]],
            vec![2],
        )
        .unwrap();
        let r = check_basis(&k).unwrap();
        assert!(!r.unital);
    }

    #[test]
    fn rejects_bad_differentials() {
        let r = DAComplex::new(
            vec![vec!["a".into(), "b".into()], vec!["x".into()]],
            vec![Vec::new(), vec![Chain::gen(0)]],
            vec![1, 1],
        );
        assert!(matches!(r, Err(Error::InvalidComplex(_))));
    }

    #[test]
    fn atoms_of_globes() {
        let g1 = lambda_globe(1);
        let a = atom_named(&g1, "v1").unwrap();
        assert!(a.valid);
        assert_eq!(a.rows[0], (Chain::gen(0), Chain::gen(1)));
        assert_eq!(a.rows[1], (Chain::gen(0), Chain::gen(0)));
        let g2 = lambda_globe(2);
        let a = atom_named(&g2, "v2").unwrap();
        assert!(a.valid);
        assert_eq!(a.rows[1], (Chain::gen(0), Chain::gen(1)));
        assert_eq!(a.rows[0], (Chain::gen(0), Chain::gen(1)));
        let p = atom_named(&g2, "t0").unwrap();
        assert_eq!(p.dimension(), 0);
        assert!(p.valid);
        assert!(atom_named(&g2, "nope").is_err());
    }

    #[test]
    fn tensor_of_interval_and_globe() {
        let i = interval();
        let g2 = lambda_globe(2);
        let t = tensor(&i, &g2);
        assert_eq!(t.ranks(), vec![4, 6, 4, 1]);
        t.validate().unwrap();
        let (deg, g) = t.lookup("h⊗b1").unwrap();
        let mut support: Vec<&str> = t.d(deg, g).support().map(|h| t.name(deg - 1, h)).collect();
        support.sort_unstable();
        assert_eq!(support, vec!["h⊗b0", "h⊗t0", "l⊗b1", "r⊗b1"]);
        let unit = tensor(&lambda_globe(1), &lambda_globe(0));
        assert!(unit.same_structure(&lambda_globe(1)));
    }

    #[test]
    fn tensor_sign_rule() {
        let i = interval();
        let t = tensor(&i, &i);
        let (deg, g) = t.lookup("h⊗h").unwrap();
        assert_eq!(t.display(deg - 1, t.d(deg, g)), "-l⊗h + r⊗h + h⊗l - h⊗r");
        assert!(check_basis(&t).unwrap().all());
    }

    #[test]
    fn pairing_roundtrip() {
        let t = tensor(&lambda(&cell("[2]([1],[0])")), &interval());
        for n in 0..=t.top_degree() {
            for g in 0..t.rank(n) as u32 {
                let (i, a, j, b) = t.unpair(n, g);
                assert_eq!(t.pair(i, a, j, b), g);
            }
        }
    }

    #[test]
    fn lambda_maps_are_chain_maps() {
        for t in corpus(5) {
            for face in hyperfaces(&t) {
                let f = lambda_map(face.morphism());
                f.validate().unwrap();
            }
        }
    }

    #[test]
    fn degenerate_image_is_zero() {
        let s0 = ThetaMorphism::to_point(&ThetaCell::simplex(1));
        let f = lambda_map(&s0);
        assert!(f.image(1, 0).is_zero());
        f.validate().unwrap();
    }

    #[test]
    fn coface_image_is_a_sum() {
        let d1 = ThetaMorphism::new(
            ThetaCell::simplex(2),
            ThetaCell::simplex(3),
            SimplicialMap::coface(2, 1),
            (1..=3)
                .map(|j| {
                    let i = if j <= 2 { 1 } else { 2 };
                    ((i, j), ThetaMorphism::identity(&ThetaCell::point()))
                })
                .collect(),
        )
        .unwrap();
        let f = lambda_map(&d1);
        assert_eq!(f.target().display(1, f.image(1, 0)), "1:v0 + 2:v0");
    }

    #[test]
    fn amalgamation_rebuilds_lambda() {
        for t in corpus(6) {
            let glued = amalgamate_globular_sum(&t).unwrap();
            assert!(find_isomorphism(&glued, &lambda(&t)).is_some(), "{t}");
        }
    }

    #[test]
    fn amalgamating_a_point_is_a_unit() {
        let k = Arc::new(lambda(&cell("[2]([1],[0])")));
        let p = Arc::new(lambda_globe(0));
        let i = DAMorphism::new(p.clone(), k.clone(), vec![vec![Chain::gen(2)]]).unwrap();
        let j = DAMorphism::identity(&p);
        let a = amalgamate(&k, &p, &i, &j).unwrap();
        assert!(a.complex.same_structure(&k));
    }

    #[test]
    fn isomorphism_search_rejects_different_complexes() {
        let a = lambda(&cell("[2]([1],[0])"));
        let b = lambda(&cell("[2]([0],[1])"));
        assert!(find_isomorphism(&a, &a).is_some());
        // mirror images have the same ranks but are not isomorphic as
        // directed complexes
        assert!(find_isomorphism(&a, &b).is_none());
    }

    #[test]
    fn json_is_sorted_and_exact() {
        let j = lambda_globe(1).to_json();
        assert_eq!(
            j.to_string(),
            r#"{"d":{"v1":{"b0":-1,"t0":1}},"degrees":[["b0","t0"],["v1"]],"e":{"b0":1,"t0":1}}"#
        );
    }
}
