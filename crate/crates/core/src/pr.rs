//! The shifted product rule `PR(S_1,...,S_n)`, described as a category
//! enriched in ω-categories. `PR(S) = [1]⊗S`.
//!
//! Objects are `(x, (z_i))` with level `x ∈ 0..=n` and `z_i` a vertex of
//! `S_i = [s_i];(R^i_q)`. The hom from `(x,z)` to `(y,w)` is empty unless
//! `x ≤ y` and `z ≤ w`, and otherwise
//!
//! ```text
//! ∏_{a ≤ x} ∏_{q∈⟨z_a,w_a⟩} R^a_q  ×  ∏_{b∈⟨x,y⟩} PR((R^b_q)_{q∈⟨z_b,w_b⟩})  ×  ∏_{c > y} ∏_{q∈⟨z_c,w_c⟩} R^c_q
//! ```
//!
//! with `⟨a,b⟩ = {a+1..b}`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::dac::{interval, lambda, tensor, Chain, DAComplex};
use crate::error::{Error, Result};
use crate::gray::cylinder_map;
use crate::theta::{ThetaCell, ThetaMorphism};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PRExpr {
    Empty,
    Point,
    /// The simplex on the vertices `a..=b`.
    Interval(usize, usize),
    Cell(ThetaCell),
    Product(Vec<PRExpr>),
    PR(Vec<ThetaCell>),
}

impl PRExpr {
    /// Product with units dropped, nested products flattened and `Empty`
    /// absorbing.
    pub fn product(factors: impl IntoIterator<Item = PRExpr>) -> PRExpr {
        let mut out = Vec::new();
        for f in factors {
            match f {
                PRExpr::Empty => return PRExpr::Empty,
                PRExpr::Point => {}
                PRExpr::Cell(c) if c.is_point() => {}
                PRExpr::Interval(a, b) if a == b => {}
                PRExpr::PR(cs) if cs.is_empty() => {}
                PRExpr::Product(fs) => out.extend(fs),
                f => out.push(f),
            }
        }
        match out.len() {
            0 => PRExpr::Point,
            1 => out.pop().expect("one factor"),
            _ => PRExpr::Product(out),
        }
    }
}

impl fmt::Display for PRExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PRExpr::Empty => write!(f, "0"),
            PRExpr::Point => write!(f, "1"),
            PRExpr::Interval(a, b) => write!(f, "[{a},{b}]"),
            PRExpr::Cell(c) => write!(f, "{c}"),
            PRExpr::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(ToString::to_string).collect();
                write!(f, "{}", parts.join(" * "))
            }
            PRExpr::PR(cs) => {
                let parts: Vec<String> = cs.iter().map(ToString::to_string).collect();
                write!(f, "PR({})", parts.join(","))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PRObject {
    pub level: usize,
    pub coords: Vec<usize>,
}

impl fmt::Display for PRObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.level)?;
        for c in &self.coords {
            write!(f, ",{c}")?;
        }
        write!(f, ")")
    }
}

/// All objects, ordered by level then coordinates.
pub fn pr_objects(cells: &[ThetaCell]) -> Vec<PRObject> {
    let mut coords: Vec<Vec<usize>> = vec![Vec::new()];
    for c in cells {
        coords = coords
            .into_iter()
            .flat_map(|v| {
                (0..=c.width()).map(move |z| {
                    let mut v = v.clone();
                    v.push(z);
                    v
                })
            })
            .collect();
    }
    (0..=cells.len())
        .flat_map(|level| {
            coords.iter().map(move |c| PRObject {
                level,
                coords: c.clone(),
            })
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Middle {
    /// One `PR` factor per level crossed.
    Product,
    /// A single `PR` of the concatenated families. Kept only to show that it
    /// disagrees with the cylinder.
    #[cfg_attr(not(test), allow(dead_code))]
    Flattened,
}

fn hom_with(
    cells: &[ThetaCell],
    src: &PRObject,
    tgt: &PRObject,
    middle: Middle,
    reduce: bool,
) -> PRExpr {
    let n = cells.len();
    if src.level > tgt.level || src.coords.iter().zip(&tgt.coords).any(|(z, w)| z > w) {
        return PRExpr::Empty;
    }
    let family = |i: usize| -> Vec<ThetaCell> {
        (src.coords[i - 1] + 1..=tgt.coords[i - 1])
            .map(|q| cells[i - 1].child(q).clone())
            .collect()
    };
    let mut factors = Vec::new();
    for a in (1..=src.level).chain(tgt.level + 1..=n) {
        factors.extend(family(a).into_iter().map(PRExpr::Cell));
    }
    match middle {
        Middle::Product => {
            for b in src.level + 1..=tgt.level {
                let fam = family(b);
                if reduce && fam.iter().all(ThetaCell::is_point) {
                    factors.push(PRExpr::Interval(src.coords[b - 1], tgt.coords[b - 1]));
                } else {
                    factors.push(PRExpr::PR(fam));
                }
            }
        }
        Middle::Flattened => {
            let fam: Vec<ThetaCell> = (src.level + 1..=tgt.level).flat_map(family).collect();
            factors.push(PRExpr::PR(fam));
        }
    }
    if reduce {
        // keep the explicit interval factors, drop only true units
        let mut out = Vec::new();
        for f in factors {
            match f {
                PRExpr::Cell(c) if c.is_point() => {}
                PRExpr::PR(cs) if cs.is_empty() => {}
                f => out.push(f),
            }
        }
        return match out.len() {
            0 => PRExpr::Point,
            1 => out.pop().expect("one factor"),
            _ => PRExpr::Product(out),
        };
    }
    PRExpr::product(factors)
}

/// The hom-ω-category, in canonical form.
pub fn pr_hom(cells: &[ThetaCell], src: &PRObject, tgt: &PRObject) -> PRExpr {
    hom_with(cells, src, tgt, Middle::Product, false)
}

/// The hom with every `PR` of points written as the interval of coordinates
/// it spans, as in hand computations.
pub fn pr_hom_reduced(cells: &[ThetaCell], src: &PRObject, tgt: &PRObject) -> PRExpr {
    hom_with(cells, src, tgt, Middle::Product, true)
}

/// Memoized cell counts of expressions.
pub struct PRCounter {
    memo: HashMap<(PRExpr, usize), u64>,
    middle: Middle,
}

impl Default for PRCounter {
    fn default() -> Self {
        PRCounter {
            memo: HashMap::new(),
            middle: Middle::Product,
        }
    }
}

impl PRCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[cfg(test)]
    fn flattened() -> Self {
        PRCounter {
            memo: HashMap::new(),
            middle: Middle::Flattened,
        }
    }

    /// Number of `d`-cells, degenerate ones included.
    pub fn count(&mut self, e: &PRExpr, d: usize) -> Result<u64> {
        if let Some(&c) = self.memo.get(&(e.clone(), d)) {
            return Ok(c);
        }
        let c = match e {
            PRExpr::Empty => 0,
            PRExpr::Point => 1,
            PRExpr::Interval(a, b) => self.count(&PRExpr::Cell(ThetaCell::simplex(b - a)), d)?,
            PRExpr::Cell(t) => {
                if d == 0 {
                    t.width() as u64 + 1
                } else {
                    let mut total = 0u64;
                    for a in 0..=t.width() {
                        for b in a..=t.width() {
                            let hom = PRExpr::product(
                                (a + 1..=b).map(|q| PRExpr::Cell(t.child(q).clone())),
                            );
                            total = add(total, self.count(&hom, d - 1)?)?;
                        }
                    }
                    total
                }
            }
            PRExpr::Product(fs) => {
                let mut total = 1u64;
                for f in fs {
                    total = total
                        .checked_mul(self.count(f, d)?)
                        .ok_or(Error::Overflow)?;
                }
                total
            }
            PRExpr::PR(cells) => {
                let objects = pr_objects(cells);
                if d == 0 {
                    objects.len() as u64
                } else {
                    let mut total = 0u64;
                    for x in &objects {
                        for y in &objects {
                            let hom = hom_with(cells, x, y, self.middle, false);
                            if hom != PRExpr::Empty {
                                total = add(total, self.count(&hom, d - 1)?)?;
                            }
                        }
                    }
                    total
                }
            }
        };
        self.memo.insert((e.clone(), d), c);
        Ok(c)
    }
}

fn add(a: u64, b: u64) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow)
}

/// Number of `d`-cells of `PR(cells)`.
pub fn pr_count(cells: &[ThetaCell], d: usize) -> Result<u64> {
    PRCounter::new().count(&PRExpr::PR(cells.to_vec()), d)
}

/// `pr_count` for every dimension up to `max_dim`, sharing one memo table.
pub fn pr_counts(cells: &[ThetaCell], max_dim: usize) -> Result<Vec<u64>> {
    let mut counter = PRCounter::new();
    let e = PRExpr::PR(cells.to_vec());
    (0..=max_dim).map(|d| counter.count(&e, d)).collect()
}

/// One factor of a hom map: the restriction of `g_{i→j}` to the vertices
/// `a_i..=c_i`, as the list of images.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomComponent {
    pub segment: usize,
    pub target_segment: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomMap {
    pub source: PRExpr,
    pub target: PRExpr,
    pub components: Vec<HomComponent>,
}

impl fmt::Display for HomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let vs: Vec<String> = c.vertices.iter().map(ToString::to_string).collect();
                format!("{{{}}}", vs.join(","))
            })
            .collect();
        write!(
            f,
            "{} -> {} via ({})",
            self.source,
            self.target,
            parts.join(",")
        )
    }
}

/// `PR(f;g,⟨x,z⟩) : PR((A_i)_{i∈⟨x,z⟩}) → ∏_i PR((B_j)_{j∈F(f)(i)})` for a
/// morphism `f = f;(g_{i→j}) : [m];(A_i) → [n];(B_j)` between cells whose
/// children are simplices.
#[derive(Clone, Debug)]
pub struct PRMorphism {
    morphism: ThetaMorphism,
    range: (usize, usize),
}

pub fn pr_morphism(f: &ThetaMorphism, range: (usize, usize)) -> Result<PRMorphism> {
    let ok = |t: &ThetaCell| t.children().iter().all(ThetaCell::is_simplex);
    if !ok(f.source()) || !ok(f.target()) {
        return Err(Error::Shape(format!(
            "{f} leaves cells of the form [n];([s_i])"
        )));
    }
    if range.0 > range.1 || range.1 > f.source().width() {
        return Err(Error::Shape(format!(
            "range ⟨{},{}⟩ outside [{}]",
            range.0,
            range.1,
            f.source().width()
        )));
    }
    Ok(PRMorphism {
        morphism: f.clone(),
        range,
    })
}

impl PRMorphism {
    fn segments(&self) -> std::ops::RangeInclusive<usize> {
        self.range.0 + 1..=self.range.1
    }

    pub fn source_cells(&self) -> Vec<ThetaCell> {
        self.segments()
            .map(|i| self.morphism.source().child(i).clone())
            .collect()
    }

    /// `(B_j)_{j∈F(f)(i)}` for each `i` in the range.
    pub fn target_families(&self) -> Vec<Vec<ThetaCell>> {
        self.segments()
            .map(|i| {
                self.morphism
                    .base()
                    .segments(i)
                    .map(|j| self.morphism.target().child(j).clone())
                    .collect()
            })
            .collect()
    }

    fn g(&self, i: usize, j: usize, v: usize) -> usize {
        self.morphism.component(i, j).base().apply(v)
    }

    /// The object map: one object per source segment `i`. The level is the
    /// bottom of `[f(i-1), f(i)]` when the source level is below `i`, and
    /// the top otherwise.
    pub fn object(&self, o: &PRObject) -> Vec<PRObject> {
        self.segments()
            .enumerate()
            .map(|(k, i)| {
                let span = self.morphism.base().segments(i);
                let level = if self.range.0 + o.level < i {
                    0
                } else {
                    span.len()
                };
                PRObject {
                    level,
                    coords: span.map(|j| self.g(i, j, o.coords[k])).collect(),
                }
            })
            .collect()
    }

    pub fn hom(&self, src: &PRObject, tgt: &PRObject) -> HomMap {
        let cells = self.source_cells();
        let source = pr_hom_reduced(&cells, src, tgt);
        let (s, t) = (self.object(src), self.object(tgt));
        let families = self.target_families();
        let target = PRExpr::Product(
            families
                .iter()
                .zip(s.iter().zip(&t))
                .map(|(fam, (a, b))| pr_hom_reduced(fam, a, b))
                .collect(),
        );
        let mut components = Vec::new();
        if source != PRExpr::Empty {
            for (k, i) in self.segments().enumerate() {
                let crossed = src.level < k + 1 && k < tgt.level;
                if !crossed {
                    continue;
                }
                for j in self.morphism.base().segments(i) {
                    components.push(HomComponent {
                        segment: i,
                        target_segment: j,
                        vertices: (src.coords[k]..=tgt.coords[k])
                            .map(|v| self.g(i, j, v))
                            .collect(),
                    });
                }
            }
        }
        HomMap {
            source,
            target,
            components,
        }
    }
}

/// The 1-cell `l⊗v_0 → r⊗v_m` of `λ[1]⊗λT` that crosses at vertex `level`
/// and uses vertex `coords[j]` of segment `j` on the way.
fn crossing_chain(
    cyl: &DAComplex,
    lt: &DAComplex,
    level: usize,
    coords: &[(usize, usize)],
) -> Result<Chain> {
    let mut terms = vec![(cyl.pair(1, 0, 0, level as u32), 1)];
    for &(j, v) in coords {
        let end = if j <= level { 0 } else { 1 };
        terms.push((cyl.pair(0, end, 1, lt.suspended(j, 0, v as u32)), 1));
    }
    Chain::from_terms(terms)
}

/// Check the object map of `PR(f)` against `id ⊗ λ(f)` on the 1-cells of the
/// cylinders that the objects name.
pub fn pr_nu_check(f: &ThetaMorphism) -> Result<bool> {
    let m = f.source().width();
    let pm = pr_morphism(f, (0, m))?;
    let phi = cylinder_map(f)?;
    let (ls, lt) = (lambda(f.source()), lambda(f.target()));
    let i = interval();
    let (cs, ct) = (Arc::new(tensor(&i, &ls)), Arc::new(tensor(&i, &lt)));
    for o in pr_objects(&pm.source_cells()) {
        let coords: Vec<(usize, usize)> = (1..=m).map(|i| (i, o.coords[i - 1])).collect();
        let x = crossing_chain(&cs, &ls, o.level, &coords)?;
        let image = phi.apply(1, &x)?;
        let parts = pm.object(&o);
        let base = f.base();
        let crossing = base.apply(0) + parts.iter().map(|p| p.level).sum::<usize>();
        let mut target_coords = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            for (j, &c) in base.segments(k + 1).zip(&p.coords) {
                target_coords.push((j, c));
            }
        }
        if image != crossing_chain(&ct, &lt, crossing, &target_coords)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gray::gray_cylinder;
    use crate::nu::DEFAULT_CEILING;
    use crate::theta::{arbitrary_morphism, parse_cell, SimplicialMap};
    use std::collections::BTreeMap;

    fn cell(s: &str) -> ThetaCell {
        parse_cell(s).unwrap()
    }

    fn obj(level: usize, coords: &[usize]) -> PRObject {
        PRObject {
            level,
            coords: coords.to_vec(),
        }
    }

    #[test]
    fn object_sets() {
        assert_eq!(pr_objects(&[cell("[1]")]).len(), 4);
        assert_eq!(pr_objects(&[cell("[1]"), cell("[1]")]).len(), 12);
        assert_eq!(pr_objects(&[]), vec![obj(0, &[])]);
    }

    #[test]
    fn homs_of_pr_2() {
        let c = [cell("[2]")];
        let h = pr_hom(&c, &obj(0, &[0]), &obj(1, &[1]));
        assert_eq!(h, PRExpr::PR(vec![ThetaCell::point()]));
        assert_eq!(
            pr_hom_reduced(&c, &obj(0, &[0]), &obj(1, &[1])).to_string(),
            "[0,1]"
        );
        assert_eq!(
            pr_hom_reduced(&c, &obj(0, &[1]), &obj(1, &[2])).to_string(),
            "[1,2]"
        );
        assert_eq!(pr_hom(&c, &obj(1, &[0]), &obj(0, &[1])), PRExpr::Empty);
        assert_eq!(pr_hom(&c, &obj(0, &[2]), &obj(1, &[1])), PRExpr::Empty);
        assert_eq!(pr_hom(&c, &obj(0, &[0]), &obj(0, &[2])), PRExpr::Point);
    }

    #[test]
    fn small_counts() {
        assert_eq!(pr_counts(&[cell("[1]")], 1).unwrap(), vec![4, 10]);
        assert_eq!(
            pr_counts(&[ThetaCell::point()], 3).unwrap(),
            vec![2, 3, 3, 3]
        );
        assert_eq!(pr_counts(&[], 2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn points_give_simplices() {
        let pts = vec![ThetaCell::point(); 3];
        let mut c = PRCounter::new();
        for d in 0..4 {
            assert_eq!(
                pr_count(&pts, d).unwrap(),
                c.count(&PRExpr::Cell(ThetaCell::simplex(3)), d).unwrap()
            );
        }
    }

    fn nu_totals(t: &ThetaCell, max_dim: usize) -> Vec<u64> {
        gray_cylinder(t, max_dim, DEFAULT_CEILING)
            .unwrap()
            .counts()
            .into_iter()
            .map(|c| c as u64)
            .collect()
    }

    #[test]
    fn counts_match_the_cylinder() {
        for s in ["[0]", "[1]", "[2]", "[1]([1])"] {
            let t = cell(s);
            assert_eq!(
                pr_counts(std::slice::from_ref(&t), 3).unwrap(),
                nu_totals(&t, 3),
                "{s}"
            );
        }
    }

    // The middle factor is a product of one PR per level crossed. Reading it
    // as a single PR of the concatenated families agrees on every cell whose
    // crossings never span two segments with nontrivial children, and first
    // differs on [2]([1],[1]).
    #[test]
    fn middle_factor_is_a_product() {
        let t = cell("[2]([1],[1])");
        let nu = nu_totals(&t, 3);
        assert_eq!(pr_counts(std::slice::from_ref(&t), 3).unwrap(), nu);
        let mut flat = PRCounter::flattened();
        let e = PRExpr::PR(vec![t]);
        let flat: Vec<u64> = (0..=3).map(|d| flat.count(&e, d).unwrap()).collect();
        assert_ne!(flat, nu);
    }

    #[test]
    fn concatenation_restricts_to_each_piece() {
        // homs of PR(A ++ B) between objects at levels ≤ |A| are the homs
        // of PR(A) times the homs of the B's, and symmetrically
        let a = vec![cell("[2]"), cell("[1]([1])")];
        let b = vec![cell("[1]([2])")];
        let ab: Vec<ThetaCell> = a.iter().chain(&b).cloned().collect();
        let mut counter = PRCounter::new();
        let objects = pr_objects(&ab);
        let cell_hom = |t: &ThetaCell, z: usize, w: usize| {
            if z > w {
                PRExpr::Empty
            } else {
                PRExpr::product((z + 1..=w).map(|q| PRExpr::Cell(t.child(q).clone())))
            }
        };
        for x in &objects {
            for y in &objects {
                let whole = pr_hom(&ab, x, y);
                let split = if x.level <= a.len() && y.level <= a.len() {
                    let (xa, ya) = (obj(x.level, &x.coords[..2]), obj(y.level, &y.coords[..2]));
                    PRExpr::product(
                        std::iter::once(pr_hom(&a, &xa, &ya)).chain(std::iter::once(cell_hom(
                            &b[0],
                            x.coords[2],
                            y.coords[2],
                        ))),
                    )
                } else if x.level >= a.len() && y.level >= a.len() {
                    let (xb, yb) = (
                        obj(x.level - a.len(), &x.coords[2..]),
                        obj(y.level - a.len(), &y.coords[2..]),
                    );
                    PRExpr::product(
                        (0..2)
                            .map(|i| cell_hom(&a[i], x.coords[i], y.coords[i]))
                            .chain(std::iter::once(pr_hom(&b, &xb, &yb))),
                    )
                } else {
                    continue;
                };
                for d in 0..3 {
                    assert_eq!(
                        counter.count(&whole, d).unwrap(),
                        counter.count(&split, d).unwrap(),
                        "{x} -> {y}"
                    );
                }
            }
        }
        // objects: the two pieces overlap in the objects at level |A|
        let pa = pr_objects(&a).len() * (b[0].width() + 1);
        let pb = pr_objects(&b).len() * (a[0].width() + 1) * (a[1].width() + 1);
        let shared = (a[0].width() + 1) * (a[1].width() + 1) * (b[0].width() + 1);
        assert_eq!(objects.len(), pa + pb - shared);
    }

    /// `d^1;(s^1,s^0) : [1];([2]) → [2];([1],[1])`.
    fn worked_example() -> ThetaMorphism {
        let s = |k: usize| {
            ThetaMorphism::new(
                cell("[2]"),
                cell("[1]"),
                SimplicialMap::codegeneracy(1, k),
                (1..=2)
                    .flat_map(|i| {
                        SimplicialMap::codegeneracy(1, k)
                            .segments(i)
                            .map(move |j| ((i, j), ThetaMorphism::identity(&ThetaCell::point())))
                    })
                    .collect(),
            )
            .unwrap()
        };
        let mut comps = BTreeMap::new();
        comps.insert((1, 1), s(1));
        comps.insert((1, 2), s(0));
        ThetaMorphism::new(
            cell("[1]([2])"),
            cell("[2]([1],[1])"),
            SimplicialMap::coface(1, 1),
            comps,
        )
        .unwrap()
    }

    #[test]
    fn worked_example_objects() {
        let f = worked_example();
        assert_eq!(f.component(1, 1).base().image(), &[0, 1, 1]);
        assert_eq!(f.component(1, 2).base().image(), &[0, 0, 1]);
        let m = pr_morphism(&f, (0, 1)).unwrap();
        assert_eq!(m.object(&obj(0, &[0])), vec![obj(0, &[0, 0])]);
        assert_eq!(m.object(&obj(1, &[1])), vec![obj(2, &[1, 0])]);
        assert_eq!(m.object(&obj(0, &[1])), vec![obj(0, &[1, 0])]);
        assert_eq!(m.object(&obj(1, &[2])), vec![obj(2, &[1, 1])]);
    }

    #[test]
    fn worked_example_homs() {
        let m = pr_morphism(&worked_example(), (0, 1)).unwrap();
        let h = m.hom(&obj(0, &[0]), &obj(1, &[1]));
        assert_eq!(h.to_string(), "[0,1] -> [0,1] * [0,0] via ({0,1},{0,0})");
        let h = m.hom(&obj(0, &[1]), &obj(1, &[2]));
        assert_eq!(h.to_string(), "[1,2] -> [1,1] * [0,1] via ({1,1},{0,1})");
        let h = m.hom(&obj(0, &[0]), &obj(1, &[2]));
        assert_eq!(
            h.to_string(),
            "[0,2] -> [0,1] * [0,1] via ({0,1,1},{0,0,1})"
        );
        let h = m.hom(&obj(0, &[0]), &obj(0, &[1]));
        assert!(h.components.is_empty());
        assert_eq!(h.source, PRExpr::Point);
        assert_eq!(m.hom(&obj(1, &[0]), &obj(0, &[0])).source, PRExpr::Empty);
    }

    #[test]
    fn identity_is_identity() {
        let t = cell("[2]([1],[2])");
        let m = pr_morphism(&ThetaMorphism::identity(&t), (0, 2)).unwrap();
        for o in pr_objects(&m.source_cells()) {
            let parts = m.object(&o);
            assert_eq!(parts.len(), 2);
            let coords: Vec<usize> = parts.iter().flat_map(|p| p.coords.clone()).collect();
            assert_eq!(coords, o.coords);
        }
        let h = m.hom(&obj(0, &[0, 0]), &obj(2, &[1, 2]));
        assert!(h
            .components
            .iter()
            .all(|c| { c.vertices == (0..c.vertices.len()).collect::<Vec<_>>() }));
    }

    #[test]
    fn objects_agree_with_the_cylinder() {
        assert!(pr_nu_check(&worked_example()).unwrap());
        let mut seed = 7usize;
        let mut choose = |k: usize| {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (seed >> 33) % k
        };
        for (s, t) in [
            ("[2]([1],[0])", "[3]([2],[1],[1])"),
            ("[1]([3])", "[2]([2],[1])"),
        ] {
            for _ in 0..10 {
                let f = arbitrary_morphism(&cell(s), &cell(t), &mut choose);
                assert!(pr_nu_check(&f).unwrap(), "{f}");
            }
        }
    }

    #[test]
    fn tall_cells_are_rejected() {
        let t = cell("[1]([1]([1]))");
        assert!(pr_morphism(&ThetaMorphism::identity(&t), (0, 1)).is_err());
    }
}
