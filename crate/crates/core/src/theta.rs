//! Cells and morphisms of the category Θ.
//!
//! A cell is a finite planar rooted tree written `[n](T1,...,Tn)`. Morphisms
//! are wreath-product arrows: a monotone map of the roots together with one
//! component for every pair of segments `(i, j)` with `j ∈ F(base)(i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ThetaCell {
    children: Vec<ThetaCell>,
}

impl ThetaCell {
    /// The unique cell of width 0.
    pub fn point() -> Self {
        ThetaCell {
            children: Vec::new(),
        }
    }

    pub fn new(children: Vec<ThetaCell>) -> Self {
        ThetaCell { children }
    }

    /// The simplex `[n] = [n]([0],...,[0])`.
    pub fn simplex(n: usize) -> Self {
        ThetaCell::new(vec![ThetaCell::point(); n])
    }

    /// The globe `[1];[1];...;[1]` with `n` levels.
    pub fn globe(n: usize) -> Self {
        (0..n).fold(ThetaCell::point(), |c, _| c.suspend())
    }

    /// `[1];(self)`.
    pub fn suspend(self) -> Self {
        ThetaCell::new(vec![self])
    }

    pub fn width(&self) -> usize {
        self.children.len()
    }

    pub fn children(&self) -> &[ThetaCell] {
        &self.children
    }

    /// Child over segment `i`, 1-based.
    pub fn child(&self, i: usize) -> &ThetaCell {
        &self.children[i - 1]
    }

    pub fn is_point(&self) -> bool {
        self.children.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.children
            .iter()
            .map(|c| c.dimension() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(ThetaCell::node_count)
            .sum::<usize>()
    }

    pub fn is_globe(&self) -> bool {
        match self.children.as_slice() {
            [] => true,
            [c] => c.is_globe(),
            _ => false,
        }
    }

    /// Every child is a point.
    pub fn is_simplex(&self) -> bool {
        self.children.iter().all(ThetaCell::is_point)
    }

    /// Reverse the order of segments at every level.
    pub fn mirror(&self) -> ThetaCell {
        ThetaCell::new(self.children.iter().rev().map(ThetaCell::mirror).collect())
    }

    /// Copy of `self` with child `i` (1-based) replaced.
    pub fn with_child(&self, i: usize, child: ThetaCell) -> ThetaCell {
        let mut children = self.children.clone();
        children[i - 1] = child;
        ThetaCell::new(children)
    }

    /// Copy of `self` with `child` inserted so that it becomes segment `i`.
    pub fn with_inserted(&self, i: usize, child: ThetaCell) -> ThetaCell {
        let mut children = self.children.clone();
        children.insert(i - 1, child);
        ThetaCell::new(children)
    }

    /// Copy of `self` with segment `i` removed.
    pub fn without(&self, i: usize) -> ThetaCell {
        let mut children = self.children.clone();
        children.remove(i - 1);
        ThetaCell::new(children)
    }
}

impl fmt::Display for ThetaCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.width())?;
        if !self.is_simplex() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for ThetaCell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_cell(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", b as char))
        }
    }

    fn nat(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a natural number");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().or_else(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn cell(&mut self) -> Result<ThetaCell> {
        match self.peek() {
            Some(b'G') => {
                self.pos += 1;
                self.expect(b'<')?;
                let n = self.nat()?;
                self.expect(b'>')?;
                Ok(ThetaCell::globe(n))
            }
            Some(b'[') => {
                self.pos += 1;
                let n = self.nat()?;
                self.expect(b']')?;
                if self.peek() != Some(b'(') {
                    return Ok(ThetaCell::simplex(n));
                }
                let open = self.pos;
                self.pos += 1;
                let mut children = vec![self.cell()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    children.push(self.cell()?);
                }
                self.expect(b')')?;
                if children.len() != n {
                    self.pos = open;
                    return self.err(format!("width {n} but {} children given", children.len()));
                }
                Ok(ThetaCell::new(children))
            }
            _ => self.err("expected `[` or `G<`"),
        }
    }
}

/// Parse the textual form `[n](c1,...,cn)`, `[n]` or `G<n>`.
pub fn parse_cell(text: &str) -> Result<ThetaCell> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let cell = p.cell()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(cell)
}

/// All cells with at most `max_nodes` tree nodes, ordered by node count.
pub fn corpus(max_nodes: usize) -> Vec<ThetaCell> {
    // forests[k] = ordered forests with exactly k nodes
    let mut trees: Vec<Vec<ThetaCell>> = vec![Vec::new(); max_nodes + 1];
    let mut forests: Vec<Vec<Vec<ThetaCell>>> = vec![Vec::new(); max_nodes + 1];
    if max_nodes == 0 {
        return Vec::new();
    }
    forests[0].push(Vec::new());
    for k in 1..=max_nodes {
        trees[k] = forests[k - 1]
            .iter()
            .map(|f| ThetaCell::new(f.clone()))
            .collect();
        let mut fs = Vec::new();
        for first in 1..=k {
            for t in &trees[first] {
                for rest in &forests[k - first] {
                    let mut f = vec![t.clone()];
                    f.extend(rest.iter().cloned());
                    fs.push(f);
                }
            }
        }
        forests[k] = fs;
    }
    trees.into_iter().flatten().collect()
}

/// A monotone map `[n] → [m]` given by its list of vertex images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SimplicialMap {
    target: usize,
    image: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(target: usize, image: Vec<usize>) -> Result<Self> {
        if image.is_empty() {
            return Err(Error::InvalidMap("empty vertex list".into()));
        }
        if image.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMap(format!("{image:?} is not monotone")));
        }
        if image.iter().any(|&v| v > target) {
            return Err(Error::InvalidMap(format!("{image:?} leaves [0,{target}]")));
        }
        Ok(SimplicialMap { target, image })
    }

    pub fn identity(n: usize) -> Self {
        SimplicialMap {
            target: n,
            image: (0..=n).collect(),
        }
    }

    /// `d^k : [n] → [n+1]`, the injection missing `k`.
    pub fn coface(n: usize, k: usize) -> Self {
        assert!(k <= n + 1, "coface index out of range");
        SimplicialMap {
            target: n + 1,
            image: (0..=n).map(|i| if i < k { i } else { i + 1 }).collect(),
        }
    }

    /// `s^k : [n+1] → [n]`, the surjection hitting `k` twice.
    pub fn codegeneracy(n: usize, k: usize) -> Self {
        assert!(k <= n, "codegeneracy index out of range");
        SimplicialMap {
            target: n,
            image: (0..=n + 1)
                .map(|i| if i <= k { i } else { i - 1 })
                .collect(),
        }
    }

    pub fn constant(n: usize, m: usize, v: usize) -> Self {
        assert!(v <= m);
        SimplicialMap {
            target: m,
            image: vec![v; n + 1],
        }
    }

    pub fn source(&self) -> usize {
        self.image.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap> {
        if self.target != g.source() {
            return Err(Error::Mismatch(format!(
                "map into [{}] followed by map out of [{}]",
                self.target,
                g.source()
            )));
        }
        Ok(SimplicialMap {
            target: g.target,
            image: self.image.iter().map(|&v| g.image[v]).collect(),
        })
    }

    pub fn gamma_image(&self) -> GammaImage {
        GammaImage {
            sets: self.image.windows(2).map(|w| w[0] + 1..w[1] + 1).collect(),
        }
    }

    /// `F(self)(i)` for a 1-based segment `i`.
    pub fn segments(&self, i: usize) -> Range<usize> {
        self.image[i - 1] + 1..self.image[i] + 1
    }
}

impl fmt::Display for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The sets `F(f)(i) = { j | f(i-1) < j ≤ f(i) }`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaImage {
    sets: Vec<Range<usize>>,
}

impl GammaImage {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// The set for segment `i`, 1-based.
    pub fn get(&self, i: usize) -> Range<usize> {
        self.sets[i - 1].clone()
    }

    pub fn iter(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.sets.iter().cloned()
    }

    /// Γ-composition: `(σ∘φ)(i) = ⋃_{j ∈ φ(i)} σ(j)`.
    pub fn then(&self, next: &GammaImage) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|r| r.clone().flat_map(|j| next.get(j)).collect())
            .collect()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ThetaMorphism {
    source: ThetaCell,
    target: ThetaCell,
    base: SimplicialMap,
    components: BTreeMap<(usize, usize), ThetaMorphism>,
}

impl ThetaMorphism {
    pub fn new(
        source: ThetaCell,
        target: ThetaCell,
        base: SimplicialMap,
        components: BTreeMap<(usize, usize), ThetaMorphism>,
    ) -> Result<Self> {
        if base.source() != source.width() || base.target() != target.width() {
            return Err(Error::InvalidMorphism(format!(
                "base {base} does not go from [{}] to [{}]",
                source.width(),
                target.width()
            )));
        }
        let expected: Vec<(usize, usize)> = (1..=source.width())
            .flat_map(|i| base.segments(i).map(move |j| (i, j)))
            .collect();
        let present: Vec<(usize, usize)> = components.keys().copied().collect();
        if expected != present {
            return Err(Error::InvalidMorphism(format!(
                "components {present:?} but the base requires {expected:?}"
            )));
        }
        for (&(i, j), c) in &components {
            if c.source != *source.child(i) || c.target != *target.child(j) {
                return Err(Error::InvalidMorphism(format!(
                    "component ({i},{j}) goes {} -> {}, expected {} -> {}",
                    c.source,
                    c.target,
                    source.child(i),
                    target.child(j)
                )));
            }
        }
        Ok(ThetaMorphism {
            source,
            target,
            base,
            components,
        })
    }

    pub fn identity(t: &ThetaCell) -> Self {
        ThetaMorphism {
            source: t.clone(),
            target: t.clone(),
            base: SimplicialMap::identity(t.width()),
            components: (1..=t.width())
                .map(|i| ((i, i), ThetaMorphism::identity(t.child(i))))
                .collect(),
        }
    }

    /// The unique map `t → [0]`.
    pub fn to_point(t: &ThetaCell) -> Self {
        ThetaMorphism {
            source: t.clone(),
            target: ThetaCell::point(),
            base: SimplicialMap::constant(t.width(), 0, 0),
            components: BTreeMap::new(),
        }
    }

    /// The map `[0] → t` picking the object `v`.
    pub fn object(t: &ThetaCell, v: usize) -> Self {
        ThetaMorphism {
            source: ThetaCell::point(),
            target: t.clone(),
            base: SimplicialMap::constant(0, t.width(), v),
            components: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &ThetaCell {
        &self.source
    }

    pub fn target(&self) -> &ThetaCell {
        &self.target
    }

    pub fn base(&self) -> &SimplicialMap {
        &self.base
    }

    pub fn components(&self) -> &BTreeMap<(usize, usize), ThetaMorphism> {
        &self.components
    }

    pub fn component(&self, i: usize, j: usize) -> &ThetaMorphism {
        &self.components[&(i, j)]
    }

    /// `g ∘ self`: components are `g_{jk} ∘ self_{ij}` with `j` the unique
    /// segment in `F(self)(i)` whose image contains `k`.
    pub fn then(&self, g: &ThetaMorphism) -> Result<ThetaMorphism> {
        if self.target != g.source {
            return Err(Error::Mismatch(format!(
                "target {} is not the source {}",
                self.target, g.source
            )));
        }
        let base = self.base.then(&g.base)?;
        let mut components = BTreeMap::new();
        for (&(i, j), f) in &self.components {
            for k in g.base.segments(j) {
                components.insert((i, k), f.then(&g.components[&(j, k)])?);
            }
        }
        Ok(ThetaMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            base,
            components,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == ThetaMorphism::identity(&self.source)
    }
}

/// `g ∘ f`, read as "f then g".
pub fn compose(f: &ThetaMorphism, g: &ThetaMorphism) -> Result<ThetaMorphism> {
    f.then(g)
}

impl fmt::Display for ThetaMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if !self.components.is_empty() {
            write!(f, ";{{")?;
            for (n, ((i, j), c)) in self.components.iter().enumerate() {
                if n > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{i}>{j}: {c}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Build an arbitrary morphism `source → target`, drawing every choice from
/// `choose(k) ∈ 0..k`.
pub fn arbitrary_morphism(
    source: &ThetaCell,
    target: &ThetaCell,
    choose: &mut impl FnMut(usize) -> usize,
) -> ThetaMorphism {
    let m = target.width();
    let mut image: Vec<usize> = (0..=source.width()).map(|_| choose(m + 1)).collect();
    image.sort_unstable();
    let base = SimplicialMap::new(m, image).expect("sorted image");
    let mut components = BTreeMap::new();
    for i in 1..=source.width() {
        for j in base.segments(i) {
            components.insert(
                (i, j),
                arbitrary_morphism(source.child(i), target.child(j), choose),
            );
        }
    }
    ThetaMorphism {
        source: source.clone(),
        target: target.clone(),
        base,
        components,
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FaceKind {
    Vertical,
    Inner,
    Outer,
}

/// Which side of the split segment receives the new unit segment.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum InnerVariant {
    /// `(id, !)`: the unit segment comes after the original one.
    IdBang,
    /// `(!, id)`: the unit segment comes before the original one.
    BangId,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Hyperface {
    /// `id;(id, ν, id)` with `ν` a hyperface of the child at `segment`.
    Vertical {
        segment: usize,
        face: Box<Hyperface>,
        morphism: ThetaMorphism,
    },
    /// `d^0` or `d^n` into a cell whose first or last child is a point.
    Outer {
        vertex: usize,
        morphism: ThetaMorphism,
    },
    /// `d^k;(.., (id,!) or (!,id), ..)`.
    Inner {
        vertex: usize,
        variant: InnerVariant,
        morphism: ThetaMorphism,
    },
}

impl Hyperface {
    pub fn kind(&self) -> FaceKind {
        match self {
            Hyperface::Vertical { .. } => FaceKind::Vertical,
            Hyperface::Outer { .. } => FaceKind::Outer,
            Hyperface::Inner { .. } => FaceKind::Inner,
        }
    }

    /// Segment (vertical faces, 1-based) or skipped vertex (horizontal faces).
    pub fn position(&self) -> usize {
        match self {
            Hyperface::Vertical { segment, .. } => *segment,
            Hyperface::Outer { vertex, .. } | Hyperface::Inner { vertex, .. } => *vertex,
        }
    }

    pub fn morphism(&self) -> &ThetaMorphism {
        match self {
            Hyperface::Vertical { morphism, .. }
            | Hyperface::Outer { morphism, .. }
            | Hyperface::Inner { morphism, .. } => morphism,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Hyperface::Vertical { segment, face, .. } => {
                format!("vertical@{segment}[{}]", face.label())
            }
            Hyperface::Outer { vertex, .. } => format!("outer d{vertex}"),
            Hyperface::Inner {
                vertex, variant, ..
            } => match variant {
                InnerVariant::IdBang => format!("inner d{vertex}(id,!)"),
                InnerVariant::BangId => format!("inner d{vertex}(!,id)"),
            },
        }
    }
}

/// All hyperfaces whose target is `t`.
pub fn hyperfaces(t: &ThetaCell) -> Vec<Hyperface> {
    let n = t.width();
    let mut out = Vec::new();
    for k in 1..=n {
        for nu in hyperfaces(t.child(k)) {
            let source = t.with_child(k, nu.morphism().source().clone());
            let components = (1..=n)
                .map(|i| {
                    let c = if i == k {
                        nu.morphism().clone()
                    } else {
                        ThetaMorphism::identity(t.child(i))
                    };
                    ((i, i), c)
                })
                .collect();
            let morphism = ThetaMorphism {
                source,
                target: t.clone(),
                base: SimplicialMap::identity(n),
                components,
            };
            out.push(Hyperface::Vertical {
                segment: k,
                face: Box::new(nu),
                morphism,
            });
        }
    }
    if n == 0 {
        return out;
    }
    // horizontal faces skip the vertex `v` of the target
    let horizontal = |v: usize, removed: usize, split: Option<(InnerVariant, usize)>| {
        let source = t.without(removed);
        let base = SimplicialMap::coface(n - 1, v);
        let mut components = BTreeMap::new();
        for i in 1..n {
            let child = source.child(i);
            for j in base.segments(i) {
                let c = if t.child(j).is_point() && split.is_some_and(|(_, p)| p == j) {
                    ThetaMorphism::to_point(child)
                } else {
                    ThetaMorphism::identity(child)
                };
                components.insert((i, j), c);
            }
        }
        ThetaMorphism {
            source,
            target: t.clone(),
            base,
            components,
        }
    };
    if t.child(1).is_point() {
        out.push(Hyperface::Outer {
            vertex: 0,
            morphism: horizontal(0, 1, None),
        });
    }
    for k in 1..n {
        if t.child(k + 1).is_point() {
            out.push(Hyperface::Inner {
                vertex: k,
                variant: InnerVariant::IdBang,
                morphism: horizontal(k, k + 1, Some((InnerVariant::IdBang, k + 1))),
            });
        }
        if t.child(k).is_point() {
            out.push(Hyperface::Inner {
                vertex: k,
                variant: InnerVariant::BangId,
                morphism: horizontal(k, k, Some((InnerVariant::BangId, k))),
            });
        }
    }
    if t.child(n).is_point() {
        out.push(Hyperface::Outer {
            vertex: n,
            morphism: horizontal(n, n, None),
        });
    }
    out
}

/// Depths of leaves and of consecutive-leaf meets.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GlobularSum {
    pub leaf_dims: Vec<usize>,
    pub meet_dims: Vec<usize>,
}

pub fn globular_sum(t: &ThetaCell) -> GlobularSum {
    if t.is_point() {
        return GlobularSum {
            leaf_dims: vec![0],
            meet_dims: Vec::new(),
        };
    }
    let mut leaf_dims = Vec::new();
    let mut meet_dims = Vec::new();
    for (k, c) in t.children().iter().enumerate() {
        if k > 0 {
            meet_dims.push(0);
        }
        let g = globular_sum(c);
        leaf_dims.extend(g.leaf_dims.iter().map(|d| d + 1));
        meet_dims.extend(g.meet_dims.iter().map(|d| d + 1));
    }
    GlobularSum {
        leaf_dims,
        meet_dims,
    }
}

impl GlobularSum {
    pub fn reconstruct(&self) -> Result<ThetaCell> {
        let bad = || Error::Shape(format!("not a globular sum: {self}"));
        if self.leaf_dims.len() != self.meet_dims.len() + 1 {
            return Err(bad());
        }
        for (i, &m) in self.meet_dims.iter().enumerate() {
            if m > self.leaf_dims[i] || m > self.leaf_dims[i + 1] {
                return Err(bad());
            }
        }
        if self.leaf_dims == [0] {
            return Ok(ThetaCell::point());
        }
        if self.leaf_dims.contains(&0) {
            return Err(bad());
        }
        let mut children = Vec::new();
        let mut start = 0;
        for i in 0..=self.meet_dims.len() {
            if i == self.meet_dims.len() || self.meet_dims[i] == 0 {
                let part = GlobularSum {
                    leaf_dims: self.leaf_dims[start..=i].iter().map(|d| d - 1).collect(),
                    meet_dims: self.meet_dims[start..i].iter().map(|d| d - 1).collect(),
                };
                children.push(part.reconstruct()?);
                start = i + 1;
            }
        }
        Ok(ThetaCell::new(children))
    }
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .bytes()
        .map(|b| DIGITS[(b - b'0') as usize])
        .collect()
}

impl fmt::Display for GlobularSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.leaf_dims.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕{} ", subscript(self.meet_dims[i - 1]))?;
            }
            write!(f, "{n}")?;
        }
        Ok(())
    }
}

fn lift_into(t: &ThetaCell, k: usize, inner: ThetaMorphism) -> ThetaMorphism {
    let source = inner.source().clone().suspend();
    ThetaMorphism {
        source,
        target: t.clone(),
        base: SimplicialMap::new(t.width(), vec![k - 1, k]).expect("segment"),
        components: BTreeMap::from([((1, k), inner)]),
    }
}

/// The inclusions of the globes of the globular sum, left to right.
pub fn leaf_embeddings(t: &ThetaCell) -> Vec<ThetaMorphism> {
    if t.is_point() {
        return vec![ThetaMorphism::identity(t)];
    }
    let mut out = Vec::new();
    for k in 1..=t.width() {
        for e in leaf_embeddings(t.child(k)) {
            out.push(lift_into(t, k, e));
        }
    }
    out
}

/// The inclusions of the meet globes, one between each pair of consecutive
/// leaves.
pub fn meet_embeddings(t: &ThetaCell) -> Vec<ThetaMorphism> {
    let mut out = Vec::new();
    for k in 1..=t.width() {
        if k > 1 {
            out.push(ThetaMorphism::object(t, k - 1));
        }
        for e in meet_embeddings(t.child(k)) {
            out.push(lift_into(t, k, e));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(s: &str) -> ThetaCell {
        parse_cell(s).unwrap()
    }

    #[test]
    fn parses_sugar_and_nesting() {
        assert_eq!(cell("[0]"), ThetaCell::point());
        assert_eq!(cell("[3]"), cell("[3]([0],[0],[0])"));
        let t = cell(" [2] ( [1] , [0] ) ");
        assert_eq!(t.width(), 2);
        assert_eq!(*t.child(1), ThetaCell::simplex(1));
        assert!(t.child(2).is_point());
        assert_eq!(cell("G<2>"), cell("[1]([1])"));
        assert_eq!(t.to_string(), "[2]([1],[0])");
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_cell("[2]([0])") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_cell("[1]x"),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(parse_cell("").is_err());
        assert!(parse_cell("[a]").is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(cell("[0]").dimension(), 0);
        assert_eq!(ThetaCell::globe(2).dimension(), 2);
        assert_eq!(cell("[2]([1],[0])").dimension(), 2);
    }

    #[test]
    fn globular_sums() {
        for n in 0..5 {
            let g = globular_sum(&ThetaCell::globe(n));
            assert_eq!(g.leaf_dims, vec![n]);
            assert!(g.meet_dims.is_empty());
        }
        let g = globular_sum(&cell("[2]([1],[0])"));
        assert_eq!(
            (g.leaf_dims.clone(), g.meet_dims.clone()),
            (vec![2, 1], vec![0])
        );
        assert_eq!(g.to_string(), "2 ⊕₀ 1");
        let g = globular_sum(&cell("[1]([2]([0],[0]))"));
        assert_eq!((g.leaf_dims, g.meet_dims), (vec![2, 2], vec![1]));
    }

    #[test]
    fn gamma_images() {
        let id = SimplicialMap::identity(2).gamma_image();
        assert_eq!(id.get(1), 1..2);
        assert_eq!(id.get(2), 2..3);
        let d1 = SimplicialMap::coface(2, 1);
        assert_eq!(d1.image(), &[0, 2, 3]);
        assert_eq!(d1.gamma_image().get(1).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(d1.gamma_image().get(2).collect::<Vec<_>>(), vec![3]);
        let s0 = SimplicialMap::codegeneracy(0, 0);
        assert!(s0.gamma_image().get(1).is_empty());
    }

    #[test]
    fn corpus_sizes_follow_catalan() {
        let c = corpus(7);
        let mut by_nodes = [0usize; 8];
        for t in &c {
            by_nodes[t.node_count()] += 1;
        }
        assert_eq!(&by_nodes[1..], &[1, 1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn composition_with_identities() {
        let src = cell("[1]([2])");
        let tgt = cell("[2]([1],[1])");
        let f = ThetaMorphism::new(
            src.clone(),
            tgt.clone(),
            SimplicialMap::coface(1, 1),
            BTreeMap::from([
                (
                    (1, 1),
                    ThetaMorphism::new(
                        ThetaCell::simplex(2),
                        ThetaCell::simplex(1),
                        SimplicialMap::codegeneracy(1, 1),
                        BTreeMap::from([((1, 1), ThetaMorphism::identity(&ThetaCell::point()))]),
                    )
                    .unwrap(),
                ),
                (
                    (1, 2),
                    ThetaMorphism::new(
                        ThetaCell::simplex(2),
                        ThetaCell::simplex(1),
                        SimplicialMap::codegeneracy(1, 0),
                        BTreeMap::from([((2, 1), ThetaMorphism::identity(&ThetaCell::point()))]),
                    )
                    .unwrap(),
                ),
            ]),
        )
        .unwrap();
        assert_eq!(ThetaMorphism::identity(&src).then(&f).unwrap(), f);
        assert_eq!(f.then(&ThetaMorphism::identity(&tgt)).unwrap(), f);
    }

    #[test]
    fn constructor_rejects_missing_components() {
        let r = ThetaMorphism::new(
            ThetaCell::simplex(1),
            ThetaCell::simplex(1),
            SimplicialMap::identity(1),
            BTreeMap::new(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn hyperface_enumeration() {
        let faces = hyperfaces(&cell("[1]"));
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.kind() == FaceKind::Outer));
        assert!(faces.iter().all(|f| f.morphism().source().is_point()));

        let faces = hyperfaces(&cell("[2]"));
        let inner = faces.iter().filter(|f| f.kind() == FaceKind::Inner).count();
        let outer = faces.iter().filter(|f| f.kind() == FaceKind::Outer).count();
        assert_eq!((inner, outer), (2, 2));
        assert!(faces.iter().all(|f| f.position() <= 2));

        let faces = hyperfaces(&cell("[1]([1])"));
        assert_eq!(faces.len(), 2);
        assert!(faces.iter().all(|f| f.kind() == FaceKind::Vertical));

        let t = cell("[2]([1],[0])");
        let faces = hyperfaces(&t);
        let inner: Vec<_> = faces
            .iter()
            .filter(|f| f.kind() == FaceKind::Inner)
            .collect();
        assert_eq!(inner.len(), 1);
        assert_eq!(*inner[0].morphism().source(), cell("[1]([1])"));
        for f in &faces {
            assert_eq!(*f.morphism().target(), t);
        }
    }

    #[test]
    fn embeddings_land_in_the_cell() {
        let t = cell("[2]([1]([2]),[0])");
        let leaves = leaf_embeddings(&t);
        let meets = meet_embeddings(&t);
        let g = globular_sum(&t);
        assert_eq!(leaves.len(), g.leaf_dims.len());
        assert_eq!(meets.len(), g.meet_dims.len());
        for (e, d) in leaves.iter().zip(&g.leaf_dims) {
            assert_eq!(*e.source(), ThetaCell::globe(*d));
            assert_eq!(*e.target(), t);
        }
        for (e, d) in meets.iter().zip(&g.meet_dims) {
            assert_eq!(*e.source(), ThetaCell::globe(*d));
        }
    }

    #[test]
    fn mirror_reverses_segments() {
        let t = cell("[2]([1],[0])");
        assert_eq!(t.mirror(), cell("[2]([0],[1])"));
        assert_eq!(t.mirror().mirror(), t);
    }
}
