//! Cells of `ν(K)` as tables, their enumeration, and finite ω-category views.
//!
//! Composition `compose(j, a, b)` reads left to right: the `j`-target of `a`
//! must equal the `j`-source of `b`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::dac::{atom, is_valid_table, Chain, DAComplex, DAMorphism};
use crate::error::{Error, Result};

pub const DEFAULT_CEILING: usize = 1_000_000;

/// A table `((x_0^0, x_0^1), ..., (x_i^0, x_i^1))` with equal top entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NuCell {
    rows: Vec<(Chain, Chain)>,
}

impl NuCell {
    /// Checked constructor.
    pub fn new(k: &DAComplex, rows: Vec<(Chain, Chain)>) -> Result<Self> {
        if !is_valid_table(k, &rows)? {
            return Err(Error::InvalidTable(format!("{rows:?}")));
        }
        Ok(NuCell { rows })
    }

    pub fn from_rows_unchecked(rows: Vec<(Chain, Chain)>) -> Self {
        NuCell { rows }
    }

    /// The table of a generator. Errors if the atom is not a valid table.
    pub fn atom(k: &DAComplex, deg: usize, g: u32) -> Result<Self> {
        let a = atom(k, deg, g)?;
        if !a.valid {
            return Err(Error::InvalidTable(format!(
                "atom of {} is not a cell",
                k.name(deg, g)
            )));
        }
        Ok(NuCell { rows: a.rows })
    }

    pub fn dimension(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[(Chain, Chain)] {
        &self.rows
    }

    pub fn top(&self) -> &Chain {
        &self.rows[self.rows.len() - 1].0
    }

    /// Identities have a zero top entry; 0-cells are never degenerate.
    pub fn is_degenerate(&self) -> bool {
        self.dimension() > 0 && self.top().is_zero()
    }

    /// `s_j` (`eps = 0`) or `t_j` (`eps = 1`), for `j < dimension`.
    pub fn face(&self, j: usize, eps: usize) -> NuCell {
        let mut rows: Vec<(Chain, Chain)> = self.rows[..j].to_vec();
        let x = if eps == 0 {
            self.rows[j].0.clone()
        } else {
            self.rows[j].1.clone()
        };
        rows.push((x.clone(), x));
        NuCell { rows }
    }

    pub fn source_at(&self, j: usize) -> NuCell {
        self.face(j, 0)
    }

    pub fn target_at(&self, j: usize) -> NuCell {
        self.face(j, 1)
    }

    /// `(s, t)` one dimension down.
    pub fn boundary(&self) -> Result<(NuCell, NuCell)> {
        let i = self.dimension();
        if i == 0 {
            return Err(Error::Shape("a 0-cell has no boundary".into()));
        }
        Ok((self.face(i - 1, 0), self.face(i - 1, 1)))
    }

    pub fn identity(&self) -> NuCell {
        let mut rows = self.rows.clone();
        rows.push((Chain::zero(), Chain::zero()));
        NuCell { rows }
    }

    /// `a ⋆_j b`, defined when `t_j(a) = s_j(b)`.
    pub fn compose(j: usize, a: &NuCell, b: &NuCell) -> Result<NuCell> {
        let i = a.dimension();
        if b.dimension() != i || j >= i || !composable(j, a, b) {
            return Err(Error::NotComposable(j));
        }
        let mut rows = a.rows[..j].to_vec();
        rows.push((a.rows[j].0.clone(), b.rows[j].1.clone()));
        for k in j + 1..=i {
            rows.push((
                a.rows[k].0.add(&b.rows[k].0)?,
                a.rows[k].1.add(&b.rows[k].1)?,
            ));
        }
        Ok(NuCell { rows })
    }

    /// Apply a chain map to every entry.
    pub fn map(&self, f: &DAMorphism) -> Result<NuCell> {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(deg, (a, b))| Ok((f.apply(deg, a)?, f.apply(deg, b)?)))
            .collect::<Result<_>>()?;
        Ok(NuCell { rows })
    }

    pub fn to_json(&self, k: &DAComplex) -> Value {
        let entry = |deg: usize, x: &Chain| {
            let mut m = Map::new();
            for &(g, c) in x.terms() {
                m.insert(k.name(deg, g).to_string(), json!(c));
            }
            Value::Object(m)
        };
        Value::Array(
            self.rows
                .iter()
                .enumerate()
                .map(|(deg, (a, b))| json!([entry(deg, a), entry(deg, b)]))
                .collect(),
        )
    }

    /// One-line text form, rows separated by `|`.
    pub fn display(&self, k: &DAComplex) -> String {
        let mut s = String::new();
        for (deg, (a, b)) in self.rows.iter().enumerate() {
            if deg > 0 {
                s.push_str(" | ");
            }
            if a == b {
                s.push_str(&k.display(deg, a));
            } else {
                let _ = write!(s, "{} ; {}", k.display(deg, a), k.display(deg, b));
            }
        }
        s
    }
}

fn composable(j: usize, a: &NuCell, b: &NuCell) -> bool {
    a.rows[..j] == b.rows[..j] && a.rows[j].1 == b.rows[j].0
}

/// The cells of `ν(K)` up to some dimension.
#[derive(Clone, Debug)]
pub struct NuCells {
    complex: Arc<DAComplex>,
    cells: Vec<Vec<NuCell>>,
    index: Vec<HashMap<NuCell, u32>>,
}

impl NuCells {
    pub fn complex(&self) -> &Arc<DAComplex> {
        &self.complex
    }

    pub fn max_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, d: usize) -> &[NuCell] {
        &self.cells[d]
    }

    pub fn count(&self, d: usize) -> usize {
        self.cells[d].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        self.cells
            .iter()
            .map(|cs| cs.iter().filter(|c| !c.is_degenerate()).count())
            .collect()
    }

    pub fn id_of(&self, c: &NuCell) -> Option<u32> {
        self.index.get(c.dimension())?.get(c).copied()
    }

    pub fn contains(&self, c: &NuCell) -> bool {
        self.id_of(c).is_some()
    }
}

/// Enumerate by closure: identities and atoms, then all composites.
pub fn enumerate_cells(k: &Arc<DAComplex>, max_dim: usize, ceiling: usize) -> Result<NuCells> {
    let mut out = NuCells {
        complex: k.clone(),
        cells: Vec::new(),
        index: Vec::new(),
    };
    let mut total = 0usize;
    for d in 0..=max_dim {
        let mut cells: Vec<NuCell> = Vec::new();
        let mut index: HashMap<NuCell, u32> = HashMap::new();
        let mut queue: VecDeque<u32> = VecDeque::new();
        // by_face[j][eps]: j-cell id → d-cells with that j-source / j-target
        let mut by_face: Vec<[HashMap<u32, Vec<u32>>; 2]> =
            (0..d).map(|_| [HashMap::new(), HashMap::new()]).collect();

        let mut add = |c: NuCell,
                       cells: &mut Vec<NuCell>,
                       index: &mut HashMap<NuCell, u32>,
                       queue: &mut VecDeque<u32>,
                       by_face: &mut Vec<[HashMap<u32, Vec<u32>>; 2]>,
                       lower: &NuCells|
         -> Result<()> {
            if index.contains_key(&c) {
                return Ok(());
            }
            total += 1;
            if total > ceiling {
                return Err(Error::Ceiling(ceiling));
            }
            let id = cells.len() as u32;
            for (j, faces) in by_face.iter_mut().enumerate() {
                for (eps, map) in faces.iter_mut().enumerate() {
                    let f = c.face(j, eps);
                    let fid = lower.id_of(&f).ok_or_else(|| {
                        Error::InvalidTable(format!(
                            "boundary {} is not an enumerated cell",
                            f.display(&lower.complex)
                        ))
                    })?;
                    map.entry(fid).or_default().push(id);
                }
            }
            index.insert(c.clone(), id);
            cells.push(c);
            queue.push_back(id);
            Ok(())
        };

        if d == 0 {
            for g in 0..k.rank(0) as u32 {
                if let Ok(c) = NuCell::atom(k, 0, g) {
                    add(c, &mut cells, &mut index, &mut queue, &mut by_face, &out)?;
                }
            }
        } else {
            for c in out.cells[d - 1].clone() {
                add(
                    c.identity(),
                    &mut cells,
                    &mut index,
                    &mut queue,
                    &mut by_face,
                    &out,
                )?;
            }
            for g in 0..k.rank(d) as u32 {
                add(
                    NuCell::atom(k, d, g)?,
                    &mut cells,
                    &mut index,
                    &mut queue,
                    &mut by_face,
                    &out,
                )?;
            }
        }
        while let Some(id) = queue.pop_front() {
            for j in 0..d {
                let c = cells[id as usize].clone();
                let t = out.id_of(&c.target_at(j)).expect("registered face");
                let s = out.id_of(&c.source_at(j)).expect("registered face");
                let after: Vec<u32> = by_face[j][0].get(&t).cloned().unwrap_or_default();
                let before: Vec<u32> = by_face[j][1].get(&s).cloned().unwrap_or_default();
                for b in after {
                    let x = NuCell::compose(j, &c, &cells[b as usize])?;
                    add(x, &mut cells, &mut index, &mut queue, &mut by_face, &out)?;
                }
                for a in before {
                    let x = NuCell::compose(j, &cells[a as usize], &c)?;
                    add(x, &mut cells, &mut index, &mut queue, &mut by_face, &out)?;
                }
            }
        }
        let mut order: Vec<NuCell> = cells;
        order.sort();
        let index = order
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u32))
            .collect();
        out.cells.push(order);
        out.index.push(index);
    }
    Ok(out)
}

/// Every valid table whose entries have coefficients at most `bound`, built
/// dimension by dimension from parallel pairs. Only meant as an oracle.
pub fn table_search(k: &DAComplex, max_dim: usize, bound: i64) -> Result<Vec<Vec<NuCell>>> {
    // all chains of degree `deg` with coefficients in 0..=bound, grouped by
    // their boundary
    let chains = |deg: usize| -> Vec<Chain> {
        let n = k.rank(deg);
        let mut out = Vec::new();
        let mut digits = vec![0i64; n];
        loop {
            out.push(
                Chain::from_terms(
                    digits
                        .iter()
                        .enumerate()
                        .filter(|&(_, &c)| c != 0)
                        .map(|(g, &c)| (g as u32, c)),
                )
                .expect("small"),
            );
            let mut p = 0;
            while p < n && digits[p] == bound {
                digits[p] = 0;
                p += 1;
            }
            if p == n {
                break;
            }
            digits[p] += 1;
        }
        out
    };
    let mut result: Vec<Vec<NuCell>> = Vec::new();
    let zero_cells: Vec<NuCell> = chains(0)
        .into_iter()
        .filter(|x| k.augment(x).ok() == Some(1))
        .map(|x| NuCell::from_rows_unchecked(vec![(x.clone(), x)]))
        .collect();
    result.push(zero_cells);
    for d in 1..=max_dim {
        let mut by_boundary: HashMap<Chain, Vec<Chain>> = HashMap::new();
        if d <= k.top_degree() {
            for x in chains(d) {
                by_boundary.entry(k.apply_d(d, &x)?).or_default().push(x);
            }
        } else {
            by_boundary.insert(Chain::zero(), vec![Chain::zero()]);
        }
        // group (d-1)-cells by their rows below the top
        let mut parallel: HashMap<&[(Chain, Chain)], Vec<&NuCell>> = HashMap::new();
        for c in &result[d - 1] {
            parallel.entry(&c.rows[..d - 1]).or_default().push(c);
        }
        let mut cells = Vec::new();
        for group in parallel.values() {
            for a in group {
                for b in group {
                    let diff = b.top().sub(a.top())?;
                    if let Some(xs) = by_boundary.get(&diff) {
                        for x in xs {
                            let mut rows = a.rows[..d - 1].to_vec();
                            rows.push((a.top().clone(), b.top().clone()));
                            rows.push((x.clone(), x.clone()));
                            cells.push(NuCell::from_rows_unchecked(rows));
                        }
                    }
                }
            }
        }
        cells.sort();
        result.push(cells);
    }
    Ok(result)
}

/// A cell of a view: a table, or a tuple of cells of the factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ViewCell {
    Table(NuCell),
    Tuple(Vec<ViewCell>),
}

impl ViewCell {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            ViewCell::Table(c) => Some(c.dimension()),
            ViewCell::Tuple(xs) => xs.first().and_then(ViewCell::dimension),
        }
    }

    pub fn face(&self, j: usize, eps: usize) -> ViewCell {
        match self {
            ViewCell::Table(c) => ViewCell::Table(c.face(j, eps)),
            ViewCell::Tuple(xs) => ViewCell::Tuple(xs.iter().map(|x| x.face(j, eps)).collect()),
        }
    }

    pub fn identity(&self) -> ViewCell {
        match self {
            ViewCell::Table(c) => ViewCell::Table(c.identity()),
            ViewCell::Tuple(xs) => ViewCell::Tuple(xs.iter().map(ViewCell::identity).collect()),
        }
    }

    pub fn compose(j: usize, a: &ViewCell, b: &ViewCell) -> Result<ViewCell> {
        match (a, b) {
            (ViewCell::Table(x), ViewCell::Table(y)) => {
                Ok(ViewCell::Table(NuCell::compose(j, x, y)?))
            }
            (ViewCell::Tuple(xs), ViewCell::Tuple(ys)) if xs.len() == ys.len() => {
                Ok(ViewCell::Tuple(
                    xs.iter()
                        .zip(ys)
                        .map(|(x, y)| ViewCell::compose(j, x, y))
                        .collect::<Result<_>>()?,
                ))
            }
            _ => Err(Error::Shape("composing cells of different views".into())),
        }
    }

    pub fn is_degenerate(&self) -> bool {
        match self {
            ViewCell::Table(c) => c.is_degenerate(),
            ViewCell::Tuple(xs) => xs.iter().all(ViewCell::is_degenerate) && !xs.is_empty(),
        }
    }

    pub fn as_table(&self) -> Option<&NuCell> {
        match self {
            ViewCell::Table(c) => Some(c),
            ViewCell::Tuple(_) => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Realization {
    /// `ν(K)` for a complex.
    Nu,
    /// A Θ-cell `T`, realized as `ν(λ(T))`.
    Theta(String),
    Product,
}

/// A finite strict ω-category, enumerated up to a dimension.
#[derive(Clone, Debug)]
pub struct OmegaCatView {
    pub realization: Realization,
    complex: Option<Arc<DAComplex>>,
    cells: Vec<Vec<ViewCell>>,
    index: Vec<HashMap<ViewCell, u32>>,
}

impl OmegaCatView {
    pub fn from_nu(cells: &NuCells, realization: Realization) -> Self {
        let cells: Vec<Vec<ViewCell>> = (0..=cells.max_dim())
            .map(|d| {
                cells
                    .cells(d)
                    .iter()
                    .cloned()
                    .map(ViewCell::Table)
                    .collect()
            })
            .collect();
        let mut v = OmegaCatView {
            realization,
            complex: None,
            index: Vec::new(),
            cells,
        };
        v.reindex();
        v
    }

    fn reindex(&mut self) {
        self.index = self
            .cells
            .iter()
            .map(|cs| {
                cs.iter()
                    .enumerate()
                    .map(|(i, c)| (c.clone(), i as u32))
                    .collect()
            })
            .collect();
    }

    pub fn with_complex(mut self, k: Arc<DAComplex>) -> Self {
        self.complex = Some(k);
        self
    }

    /// The complex whose tables these are, for views of `ν(K)`.
    pub fn complex(&self) -> Option<&Arc<DAComplex>> {
        self.complex.as_ref()
    }

    pub fn max_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn cells(&self, d: usize) -> &[ViewCell] {
        &self.cells[d]
    }

    pub fn count(&self, d: usize) -> usize {
        self.cells[d].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn id_of(&self, c: &ViewCell) -> Option<u32> {
        let d = c.dimension().unwrap_or(0);
        self.index.get(d)?.get(c).copied()
    }

    pub fn boundary(&self, c: &ViewCell) -> Result<(ViewCell, ViewCell)> {
        match c.dimension() {
            Some(0) | None => Err(Error::Shape("no boundary in dimension 0".into())),
            Some(i) => Ok((c.face(i - 1, 0), c.face(i - 1, 1))),
        }
    }

    pub fn identity(&self, c: &ViewCell) -> ViewCell {
        c.identity()
    }

    pub fn compose(&self, j: usize, a: &ViewCell, b: &ViewCell) -> Result<ViewCell> {
        ViewCell::compose(j, a, b)
    }

    /// Check globularity on every cell.
    pub fn check_globular(&self) -> bool {
        for cs in self.cells.iter().skip(2) {
            for c in cs {
                let i = c.dimension().unwrap_or(0);
                let (s, t) = (c.face(i - 1, 0), c.face(i - 1, 1));
                let ss = s.face(i - 2, 0);
                if ss != t.face(i - 2, 0) || s.face(i - 2, 1) != t.face(i - 2, 1) {
                    return false;
                }
            }
        }
        true
    }
}

/// `ν(K)` as a view.
pub fn nu_view(k: &Arc<DAComplex>, max_dim: usize, ceiling: usize) -> Result<OmegaCatView> {
    let cells = enumerate_cells(k, max_dim, ceiling)?;
    Ok(OmegaCatView::from_nu(&cells, Realization::Nu).with_complex(k.clone()))
}

/// The cartesian product; cells are tuples and everything is componentwise.
pub fn product_view(xs: &[&OmegaCatView]) -> OmegaCatView {
    let max_dim = xs.iter().map(|x| x.max_dim()).min().unwrap_or(0);
    let cells = (0..=max_dim)
        .map(|d| {
            let mut acc: Vec<Vec<ViewCell>> = vec![Vec::new()];
            for x in xs {
                let mut next = Vec::with_capacity(acc.len() * x.count(d));
                for prefix in &acc {
                    for c in x.cells(d) {
                        let mut t = prefix.clone();
                        t.push(c.clone());
                        next.push(t);
                    }
                }
                acc = next;
            }
            acc.into_iter().map(ViewCell::Tuple).collect()
        })
        .collect();
    let mut v = OmegaCatView {
        realization: Realization::Product,
        complex: None,
        cells,
        index: Vec::new(),
    };
    v.reindex();
    v
}

/// A cell map between two views, stored as indices per dimension.
#[derive(Clone, Debug)]
pub struct OmegaFunctor {
    source: Arc<OmegaCatView>,
    target: Arc<OmegaCatView>,
    map: Vec<Vec<u32>>,
}

impl OmegaFunctor {
    /// Tabulate `f` on every cell of the source.
    pub fn from_fn(
        source: &Arc<OmegaCatView>,
        target: &Arc<OmegaCatView>,
        f: impl Fn(&ViewCell) -> Result<ViewCell>,
    ) -> Result<Self> {
        let dims = source.max_dim().min(target.max_dim());
        let mut map = Vec::with_capacity(dims + 1);
        for d in 0..=dims {
            let mut row = Vec::with_capacity(source.count(d));
            for c in source.cells(d) {
                let img = f(c)?;
                let id = target.id_of(&img).ok_or_else(|| {
                    Error::InvalidTable(format!("image of cell {c:?} is not a cell of the target"))
                })?;
                row.push(id);
            }
            map.push(row);
        }
        Ok(OmegaFunctor {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn identity(v: &Arc<OmegaCatView>) -> Self {
        OmegaFunctor {
            source: v.clone(),
            target: v.clone(),
            map: (0..=v.max_dim())
                .map(|d| (0..v.count(d) as u32).collect())
                .collect(),
        }
    }

    pub fn source(&self) -> &Arc<OmegaCatView> {
        &self.source
    }

    pub fn target(&self) -> &Arc<OmegaCatView> {
        &self.target
    }

    pub fn max_dim(&self) -> usize {
        self.map.len() - 1
    }

    pub fn apply(&self, c: &ViewCell) -> Option<&ViewCell> {
        let d = c.dimension()?;
        let id = self.source.id_of(c)?;
        let t = *self.map.get(d)?.get(id as usize)?;
        Some(&self.target.cells(d)[t as usize])
    }

    pub fn image_id(&self, d: usize, id: u32) -> u32 {
        self.map[d][id as usize]
    }

    /// Replace the image of one cell. Used to build corrupted maps in tests.
    pub fn set_image(&mut self, d: usize, id: u32, image: u32) {
        self.map[d][id as usize] = image;
    }

    /// Images of the cells of dimension `d`.
    pub fn images(&self, d: usize) -> impl Iterator<Item = &ViewCell> + '_ {
        self.map[d]
            .iter()
            .map(move |&t| &self.target.cells(d)[t as usize])
    }

    pub fn then(&self, g: &OmegaFunctor) -> Result<OmegaFunctor> {
        let dims = self.max_dim().min(g.max_dim());
        let mut map = Vec::new();
        for d in 0..=dims {
            map.push(self.map[d].iter().map(|&t| g.map[d][t as usize]).collect());
        }
        Ok(OmegaFunctor {
            source: self.source.clone(),
            target: g.target.clone(),
            map,
        })
    }

    /// Equal cell maps, compared by image cells.
    pub fn same_as(&self, other: &OmegaFunctor) -> bool {
        let dims = self.max_dim().min(other.max_dim());
        (0..=dims).all(|d| {
            self.source.count(d) == other.source.count(d) && self.images(d).eq(other.images(d))
        })
    }
}

/// `ν(a)`: apply the chain map to every table entry.
pub fn nu_functor(
    a: &DAMorphism,
    source: &Arc<OmegaCatView>,
    target: &Arc<OmegaCatView>,
) -> Result<OmegaFunctor> {
    OmegaFunctor::from_fn(source, target, |c| match c {
        ViewCell::Table(t) => Ok(ViewCell::Table(t.map(a)?)),
        ViewCell::Tuple(_) => Err(Error::Shape("ν applies to tables only".into())),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorReport {
    pub checked_cells: usize,
    pub checked_compositions: usize,
    pub violations: Vec<String>,
}

impl FunctorReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check preservation of boundaries, identities and every defined composite
/// up to `max_dim`.
pub fn check_functor(f: &OmegaFunctor, max_dim: usize) -> FunctorReport {
    let mut report = FunctorReport::default();
    let dims = max_dim.min(f.max_dim());
    let src = f.source();
    let img = |c: &ViewCell| f.apply(c).cloned();
    for d in 0..=dims {
        for c in src.cells(d) {
            report.checked_cells += 1;
            let Some(fc) = img(c) else {
                report.violations.push(format!("cell {c:?} has no image"));
                continue;
            };
            if d > 0 {
                for eps in 0..2 {
                    let face = c.face(d - 1, eps);
                    if img(&face).as_ref() != Some(&fc.face(d - 1, eps)) {
                        report.violations.push(format!(
                            "dimension {d}: {} not preserved for {c:?}",
                            if eps == 0 { "source" } else { "target" }
                        ));
                    }
                }
            }
            if d < dims && img(&c.identity()).as_ref() != Some(&fc.identity()) {
                report
                    .violations
                    .push(format!("dimension {d}: identity not preserved for {c:?}"));
            }
        }
        // composites along every j < d
        for j in 0..d {
            let mut by_source: HashMap<ViewCell, Vec<&ViewCell>> = HashMap::new();
            for c in src.cells(d) {
                by_source.entry(c.face(j, 0)).or_default().push(c);
            }
            for a in src.cells(d) {
                let Some(bs) = by_source.get(&a.face(j, 1)) else {
                    continue;
                };
                for b in bs {
                    let Ok(ab) = ViewCell::compose(j, a, b) else {
                        continue;
                    };
                    report.checked_compositions += 1;
                    let lhs = img(&ab);
                    let rhs = match (img(a), img(b)) {
                        (Some(x), Some(y)) => ViewCell::compose(j, &x, &y).ok(),
                        _ => None,
                    };
                    if lhs.is_none() || lhs != rhs {
                        report
                            .violations
                            .push(format!("dimension {d}: composite along {j} not preserved"));
                    }
                }
            }
        }
    }
    report
}

/// DOT of the low skeleton: 0-cells as nodes, 1-atoms as edges, 2-atoms as
/// boxes attached to their source and target paths.
pub fn emit_dot(k: &DAComplex, name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{name}\" {{");
    let _ = writeln!(s, "  rankdir=LR;");
    for g in 0..k.rank(0) as u32 {
        let _ = writeln!(s, "  \"{}\";", k.name(0, g));
    }
    if k.top_degree() >= 1 {
        for g in 0..k.rank(1) as u32 {
            let d = k.d(1, g);
            for a in d.minus().support() {
                for b in d.plus().support() {
                    let _ = writeln!(
                        s,
                        "  \"{}\" -> \"{}\" [label=\"{}\"];",
                        k.name(0, a),
                        k.name(0, b),
                        k.name(1, g)
                    );
                }
            }
        }
    }
    if k.top_degree() >= 2 {
        for g in 0..k.rank(2) as u32 {
            let node = format!("2:{}", k.name(2, g));
            let _ = writeln!(
                s,
                "  \"{node}\" [shape=box, style=dashed, label=\"{}\"];",
                k.name(2, g)
            );
            let d = k.d(2, g);
            for a in d.minus().support() {
                let _ = writeln!(
                    s,
                    "  \"{node}\" -> \"{}\" [style=dotted, label=\"src\"];",
                    k.name(1, a).replace('"', "'")
                );
            }
            for b in d.plus().support() {
                let _ = writeln!(
                    s,
                    "  \"{node}\" -> \"{}\" [style=dotted, label=\"tgt\"];",
                    k.name(1, b).replace('"', "'")
                );
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dac::{interval, lambda, lambda_globe, tensor};
    use crate::theta::{parse_cell, ThetaCell};

    fn arc(k: DAComplex) -> Arc<DAComplex> {
        Arc::new(k)
    }

    #[test]
    fn globe_counts() {
        for n in 0..=5 {
            let k = arc(lambda_globe(n));
            let cells = enumerate_cells(&k, n, DEFAULT_CEILING).unwrap();
            let mut expected = vec![2; n];
            expected.push(1);
            assert_eq!(cells.nondegenerate_counts(), expected, "globe {n}");
        }
    }

    #[test]
    fn square_counts() {
        let k = arc(tensor(&interval(), &interval()));
        let cells = enumerate_cells(&k, 2, DEFAULT_CEILING).unwrap();
        assert_eq!(cells.nondegenerate_counts(), vec![4, 6, 1]);
        assert_eq!(cells.counts()[..2], [4, 10]);
    }

    #[test]
    fn boundaries_and_identities() {
        let k = lambda_globe(1);
        let v = NuCell::atom(&k, 1, 0).unwrap();
        let (s, t) = v.boundary().unwrap();
        assert_eq!(s, NuCell::atom(&k, 0, 0).unwrap());
        assert_eq!(t, NuCell::atom(&k, 0, 1).unwrap());
        let i = s.identity();
        assert_eq!(i.boundary().unwrap(), (s.clone(), s.clone()));
        assert_eq!(i.identity().dimension(), 2);
        assert!(NuCell::atom(&k, 0, 0).unwrap().boundary().is_err());
    }

    #[test]
    fn square_atom_boundary() {
        let k = tensor(&interval(), &interval());
        let (deg, g) = k.lookup("h⊗h").unwrap();
        let a = NuCell::atom(&k, deg, g).unwrap();
        let (s, t) = a.boundary().unwrap();
        assert_eq!(k.display(1, s.top()), "l⊗h + h⊗r");
        assert_eq!(k.display(1, t.top()), "r⊗h + h⊗l");
        let lh = NuCell::atom(&k, 1, k.lookup("l⊗h").unwrap().1).unwrap();
        let hr = NuCell::atom(&k, 1, k.lookup("h⊗r").unwrap().1).unwrap();
        let c = NuCell::compose(0, &lh, &hr).unwrap();
        assert_eq!(c, s);
        assert!(NuCell::compose(0, &hr, &lh).is_err());
    }

    #[test]
    fn composition_is_associative_on_a_path() {
        let k = lambda(&ThetaCell::simplex(3));
        let edges: Vec<NuCell> = (0..3).map(|g| NuCell::atom(&k, 1, g).unwrap()).collect();
        let ab = NuCell::compose(0, &edges[0], &edges[1]).unwrap();
        let bc = NuCell::compose(0, &edges[1], &edges[2]).unwrap();
        assert_eq!(
            NuCell::compose(0, &ab, &edges[2]).unwrap(),
            NuCell::compose(0, &edges[0], &bc).unwrap()
        );
        let id = edges[0].source_at(0).identity();
        assert_eq!(NuCell::compose(0, &id, &edges[0]).unwrap(), edges[0]);
    }

    #[test]
    fn point_has_only_identities() {
        let k = arc(lambda_globe(0));
        let cells = enumerate_cells(&k, 3, DEFAULT_CEILING).unwrap();
        assert_eq!(cells.counts(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn closure_matches_table_search() {
        let k = arc(tensor(&interval(), &interval()));
        let closure = enumerate_cells(&k, 3, DEFAULT_CEILING).unwrap();
        let search = table_search(&k, 3, 3).unwrap();
        for (d, found) in search.iter().enumerate() {
            assert_eq!(closure.cells(d), found.as_slice(), "dimension {d}");
        }
    }

    #[test]
    fn enumeration_is_closed() {
        let k = arc(tensor(&interval(), &lambda(&parse_cell("[2]").unwrap())));
        let cells = enumerate_cells(&k, 3, DEFAULT_CEILING).unwrap();
        for d in 1..=3 {
            for a in cells.cells(d) {
                for b in cells.cells(d) {
                    for j in 0..d {
                        if let Ok(c) = NuCell::compose(j, a, b) {
                            assert!(cells.contains(&c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ceiling_is_enforced() {
        let k = arc(tensor(&interval(), &interval()));
        assert_eq!(enumerate_cells(&k, 2, 5).unwrap_err(), Error::Ceiling(5));
    }

    #[test]
    fn products_multiply_counts() {
        let k = arc(lambda(&ThetaCell::simplex(1)));
        let v = nu_view(&k, 3, DEFAULT_CEILING).unwrap();
        assert_eq!(v.counts(), vec![2, 3, 3, 3]);
        let p = product_view(&[&v, &v]);
        assert_eq!(p.counts(), vec![4, 9, 9, 9]);
        let unit = product_view(&[]);
        assert_eq!(unit.counts(), vec![1]);
        let pt = nu_view(&arc(lambda_globe(0)), 3, DEFAULT_CEILING).unwrap();
        assert_eq!(product_view(&[&v, &pt]).counts(), v.counts());
        assert!(p.check_globular());
    }

    #[test]
    fn identity_functor_passes_and_corruption_fails() {
        let k = arc(tensor(&interval(), &interval()));
        let v = Arc::new(nu_view(&k, 2, DEFAULT_CEILING).unwrap());
        let id = OmegaFunctor::identity(&v);
        assert!(check_functor(&id, 2).pass());
        let mut bad = id.clone();
        bad.set_image(1, 0, 1);
        let r = check_functor(&bad, 2);
        assert!(!r.pass());
    }
}
