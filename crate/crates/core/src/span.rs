//! The span `[1]×T ← [1]⊗T → [1];T°` relating the Gray cylinder to the
//! cartesian cylinder and to the suspension.
//!
//! `κ = (κ_1, κ_2)` has closed form `κ_1 = id⊗ε` and `κ_2 = ε⊗id`. `σ`
//! sends `l⊗x` and `r⊗x` to the two vertices and `h⊗x` to `(1, μx)`, with
//! `μ` the mirror map `v_p ↦ v_{n-p}`, `(k,c) ↦ (n-k+1, μc)`. The mirror
//! is needed because `h⊗−` reverses direction in odd degrees.
//!
//! Both maps are also assembled piece by piece over the lax shuffle diagram,
//! by recursion on height, and checked against the closed forms and the
//! spans of the diagram.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::dac::{interval, lambda, lambda_map, wreath_map, Chain, DAComplex, DAMorphism};
use crate::error::{Error, Result};
use crate::gray::{endpoint_map, gray_cylinder, lax_shuffle_diagram, End, PieceKind};
use crate::nu::{
    check_functor, nu_functor, nu_view, product_view, OmegaCatView, OmegaFunctor, ViewCell,
};
use crate::theta::{SimplicialMap, ThetaCell, ThetaMorphism};

/// `split^j_{[n]} : [n] → [1]`, sending `i < j` to 0 and the rest to 1.
pub fn split_map(n: usize, j: usize) -> Result<SimplicialMap> {
    if j > n {
        return Err(Error::InvalidMap(format!("split^{j} of [{n}]")));
    }
    SimplicialMap::new(1, (0..=n).map(|i| usize::from(i >= j)).collect())
}

/// `[1];T°`, the target of `σ_T`.
pub fn suspension_target(t: &ThetaCell) -> ThetaCell {
    ThetaCell::new(vec![t.mirror()])
}

/// `μ` on generators: index in `λ(T°)` of the mirror of each generator of
/// `λ(T)`.
pub fn mirror_table(t: &ThetaCell) -> Vec<Vec<u32>> {
    let lt = lambda(t);
    let lm = lambda(&t.mirror());
    let n = t.width();
    let children: Vec<Vec<Vec<u32>>> = t.children().iter().map(mirror_table).collect();
    let mut out = vec![(0..=n as u32).rev().collect::<Vec<_>>()];
    for d in 1..=lt.top_degree() {
        out.push(
            (0..lt.rank(d) as u32)
                .map(|g| {
                    let (k, c) = lt.desuspend(d, g);
                    lm.suspended(n - k + 1, d - 1, children[k - 1][d - 1][c as usize])
                })
                .collect(),
        );
    }
    out
}

/// `κ_1 = id⊗ε : λ[1]⊗λT → λ[1]`.
pub fn kappa1_closed(c: &Arc<DAComplex>) -> DAMorphism {
    let target = Arc::new(interval());
    let images = (0..=c.top_degree())
        .map(|n| {
            (0..c.rank(n) as u32)
                .map(|g| {
                    let (_, a, j, _) = c.unpair(n, g);
                    if j == 0 {
                        Chain::gen(a)
                    } else {
                        Chain::zero()
                    }
                })
                .collect()
        })
        .collect();
    DAMorphism::new_unchecked(c.clone(), target, images)
}

/// `κ_2 = ε⊗id : λ[1]⊗λT → λT`.
pub fn kappa2_closed(c: &Arc<DAComplex>, t: &ThetaCell) -> DAMorphism {
    let target = Arc::new(lambda(t));
    let images = (0..=c.top_degree())
        .map(|n| {
            (0..c.rank(n) as u32)
                .map(|g| {
                    let (i, _, _, b) = c.unpair(n, g);
                    if i == 0 {
                        Chain::gen(b)
                    } else {
                        Chain::zero()
                    }
                })
                .collect()
        })
        .collect();
    DAMorphism::new_unchecked(c.clone(), target, images)
}

/// `σ : λ[1]⊗λT → λ([1];T°)`.
pub fn sigma_closed(c: &Arc<DAComplex>, t: &ThetaCell) -> DAMorphism {
    let target = Arc::new(lambda(&suspension_target(t)));
    let mu = mirror_table(t);
    let images = (0..=c.top_degree())
        .map(|n| {
            (0..c.rank(n) as u32)
                .map(|g| {
                    let (i, a, j, b) = c.unpair(n, g);
                    match (i, j) {
                        (0, 0) => Chain::gen(a),
                        (0, _) => Chain::zero(),
                        _ => Chain::gen(target.suspended(1, j, mu[j][b as usize])),
                    }
                })
                .collect()
        })
        .collect();
    DAMorphism::new_unchecked(c.clone(), target, images)
}

/// The three maps on one piece of the shuffle diagram.
#[derive(Clone, Debug)]
pub struct Column {
    pub label: String,
    pub kappa1: DAMorphism,
    pub kappa2: DAMorphism,
    pub sigma: DAMorphism,
}

#[derive(Clone, Debug)]
pub struct SpanMaps {
    pub cell: ThetaCell,
    pub cylinder: Arc<DAComplex>,
    pub kappa1: DAMorphism,
    pub kappa2: DAMorphism,
    pub sigma: DAMorphism,
    pub columns: Vec<Column>,
}

#[derive(Clone, Debug)]
pub struct SpanBundle {
    pub maps: SpanMaps,
    pub kappa: OmegaFunctor,
    pub sigma: OmegaFunctor,
}

/// Identity components along a base map between cells whose children
/// agree wherever a segment is sent to a segment.
fn along(
    source: &ThetaCell,
    target: &ThetaCell,
    base: SimplicialMap,
    special: &BTreeMap<(usize, usize), ThetaMorphism>,
) -> Result<ThetaMorphism> {
    let mut comps = BTreeMap::new();
    for i in 1..=source.width() {
        for j in base.segments(i) {
            let c = match special.get(&(i, j)) {
                Some(c) => c.clone(),
                None => ThetaMorphism::identity(source.child(i)),
            };
            comps.insert((i, j), c);
        }
    }
    ThetaMorphism::new(source.clone(), target.clone(), base, comps)
}

/// Swap `l` and `r` in the degree-0 part of `λ[1]⊗λA`, for mutation tests.
fn swap_ends(m: &DAMorphism) -> DAMorphism {
    let c = m.source().clone();
    let images = (0..=c.top_degree())
        .map(|n| {
            (0..c.rank(n) as u32)
                .map(|g| {
                    let (i, a, j, b) = c.unpair(n, g);
                    let a = if i == 0 { 1 - a } else { a };
                    m.image(n, c.pair(i, a, j, b)).clone()
                })
                .collect()
        })
        .collect();
    DAMorphism::new_unchecked(c, m.target().clone(), images)
}

/// Build the closed forms and the column maps of every piece. With
/// `mutate = Some(k)` the `σ` column of `S_k` swaps the ends before applying
/// `σ_{A_k}`.
fn build_maps(t: &ThetaCell, mutate: Option<usize>) -> Result<SpanMaps> {
    let n = t.width();
    let diagram = lax_shuffle_diagram(t)?;
    let c = diagram.cylinder.clone();
    let target_s = suspension_target(t);
    let mirror = t.mirror();
    let mut columns = Vec::new();
    for piece in &diagram.pieces {
        let column = match piece.kind {
            PieceKind::Outer(k) => {
                let cell = piece.cell().expect("outer pieces are cells");
                let point = ThetaCell::point();
                let to_interval = along(
                    &cell,
                    &ThetaCell::simplex(1),
                    split_map(n + 1, k + 1)?,
                    &BTreeMap::new(),
                )?;
                let collapse = along(
                    &cell,
                    t,
                    SimplicialMap::codegeneracy(n, k),
                    &BTreeMap::new(),
                )?;
                let mut special = BTreeMap::new();
                special.insert((k + 1, 1), ThetaMorphism::object(&mirror, n - k));
                let to_s = along(&cell, &target_s, split_map(n + 1, k + 1)?, &special)?;
                debug_assert!(to_interval.component(k + 1, 1).source() == &point);
                Column {
                    label: piece.label(),
                    kappa1: lambda_map(&to_interval),
                    kappa2: lambda_map(&collapse),
                    sigma: lambda_map(&to_s),
                }
            }
            PieceKind::Shuffle(k) => {
                let a = t.child(k);
                let child = build_maps(a, None)?;
                let lt = Arc::new(lambda(t));
                let mut comps = BTreeMap::new();
                for q in 1..=n {
                    let m = if q == k {
                        child.kappa2.clone()
                    } else {
                        lambda_map(&ThetaMorphism::identity(t.child(q)))
                    };
                    comps.insert((q, q), m);
                }
                let kappa2 = wreath_map(&piece.complex, &lt, &SimplicialMap::identity(n), &comps)?;
                let mut bang = BTreeMap::new();
                bang.insert((k, 1), ThetaMorphism::to_point(a));
                let fold = along(t, &ThetaCell::simplex(1), split_map(n, k)?, &bang)?;
                let kappa1 = kappa2.then(&lambda_map(&fold))?;
                // σ: S_k → [1];([1];A_k°) → [1];T°
                let inner = ThetaCell::new(vec![suspension_target(a)]);
                let mut scomp = BTreeMap::new();
                let sa = if mutate == Some(k) {
                    swap_ends(&child.sigma)
                } else {
                    child.sigma.clone()
                };
                scomp.insert((k, 1), sa);
                let li = Arc::new(lambda(&inner));
                let folded = wreath_map(&piece.complex, &li, &split_map(n, k)?, &scomp)?;
                let mut seg = BTreeMap::new();
                seg.insert((1, n - k + 1), ThetaMorphism::identity(&a.mirror()));
                let slot = ThetaMorphism::new(
                    suspension_target(a),
                    mirror.clone(),
                    SimplicialMap::new(n, vec![n - k, n - k + 1])?,
                    seg,
                )?;
                let mut top = BTreeMap::new();
                top.insert((1, 1), slot);
                let incl =
                    ThetaMorphism::new(inner, target_s.clone(), SimplicialMap::identity(1), top)?;
                let sigma = folded.then(&lambda_map(&incl))?;
                Column {
                    label: piece.label(),
                    kappa1,
                    kappa2,
                    sigma,
                }
            }
        };
        columns.push(column);
    }
    Ok(SpanMaps {
        cell: t.clone(),
        kappa1: kappa1_closed(&c),
        kappa2: kappa2_closed(&c, t),
        sigma: sigma_closed(&c, t),
        cylinder: c,
        columns,
    })
}

fn kappa_functor(
    maps: &SpanMaps,
    cyl: &Arc<OmegaCatView>,
    max_dim: usize,
    ceiling: usize,
) -> Result<OmegaFunctor> {
    let vi = nu_view(&Arc::new(interval()), max_dim, ceiling)?;
    let vt = nu_view(&Arc::new(lambda(&maps.cell)), max_dim, ceiling)?;
    let target = Arc::new(product_view(&[&vi, &vt]));
    OmegaFunctor::from_fn(cyl, &target, |c| match c {
        ViewCell::Table(x) => Ok(ViewCell::Tuple(vec![
            ViewCell::Table(x.map(&maps.kappa1)?),
            ViewCell::Table(x.map(&maps.kappa2)?),
        ])),
        ViewCell::Tuple(_) => Err(Error::Shape("κ applies to tables".into())),
    })
}

fn sigma_functor(
    maps: &SpanMaps,
    cyl: &Arc<OmegaCatView>,
    max_dim: usize,
    ceiling: usize,
) -> Result<OmegaFunctor> {
    let ls = Arc::new(lambda(&suspension_target(&maps.cell)));
    let target = Arc::new(nu_view(&ls, max_dim, ceiling)?);
    nu_functor(&maps.sigma, cyl, &target)
}

/// `κ_T` and `σ_T` as functors out of `[1]⊗T`, enumerated to `max_dim`.
pub fn build_span(t: &ThetaCell, max_dim: usize, ceiling: usize) -> Result<SpanBundle> {
    let maps = build_maps(t, None)?;
    for m in [&maps.kappa1, &maps.kappa2, &maps.sigma] {
        m.validate()?;
    }
    let cyl = Arc::new(gray_cylinder(t, max_dim, ceiling)?);
    Ok(SpanBundle {
        kappa: kappa_functor(&maps, &cyl, max_dim, ceiling)?,
        sigma: sigma_functor(&maps, &cyl, max_dim, ceiling)?,
        maps,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SquareSort {
    /// `κ` at the `{0}⊗A_k` end.
    KappaLow,
    /// `κ` at the `{1}⊗A_k` end.
    KappaHigh,
    /// `σ` at the `{0}⊗A_k` end.
    SigmaLow,
    /// `σ` at the `{1}⊗A_k` end.
    SigmaHigh,
}

impl SquareSort {
    pub fn numeral(self) -> &'static str {
        match self {
            SquareSort::KappaLow => "I",
            SquareSort::KappaHigh => "II",
            SquareSort::SigmaLow => "III",
            SquareSort::SigmaHigh => "IV",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCheck {
    pub k: usize,
    pub sort: SquareSort,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanReport {
    pub cell: String,
    pub squares: Vec<SquareCheck>,
    /// Each column agrees with the closed forms restricted to its piece.
    pub columns: Vec<(String, bool)>,
    /// The closed forms are augmented chain maps with positive images.
    pub well_defined: bool,
    /// `κe_ε = {ε}×T` and `σe_ε = o_ε`, for `ε = 0, 1`.
    pub diamonds: [bool; 2],
    pub kappa_functor: bool,
    pub sigma_functor: bool,
    /// `κ` is a bijection on 0-cells onto `{0,1} × objects(T)`.
    pub kappa_objects: bool,
}

impl SpanReport {
    pub fn pass(&self) -> bool {
        self.squares.iter().all(|s| s.pass)
            && self.columns.iter().all(|c| c.1)
            && self.well_defined
            && self.diamonds.iter().all(|&b| b)
            && self.kappa_functor
            && self.sigma_functor
            && self.kappa_objects
    }

    /// The first failing square, as `(k, sort)`.
    pub fn first_failure(&self) -> Option<(usize, SquareSort)> {
        self.squares.iter().find(|s| !s.pass).map(|s| (s.k, s.sort))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cell": self.cell,
            "squares": self.squares.iter().map(|s| serde_json::json!({
                "k": s.k,
                "sort": s.sort.numeral(),
                "pass": s.pass,
            })).collect::<Vec<_>>(),
            "columns": self.columns.iter().map(|(l, p)| serde_json::json!({
                "piece": l,
                "pass": p,
            })).collect::<Vec<_>>(),
            "well_defined": self.well_defined,
            "diamonds": self.diamonds,
            "kappa_functor": self.kappa_functor,
            "sigma_functor": self.sigma_functor,
            "kappa_objects": self.kappa_objects,
            "pass": self.pass(),
        })
    }

    /// The span squares as a graph, green where they commute and red where
    /// they do not.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"span {}\" {{", self.cell);
        let _ = writeln!(s, "  gray [label=\"[1]⊗{}\"];", self.cell);
        let _ = writeln!(s, "  cart [label=\"[1]×{}\"];", self.cell);
        let _ = writeln!(s, "  susp [label=\"[1];{}°\"];", self.cell);
        let _ = writeln!(s, "  gray -> cart [label=\"κ\"];");
        let _ = writeln!(s, "  gray -> susp [label=\"σ\"];");
        for (i, sq) in self.squares.iter().enumerate() {
            let colour = if sq.pass { "green" } else { "red" };
            let _ = writeln!(
                s,
                "  sq{i} [label=\"{} k={}\", shape=box, color={colour}];",
                sq.sort.numeral(),
                sq.k
            );
            let to = match sq.sort {
                SquareSort::KappaLow | SquareSort::KappaHigh => "cart",
                SquareSort::SigmaLow | SquareSort::SigmaHigh => "susp",
            };
            let _ = writeln!(s, "  sq{i} -> {to} [color={colour}];");
        }
        s.push_str("}\n");
        s
    }
}

fn squares(t: &ThetaCell, maps: &SpanMaps) -> Result<Vec<SquareCheck>> {
    let diagram = lax_shuffle_diagram(t)?;
    let mut out = Vec::new();
    let mut sigma = Vec::new();
    for s in &diagram.spans {
        let (o, sh) = (&maps.columns[s.outer], &maps.columns[s.shuffle]);
        let route = |leg: &DAMorphism, m: &DAMorphism| leg.then(m).map(|x| x.images().to_vec());
        let kappa = route(&s.to_outer, &o.kappa1)? == route(&s.to_shuffle, &sh.kappa1)?
            && route(&s.to_outer, &o.kappa2)? == route(&s.to_shuffle, &sh.kappa2)?;
        let sig = route(&s.to_outer, &o.sigma)? == route(&s.to_shuffle, &sh.sigma)?;
        let (ks, ss) = match s.end {
            End::Low => (SquareSort::KappaLow, SquareSort::SigmaLow),
            End::High => (SquareSort::KappaHigh, SquareSort::SigmaHigh),
        };
        out.push(SquareCheck {
            k: s.k,
            sort: ks,
            pass: kappa,
        });
        sigma.push(SquareCheck {
            k: s.k,
            sort: ss,
            pass: sig,
        });
    }
    out.extend(sigma);
    Ok(out)
}

fn report(t: &ThetaCell, maps: &SpanMaps, max_dim: usize, ceiling: usize) -> Result<SpanReport> {
    let diagram = lax_shuffle_diagram(t)?;
    let columns = diagram
        .pieces
        .iter()
        .zip(&maps.columns)
        .map(|(p, col)| -> Result<(String, bool)> {
            let ok = p.embedding.then(&maps.kappa1)?.images() == col.kappa1.images()
                && p.embedding.then(&maps.kappa2)?.images() == col.kappa2.images()
                && p.embedding.then(&maps.sigma)?.images() == col.sigma.images();
            Ok((col.label.clone(), ok))
        })
        .collect::<Result<Vec<_>>>()?;
    let well_defined = [&maps.kappa1, &maps.kappa2, &maps.sigma]
        .iter()
        .all(|m| m.validate().is_ok());
    let n = t.width();
    let mut diamonds = [false; 2];
    for (eps, slot) in diamonds.iter_mut().enumerate() {
        let e = endpoint_map(t, eps);
        let constant = |target: &ThetaCell, v: usize| {
            ThetaMorphism::new(
                t.clone(),
                target.clone(),
                SimplicialMap::constant(n, target.width(), v),
                BTreeMap::new(),
            )
            .map(|f| lambda_map(&f))
        };
        *slot = e.then(&maps.kappa1)?.images() == constant(&ThetaCell::simplex(1), eps)?.images()
            && e.then(&maps.kappa2)?.images()
                == DAMorphism::identity(&Arc::new(lambda(t))).images()
            && e.then(&maps.sigma)?.images() == constant(&suspension_target(t), eps)?.images();
    }
    let cyl = Arc::new(gray_cylinder(t, max_dim, ceiling)?);
    let kappa = kappa_functor(maps, &cyl, max_dim, ceiling)?;
    let sigma = sigma_functor(maps, &cyl, max_dim, ceiling)?;
    let zero: Vec<u32> = (0..cyl.count(0) as u32)
        .map(|i| kappa.image_id(0, i))
        .collect();
    let mut sorted = zero.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let kappa_objects = sorted.len() == zero.len() && zero.len() == 2 * (n + 1);
    Ok(SpanReport {
        cell: t.to_string(),
        squares: squares(t, maps)?,
        columns,
        well_defined,
        diamonds,
        kappa_functor: check_functor(&kappa, max_dim).pass(),
        sigma_functor: check_functor(&sigma, max_dim).pass(),
        kappa_objects,
    })
}

/// Check the span squares, the columns, the folding diamonds and
/// functoriality, in dimensions up to `dim T + 1`.
pub fn verify_span(t: &ThetaCell, ceiling: usize) -> Result<SpanReport> {
    let maps = build_maps(t, None)?;
    report(t, &maps, t.dimension() + 1, ceiling)
}

/// `verify_span` with the ends swapped in the `σ` column of `S_k`.
pub fn verify_span_mutated(t: &ThetaCell, k: usize, ceiling: usize) -> Result<SpanReport> {
    if k == 0 || k > t.width() {
        return Err(Error::Shape(format!("no shuffle piece S_{k} in {t}")));
    }
    let maps = build_maps(t, Some(k))?;
    report(t, &maps, t.dimension() + 1, ceiling)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nu::DEFAULT_CEILING;
    use crate::theta::parse_cell;

    fn cell(s: &str) -> ThetaCell {
        parse_cell(s).unwrap()
    }

    #[test]
    fn split_maps() {
        assert_eq!(split_map(3, 1).unwrap().image(), &[0, 1, 1, 1]);
        assert_eq!(split_map(2, 0).unwrap().image(), &[1, 1, 1]);
        assert!(split_map(2, 3).is_err());
        for n in 0..=4 {
            for k in 0..=n {
                let d = SimplicialMap::coface(n, k);
                let lhs = d.then(&split_map(n + 1, k).unwrap()).unwrap();
                assert_eq!(lhs, split_map(n, k).unwrap());
                if k <= n {
                    let d = SimplicialMap::coface(n + 1, k);
                    let lhs = d.then(&split_map(n + 2, k + 1).unwrap()).unwrap();
                    assert_eq!(lhs, split_map(n + 1, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn mirror_is_an_involution_on_generators() {
        let t = cell("[2]([1],[0])");
        let mu = mirror_table(&t);
        let back = mirror_table(&t.mirror());
        for (d, row) in mu.iter().enumerate() {
            for (g, &h) in row.iter().enumerate() {
                assert_eq!(back[d][h as usize], g as u32);
            }
        }
    }

    #[test]
    fn point_is_the_identity() {
        let maps = build_maps(&ThetaCell::point(), None).unwrap();
        let id = DAMorphism::identity(&maps.cylinder);
        assert_eq!(maps.kappa1.images(), id.images());
        // σ_[0] lands in [1];[0] = [1]
        assert_eq!(maps.sigma.images(), id.images());
    }

    #[test]
    fn closed_forms_are_chain_maps() {
        for s in ["[1]", "[2]", "[1]([1])", "[2]([1],[0])"] {
            let maps = build_maps(&cell(s), None).unwrap();
            maps.kappa1.validate().unwrap();
            maps.kappa2.validate().unwrap();
            maps.sigma.validate().unwrap();
            for c in &maps.columns {
                c.sigma.validate().unwrap();
            }
        }
    }

    #[test]
    fn small_spans_pass() {
        for s in ["[0]", "[1]", "[2]", "[1]([1])"] {
            let r = verify_span(&cell(s), DEFAULT_CEILING).unwrap();
            assert!(r.pass(), "{s}: {r:?}");
        }
    }

    #[test]
    fn swapped_ends_fail_at_the_sigma_square() {
        let r = verify_span_mutated(&cell("[2]"), 1, DEFAULT_CEILING).unwrap();
        assert!(!r.pass());
        assert_eq!(r.first_failure(), Some((1, SquareSort::SigmaLow)));
        assert!(r.squares.iter().filter(|s| s.k == 2).all(|s| s.pass));
    }

    #[test]
    fn kappa_collapses_the_square() {
        let b = build_span(&cell("[1]"), 2, DEFAULT_CEILING).unwrap();
        // the 2-cell of [1]⊗[1] goes to an identity of [1]×[1]
        let top = b
            .kappa
            .source()
            .cells(2)
            .iter()
            .find(|c| !c.is_degenerate())
            .unwrap()
            .clone();
        assert!(b.kappa.apply(&top).unwrap().is_degenerate());
        assert!(!b.sigma.apply(&top).unwrap().is_degenerate());
    }
}
