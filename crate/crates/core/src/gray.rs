//! The Gray cylinder `[1]⊗T = ν(λ[1] ⊗ λT)` and its lax shuffle
//! decomposition.
//!
//! For `T = [n];(A_1,...,A_n)` the decomposition has the pieces
//! `O_k = [n+1];(A_1..A_k, [0], A_{k+1}..A_n)` for `k = 0..n` and
//! `S_k = [n];(A_1.., [1]⊗A_k, ..A_n)` for `k = 1..n`, in the order
//! `O_0, S_1, O_1, ..., S_n, O_n`. The piece `O_n` holds `{0}⊗T` and `O_0`
//! holds `{1}⊗T`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::dac::{
    amalgamate, find_isomorphism, interval, lambda, lambda_globe, lambda_map, tensor,
    tensor_map_between, wreath, wreath_map, Chain, DAComplex, DAMorphism,
};
use crate::error::{Error, Result};
use crate::lattice::{kernel, Echelon};
use crate::nu::{nu_functor, nu_view, OmegaCatView, OmegaFunctor, Realization};
use crate::theta::{
    globular_sum, hyperfaces, leaf_embeddings, meet_embeddings, Hyperface, InnerVariant,
    SimplicialMap, ThetaCell, ThetaMorphism,
};

// generator indices inside λ[1]
const L: u32 = 0;
const R: u32 = 1;
const H: u32 = 0;

/// `λ[1] ⊗ λT`.
pub fn cylinder_complex(t: &ThetaCell) -> Arc<DAComplex> {
    Arc::new(tensor(&interval(), &lambda(t)))
}

/// `[1]⊗T`, enumerated up to `max_dim`.
pub fn gray_cylinder(t: &ThetaCell, max_dim: usize, ceiling: usize) -> Result<OmegaCatView> {
    let mut v = nu_view(&cylinder_complex(t), max_dim, ceiling)?;
    v.realization = Realization::Theta(format!("[1]⊗{t}"));
    Ok(v)
}

/// `ε⊗− : λT → λ[1]⊗λT`.
pub fn endpoint_map(t: &ThetaCell, eps: usize) -> DAMorphism {
    let lt = Arc::new(lambda(t));
    let c = Arc::new(tensor(&interval(), &lt));
    let point = Arc::new(lambda_globe(0));
    let vertex = DAMorphism::new_unchecked(
        point.clone(),
        Arc::new(interval()),
        vec![vec![Chain::gen(eps as u32)]],
    );
    let src = Arc::new(tensor(&point, &lt));
    tensor_map_between(&src, &c, &vertex, &DAMorphism::identity(&lt))
        .expect("small coefficients")
        .resource(lt)
        .expect("[0]⊗K has the structure of K")
}

/// `(e_0, e_1)` as functors `ν(λT) → [1]⊗T`.
pub fn endpoints(
    t: &ThetaCell,
    max_dim: usize,
    ceiling: usize,
) -> Result<(OmegaFunctor, OmegaFunctor)> {
    let lt = Arc::new(lambda(t));
    let src = Arc::new(nu_view(&lt, max_dim, ceiling)?);
    let tgt = Arc::new(gray_cylinder(t, max_dim, ceiling)?);
    let e0 = nu_functor(&endpoint_map(t, 0), &src, &tgt)?;
    let e1 = nu_functor(&endpoint_map(t, 1), &src, &tgt)?;
    Ok((e0, e1))
}

/// Whether two functors into the same view have disjoint images.
pub fn disjoint_images(f: &OmegaFunctor, g: &OmegaFunctor) -> bool {
    (0..=f.max_dim().min(g.max_dim())).all(|d| {
        let a: BTreeSet<_> = f.images(d).collect();
        g.images(d).all(|c| !a.contains(c))
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PieceKind {
    /// `O_k`, with a unit segment inserted after vertex `k`.
    Outer(usize),
    /// `S_k`, with the cylinder on segment `k`.
    Shuffle(usize),
}

/// A child slot of a piece: a Θ-cell, or the cylinder `[1]⊗A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Slot {
    Cell(ThetaCell),
    Cylinder(ThetaCell),
}

#[derive(Clone, Debug)]
pub struct Piece {
    pub kind: PieceKind,
    pub slots: Vec<Slot>,
    pub complex: Arc<DAComplex>,
    /// The explicit sub-complex embedding into `λ[1]⊗λT`.
    pub embedding: DAMorphism,
}

impl Piece {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self
            .slots
            .iter()
            .map(|s| match s {
                Slot::Cell(c) => c.to_string(),
                Slot::Cylinder(a) if a.is_point() => "[1]".to_string(),
                Slot::Cylinder(a) => format!("[1]⊗{a}"),
            })
            .collect();
        if self
            .slots
            .iter()
            .all(|s| *s == Slot::Cell(ThetaCell::point()))
        {
            format!("[{}]", self.slots.len())
        } else {
            format!("[{}]({})", self.slots.len(), parts.join(","))
        }
    }

    /// The Θ-cell of an outer piece.
    pub fn cell(&self) -> Option<ThetaCell> {
        self.slots
            .iter()
            .map(|s| match s {
                Slot::Cell(c) => Some(c.clone()),
                Slot::Cylinder(_) => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(ThetaCell::new)
    }
}

/// Which end of `S_k` a span glues.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum End {
    /// `{0}⊗A_k`, glued to `O_k`.
    Low,
    /// `{1}⊗A_k`, glued to `O_{k-1}`.
    High,
}

/// `O ← λT → S` with the given legs.
#[derive(Clone, Debug)]
pub struct SpanLegs {
    pub k: usize,
    pub end: End,
    pub outer: usize,
    pub shuffle: usize,
    pub to_outer: DAMorphism,
    pub to_shuffle: DAMorphism,
    /// The face `T → O` underlying `to_outer`.
    pub face: ThetaMorphism,
}

#[derive(Clone, Debug)]
pub struct ShuffleDiagram {
    pub cell: ThetaCell,
    pub cylinder: Arc<DAComplex>,
    pub apex: Arc<DAComplex>,
    /// `O_0, S_1, O_1, ..., S_n, O_n`.
    pub pieces: Vec<Piece>,
    pub spans: Vec<SpanLegs>,
    /// `d^{n+1} : T → O_n`, carrying `{0}⊗T`.
    pub e0_face: ThetaMorphism,
    /// `d^0 : T → O_0`, carrying `{1}⊗T`.
    pub e1_face: ThetaMorphism,
}

impl ShuffleDiagram {
    pub fn outer(&self, k: usize) -> &Piece {
        &self.pieces[2 * k]
    }

    pub fn shuffle(&self, k: usize) -> &Piece {
        &self.pieces[2 * k - 1]
    }

    pub fn labels(&self) -> Vec<String> {
        self.pieces.iter().map(Piece::label).collect()
    }

    /// DOT of the zigzag of pieces.
    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph \"shuffle {}\" {{\n  rankdir=LR;\n", self.cell);
        for (i, p) in self.pieces.iter().enumerate() {
            s.push_str(&format!("  p{i} [label=\"{}\"];\n", p.label()));
        }
        for (i, sp) in self.spans.iter().enumerate() {
            s.push_str(&format!(
                "  l{i} [label=\"{}\", shape=plaintext];\n",
                self.cell
            ));
            s.push_str(&format!("  l{i} -> p{} ;\n", sp.outer));
            s.push_str(&format!("  l{i} -> p{} ;\n", sp.shuffle));
        }
        s.push_str("}\n");
        s
    }
}

fn point_to(c: &DAComplex, g: u32) -> Chain {
    let _ = c;
    Chain::gen(g)
}

/// `O_k` and its embedding.
fn outer_piece(t: &ThetaCell, lt: &DAComplex, c: &Arc<DAComplex>, k: usize) -> Piece {
    let cell = t.with_inserted(k + 1, ThetaCell::point());
    let complex = Arc::new(lambda(&cell));
    let n = t.width();
    let mut images = vec![(0..=n + 1)
        .map(|p| {
            if p <= k {
                point_to(c, c.pair(0, L, 0, p as u32))
            } else {
                point_to(c, c.pair(0, R, 0, (p - 1) as u32))
            }
        })
        .collect::<Vec<_>>()];
    for d in 1..=complex.top_degree() {
        let mut imgs = Vec::new();
        for g in 0..complex.rank(d) as u32 {
            let (q, b) = complex.desuspend(d, g);
            let x = if q <= k {
                c.pair(0, L, d, lt.suspended(q, d - 1, b))
            } else if q == k + 1 {
                c.pair(1, H, 0, k as u32)
            } else {
                c.pair(0, R, d, lt.suspended(q - 1, d - 1, b))
            };
            imgs.push(Chain::gen(x));
        }
        images.push(imgs);
    }
    Piece {
        kind: PieceKind::Outer(k),
        slots: cell.children().iter().cloned().map(Slot::Cell).collect(),
        embedding: DAMorphism::new_unchecked(complex.clone(), c.clone(), images),
        complex,
    }
}

/// The complex of a piece with the given slots.
fn slot_complex(slots: &[Slot]) -> DAComplex {
    let children: Vec<DAComplex> = slots
        .iter()
        .map(|s| match s {
            Slot::Cell(a) => lambda(a),
            Slot::Cylinder(a) => tensor(&interval(), &lambda(a)),
        })
        .collect();
    wreath(&children.iter().collect::<Vec<_>>())
}

/// `S_k` and its embedding, including the corrected degree-1 generators.
fn shuffle_piece(t: &ThetaCell, lt: &DAComplex, c: &Arc<DAComplex>, k: usize) -> Result<Piece> {
    let n = t.width();
    let slots: Vec<Slot> = (1..=n)
        .map(|q| {
            if q == k {
                Slot::Cylinder(t.child(q).clone())
            } else {
                Slot::Cell(t.child(q).clone())
            }
        })
        .collect();
    let complex = Arc::new(slot_complex(&slots));
    let b = tensor(&interval(), &lambda(t.child(k)));
    let mut images = vec![(0..=n)
        .map(|p| {
            let end = if p < k { L } else { R };
            Chain::gen(c.pair(0, end, 0, p as u32))
        })
        .collect::<Vec<_>>()];
    for d in 1..=complex.top_degree() {
        let mut imgs = Vec::new();
        for g in 0..complex.rank(d) as u32 {
            let (q, x) = complex.desuspend(d, g);
            let img = if q < k {
                Chain::gen(c.pair(0, L, d, lt.suspended(q, d - 1, x)))
            } else if q > k {
                Chain::gen(c.pair(0, R, d, lt.suspended(q, d - 1, x)))
            } else {
                let (i, e, j, a) = b.unpair(d - 1, x);
                let inner = lt.suspended(k, j, a);
                if i == 1 {
                    Chain::gen(c.pair(1, H, j + 1, inner))
                } else if j == 0 {
                    // the corrected generators l⊗(k,a) + h⊗v_k and h⊗v_{k-1} + r⊗(k,a)
                    let corner = if e == L { k } else { k - 1 };
                    Chain::from_terms([
                        (c.pair(0, e, 1, inner), 1),
                        (c.pair(1, H, 0, corner as u32), 1),
                    ])?
                } else {
                    Chain::gen(c.pair(0, e, j + 1, inner))
                }
            };
            imgs.push(img);
        }
        images.push(imgs);
    }
    Ok(Piece {
        kind: PieceKind::Shuffle(k),
        slots,
        embedding: DAMorphism::new_unchecked(complex.clone(), c.clone(), images),
        complex,
    })
}

/// The inner face `d^k : T → O` with the unit segment after (`IdBang`) or
/// before (`BangId`) segment `k`.
pub fn split_face(t: &ThetaCell, k: usize, variant: InnerVariant) -> ThetaMorphism {
    let n = t.width();
    let (target, unit_slot) = match variant {
        InnerVariant::IdBang => (t.with_inserted(k + 1, ThetaCell::point()), k + 1),
        InnerVariant::BangId => (t.with_inserted(k, ThetaCell::point()), k),
    };
    let base = SimplicialMap::coface(n, k);
    let mut comps = BTreeMap::new();
    for i in 1..=n {
        for j in base.segments(i) {
            let c = if i == k && j == unit_slot {
                ThetaMorphism::to_point(t.child(i))
            } else {
                ThetaMorphism::identity(t.child(i))
            };
            comps.insert((i, j), c);
        }
    }
    ThetaMorphism::new(t.clone(), target, base, comps).expect("split face")
}

/// `d^v : T → T'` with identity components, where `T'` has a point inserted
/// as segment `v+1` (`v = 0`) or `v` (`v = n+1`).
fn outer_face(t: &ThetaCell, v: usize) -> ThetaMorphism {
    let n = t.width();
    let target = if v == 0 {
        t.with_inserted(1, ThetaCell::point())
    } else {
        t.with_inserted(n + 1, ThetaCell::point())
    };
    let base = SimplicialMap::coface(n, v);
    let comps = (1..=n)
        .flat_map(|i| base.segments(i).map(move |j| (i, j)))
        .map(|(i, j)| ((i, j), ThetaMorphism::identity(t.child(i))))
        .collect();
    ThetaMorphism::new(t.clone(), target, base, comps).expect("outer face")
}

/// `id;(.., {ε}⊗A_k, ..) : λT → λS_k`.
fn end_inclusion(
    apex: &Arc<DAComplex>,
    s: &Piece,
    t: &ThetaCell,
    k: usize,
    end: u32,
) -> Result<DAMorphism> {
    let n = t.width();
    let b = Arc::new(tensor(&interval(), &lambda(t.child(k))));
    let mut comps = BTreeMap::new();
    for q in 1..=n {
        let lq = Arc::new(lambda(t.child(q)));
        let m = if q == k {
            let images = (0..=lq.top_degree())
                .map(|d| {
                    (0..lq.rank(d) as u32)
                        .map(|a| Chain::gen(b.pair(0, end, d, a)))
                        .collect()
                })
                .collect();
            DAMorphism::new_unchecked(lq, b.clone(), images)
        } else {
            DAMorphism::identity(&lq)
        };
        comps.insert((q, q), m);
    }
    let f = wreath_map(apex, &s.complex, &SimplicialMap::identity(n), &comps)?;
    f.validate()?;
    Ok(f)
}

pub fn lax_shuffle_diagram(t: &ThetaCell) -> Result<ShuffleDiagram> {
    let n = t.width();
    let lt = lambda(t);
    let apex = Arc::new(lt.clone());
    let c = cylinder_complex(t);
    let mut pieces = Vec::new();
    for k in 0..=n {
        if k > 0 {
            pieces.push(shuffle_piece(t, &lt, &c, k)?);
        }
        pieces.push(outer_piece(t, &lt, &c, k));
    }
    let mut spans = Vec::new();
    for k in 1..=n {
        let s = &pieces[2 * k - 1];
        for (end, variant, outer) in [
            (End::Low, InnerVariant::IdBang, 2 * k),
            (End::High, InnerVariant::BangId, 2 * k - 2),
        ] {
            let face = split_face(t, k, variant);
            let to_outer = crate::dac::lambda_map_between(&apex, &pieces[outer].complex, &face);
            let e = if end == End::Low { L } else { R };
            let to_shuffle = end_inclusion(&apex, s, t, k, e)?;
            spans.push(SpanLegs {
                k,
                end,
                outer,
                shuffle: 2 * k - 1,
                to_outer,
                to_shuffle,
                face,
            });
        }
    }
    Ok(ShuffleDiagram {
        cell: t.clone(),
        cylinder: c,
        apex,
        pieces,
        spans,
        e0_face: outer_face(t, n + 1),
        e1_face: outer_face(t, 0),
    })
}

fn rows(f: &DAMorphism, d: usize, cols: usize) -> Vec<Vec<i128>> {
    if d > f.source().top_degree() {
        return Vec::new();
    }
    f.images()[d]
        .iter()
        .map(|x| {
            let mut v = vec![0i128; cols];
            for &(g, c) in x.terms() {
                v[g as usize] = i128::from(c);
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingReport {
    pub pieces: Vec<String>,
    /// Each piece embedding is injective.
    pub piece_mono: Vec<bool>,
    /// Each span leg is injective, in span order (outer, shuffle).
    pub leg_mono: Vec<bool>,
    /// The pieces generate the cylinder, per degree.
    pub coverage: Vec<bool>,
    /// Both routes around each span agree.
    pub commutes: Vec<bool>,
    /// Each span square is a pullback of graded groups.
    pub pullback: Vec<bool>,
}

impl GluingReport {
    pub fn pass(&self) -> bool {
        [
            &self.piece_mono,
            &self.leg_mono,
            &self.coverage,
            &self.commutes,
            &self.pullback,
        ]
        .iter()
        .all(|v| v.iter().all(|&b| b))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pieces": self.pieces,
            "piece_mono": self.piece_mono,
            "leg_mono": self.leg_mono,
            "coverage": self.coverage,
            "commutes": self.commutes,
            "pullback": self.pullback,
            "pass": self.pass(),
        })
    }
}

fn is_mono(f: &DAMorphism) -> bool {
    (0..=f.source().top_degree()).all(|d| {
        let r = rows(f, d, f.target().rank(d));
        Echelon::new(r.clone(), f.target().rank(d)).rank() == r.len()
    })
}

pub fn verify_gluing(t: &ThetaCell) -> Result<GluingReport> {
    let diagram = lax_shuffle_diagram(t)?;
    let c = &diagram.cylinder;
    let piece_mono = diagram
        .pieces
        .iter()
        .map(|p| is_mono(&p.embedding))
        .collect();
    let mut leg_mono = Vec::new();
    for s in &diagram.spans {
        leg_mono.push(is_mono(&s.to_outer));
        leg_mono.push(is_mono(&s.to_shuffle));
    }
    let coverage = (0..=c.top_degree())
        .map(|d| {
            let all: Vec<Vec<i128>> = diagram
                .pieces
                .iter()
                .flat_map(|p| rows(&p.embedding, d, c.rank(d)))
                .collect();
            Echelon::new(all, c.rank(d)).is_unimodular_span(c.rank(d))
        })
        .collect();
    let mut commutes = Vec::new();
    let mut pullback = Vec::new();
    for s in &diagram.spans {
        let x = &diagram.pieces[s.outer];
        let y = &diagram.pieces[s.shuffle];
        let a = s.to_outer.then(&x.embedding)?;
        let b = s.to_shuffle.then(&y.embedding)?;
        commutes.push(a.images() == b.images());
        let mut ok = true;
        for d in 0..=c.top_degree() {
            let (nx, ny) = (x.complex.rank(d), y.complex.rank(d));
            let mut m = rows(&x.embedding, d, c.rank(d));
            m.extend(
                rows(&y.embedding, d, c.rank(d))
                    .into_iter()
                    .map(|r| r.into_iter().map(|v| -v).collect::<Vec<_>>()),
            );
            let ker = kernel(&m, c.rank(d));
            // pairs (leg_X(z), leg_Y(z))
            let lx = rows(&s.to_outer, d, nx);
            let ly = rows(&s.to_shuffle, d, ny);
            let pairs: Vec<Vec<i128>> = lx
                .into_iter()
                .zip(ly)
                .map(|(mut u, v)| {
                    u.extend(v);
                    u
                })
                .collect();
            let lattice = Echelon::new(pairs, nx + ny);
            if !ker.iter().all(|v| lattice.contains(v)) {
                ok = false;
            }
        }
        pullback.push(ok);
    }
    Ok(GluingReport {
        pieces: diagram.labels(),
        piece_mono,
        leg_mono,
        coverage,
        commutes,
        pullback,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobularReport {
    pub covers: bool,
    pub consecutive: bool,
    pub separated: bool,
    /// Gluing the cylinders on the globes recovers the cylinder on `T`.
    pub amalgam: bool,
}

impl GlobularReport {
    pub fn pass(&self) -> bool {
        self.covers && self.consecutive && self.separated && self.amalgam
    }
}

/// Generators `x⊗g` hit by `id ⊗ λ(e)` for a globe inclusion `e`, which must
/// send generators to generators.
fn image_set(
    e: &ThetaMorphism,
    c: &Arc<DAComplex>,
    lt: &Arc<DAComplex>,
) -> Result<(BTreeSet<(usize, u32)>, DAMorphism)> {
    let ls = Arc::new(lambda(e.source()));
    let f = crate::dac::lambda_map_between(&ls, lt, e);
    let i = Arc::new(interval());
    let src = Arc::new(tensor(&i, &ls));
    let m = tensor_map_between(&src, c, &DAMorphism::identity(&i), &f)?;
    let mut out = BTreeSet::new();
    for (d, imgs) in m.images().iter().enumerate() {
        for x in imgs {
            match x.terms() {
                [(g, 1)] => {
                    out.insert((d, *g));
                }
                _ => {
                    return Err(Error::Shape(format!(
                        "globe inclusion {e} does not send generators to generators"
                    )))
                }
            }
        }
    }
    Ok((out, m))
}

pub fn verify_globular_preservation(t: &ThetaCell) -> Result<GlobularReport> {
    let c = cylinder_complex(t);
    let lt = Arc::new(lambda(t));
    let leaves = leaf_embeddings(t);
    let meets = meet_embeddings(t);
    let mut leaf_sets = Vec::new();
    let mut leaf_maps = Vec::new();
    for e in &leaves {
        let (s, m) = image_set(e, &c, &lt)?;
        leaf_sets.push(s);
        leaf_maps.push(m);
    }
    let mut meet_sets = Vec::new();
    for e in &meets {
        meet_sets.push(image_set(e, &c, &lt)?.0);
    }
    let all: BTreeSet<(usize, u32)> = (0..=c.top_degree())
        .flat_map(|d| (0..c.rank(d) as u32).map(move |g| (d, g)))
        .collect();
    let union: BTreeSet<_> = leaf_sets.iter().flatten().copied().collect();
    let covers = union == all;
    let consecutive = (0..meets.len()).all(|i| {
        let both: BTreeSet<_> = leaf_sets[i]
            .intersection(&leaf_sets[i + 1])
            .copied()
            .collect();
        both == meet_sets[i]
    });
    let mut separated = true;
    for i in 0..leaves.len() {
        for j in i + 2..leaves.len() {
            let both: BTreeSet<_> = leaf_sets[i].intersection(&leaf_sets[j]).copied().collect();
            let mut allowed = meet_sets[i].clone();
            for m in &meet_sets[i + 1..j] {
                allowed = allowed.intersection(m).copied().collect();
            }
            if !both.is_subset(&allowed) {
                separated = false;
            }
        }
    }
    Ok(GlobularReport {
        covers,
        consecutive,
        separated,
        amalgam: glue_cylinders(t, &c)?,
    })
}

/// Amalgamate `λ[1]⊗λ(G_i)` along `λ[1]⊗λ(M_i)` and compare with the cylinder.
fn glue_cylinders(t: &ThetaCell, c: &Arc<DAComplex>) -> Result<bool> {
    let sum = globular_sum(t);
    let leaves = leaf_embeddings(t);
    let meets = meet_embeddings(t);
    let i = Arc::new(interval());
    let id = DAMorphism::identity(&i);
    let cyl = |g: &ThetaCell| Arc::new(tensor(&i, &lambda(g)));
    let mut acc = cyl(leaves[0].source());
    let mut last = DAMorphism::identity(&acc);
    for (k, m) in meets.iter().enumerate() {
        let meet = ThetaCell::globe(sum.meet_dims[k]);
        let prev = leaves[k].source();
        let next = leaves[k + 1].source();
        let into_prev = factor(m, &leaves[k], &meet, prev)?;
        let into_next = factor(m, &leaves[k + 1], &meet, next)?;
        let cm = cyl(&meet);
        let (cp, cn) = (cyl(prev), cyl(next));
        let i_prev = tensor_map_between(&cm, &cp, &id, &lambda_map(&into_prev))?.then(&last)?;
        let i_next = tensor_map_between(&cm, &cn, &id, &lambda_map(&into_next))?;
        let glued = amalgamate(&acc, &cn, &i_prev, &i_next)?;
        last = glued.right;
        acc = glued.complex;
    }
    Ok(find_isomorphism(&acc, c).is_some())
}

fn factor(
    m: &ThetaMorphism,
    leaf: &ThetaMorphism,
    meet: &ThetaCell,
    globe: &ThetaCell,
) -> Result<ThetaMorphism> {
    for g in crate::dac::globe_faces(meet.dimension(), globe.dimension()) {
        if g.then(leaf)? == *m {
            return Ok(g);
        }
    }
    Err(Error::Shape(format!(
        "meet does not factor through {globe}"
    )))
}

/// `id ⊗ λ(f)` between cylinders.
pub fn cylinder_map(f: &ThetaMorphism) -> Result<DAMorphism> {
    let i = Arc::new(interval());
    tensor_map_between(
        &cylinder_complex(f.source()),
        &cylinder_complex(f.target()),
        &DAMorphism::identity(&i),
        &lambda_map(f),
    )
}

#[derive(Clone, Debug)]
pub struct HyperfaceCylinder {
    pub label: String,
    /// Assembled from the column maps between shuffle diagrams.
    pub diagram_map: DAMorphism,
    /// `id ⊗ λ(face)`.
    pub steiner_map: DAMorphism,
    /// Every route to a generator gives the same value.
    pub consistent: bool,
    /// Every generator of the source cylinder is reached by some route.
    pub covered: bool,
    pub agree: bool,
}

/// Component rule for column maps: the `ν` slot gets `ν`, a point target
/// gets `!`, everything else is an identity.
fn slot_map(src: &Slot, tgt: &Slot, special: Option<&DAMorphism>) -> Result<DAMorphism> {
    if let Some(m) = special {
        return Ok(m.clone());
    }
    match (src, tgt) {
        (Slot::Cell(x), Slot::Cell(y)) => {
            let f = if y.is_point() {
                ThetaMorphism::to_point(x)
            } else if x == y {
                ThetaMorphism::identity(x)
            } else {
                return Err(Error::Shape(format!("no column component {x} -> {y}")));
            };
            Ok(lambda_map(&f))
        }
        (Slot::Cylinder(x), Slot::Cylinder(y)) if x == y => Ok(DAMorphism::identity(&Arc::new(
            tensor(&interval(), &lambda(x)),
        ))),
        _ => Err(Error::Shape(
            "column joins a cell slot to a cylinder slot".into(),
        )),
    }
}

/// A column `λP → λQ` composed with `Q`'s embedding.
fn column(
    src: &Piece,
    tgt: &Piece,
    base: SimplicialMap,
    special: Option<(usize, &DAMorphism)>,
) -> Result<DAMorphism> {
    let mut comps = BTreeMap::new();
    for i in 1..=src.slots.len() {
        for j in base.segments(i) {
            let sp = special.and_then(|(s, m)| (s == i).then_some(m));
            comps.insert((i, j), slot_map(&src.slots[i - 1], &tgt.slots[j - 1], sp)?);
        }
    }
    let m = wreath_map(&src.complex, &tgt.complex, &base, &comps)?;
    m.validate()?;
    m.then(&tgt.embedding)
}

/// Compute the map of cylinders induced by the columns between the shuffle
/// diagrams of source and target, and compare it with `id ⊗ λ(face)`.
pub fn hyperface_cylinder(face: &Hyperface) -> Result<HyperfaceCylinder> {
    let f = face.morphism();
    let (s, t) = (f.source(), f.target());
    let n = t.width();
    let ds = lax_shuffle_diagram(s)?;
    let dt = lax_shuffle_diagram(t)?;
    let steiner_map = cylinder_map(f)?;
    // (source piece index, column into the target cylinder)
    let mut columns: Vec<(usize, DAMorphism)> = Vec::new();
    // values on generators reached only through the inner middle column
    let mut extra: Vec<((usize, u32), Chain)> = Vec::new();
    match face {
        Hyperface::Vertical {
            segment: k,
            face: nu,
            ..
        } => {
            let k = *k;
            let nu_map = lambda_map(nu.morphism());
            for j in 0..=n {
                let slot = if k <= j { k } else { k + 1 };
                let col = column(
                    ds.outer(j),
                    dt.outer(j),
                    SimplicialMap::identity(n + 1),
                    Some((slot, &nu_map)),
                )?;
                columns.push((2 * j, col));
            }
            let psi = hyperface_cylinder(nu)?;
            if !psi.consistent || !psi.covered {
                return Err(Error::Mismatch(format!(
                    "the column map of {} is not defined",
                    nu.label()
                )));
            }
            for j in 1..=n {
                let m = if j == k { &psi.diagram_map } else { &nu_map };
                let col = column(
                    ds.shuffle(j),
                    dt.shuffle(j),
                    SimplicialMap::identity(n),
                    Some((k, m)),
                )?;
                columns.push((2 * j - 1, col));
            }
        }
        Hyperface::Outer { vertex, .. } => {
            let v = *vertex;
            for j in 0..n {
                let (tj, base) = if v == 0 {
                    (j + 1, SimplicialMap::coface(n, 0))
                } else {
                    (j, SimplicialMap::coface(n, n + 1))
                };
                columns.push((2 * j, column(ds.outer(j), dt.outer(tj), base, None)?));
            }
            for j in 1..n {
                let (tj, base) = if v == 0 {
                    (j + 1, SimplicialMap::coface(n - 1, 0))
                } else {
                    (j, SimplicialMap::coface(n - 1, n))
                };
                columns.push((
                    2 * j - 1,
                    column(ds.shuffle(j), dt.shuffle(tj), base, None)?,
                ));
            }
        }
        Hyperface::Inner {
            vertex: k, variant, ..
        } => {
            let k = *k;
            for j in 0..n {
                let (tj, base) = if j < k {
                    (j, SimplicialMap::coface(n, k + 1))
                } else {
                    (j + 1, SimplicialMap::coface(n, k))
                };
                columns.push((2 * j, column(ds.outer(j), dt.outer(tj), base, None)?));
            }
            for j in 1..n {
                if j == k {
                    continue;
                }
                let tj = if j < k { j } else { j + 1 };
                let base = SimplicialMap::coface(n - 1, k);
                columns.push((
                    2 * j - 1,
                    column(ds.shuffle(j), dt.shuffle(tj), base, None)?,
                ));
            }
            extra = middle_column(&ds, &dt, k, *variant)?;
        }
    }

    // collect routes
    let cs = &ds.cylinder;
    let ct = &dt.cylinder;
    let mut phi: HashMap<(usize, u32), Chain> = HashMap::new();
    let mut consistent = true;
    let mut record =
        |key: (usize, u32), value: Chain, phi: &mut HashMap<(usize, u32), Chain>| match phi
            .get(&key)
        {
            Some(v) if *v != value => consistent = false,
            Some(_) => {}
            None => {
                phi.insert(key, value);
            }
        };
    for (p, col) in &columns {
        let piece = &ds.pieces[*p];
        for (d, imgs) in piece.embedding.images().iter().enumerate() {
            for (g, x) in imgs.iter().enumerate() {
                if let [(y, 1)] = x.terms() {
                    record((d, *y), col.image(d, g as u32).clone(), &mut phi);
                }
            }
        }
    }
    for (key, value) in extra {
        record(key, value, &mut phi);
    }
    let covered =
        (0..=cs.top_degree()).all(|d| (0..cs.rank(d) as u32).all(|g| phi.contains_key(&(d, g))));
    let images: Vec<Vec<Chain>> = (0..=cs.top_degree())
        .map(|d| {
            (0..cs.rank(d) as u32)
                .map(|g| phi.get(&(d, g)).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    let diagram_map = DAMorphism::new_unchecked(cs.clone(), ct.clone(), images);
    let agree = consistent && covered && diagram_map.images() == steiner_map.images();
    Ok(HyperfaceCylinder {
        label: face.label(),
        diagram_map,
        steiner_map,
        consistent,
        covered,
        agree,
    })
}

/// The middle column of an inner face: `(k, h⊗c)` in `S_k` of the source
/// spreads over `S_k` and `S_{k+1}` of the target.
fn middle_column(
    ds: &ShuffleDiagram,
    dt: &ShuffleDiagram,
    k: usize,
    variant: InnerVariant,
) -> Result<Vec<((usize, u32), Chain)>> {
    let src = ds.shuffle(k);
    let a = match &src.slots[k - 1] {
        Slot::Cylinder(a) => a.clone(),
        Slot::Cell(_) => unreachable!("slot k of S_k is a cylinder"),
    };
    let b = tensor(&interval(), &lambda(&a));
    let bang = lambda_map(&ThetaMorphism::to_point(&a));
    let (low, high) = (dt.shuffle(k), dt.shuffle(k + 1));
    let bl = tensor(
        &interval(),
        &lambda(match &low.slots[k - 1] {
            Slot::Cylinder(x) => x,
            Slot::Cell(_) => unreachable!(),
        }),
    );
    let bh = tensor(
        &interval(),
        &lambda(match &high.slots[k] {
            Slot::Cylinder(x) => x,
            Slot::Cell(_) => unreachable!(),
        }),
    );
    let mut out = Vec::new();
    for d in 1..=src.complex.top_degree() {
        for g in 0..src.complex.rank(d) as u32 {
            let (q, x) = src.complex.desuspend(d, g);
            if q != k {
                continue;
            }
            let (i, _, j, cgen) = b.unpair(d - 1, x);
            if i != 1 {
                continue;
            }
            let c = Chain::gen(cgen);
            let collapsed = bang.apply(j, &c)?;
            let (c_low, c_high) = match variant {
                InnerVariant::IdBang => (c.clone(), collapsed),
                InnerVariant::BangId => (collapsed, c.clone()),
            };
            let mut value = Chain::zero();
            for (piece, bt, slot, chain) in [(low, &bl, k, &c_low), (high, &bh, k + 1, &c_high)] {
                for &(y, coef) in chain.terms() {
                    let local = piece.complex.suspended(slot, d - 1, bt.pair(1, H, j, y));
                    value = value.add_scaled(piece.embedding.image(d, local), coef)?;
                }
            }
            let key = match src.embedding.image(d, g).terms() {
                [(y, 1)] => (d, *y),
                _ => return Err(Error::Shape("h-generator with a corrected image".into())),
            };
            out.push((key, value));
        }
    }
    Ok(out)
}

/// `hyperface_cylinder` for a morphism, which must be one of the listed
/// hyperfaces of its target.
pub fn hyperface_cylinder_of(f: &ThetaMorphism) -> Result<HyperfaceCylinder> {
    let face = hyperfaces(f.target())
        .into_iter()
        .find(|h| h.morphism() == f)
        .ok_or_else(|| Error::Shape(format!("{f} is not a hyperface")))?;
    hyperface_cylinder(&face)
}

/// `ν(id ⊗ λ(f))` between the enumerated cylinders.
pub fn steiner_functor(f: &ThetaMorphism, max_dim: usize, ceiling: usize) -> Result<OmegaFunctor> {
    let src = Arc::new(gray_cylinder(f.source(), max_dim, ceiling)?);
    let tgt = Arc::new(gray_cylinder(f.target(), max_dim, ceiling)?);
    nu_functor(&cylinder_map(f)?, &src, &tgt)
}
