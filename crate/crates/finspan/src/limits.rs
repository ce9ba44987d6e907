//! Canonical finite limits: pullbacks, products, terminal objects, and the
//! slice / arrow / fiber-product category builders.
//!
//! Pullbacks are *chosen*, not merely asserted: for every cospan the terminal
//! cone is selected deterministically (least apex identifier, then least
//! projection identifiers), and universality is certified by checking that
//! every other cone factors uniquely. Absence of a pullback is a value, not
//! an error; bounded models are inherently pullback-incomplete.

use std::collections::HashMap;
use std::sync::Arc;

use crate::fincat::{FinCat, Functor, Mor, Ob, RawCategory};
use crate::classes::MorphismFamily;

/// A chosen pullback cone over a cospan (f: b -> a, g: c -> a), with its
/// universality certificate. `pr_left` projects to src(f), `pr_right` to
/// src(g).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackCone {
    pub apex: Ob,
    pub pr_left: Mor,
    pub pr_right: Mor,
    pub cospan: (Mor, Mor),
}

impl PullbackCone {
    /// The unique mediating morphism from another cone (p, q) over the same
    /// cospan into this one. Exhaustive search; None if the certificate is
    /// being violated (which validation rules out).
    pub fn mediator(&self, cat: &FinCat, p: Mor, q: Mor) -> Option<Mor> {
        let w = cat.src(p);
        let mut found = None;
        for &h in cat.hom(w, self.apex) {
            if cat.comp(self.pr_left, h) == Some(p) && cat.comp(self.pr_right, h) == Some(q) {
                if found.is_some() {
                    return None;
                }
                found = Some(h);
            }
        }
        found
    }
}

/// Enumerate all cones over the cospan (f, g): pairs (p: w -> src f,
/// q: w -> src g) with f p = g q.
fn cones(cat: &FinCat, f: Mor, g: Mor) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for w in cat.objects() {
        for &p in cat.hom(w, cat.src(f)) {
            let fp = cat.comp(f, p).unwrap();
            for &q in cat.hom(w, cat.src(g)) {
                if cat.comp(g, q) == Some(fp) {
                    out.push((p, q));
                }
            }
        }
    }
    out
}

/// Compute the canonical pullback of a cospan, if one exists.
///
/// Enumerates all cones and returns the least terminal one in (apex
/// identifier, left projection, right projection) order. A candidate cone
/// is terminal exactly when, for every object w, composing with it is a
/// bijection from hom(w, apex) onto the cones with apex w; the composites
/// are automatically cones, so it suffices that the counts match and the
/// composites are pairwise distinct. Deterministic: the same cospan always
/// yields the identical cone.
pub fn pullback(cat: &FinCat, f: Mor, g: Mor) -> Option<PullbackCone> {
    if cat.tgt(f) != cat.tgt(g) {
        return None;
    }
    let n = cat.n_objects();
    let mut by_apex: Vec<Vec<(Mor, Mor)>> = vec![Vec::new(); n];
    for w in cat.objects() {
        for &p in cat.hom(w, cat.src(f)) {
            let fp = cat.comp(f, p).unwrap();
            for &q in cat.hom(w, cat.src(g)) {
                if cat.comp(g, q) == Some(fp) {
                    by_apex[w.idx()].push((p, q));
                }
            }
        }
    }
    let mut candidates: Vec<(Ob, Mor, Mor)> = Vec::new();
    for w in cat.objects() {
        for &(p, q) in &by_apex[w.idx()] {
            candidates.push((w, p, q));
        }
    }
    candidates.sort();
    let mut scratch: Vec<(Mor, Mor)> = Vec::new();
    'cand: for &(apex, p0, q0) in &candidates {
        for w in cat.objects() {
            let homs = cat.hom(w, apex);
            if homs.len() != by_apex[w.idx()].len() {
                continue 'cand;
            }
            scratch.clear();
            for &h in homs {
                scratch.push((cat.comp(p0, h).unwrap(), cat.comp(q0, h).unwrap()));
            }
            scratch.sort_unstable();
            if scratch.windows(2).any(|v| v[0] == v[1]) {
                continue 'cand;
            }
        }
        return Some(PullbackCone { apex, pr_left: p0, pr_right: q0, cospan: (f, g) });
    }
    None
}



/// Memoizing pullback context for hot paths. Recomputation yields the
/// identical cone, so idempotent fill is safe.
pub struct PullbackMemo {
    cache: HashMap<(Mor, Mor), Option<PullbackCone>>,
}

impl PullbackMemo {
    pub fn new() -> Self {
        PullbackMemo { cache: HashMap::new() }
    }

    pub fn pullback(&mut self, cat: &FinCat, f: Mor, g: Mor) -> Option<PullbackCone> {
        self.cache.entry((f, g)).or_insert_with(|| pullback(cat, f, g)).clone()
    }
}

impl Default for PullbackMemo {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("no terminal object in {0}")]
pub struct NoTerminalObject(pub String);

/// Terminal object by exhaustive check (re-exported from fincat for the
/// operation surface).
pub fn terminal_object(cat: &FinCat) -> Option<Ob> {
    cat.terminal_object()
}

/// Binary product as the pullback over the terminal object.
pub fn product(cat: &FinCat, a: Ob, b: Ob) -> Result<Option<PullbackCone>, NoTerminalObject> {
    let t = terminal_object(cat).ok_or_else(|| NoTerminalObject(cat.name.clone()))?;
    let fa = cat.hom(a, t)[0];
    let fb = cat.hom(b, t)[0];
    Ok(pullback(cat, fa, fb))
}

/// The slice category C/a together with its projection functor. Objects are
/// morphisms into a, morphisms are commuting triangles.
pub struct SliceCat {
    pub cat: Arc<FinCat>,
    /// structure morphism (leg to a) per slice object
    legs: Vec<Mor>,
    pub proj: Functor,
}

impl SliceCat {
    pub fn leg(&self, o: Ob) -> Mor {
        self.legs[o.idx()]
    }

    pub fn object_for_leg(&self, leg: Mor) -> Option<Ob> {
        self.legs.iter().position(|&l| l == leg).map(|i| Ob(i as u32))
    }
}

pub fn slice(cat: &Arc<FinCat>, a: Ob) -> (SliceCat, Functor) {
    let mut legs: Vec<Mor> = Vec::new();
    for o in cat.objects() {
        for &m in cat.hom(o, a) {
            legs.push(m);
        }
    }
    legs.sort();
    let ob_names: Vec<String> = legs.iter().enumerate().map(|(i, _)| format!("s{i:04}")).collect();
    let leg_ix: HashMap<Mor, usize> = legs.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut meta: Vec<(usize, usize, Mor)> = Vec::new();
    for (i, &li) in legs.iter().enumerate() {
        for (j, &lj) in legs.iter().enumerate() {
            for &u in cat.hom(cat.src(li), cat.src(lj)) {
                if cat.comp(lj, u) == Some(li) {
                    let name = format!("t{:04}_{:04}_{}", i, j, u.0);
                    morphisms.push((name.clone(), ob_names[i].clone(), ob_names[j].clone()));
                    meta.push((i, j, u));
                    if i == j && cat.is_identity(u) {
                        identities.push((ob_names[i].clone(), name));
                    }
                }
            }
        }
    }
    let mut compositions = Vec::new();
    for (gi, &(i2, j2, u2)) in meta.iter().enumerate() {
        for (fi, &(i1, j1, u1)) in meta.iter().enumerate() {
            if j1 != i2 {
                continue;
            }
            let uc = cat.comp(u2, u1).unwrap();
            let name = format!("t{:04}_{:04}_{}", i1, j2, uc.0);
            compositions.push((morphisms[gi].0.clone(), morphisms[fi].0.clone(), name));
        }
    }
    let raw = RawCategory {
        name: format!("{}/{}", cat.name, cat.object_name(a)),
        objects: ob_names.clone(),
        morphisms,
        identities,
        compositions,
    };
    let scat = FinCat::validate(&raw).expect("slice category is valid");
    let mut ob_map = vec![Ob(0); scat.n_objects()];
    for (i, &l) in legs.iter().enumerate() {
        let o = scat.object_by_name(&ob_names[i]).unwrap();
        ob_map[o.idx()] = cat.src(l);
    }
    let mut mor_map = vec![Mor(0); scat.n_morphisms()];
    for &(i, j, u) in &meta {
        let name = format!("t{:04}_{:04}_{}", i, j, u.0);
        let m = scat.mor_by_name(&name).unwrap();
        mor_map[m.idx()] = u;
    }
    let proj = Functor { src: scat.clone(), tgt: cat.clone(), ob_map, mor_map };
    let legs_sorted = {
        let mut v = vec![Mor(0); legs.len()];
        for (i, &l) in legs.iter().enumerate() {
            let o = scat.object_by_name(&ob_names[i]).unwrap();
            v[o.idx()] = l;
        }
        v
    };
    let _ = leg_ix;
    (SliceCat { cat: scat, legs: legs_sorted, proj: proj.clone() }, proj)
}

/// The full subcategory of the arrow category spanned by a morphism family,
/// with its two evaluation functors. Objects are members of the family,
/// morphisms are arbitrary commuting squares in C.
pub struct ArrowCat {
    pub cat: Arc<FinCat>,
    /// the arrow of C represented by each object
    pub arrows: Vec<Mor>,
    /// (top, bottom) component per morphism: a square from e to e' is a pair
    /// (u: src e -> src e', v: tgt e -> tgt e') with e' u = v e
    pub squares: Vec<(Mor, Mor)>,
    pub ev0: Functor,
    pub ev1: Functor,
}

pub fn arrow_category_on_family(cat: &Arc<FinCat>, fam: &MorphismFamily) -> ArrowCat {
    let arrows: Vec<Mor> = fam.members().collect();
    let ob_names: Vec<String> =
        arrows.iter().enumerate().map(|(i, _)| format!("a{i:04}")).collect();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut meta: Vec<(usize, usize, Mor, Mor)> = Vec::new();
    for (i, &e) in arrows.iter().enumerate() {
        for (j, &e2) in arrows.iter().enumerate() {
            for &u in cat.hom(cat.src(e), cat.src(e2)) {
                for &v in cat.hom(cat.tgt(e), cat.tgt(e2)) {
                    if cat.comp(e2, u) == cat.comp(v, e) {
                        let name = format!("q{:04}_{:04}_{}_{}", i, j, u.0, v.0);
                        morphisms.push((name.clone(), ob_names[i].clone(), ob_names[j].clone()));
                        meta.push((i, j, u, v));
                        if i == j && cat.is_identity(u) && cat.is_identity(v) {
                            identities.push((ob_names[i].clone(), name));
                        }
                    }
                }
            }
        }
    }
    let mut compositions = Vec::new();
    for (gi, &(i2, j2, u2, v2)) in meta.iter().enumerate() {
        for (fi, &(i1, j1, u1, v1)) in meta.iter().enumerate() {
            if j1 != i2 {
                continue;
            }
            let uc = cat.comp(u2, u1).unwrap();
            let vc = cat.comp(v2, v1).unwrap();
            let name = format!("q{:04}_{:04}_{}_{}", i1, j2, uc.0, vc.0);
            compositions.push((morphisms[gi].0.clone(), morphisms[fi].0.clone(), name));
        }
    }
    let raw = RawCategory {
        name: format!("Ar_{}({})", fam.name, cat.name),
        objects: ob_names.clone(),
        morphisms,
        identities,
        compositions,
    };
    let acat = FinCat::validate(&raw).expect("arrow category is valid");
    let mut arrows_sorted = vec![Mor(0); arrows.len()];
    let mut ev0_ob = vec![Ob(0); acat.n_objects()];
    let mut ev1_ob = vec![Ob(0); acat.n_objects()];
    for (i, &e) in arrows.iter().enumerate() {
        let o = acat.object_by_name(&ob_names[i]).unwrap();
        arrows_sorted[o.idx()] = e;
        ev0_ob[o.idx()] = cat.src(e);
        ev1_ob[o.idx()] = cat.tgt(e);
    }
    let mut squares = vec![(Mor(0), Mor(0)); acat.n_morphisms()];
    let mut ev0_mor = vec![Mor(0); acat.n_morphisms()];
    let mut ev1_mor = vec![Mor(0); acat.n_morphisms()];
    for &(i, j, u, v) in &meta {
        let name = format!("q{:04}_{:04}_{}_{}", i, j, u.0, v.0);
        let m = acat.mor_by_name(&name).unwrap();
        squares[m.idx()] = (u, v);
        ev0_mor[m.idx()] = u;
        ev1_mor[m.idx()] = v;
    }
    let ev0 = Functor { src: acat.clone(), tgt: cat.clone(), ob_map: ev0_ob, mor_map: ev0_mor };
    let ev1 = Functor { src: acat.clone(), tgt: cat.clone(), ob_map: ev1_ob, mor_map: ev1_mor };
    ArrowCat { cat: acat, arrows: arrows_sorted, squares, ev0, ev1 }
}

/// The strict fiber product of two functors with common target: objects are
/// pairs (a, b) with F a = G b, morphisms pairs of morphisms with equal
/// images.
pub struct FiberProductCat {
    pub cat: Arc<FinCat>,
    pub objects: Vec<(Ob, Ob)>,
    pub mor_pairs: Vec<(Mor, Mor)>,
    pub proj_left: Functor,
    pub proj_right: Functor,
}

pub fn fiber_product_categories(
    f: &Functor,
    g: &Functor,
) -> Result<FiberProductCat, crate::fincat::TargetMismatch> {
    if !f.tgt.same_as(&g.tgt) {
        return Err(crate::fincat::TargetMismatch);
    }
    let mut objects = Vec::new();
    for a in f.src.objects() {
        for b in g.src.objects() {
            if f.on_ob(a) == g.on_ob(b) {
                objects.push((a, b));
            }
        }
    }
    let ob_names: Vec<String> =
        objects.iter().enumerate().map(|(i, _)| format!("p{i:04}")).collect();
    let ob_ix: HashMap<(Ob, Ob), usize> =
        objects.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut meta: Vec<(usize, usize, Mor, Mor)> = Vec::new();
    for (i, &(a, b)) in objects.iter().enumerate() {
        for (j, &(a2, b2)) in objects.iter().enumerate() {
            for &u in f.src.hom(a, a2) {
                for &v in g.src.hom(b, b2) {
                    if f.on_mor(u) == g.on_mor(v) {
                        let name = format!("w{:04}_{:04}_{}_{}", i, j, u.0, v.0);
                        morphisms.push((name.clone(), ob_names[i].clone(), ob_names[j].clone()));
                        meta.push((i, j, u, v));
                        if i == j && f.src.is_identity(u) && g.src.is_identity(v) {
                            identities.push((ob_names[i].clone(), name));
                        }
                    }
                }
            }
        }
    }
    let mut compositions = Vec::new();
    for (gi, &(i2, j2, u2, v2)) in meta.iter().enumerate() {
        for (fi, &(i1, j1, u1, v1)) in meta.iter().enumerate() {
            if j1 != i2 {
                continue;
            }
            let uc = f.src.comp(u2, u1).unwrap();
            let vc = g.src.comp(v2, v1).unwrap();
            let name = format!("w{:04}_{:04}_{}_{}", i1, j2, uc.0, vc.0);
            compositions.push((morphisms[gi].0.clone(), morphisms[fi].0.clone(), name));
        }
    }
    let raw = RawCategory {
        name: format!("({} x_{} {})", f.src.name, f.tgt.name, g.src.name),
        objects: ob_names.clone(),
        morphisms,
        identities,
        compositions,
    };
    let cat = FinCat::validate(&raw).expect("fiber product category is valid");
    let _ = ob_ix;
    let mut objects_sorted = vec![(Ob(0), Ob(0)); objects.len()];
    let mut pl_ob = vec![Ob(0); cat.n_objects()];
    let mut pr_ob = vec![Ob(0); cat.n_objects()];
    for (i, &(a, b)) in objects.iter().enumerate() {
        let o = cat.object_by_name(&ob_names[i]).unwrap();
        objects_sorted[o.idx()] = (a, b);
        pl_ob[o.idx()] = a;
        pr_ob[o.idx()] = b;
    }
    let mut mor_pairs = vec![(Mor(0), Mor(0)); cat.n_morphisms()];
    let mut pl_mor = vec![Mor(0); cat.n_morphisms()];
    let mut pr_mor = vec![Mor(0); cat.n_morphisms()];
    for &(i, j, u, v) in &meta {
        let name = format!("w{:04}_{:04}_{}_{}", i, j, u.0, v.0);
        let m = cat.mor_by_name(&name).unwrap();
        mor_pairs[m.idx()] = (u, v);
        pl_mor[m.idx()] = u;
        pr_mor[m.idx()] = v;
    }
    let proj_left = Functor { src: cat.clone(), tgt: f.src.clone(), ob_map: pl_ob, mor_map: pl_mor };
    let proj_right = Functor { src: cat.clone(), tgt: g.src.clone(), ob_map: pr_ob, mor_map: pr_mor };
    Ok(FiberProductCat { cat, objects: objects_sorted, mor_pairs, proj_left, proj_right })
}

/// Verify the pasting law for two composable cospans: if the two inner
/// canonical pullbacks exist, the pasted square is a pullback of the outer
/// cospan (up to the canonical isomorphism with the directly-computed outer
/// cone). Returns None if an inner pullback is missing.
pub fn pasting_check(cat: &FinCat, f: Mor, g: Mor, h: Mor) -> Option<bool> {
    // cospans: (f: b -> a, g: c -> a) then (pr_right, h: d -> c)
    let inner = pullback(cat, f, g)?;
    let second = pullback(cat, inner.pr_right, h)?;
    let outer_left = cat.comp(inner.pr_left, second.pr_left)?;
    let gh = cat.comp(g, h)?;
    let outer = pullback(cat, f, gh)?;
    // the pasted cone (outer_left, second.pr_right) must factor uniquely and
    // invertibly through the canonical outer cone
    let med = outer.mediator(cat, outer_left, second.pr_right)?;
    if !cat.is_iso(med) {
        return Some(false);
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn pullback_of_collapses_over_point_is_product() {
        // finite sets <= 4: pullback(2->1, 2->1) over the point has apex 4
        let c = catalog::gen_finset(4);
        let two = c.object_by_name("2").unwrap();
        let one = c.object_by_name("1").unwrap();
        let f = c.hom(two, one)[0];
        let pb = pullback(&c, f, f).unwrap();
        assert_eq!(c.object_name(pb.apex), "4");
    }

    #[test]
    fn pullback_of_disjoint_injections_is_empty() {
        // two distinct injections 1 -> 2 pull back to 0
        let c = catalog::gen_finset(2);
        let one = c.object_by_name("1").unwrap();
        let two = c.object_by_name("2").unwrap();
        let injs: Vec<Mor> = c
            .hom(one, two)
            .iter()
            .copied()
            .filter(|&m| catalog::finset_is_injective(&c, m))
            .collect();
        assert_eq!(injs.len(), 2);
        let pb = pullback(&c, injs[0], injs[1]).unwrap();
        assert_eq!(c.object_name(pb.apex), "0");
    }

    #[test]
    fn missing_pullback_is_none() {
        // finite sets <= 3: pullback(2->1, 3->1) needs apex 6
        // Oracle: enumerate all cones with apex in {0..3}, verify none is
        // terminal (done by pullback() itself; we assert the absence).
        let c = catalog::gen_finset(3);
        let one = c.object_by_name("1").unwrap();
        let two = c.object_by_name("2").unwrap();
        let three = c.object_by_name("3").unwrap();
        let f = c.hom(two, one)[0];
        let g = c.hom(three, one)[0];
        assert!(pullback(&c, f, g).is_none());
    }

    #[test]
    fn products_in_divisor_lattice_are_gcds() {
        let c = catalog::gen_divisor_lattice(12);
        let a = c.object_by_name("d04").unwrap();
        let b = c.object_by_name("d06").unwrap();
        let p = product(&c, a, b).unwrap().unwrap();
        assert_eq!(c.object_name(p.apex), "d02");
        // terminal object is the top element 12
        assert_eq!(c.object_name(terminal_object(&c).unwrap()), "d12");
    }

    #[test]
    fn finset3_terminal_and_missing_product() {
        let c = catalog::gen_finset(3);
        assert_eq!(c.object_name(terminal_object(&c).unwrap()), "1");
        let two = c.object_by_name("2").unwrap();
        assert!(product(&c, two, two).unwrap().is_none());
    }

    #[test]
    fn pullback_determinism() {
        let c = catalog::gen_finset(3);
        let two = c.object_by_name("2").unwrap();
        let one = c.object_by_name("1").unwrap();
        let f = c.hom(two, one)[0];
        let p1 = pullback(&c, f, f);
        let p2 = pullback(&c, f, f);
        assert_eq!(p1, p2);
    }

    #[test]
    fn slice_counts() {
        let c = catalog::gen_finset(2);
        let one = c.object_by_name("1").unwrap();
        let (s, proj) = slice(&c, one);
        assert_eq!(s.cat.n_objects(), 3);
        assert!(proj.check().is_ok());

        // slice of divisor lattice of 12 over 6 is the divisor lattice of 6
        let d = catalog::gen_divisor_lattice(12);
        let six = d.object_by_name("d06").unwrap();
        let (s6, _) = slice(&d, six);
        let d6 = catalog::gen_divisor_lattice(6);
        assert_eq!(s6.cat.n_objects(), d6.n_objects());
        assert_eq!(s6.cat.n_morphisms(), d6.n_morphisms());
    }

    #[test]
    fn slice_over_initial_of_poset_is_terminal_category() {
        let d = catalog::gen_divisor_lattice(12);
        let bot = d.object_by_name("d01").unwrap();
        let (s, _) = slice(&d, bot);
        assert_eq!(s.cat.n_objects(), 1);
        assert_eq!(s.cat.n_morphisms(), 1);
    }

    #[test]
    fn arrow_category_counts() {
        let i1 = catalog::gen_divisor_lattice(2);
        let all = MorphismFamily::all(&i1, "all");
        let ar = arrow_category_on_family(&i1, &all);
        assert_eq!(ar.cat.n_objects(), 3);

        // Ar on identities only is isomorphic to C (same counts here)
        let c = catalog::gen_finset(2);
        let ids = MorphismFamily::identities(&c, "ids");
        let ar_id = arrow_category_on_family(&c, &ids);
        assert_eq!(ar_id.cat.n_objects(), c.n_objects());
        assert_eq!(ar_id.cat.n_morphisms(), c.n_morphisms());

        // Ar_inj(finite sets <= 2): oracle counts injections among all
        // functions between {0,1,2}
        let inj = catalog::finset_injections(&c);
        let mut oracle = 0;
        for m in c.morphisms() {
            if catalog::finset_is_injective(&c, m) {
                oracle += 1;
            }
        }
        assert_eq!(oracle, 8);
        let ar_inj = arrow_category_on_family(&c, &inj);
        assert_eq!(ar_inj.cat.n_objects(), oracle);
        assert!(ar_inj.ev0.check().is_ok());
        assert!(ar_inj.ev1.check().is_ok());
    }

    #[test]
    fn fiber_product_along_identity_recovers_source() {
        let c = catalog::gen_finset(2);
        let idf = Functor::identity(&c);
        let fp = fiber_product_categories(&idf, &idf).unwrap();
        // A x_C C along identities: objects are pairs (a, a)
        assert_eq!(fp.cat.n_objects(), c.n_objects());
        assert_eq!(fp.cat.n_morphisms(), c.n_morphisms());
    }

    #[test]
    fn fiber_product_slice_counts() {
        // C_{/1} x_C E_{/1} object count for finite sets <= 2, E = injections.
        // Oracle: enumerate matching pairs of legs sharing a source.
        let c = catalog::gen_finset(2);
        let one = c.object_by_name("1").unwrap();
        let (sl, projl) = slice(&c, one);
        let _ = &sl;
        // E-restricted slice: subcategory of C/1 on injective legs; build via
        // fiber product of the two slice projections and count matching pairs
        let mut oracle = 0;
        for z in c.objects() {
            let homs = c.hom(z, one).len();
            let injs = c
                .hom(z, one)
                .iter()
                .filter(|&&m| catalog::finset_is_injective(&c, m))
                .count();
            oracle += homs * injs;
        }
        assert_eq!(oracle, 2); // z=0: 1*1, z=1: 1*1, z=2: 1*0
        let (sr, projr) = slice(&c, one);
        let _ = &sr;
        // restrict right projection to injective legs by filtering objects:
        // done through the strict fiber machinery in span2; here we check the
        // unrestricted count matches pairs with equal sources
        let fp = fiber_product_categories(&projl, &projr).unwrap();
        let mut pairs = 0;
        for z in c.objects() {
            let h = c.hom(z, one).len();
            pairs += h * h;
        }
        assert_eq!(fp.cat.n_objects(), pairs);
    }

    #[test]
    fn pasting_law_in_divisor_lattice() {
        let c = catalog::gen_divisor_lattice(12);
        // cospans d04 -> d12 <- d06, then pull back d02 -> d06 leg along d03 -> d06
        let a = c.object_by_name("d12").unwrap();
        let b = c.object_by_name("d04").unwrap();
        let cc = c.object_by_name("d06").unwrap();
        let d = c.object_by_name("d03").unwrap();
        let f = c.hom(b, a)[0];
        let g = c.hom(cc, a)[0];
        let h = c.hom(d, cc)[0];
        assert_eq!(pasting_check(&c, f, g, h), Some(true));
    }

    #[test]
    fn universality_certificate_exhaustive() {
        // for every returned cone and every other cone, exactly one mediator
        let c = catalog::gen_finset(3);
        let mut checked = 0;
        for f in c.morphisms() {
            for g in c.morphisms() {
                if c.tgt(f) != c.tgt(g) || f > g {
                    continue;
                }
                if let Some(cone) = pullback(&c, f, g) {
                    for (p, q) in cones(&c, f, g) {
                        assert!(cone.mediator(&c, p, q).is_some());
                        checked += 1;
                    }
                }
            }
        }
        assert!(checked > 0);
    }
}
