//! Contravariant Cat-valued functors on a finite base, brute-force adjoint
//! computation, and the three Beck-Chevalley mates.
//!
//! Adjoints are found pointwise: a left adjoint value at b is the initial
//! object of the comma category (b down u), located by exhaustive search
//! with the least candidate as canonical representative. Every returned
//! adjunction carries its unit and counit and is certified by checking both
//! triangle identities exactly. Mates are built step by step from whiskered
//! units and counits and checked for componentwise invertibility.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::classes::MorphismFamily;
use crate::fincat::{FinCat, Functor, Mor, NatTransform, Ob};
use crate::limits::PullbackMemo;

/// A strict contravariant Cat-valued functor: one fiber per base object and
/// one restriction functor per base morphism, with F(id) = id and
/// F(g o f) = F(f) o F(g) on the nose.
#[derive(Clone)]
pub struct CatFunctor {
    pub base: Arc<FinCat>,
    pub fibers: Vec<Arc<FinCat>>,
    /// res[m]: fiber(tgt m) -> fiber(src m)
    pub res: Vec<Functor>,
}

impl std::fmt::Debug for CatFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CatFunctor(base {})", self.base.name)
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum StrictnessViolation {
    #[error("restriction of `{0}` has wrong endpoints")]
    Endpoints(String),
    #[error("restriction functor of `{0}` violates functor laws")]
    BadFunctor(String),
    #[error("F(id) is not the identity on object `{0}`")]
    IdentityLaw(String),
    #[error("F(g o f) != F(f) o F(g) for g=`{g}`, f=`{f}`")]
    CompositionLaw { g: String, f: String },
}

impl CatFunctor {
    pub fn fiber(&self, o: Ob) -> &Arc<FinCat> {
        &self.fibers[o.idx()]
    }

    pub fn restriction(&self, m: Mor) -> &Functor {
        &self.res[m.idx()]
    }

    /// Certify strictness: endpoints, functor laws per restriction,
    /// identities and composition preserved exactly.
    pub fn check_strict(&self) -> Result<(), StrictnessViolation> {
        let c = &self.base;
        for m in c.morphisms() {
            let r = self.restriction(m);
            if !r.src.same_as(self.fiber(c.tgt(m))) || !r.tgt.same_as(self.fiber(c.src(m))) {
                return Err(StrictnessViolation::Endpoints(c.mor_name(m).to_string()));
            }
            if r.check().is_err() {
                return Err(StrictnessViolation::BadFunctor(c.mor_name(m).to_string()));
            }
        }
        for o in c.objects() {
            let r = self.restriction(c.identity(o));
            let id = Functor::identity(self.fiber(o));
            if !r.same_as(&id) {
                return Err(StrictnessViolation::IdentityLaw(c.object_name(o).to_string()));
            }
        }
        for g in c.morphisms() {
            for f in c.morphisms() {
                if let Some(h) = c.comp(g, f) {
                    let lhs = self.restriction(h);
                    let rhs = self.restriction(f).compose(self.restriction(g));
                    if !lhs.same_as(&rhs) {
                        return Err(StrictnessViolation::CompositionLaw {
                            g: c.mor_name(g).to_string(),
                            f: c.mor_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

/// An adjunction L -| R with unit Id => R L and counit L R => Id, both
/// triangle identities certified.
#[derive(Clone)]
pub struct Adjunction {
    pub left: Functor,
    pub right: Functor,
    pub unit: NatTransform,
    pub counit: NatTransform,
}

impl std::fmt::Debug for Adjunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Adjunction({} -| {})", self.left.src.name, self.right.src.name)
    }
}

impl Adjunction {
    /// Both triangle identities, checked exactly.
    pub fn check_triangles(&self) -> bool {
        let l = &self.left;
        let r = &self.right;
        // (epsilon L) . (L eta) = id_L : for each x in src(L)
        let lx_ok = l.src.objects().all(|x| {
            let l_eta = l.on_mor(self.unit.at(x));
            let eps_lx = self.counit.at(l.on_ob(x));
            l.tgt.comp(eps_lx, l_eta) == Some(l.tgt.identity(l.on_ob(x)))
        });
        // (R epsilon) . (eta R) = id_R : for each y in src(R)
        let ry_ok = r.src.objects().all(|y| {
            let eta_ry = self.unit.at(r.on_ob(y));
            let r_eps = r.on_mor(self.counit.at(y));
            r.tgt.comp(r_eps, eta_ry) == Some(r.tgt.identity(r.on_ob(y)))
        });
        lx_ok && ry_ok
            && self.unit.check().is_ok()
            && self.counit.check().is_ok()
            && l.check().is_ok()
    }

    pub fn identity(cat: &Arc<FinCat>) -> Adjunction {
        let idf = Functor::identity(cat);
        Adjunction {
            left: idf.clone(),
            right: idf.clone(),
            unit: NatTransform::identity(&idf),
            counit: NatTransform::identity(&idf),
        }
    }

    /// Compose with another adjunction: (L2 o L1) -| (R1 o R2). `self` is the
    /// inner adjunction (L1: X -> Y), `outer` has L2: Y -> Z.
    pub fn then(&self, outer: &Adjunction) -> Adjunction {
        let l = outer.left.compose(&self.left);
        let r = self.right.compose(&outer.right);
        let unit = NatTransform {
            src: Functor::identity(&self.left.src),
            tgt: r.compose(&l),
            components: self
                .left
                .src
                .objects()
                .map(|x| {
                    let inner = self.unit.at(x); // x -> R1 L1 x
                    let outer_c = self.right.on_mor(outer.unit.at(self.left.on_ob(x)));
                    self.left.src.comp(outer_c, inner).expect("unit composite")
                })
                .collect(),
        };
        let counit = NatTransform {
            src: l.compose(&r),
            tgt: Functor::identity(&outer.left.tgt),
            components: outer
                .left
                .tgt
                .objects()
                .map(|z| {
                    let inner_c = outer.left.on_mor(self.counit.at(outer.right.on_ob(z)));
                    let outer_c = outer.counit.at(z);
                    outer.left.tgt.comp(outer_c, inner_c).expect("counit composite")
                })
                .collect(),
        };
        Adjunction { left: l, right: r, unit, counit }
    }
}

/// Pointwise left adjoint of u by initial objects of comma categories.
/// Returns None (with no witness) if some value has no initial object.
pub fn left_adjoint(u: &Functor) -> Option<Adjunction> {
    let a = &u.src;
    let b = &u.tgt;
    // candidates at each b-object: (a-object, phi: b0 -> u a), initial means
    // every candidate factors through it uniquely
    let mut l_ob: Vec<Ob> = Vec::with_capacity(b.n_objects());
    let mut eta: Vec<Mor> = Vec::with_capacity(b.n_objects());
    for b0 in b.objects() {
        let mut cands: Vec<(Ob, Mor)> = Vec::new();
        for a0 in a.objects() {
            for &phi in b.hom(b0, u.on_ob(a0)) {
                cands.push((a0, phi));
            }
        }
        let init = cands.iter().copied().find(|&(a0, phi0)| {
            cands.iter().all(|&(a1, phi1)| {
                let mut count = 0;
                for &psi in a.hom(a0, a1) {
                    if b.comp(u.on_mor(psi), phi0) == Some(phi1) {
                        count += 1;
                        if count > 1 {
                            return false;
                        }
                    }
                }
                count == 1
            })
        })?;
        l_ob.push(init.0);
        eta.push(init.1);
    }
    // L on morphisms: unique psi with u(psi) . eta_b = eta_b' . g
    let mut l_mor: Vec<Mor> = Vec::with_capacity(b.n_morphisms());
    for g in b.morphisms() {
        let (s, t) = (b.src(g), b.tgt(g));
        let rhs = b.comp(eta[t.idx()], g)?;
        let psi = a
            .hom(l_ob[s.idx()], l_ob[t.idx()])
            .iter()
            .copied()
            .find(|&psi| b.comp(u.on_mor(psi), eta[s.idx()]) == Some(rhs))?;
        l_mor.push(psi);
    }
    let l = Functor { src: b.clone(), tgt: a.clone(), ob_map: l_ob, mor_map: l_mor };
    // counit at a0: unique psi: L(u a0) -> a0 with u(psi) . eta_{u a0} = id
    let mut eps: Vec<Mor> = Vec::with_capacity(a.n_objects());
    for a0 in a.objects() {
        let ua0 = u.on_ob(a0);
        let psi = a
            .hom(l.on_ob(ua0), a0)
            .iter()
            .copied()
            .find(|&psi| b.comp(u.on_mor(psi), eta[ua0.idx()]) == Some(b.identity(ua0)))?;
        eps.push(psi);
    }
    let unit = NatTransform {
        src: Functor::identity(b),
        tgt: u.compose(&l),
        components: eta,
    };
    let counit = NatTransform {
        src: l.compose(u),
        tgt: Functor::identity(a),
        components: eps,
    };
    let adj = Adjunction { left: l, right: u.clone(), unit, counit };
    if adj.check_triangles() {
        Some(adj)
    } else {
        None
    }
}

/// Pointwise right adjoint of u by terminal objects of comma categories.
pub fn right_adjoint(u: &Functor) -> Option<Adjunction> {
    let a = &u.src;
    let b = &u.tgt;
    let mut r_ob: Vec<Ob> = Vec::with_capacity(b.n_objects());
    let mut eps: Vec<Mor> = Vec::with_capacity(b.n_objects());
    for b0 in b.objects() {
        let mut cands: Vec<(Ob, Mor)> = Vec::new();
        for a0 in a.objects() {
            for &phi in b.hom(u.on_ob(a0), b0) {
                cands.push((a0, phi));
            }
        }
        let term = cands.iter().copied().find(|&(a0, phi0)| {
            cands.iter().all(|&(a1, phi1)| {
                let mut count = 0;
                for &psi in a.hom(a1, a0) {
                    if b.comp(phi0, u.on_mor(psi)) == Some(phi1) {
                        count += 1;
                        if count > 1 {
                            return false;
                        }
                    }
                }
                count == 1
            })
        })?;
        r_ob.push(term.0);
        eps.push(term.1);
    }
    let mut r_mor: Vec<Mor> = Vec::with_capacity(b.n_morphisms());
    for g in b.morphisms() {
        let (s, t) = (b.src(g), b.tgt(g));
        let lhs = b.comp(g, eps[s.idx()])?;
        let psi = a
            .hom(r_ob[s.idx()], r_ob[t.idx()])
            .iter()
            .copied()
            .find(|&psi| b.comp(eps[t.idx()], u.on_mor(psi)) == Some(lhs))?;
        r_mor.push(psi);
    }
    let r = Functor { src: b.clone(), tgt: a.clone(), ob_map: r_ob, mor_map: r_mor };
    let mut eta: Vec<Mor> = Vec::with_capacity(a.n_objects());
    for a0 in a.objects() {
        let ua0 = u.on_ob(a0);
        let psi = a
            .hom(a0, r.on_ob(ua0))
            .iter()
            .copied()
            .find(|&psi| b.comp(eps[ua0.idx()], u.on_mor(psi)) == Some(b.identity(ua0)))?;
        eta.push(psi);
    }
    let unit = NatTransform {
        src: Functor::identity(a),
        tgt: r.compose(u),
        components: eta,
    };
    let counit = NatTransform {
        src: u.compose(&r),
        tgt: Functor::identity(b),
        components: eps,
    };
    let adj = Adjunction { left: u.clone(), right: r, unit, counit };
    if adj.check_triangles() {
        Some(adj)
    } else {
        None
    }
}

/// The canonical isomorphism between two right adjoints of the same functor.
pub fn two_right_adjoints_iso(adj1: &Adjunction, adj2: &Adjunction) -> NatTransform {
    // adj1: L -| R1, adj2: L -| R2; theta: R1 => R2, theta_b = R2(eps1_b) . eta2_{R1 b}
    let r1 = &adj1.right;
    let r2 = &adj2.right;
    let a = &r1.tgt;
    NatTransform {
        src: r1.clone(),
        tgt: r2.clone(),
        components: r1
            .src
            .objects()
            .map(|b0| {
                let first = adj2.unit.at(r1.on_ob(b0));
                let second = r2.on_mor(adj1.counit.at(b0));
                a.comp(second, first).expect("two right adjoints iso")
            })
            .collect(),
    }
}

/// The canonical isomorphism between two left adjoints of the same functor.
pub fn two_left_adjoints_iso(adj1: &Adjunction, adj2: &Adjunction) -> NatTransform {
    // adj1: L1 -| R, adj2: L2 -| R; theta: L1 => L2, theta_b = eps1_{L2 b} . L1(eta2_b)
    let l1 = &adj1.left;
    let l2 = &adj2.left;
    let a = &l1.tgt;
    NatTransform {
        src: l1.clone(),
        tgt: l2.clone(),
        components: l1
            .src
            .objects()
            .map(|b0| {
                let first = l1.on_mor(adj2.unit.at(b0));
                let second = adj1.counit.at(l2.on_ob(b0));
                a.comp(second, first).expect("two left adjoints iso")
            })
            .collect(),
    }
}

/// A canonical pullback square in the base, in the orientation of the mixed
/// adjointability condition: bottom then right designate the cospan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CSquare {
    /// i: Y' -> Y
    pub bottom: Mor,
    /// p: X -> Y
    pub right: Mor,
    /// j: X' -> X
    pub top: Mor,
    /// q: X' -> Y'
    pub left: Mor,
}

pub fn canonical_square(
    cat: &FinCat,
    memo: &mut PullbackMemo,
    bottom: Mor,
    right: Mor,
) -> Option<CSquare> {
    let cone = memo.pullback(cat, bottom, right)?;
    Some(CSquare { bottom, right, top: cone.pr_right, left: cone.pr_left })
}

/// A constructed Beck-Chevalley mate with its invertibility verdict.
#[derive(Clone)]
pub struct BCWitness {
    pub square: CSquare,
    pub mate: NatTransform,
    pub invertible: bool,
    /// fiber object where the component fails to invert, if any
    pub failing_component: Option<String>,
}

impl BCWitness {
    fn from_mate(square: CSquare, mate: NatTransform) -> BCWitness {
        debug_assert!(mate.check().is_ok(), "mate must be natural");
        let failing = mate
            .non_invertible_witness()
            .map(|o| mate.src.src.object_name(o).to_string());
        BCWitness { square, invertible: failing.is_none(), failing_component: failing, mate }
    }
}

#[derive(Debug, Clone, thiserror::Error, Serialize, Deserialize, PartialEq, Eq)]
pub enum BCError {
    #[error("no left adjoint for restriction along `{0}`")]
    NoLeftAdjoint(String),
    #[error("no right adjoint for restriction along `{0}`")]
    NoRightAdjoint(String),
    #[error("prerequisite mate not invertible at component `{0}`")]
    PrerequisiteMateNotInvertible(String),
}

/// Cache of pointwise adjoints per base morphism.
pub struct AdjointCache {
    sharp: HashMap<Mor, Option<Adjunction>>,
    star: HashMap<Mor, Option<Adjunction>>,
}

impl AdjointCache {
    pub fn new() -> Self {
        AdjointCache { sharp: HashMap::new(), star: HashMap::new() }
    }

    /// The adjunction m_sharp -| m^* for the restriction along m.
    pub fn sharp(&mut self, f: &CatFunctor, m: Mor) -> Option<Adjunction> {
        self.sharp.entry(m).or_insert_with(|| left_adjoint(f.restriction(m))).clone()
    }

    /// The adjunction m^* -| m_star.
    pub fn star(&mut self, f: &CatFunctor, m: Mor) -> Option<Adjunction> {
        self.star.entry(m).or_insert_with(|| right_adjoint(f.restriction(m))).clone()
    }
}

impl Default for AdjointCache {
    fn default() -> Self {
        Self::new()
    }
}

/// BC_sharp for a square: the mate j_sharp q^* => p^* i_sharp, built as the
/// composite of the whiskered unit of i_sharp -| i^* and counit of
/// j_sharp -| j^*.
pub fn bc_sharp(
    f: &CatFunctor,
    cache: &mut AdjointCache,
    sq: &CSquare,
) -> Result<BCWitness, BCError> {
    let c = &f.base;
    let adj_i = cache
        .sharp(f, sq.bottom)
        .ok_or_else(|| BCError::NoLeftAdjoint(c.mor_name(sq.bottom).to_string()))?;
    let adj_j = cache
        .sharp(f, sq.top)
        .ok_or_else(|| BCError::NoLeftAdjoint(c.mor_name(sq.top).to_string()))?;
    let q_star = f.restriction(sq.left);
    let p_star = f.restriction(sq.right);
    let i_sharp = &adj_i.left;
    let j_sharp = &adj_j.left;

    // j_sharp q^*  =>  j_sharp q^* i^* i_sharp = j_sharp j^* p^* i_sharp  =>  p^* i_sharp
    let step1 = adj_i.unit.whisker_left(q_star).whisker_left(j_sharp);
    let p_i = p_star.compose(i_sharp);
    let step2 = adj_j.counit.whisker_right(&p_i);
    let mate = NatTransform {
        src: j_sharp.compose(q_star),
        tgt: p_i,
        components: step2.then(&step1).components,
    };
    Ok(BCWitness::from_mate(*sq, mate))
}

/// BC_star for a square: the mate i^* p_star => q_star j^*.
pub fn bc_star(
    f: &CatFunctor,
    cache: &mut AdjointCache,
    sq: &CSquare,
) -> Result<BCWitness, BCError> {
    let c = &f.base;
    let adj_p = cache
        .star(f, sq.right)
        .ok_or_else(|| BCError::NoRightAdjoint(c.mor_name(sq.right).to_string()))?;
    let adj_q = cache
        .star(f, sq.left)
        .ok_or_else(|| BCError::NoRightAdjoint(c.mor_name(sq.left).to_string()))?;
    let i_star = f.restriction(sq.bottom);
    let j_star = f.restriction(sq.top);
    let p_star_r = &adj_p.right;
    let q_star_r = &adj_q.right;

    // i^* p_star => q_star q^* i^* p_star = q_star j^* p^* p_star => q_star j^*
    let i_p = i_star.compose(p_star_r);
    let step1 = adj_q.unit.whisker_right(&i_p);
    let q_j = q_star_r.compose(j_star);
    let step2 = adj_p.counit.whisker_left(j_star).whisker_left(q_star_r);
    let mate = NatTransform { src: i_p, tgt: q_j, components: step2.then(&step1).components };
    Ok(BCWitness::from_mate(*sq, mate))
}

/// The double Beck-Chevalley mate i_sharp q_star => p_star j_sharp, defined
/// through the inverse of BC_sharp; errors if BC_sharp is not invertible.
pub fn bc_double(
    f: &CatFunctor,
    cache: &mut AdjointCache,
    sq: &CSquare,
) -> Result<BCWitness, BCError> {
    let c = &f.base;
    let sharp = bc_sharp(f, cache, sq)?;
    if !sharp.invertible {
        return Err(BCError::PrerequisiteMateNotInvertible(
            sharp.failing_component.unwrap_or_default(),
        ));
    }
    let inv = sharp.mate.inverted().expect("componentwise invertible");
    let adj_i = cache.sharp(f, sq.bottom).unwrap();
    let adj_j = cache.sharp(f, sq.top).unwrap();
    let adj_p = cache
        .star(f, sq.right)
        .ok_or_else(|| BCError::NoRightAdjoint(c.mor_name(sq.right).to_string()))?;
    let adj_q = cache
        .star(f, sq.left)
        .ok_or_else(|| BCError::NoRightAdjoint(c.mor_name(sq.left).to_string()))?;
    let i_sharp = &adj_i.left;
    let j_sharp = &adj_j.left;
    let p_star_r = &adj_p.right;
    let q_star_r = &adj_q.right;

    // i_sharp q_star => p_star p^* i_sharp q_star => p_star j_sharp q^* q_star => p_star j_sharp
    let src_fun = i_sharp.compose(q_star_r);
    let step1 = adj_p.unit.whisker_right(&src_fun);
    let step2 = inv.whisker_right(q_star_r).whisker_left(p_star_r);
    let step3 = adj_q.counit.whisker_left(j_sharp).whisker_left(p_star_r);
    let tgt_fun = p_star_r.compose(j_sharp);
    let mate = NatTransform {
        src: src_fun,
        tgt: tgt_fun,
        components: step3.then(&step2).then(&step1).components,
    };
    Ok(BCWitness::from_mate(*sq, mate))
}

/// One failed square in a biadjointability sweep.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SquareFailure {
    pub bottom: String,
    pub right: String,
    pub stage: String,
    pub component: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub checked: u64,
    pub untestable: u64,
    pub failures: Vec<SquareFailure>,
}

/// Aggregate verdicts for left I-adjointability, right P-adjointability, and
/// the mixed double condition, over canonical pullback squares.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiadjReport {
    pub left: SweepOutcome,
    pub right: SweepOutcome,
    pub mixed: SweepOutcome,
}

impl BiadjReport {
    pub fn passed(&self) -> bool {
        self.left.failures.is_empty()
            && self.right.failures.is_empty()
            && self.mixed.failures.is_empty()
    }
}

/// Enumerate canonical pullback squares with the relevant legs in I (resp.
/// P, resp. I and P mixed) and run the corresponding mate checks.
pub fn check_biadjointable(
    f: &CatFunctor,
    i_fam: &MorphismFamily,
    p_fam: &MorphismFamily,
) -> BiadjReport {
    let c = &f.base;
    let mut memo = PullbackMemo::new();
    let mut cache = AdjointCache::new();
    let mut report = BiadjReport {
        left: SweepOutcome::default(),
        right: SweepOutcome::default(),
        mixed: SweepOutcome::default(),
    };
    for m1 in c.morphisms() {
        for m2 in c.morphisms() {
            if c.tgt(m1) != c.tgt(m2) {
                continue;
            }
            let is_left = i_fam.contains(m1);
            let is_right = p_fam.contains(m2);
            let is_mixed = is_left && is_right;
            if !is_left && !is_right {
                continue;
            }
            let Some(sq) = canonical_square(c, &mut memo, m1, m2) else {
                if is_left {
                    report.left.untestable += 1;
                }
                if is_right {
                    report.right.untestable += 1;
                }
                if is_mixed {
                    report.mixed.untestable += 1;
                }
                continue;
            };
            if is_left {
                report.left.checked += 1;
                match bc_sharp(f, &mut cache, &sq) {
                    Err(e) => report.left.failures.push(SquareFailure {
                        bottom: c.mor_name(m1).to_string(),
                        right: c.mor_name(m2).to_string(),
                        stage: format!("bc_sharp: {e}"),
                        component: None,
                    }),
                    Ok(w) if !w.invertible => report.left.failures.push(SquareFailure {
                        bottom: c.mor_name(m1).to_string(),
                        right: c.mor_name(m2).to_string(),
                        stage: "bc_sharp not invertible".into(),
                        component: w.failing_component,
                    }),
                    Ok(_) => {}
                }
            }
            if is_right {
                report.right.checked += 1;
                match bc_star(f, &mut cache, &sq) {
                    Err(e) => report.right.failures.push(SquareFailure {
                        bottom: c.mor_name(m1).to_string(),
                        right: c.mor_name(m2).to_string(),
                        stage: format!("bc_star: {e}"),
                        component: None,
                    }),
                    Ok(w) if !w.invertible => report.right.failures.push(SquareFailure {
                        bottom: c.mor_name(m1).to_string(),
                        right: c.mor_name(m2).to_string(),
                        stage: "bc_star not invertible".into(),
                        component: w.failing_component,
                    }),
                    Ok(_) => {}
                }
            }
            if is_mixed {
                report.mixed.checked += 1;
                match bc_double(f, &mut cache, &sq) {
                    Err(e) => report.mixed.failures.push(SquareFailure {
                        bottom: c.mor_name(m1).to_string(),
                        right: c.mor_name(m2).to_string(),
                        stage: format!("bc_double: {e}"),
                        component: None,
                    }),
                    Ok(w) if !w.invertible => report.mixed.failures.push(SquareFailure {
                        bottom: c.mor_name(m1).to_string(),
                        right: c.mor_name(m2).to_string(),
                        stage: "bc_double not invertible".into(),
                        component: w.failing_component,
                    }),
                    Ok(_) => {}
                }
            }
        }
    }
    report
}

/// A strict morphism of CatFunctors over the same base: one fiberwise
/// functor per base object, commuting with restrictions on the nose.
#[derive(Clone)]
pub struct CatTransform {
    pub components: Vec<Functor>,
}

impl CatTransform {
    pub fn check_strict(&self, f: &CatFunctor, g: &CatFunctor) -> bool {
        let c = &f.base;
        if !c.same_as(&g.base) {
            return false;
        }
        c.objects().all(|o| {
            let comp = &self.components[o.idx()];
            comp.src.same_as(f.fiber(o)) && comp.tgt.same_as(g.fiber(o)) && comp.check().is_ok()
        }) && c.morphisms().all(|m| {
            let lhs = self.components[c.src(m).idx()].compose(f.restriction(m));
            let rhs = g.restriction(m).compose(&self.components[c.tgt(m).idx()]);
            lhs.same_as(&rhs)
        })
    }
}

/// Per-morphism verdicts for transformation adjointability: for i in I the
/// mate i_sharp alpha => alpha i_sharp must invert, dually for p in P.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransformReport {
    pub left: Vec<(String, bool, Option<String>)>,
    pub right: Vec<(String, bool, Option<String>)>,
    pub failures: Vec<SquareFailure>,
}

impl TransformReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
            && self.left.iter().all(|(_, ok, _)| *ok)
            && self.right.iter().all(|(_, ok, _)| *ok)
    }
}

pub fn check_transformation_biadjointable(
    f: &CatFunctor,
    g: &CatFunctor,
    alpha: &CatTransform,
    i_fam: &MorphismFamily,
    p_fam: &MorphismFamily,
) -> TransformReport {
    let c = &f.base;
    let mut fc = AdjointCache::new();
    let mut gc = AdjointCache::new();
    let mut report = TransformReport { left: Vec::new(), right: Vec::new(), failures: Vec::new() };
    for i in i_fam.members() {
        let name = c.mor_name(i).to_string();
        let (Some(adj_f), Some(adj_g)) = (fc.sharp(f, i), gc.sharp(g, i)) else {
            report.failures.push(SquareFailure {
                bottom: name.clone(),
                right: String::new(),
                stage: "missing left adjoint".into(),
                component: None,
            });
            continue;
        };
        // mate: i_sharp^G alpha_{Y'} => alpha_Y i_sharp^F over F(Y') -> G(Y)
        let (yp, y) = (c.src(i), c.tgt(i));
        let a_yp = &alpha.components[yp.idx()];
        let a_y = &alpha.components[y.idx()];
        // components at x in F(Y'):
        //   i#G(alpha_{Y'} eta^F_x) then eps^G at (alpha_Y i#F x)
        let step1 = adj_f.unit.whisker_left(a_yp).whisker_left(&adj_g.left);
        let tgt_fun = a_y.compose(&adj_f.left);
        let step2 = adj_g.counit.whisker_right(&tgt_fun);
        let mate = NatTransform {
            src: adj_g.left.compose(a_yp),
            tgt: tgt_fun,
            components: step2.then(&step1).components,
        };
        debug_assert!(mate.check().is_ok());
        let fail = mate.non_invertible_witness().map(|o| mate.src.src.object_name(o).to_string());
        report.left.push((name, fail.is_none(), fail));
    }
    for p in p_fam.members() {
        let name = c.mor_name(p).to_string();
        let (Some(adj_f), Some(adj_g)) = (fc.star(f, p), gc.star(g, p)) else {
            report.failures.push(SquareFailure {
                bottom: name.clone(),
                right: String::new(),
                stage: "missing right adjoint".into(),
                component: None,
            });
            continue;
        };
        // mate: alpha_Y p_star^F => p_star^G alpha_X
        let (x, y) = (c.src(p), c.tgt(p));
        let a_x = &alpha.components[x.idx()];
        let a_y = &alpha.components[y.idx()];
        let src_fun = a_y.compose(&adj_f.right);
        let step1 = adj_g.unit.whisker_right(&src_fun);
        let step2 = adj_f.counit.whisker_left(a_x).whisker_left(&adj_g.right);
        let mate = NatTransform {
            src: src_fun,
            tgt: adj_g.right.compose(a_x),
            components: step2.then(&step1).components,
        };
        debug_assert!(mate.check().is_ok());
        let fail = mate.non_invertible_witness().map(|o| mate.src.src.object_name(o).to_string());
        report.right.push((name, fail.is_none(), fail));
    }
    report
}

/// The canonical comparison delta_sharp => delta_star for a morphism whose
/// sharp adjoint is fully faithful (unit invertible); used for members of
/// I meet P, which at catalog scale are monomorphisms. Invertibility is
/// verified by the caller, never assumed.
pub fn ambidexterity_iso(
    sharp_adj: &Adjunction,
    star_adj: &Adjunction,
) -> Result<NatTransform, BCError> {
    // sharp_adj: d_sharp -| d^*; star_adj: d^* -| d_star
    let unit_inv = sharp_adj.unit.inverted().ok_or_else(|| {
        BCError::PrerequisiteMateNotInvertible("sharp unit not invertible".into())
    })?;
    let d_sharp = &sharp_adj.left;
    let d_star = &star_adj.right;
    // d_sharp => d_star d^* d_sharp => d_star
    let step1 = star_adj.unit.whisker_right(d_sharp);
    let step2 = unit_inv.whisker_left(d_star);
    Ok(NatTransform {
        src: d_sharp.clone(),
        tgt: d_star.clone(),
        components: step2.then(&step1).components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fincat::nat_iso_search;

    #[test]
    fn identity_adjunctions() {
        let c = catalog::gen_finset(2);
        let idf = Functor::identity(&c);
        let l = left_adjoint(&idf).unwrap();
        assert!(l.check_triangles());
        let r = right_adjoint(&idf).unwrap();
        assert!(r.check_triangles());
    }

    #[test]
    fn galois_connection_in_divisor_lattice() {
        // u = (- meet 4): down(12) -> down(4); left adjoint is the inclusion
        let sub = catalog::downset_indexing(&catalog::gen_divisor_lattice(12));
        let base = &sub.base;
        let four = base.object_by_name("d04").unwrap();
        let twelve = base.object_by_name("d12").unwrap();
        let m = base.hom(four, twelve)[0];
        let u = sub.restriction(m); // down(12) -> down(4)
        let adj = left_adjoint(u).unwrap();
        assert!(adj.check_triangles());
        // the left adjoint sends x in down(4) to x in down(12)
        let fib4 = sub.fiber(four);
        let fib12 = sub.fiber(twelve);
        for o in fib4.objects() {
            assert_eq!(fib12.object_name(adj.left.on_ob(o)), fib4.object_name(o));
        }
    }

    #[test]
    fn heyting_right_adjoint_of_meet() {
        // (- meet a) on the divisor lattice has a right adjoint (relative
        // pseudo-complement), found by pointwise terminal-object search
        let sub = catalog::downset_indexing(&catalog::gen_divisor_lattice(12));
        let base = &sub.base;
        let six = base.object_by_name("d06").unwrap();
        let twelve = base.object_by_name("d12").unwrap();
        let m = base.hom(six, twelve)[0];
        let u = sub.restriction(m);
        let adj = right_adjoint(u).unwrap();
        assert!(adj.check_triangles());
        // oracle: R(x) = max { y | 12 : gcd(y, 6) | x }
        let fib6 = sub.fiber(six);
        let fib12 = sub.fiber(twelve);
        let gcd = |mut a: u32, mut b: u32| {
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        };
        for o in fib6.objects() {
            let x: u32 = fib6.object_name(o)[1..].parse().unwrap();
            let oracle = [1u32, 2, 3, 4, 6, 12]
                .into_iter()
                .filter(|&y| x % gcd(y, 6) == 0)
                .max()
                .unwrap();
            let got: u32 = fib12.object_name(adj.right.on_ob(o))[1..].parse().unwrap();
            assert_eq!(got, oracle, "x={x}");
        }
    }

    #[test]
    fn no_left_adjoint_without_initial_object() {
        // u: 2-object discrete -> terminal has no left adjoint
        let disc = catalog::discrete_cat(&["a", "b"]);
        let term = catalog::terminal_cat();
        let u = Functor {
            src: disc.clone(),
            tgt: term.clone(),
            ob_map: disc.objects().map(|_| Ob(0)).collect(),
            mor_map: disc.morphisms().map(|_| Mor(0)).collect(),
        };
        // u goes disc -> term; a left adjoint to u would pick an initial
        // object of the comma, which does not exist... but careful: here we
        // need adjoints of maps INTO the discrete category. Use instead
        // v: term -> disc missing nothing; actually test u itself:
        assert!(left_adjoint(&u).is_none() || left_adjoint(&u).is_some());
        // the real test: w: disc -> disc swapping has adjoints, but the
        // unique functor disc -> 1 viewed as restriction of a two-point base:
        // left adjoint of u exists iff comma (pt down u) has initial object,
        // i.e. iff disc has an initial object: it does not.
        assert!(left_adjoint(&u).is_none());
    }

    #[test]
    fn subset_indexing_strict_and_bc_ground_truth() {
        let c = catalog::gen_finset(2);
        let sub = catalog::subset_poset_indexing(&c);
        sub.check_strict().unwrap();

        // identity square: mates are identities, invertible
        let mut memo = PullbackMemo::new();
        let mut cache = AdjointCache::new();
        let one = c.object_by_name("1").unwrap();
        let id1 = c.identity(one);
        let sq = canonical_square(&c, &mut memo, id1, id1).unwrap();
        let w = bc_sharp(&sub, &mut cache, &sq).unwrap();
        assert!(w.invertible);
        let w2 = bc_star(&sub, &mut cache, &sq).unwrap();
        assert!(w2.invertible);
        let w3 = bc_double(&sub, &mut cache, &sq).unwrap();
        assert!(w3.invertible);
    }

    #[test]
    fn bc_sharp_and_star_invertible_on_all_finset2_squares() {
        // classical exists/forall base change for pullback squares of sets
        let c = catalog::gen_finset(2);
        let sub = catalog::subset_poset_indexing(&c);
        let mut memo = PullbackMemo::new();
        let mut cache = AdjointCache::new();
        for m1 in c.morphisms() {
            for m2 in c.morphisms() {
                if c.tgt(m1) != c.tgt(m2) {
                    continue;
                }
                let Some(sq) = canonical_square(&c, &mut memo, m1, m2) else { continue };
                let ws = bc_sharp(&sub, &mut cache, &sq).unwrap();
                assert!(ws.invertible, "bc_sharp {} {}", c.mor_name(m1), c.mor_name(m2));
                let wt = bc_star(&sub, &mut cache, &sq).unwrap();
                assert!(wt.invertible, "bc_star {} {}", c.mor_name(m1), c.mor_name(m2));
            }
        }
    }

    #[test]
    fn bc_double_matches_elementwise_oracle_on_finset2() {
        // oracle: evaluate i(forall_q S) and forall_p(j S) elementwise over
        // all subsets of the pullback corner and compare
        let c = catalog::gen_finset(2);
        let sub = catalog::subset_poset_indexing(&c);
        let mut memo = PullbackMemo::new();
        let mut cache = AdjointCache::new();
        let mut disagreements = 0;
        let mut failures = 0;
        for m1 in c.morphisms() {
            for m2 in c.morphisms() {
                if c.tgt(m1) != c.tgt(m2) {
                    continue;
                }
                let Some(sq) = canonical_square(&c, &mut memo, m1, m2) else { continue };
                let got = bc_double(&sub, &mut cache, &sq).unwrap();
                let oracle = catalog::subset_double_bc_oracle(&c, sq.bottom, sq.right, sq.top, sq.left);
                if got.invertible != oracle {
                    disagreements += 1;
                }
                if !got.invertible {
                    failures += 1;
                }
            }
        }
        assert_eq!(disagreements, 0);
        // the mixed condition genuinely fails for non-jointly-surjective
        // cospans of injections, e.g. 0 -> 1 <- 0
        assert!(failures > 0);
    }

    #[test]
    fn adjoint_uniqueness_up_to_nat_iso() {
        // two left adjoints of the same functor are connected by a natural
        // isomorphism (here: the computed one against itself composed with
        // the canonical two-adjoints iso)
        let sub = catalog::downset_indexing(&catalog::gen_divisor_lattice(12));
        let base = &sub.base;
        let four = base.object_by_name("d04").unwrap();
        let twelve = base.object_by_name("d12").unwrap();
        let m = base.hom(four, twelve)[0];
        let u = sub.restriction(m);
        let a1 = left_adjoint(u).unwrap();
        let a2 = left_adjoint(u).unwrap();
        let theta = two_left_adjoints_iso(&a1, &a2);
        assert!(theta.check().is_ok());
        assert!(theta.is_invertible());
        assert!(nat_iso_search(&a1.left, &a2.left).is_some());
    }

    #[test]
    fn transformation_identity_passes() {
        let c = catalog::gen_finset(2);
        let sub = catalog::subset_poset_indexing(&c);
        let alpha = CatTransform {
            components: c.objects().map(|o| Functor::identity(sub.fiber(o))).collect(),
        };
        assert!(alpha.check_strict(&sub, &sub));
        let i = catalog::finset_injections(&c);
        let rep = check_transformation_biadjointable(&sub, &sub, &alpha, &i, &i);
        assert!(rep.passed());
    }
}
