//! Built-in example categories and morphism families: skeletal finite sets,
//! divisor lattices, finite G-sets for a given group table, and free
//! categories on a graph modulo relations. These feed every theorem-level
//! check, so their construction is deterministic down to identifier names.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::classes::MorphismFamily;
use crate::fincat::{FinCat, Mor, RawCategory};
use crate::{GuardExceeded, Guards};

/// The empty category.
pub fn empty_cat() -> Arc<FinCat> {
    FinCat::validate(&RawCategory { name: "empty".into(), ..Default::default() }).unwrap()
}

/// The terminal category: one object, one morphism.
pub fn terminal_cat() -> Arc<FinCat> {
    FinCat::validate(&RawCategory {
        name: "pt".into(),
        objects: vec!["*".into()],
        morphisms: vec![("id*".into(), "*".into(), "*".into())],
        identities: vec![("*".into(), "id*".into())],
        compositions: vec![("id*".into(), "id*".into(), "id*".into())],
    })
    .unwrap()
}

/// A discrete category on the given object names.
pub fn discrete_cat(names: &[&str]) -> Arc<FinCat> {
    let raw = RawCategory {
        name: "discrete".into(),
        objects: names.iter().map(|s| s.to_string()).collect(),
        morphisms: names.iter().map(|s| (format!("id_{s}"), s.to_string(), s.to_string())).collect(),
        identities: names.iter().map(|s| (s.to_string(), format!("id_{s}"))).collect(),
        compositions: names.iter().map(|s| (format!("id_{s}"), format!("id_{s}"), format!("id_{s}"))).collect(),
    };
    FinCat::validate(&raw).unwrap()
}

fn finset_mor_name(a: usize, b: usize, f: &[usize]) -> String {
    let digits: String = f.iter().map(|d| char::from(b'0' + *d as u8)).collect();
    format!("f{a}>{b}_{digits}")
}

/// Skeletal finite sets with objects {0, 1, ..., n} and all functions.
pub fn gen_finset(n: usize) -> Arc<FinCat> {
    assert!(n <= 6, "finset skeleton limited to single-digit sizes");
    let objects: Vec<String> = (0..=n).map(|k| k.to_string()).collect();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut fns: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            // all functions {0..a} -> {0..b}
            if a == 0 {
                fns.push((a, b, vec![]));
                continue;
            }
            if b == 0 {
                continue;
            }
            let mut f = vec![0usize; a];
            loop {
                fns.push((a, b, f.clone()));
                let mut k = 0;
                loop {
                    if k == a {
                        break;
                    }
                    f[k] += 1;
                    if f[k] < b {
                        break;
                    }
                    f[k] = 0;
                    k += 1;
                }
                if k == a {
                    break;
                }
            }
        }
    }
    for (a, b, f) in &fns {
        let name = finset_mor_name(*a, *b, f);
        morphisms.push((name.clone(), a.to_string(), b.to_string()));
        if a == b && f.iter().enumerate().all(|(i, &v)| i == v) {
            identities.push((a.to_string(), name));
        }
    }
    let mut compositions = Vec::new();
    for (a2, b2, g) in &fns {
        for (a1, b1, f) in &fns {
            if b1 != a2 {
                continue;
            }
            let h: Vec<usize> = f.iter().map(|&x| if g.is_empty() { 0 } else { g[x] }).collect();
            let h = if *a1 == 0 { vec![] } else { h };
            compositions.push((
                finset_mor_name(*a2, *b2, g),
                finset_mor_name(*a1, *b1, f),
                finset_mor_name(*a1, *b2, &h),
            ));
        }
    }
    let raw = RawCategory {
        name: format!("finset{n}"),
        objects,
        morphisms,
        identities,
        compositions,
    };
    FinCat::validate(&raw).unwrap()
}

/// Decode a finset morphism back into (source size, target size, graph).
pub fn finset_fn(cat: &FinCat, m: Mor) -> (usize, usize, Vec<usize>) {
    let name = cat.mor_name(m);
    let body = name.strip_prefix('f').expect("finset morphism name");
    let (sizes, digits) = body.split_once('_').unwrap();
    let (a, b) = sizes.split_once('>').unwrap();
    let a: usize = a.parse().unwrap();
    let b: usize = b.parse().unwrap();
    let f: Vec<usize> = digits.bytes().map(|d| (d - b'0') as usize).collect();
    debug_assert_eq!(f.len(), a);
    (a, b, f)
}

pub fn finset_is_injective(cat: &FinCat, m: Mor) -> bool {
    let (_, _, f) = finset_fn(cat, m);
    let mut seen = std::collections::BTreeSet::new();
    f.iter().all(|&v| seen.insert(v))
}

pub fn finset_is_surjective(cat: &FinCat, m: Mor) -> bool {
    let (_, b, f) = finset_fn(cat, m);
    let seen: std::collections::BTreeSet<usize> = f.iter().copied().collect();
    seen.len() == b
}

pub fn finset_injections(cat: &Arc<FinCat>) -> MorphismFamily {
    MorphismFamily::from_predicate(cat, "inj", |c, m| finset_is_injective(c, m))
}

pub fn finset_surjections(cat: &Arc<FinCat>) -> MorphismFamily {
    MorphismFamily::from_predicate(cat, "surj", |c, m| finset_is_surjective(c, m))
}

/// The divisor lattice of n as a poset category. Objects are zero-padded
/// divisors ("d01", "d02", ...), morphisms witness divisibility.
pub fn gen_divisor_lattice(n: u32) -> Arc<FinCat> {
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let oname = |d: u32| format!("d{d:02}");
    let mname = |a: u32, b: u32| format!("le_{a:02}_{b:02}");
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut compositions = Vec::new();
    for &a in &divisors {
        for &b in &divisors {
            if b % a == 0 {
                morphisms.push((mname(a, b), oname(a), oname(b)));
                if a == b {
                    identities.push((oname(a), mname(a, b)));
                }
            }
        }
    }
    for &a in &divisors {
        for &b in &divisors {
            if b % a != 0 {
                continue;
            }
            for &c in &divisors {
                if c % b == 0 {
                    compositions.push((mname(b, c), mname(a, b), mname(a, c)));
                }
            }
        }
    }
    let raw = RawCategory {
        name: format!("divlat{n}"),
        objects: divisors.iter().map(|&d| oname(d)).collect(),
        morphisms,
        identities,
        compositions,
    };
    FinCat::validate(&raw).unwrap()
}

/// Decode a divisor-lattice object name back to the divisor.
pub fn divlat_value(cat: &FinCat, o: crate::fincat::Ob) -> u32 {
    cat.object_name(o).strip_prefix('d').unwrap().parse().unwrap()
}

/// A finite group presented by its multiplication table; element 0 is the
/// unit. `table[g][h]` = g * h.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub name: String,
    pub table: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn c2() -> GroupTable {
        GroupTable { name: "C2".into(), table: vec![vec![0, 1], vec![1, 0]] }
    }
}

/// One G-set: underlying set {0..size}, one permutation per group element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct GAction {
    size: usize,
    perms: Vec<Vec<usize>>,
}

impl GAction {
    fn encode(&self) -> String {
        let body: String = self
            .perms
            .iter()
            .map(|p| p.iter().map(|&v| char::from(b'0' + v as u8)).collect::<String>())
            .collect::<Vec<_>>()
            .join("-");
        format!("x{}_{}", self.size, body)
    }
}

fn enumerate_actions(g: &GroupTable, size: usize) -> Vec<GAction> {
    // all homomorphisms G -> Sym(size), brute force over assignments
    let order = g.order();
    let perms: Vec<Vec<usize>> = {
        let mut all = Vec::new();
        let mut p: Vec<usize> = (0..size).collect();
        loop {
            all.push(p.clone());
            // next permutation
            if !next_permutation(&mut p) {
                break;
            }
        }
        all
    };
    let mut out = Vec::new();
    let mut assign: Vec<usize> = vec![0; order];
    fn rec(
        g: &GroupTable,
        perms: &[Vec<usize>],
        assign: &mut Vec<usize>,
        k: usize,
        size: usize,
        out: &mut Vec<GAction>,
    ) {
        let order = g.order();
        if k == order {
            out.push(GAction { size, perms: assign.iter().map(|&i| perms[i].clone()).collect() });
            return;
        }
        'cand: for (pi, _) in perms.iter().enumerate() {
            assign[k] = pi;
            // check table constraints among assigned elements
            for a in 0..=k {
                for b in 0..=k {
                    let c = g.table[a][b];
                    if c <= k {
                        let pa = &perms[assign[a]];
                        let pb = &perms[assign[b]];
                        let pc = &perms[assign[c]];
                        // action of (a * b) = action of a after action of b
                        for x in 0..size {
                            if pa[pb[x]] != pc[x] {
                                continue 'cand;
                            }
                        }
                    }
                }
            }
            rec(g, perms, assign, k + 1, size, out);
        }
    }
    // unit must act trivially
    let id_ix = perms.iter().position(|p| p.iter().enumerate().all(|(i, &v)| i == v)).unwrap();
    assign[0] = id_ix;
    rec_from_one(g, &perms, &mut assign, size, &mut out);
    fn rec_from_one(
        g: &GroupTable,
        perms: &[Vec<usize>],
        assign: &mut Vec<usize>,
        size: usize,
        out: &mut Vec<GAction>,
    ) {
        rec(g, perms, assign, 1, size, out);
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn actions_isomorphic(a: &GAction, b: &GAction) -> bool {
    if a.size != b.size {
        return false;
    }
    let mut bij: Vec<usize> = (0..a.size).collect();
    loop {
        let equivariant = a.perms.iter().zip(b.perms.iter()).all(|(pa, pb)| {
            (0..a.size).all(|x| bij[pa[x]] == pb[bij[x]])
        });
        if equivariant {
            return true;
        }
        if !next_permutation(&mut bij) {
            return false;
        }
    }
}

/// Finite G-sets of size at most `bound`, one object per isomorphism class,
/// with all equivariant maps.
pub fn gen_gset(group: &GroupTable, bound: usize) -> Arc<FinCat> {
    assert!(bound <= 4);
    let mut reps: Vec<GAction> = Vec::new();
    for size in 0..=bound {
        let mut classes: Vec<GAction> = Vec::new();
        for act in enumerate_actions(group, size) {
            if !classes.iter().any(|c| actions_isomorphic(c, &act)) {
                classes.push(act);
            }
        }
        classes.sort();
        reps.extend(classes);
    }
    let obj_names: Vec<String> = reps.iter().map(|a| a.encode()).collect();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut meta: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for (i, sa) in reps.iter().enumerate() {
        for (j, sb) in reps.iter().enumerate() {
            // all equivariant functions sa -> sb
            let funcs = equivariant_functions(sa, sb);
            for f in funcs {
                let digits: String = f.iter().map(|&v| char::from(b'0' + v as u8)).collect();
                let name = format!("e{i}>{j}_{digits}");
                morphisms.push((name.clone(), obj_names[i].clone(), obj_names[j].clone()));
                meta.push((i, j, f.clone()));
                if i == j && f.iter().enumerate().all(|(x, &v)| x == v) {
                    identities.push((obj_names[i].clone(), name));
                }
            }
        }
    }
    let mut compositions = Vec::new();
    for (gi, (i2, j2, g)) in meta.iter().enumerate() {
        for (fi, (i1, j1, f)) in meta.iter().enumerate() {
            if j1 != i2 {
                continue;
            }
            let h: Vec<usize> = f.iter().map(|&x| g[x]).collect();
            let digits: String = h.iter().map(|&v| char::from(b'0' + v as u8)).collect();
            let name = format!("e{i1}>{j2}_{digits}");
            compositions.push((morphisms[gi].0.clone(), morphisms[fi].0.clone(), name));
        }
    }
    let raw = RawCategory {
        name: format!("{}sets{}", group.name, bound),
        objects: obj_names,
        morphisms,
        identities,
        compositions,
    };
    FinCat::validate(&raw).unwrap()
}

fn equivariant_functions(a: &GAction, b: &GAction) -> Vec<Vec<usize>> {
    if a.size == 0 {
        return vec![vec![]];
    }
    if b.size == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut f = vec![0usize; a.size];
    loop {
        let equivariant = a
            .perms
            .iter()
            .zip(b.perms.iter())
            .all(|(pa, pb)| (0..a.size).all(|x| f[pa[x]] == pb[f[x]]));
        if equivariant {
            out.push(f.clone());
        }
        let mut k = 0;
        loop {
            if k == a.size {
                break;
            }
            f[k] += 1;
            if f[k] < b.size {
                break;
            }
            f[k] = 0;
            k += 1;
        }
        if k == a.size {
            break;
        }
    }
    out
}

/// The C2-sets catalog entry: sizes <= 2.
pub fn gen_gset_c2() -> Arc<FinCat> {
    gen_gset(&GroupTable::c2(), 2)
}

pub fn gset_is_injective(cat: &FinCat, m: Mor) -> bool {
    let name = cat.mor_name(m);
    let digits = name.split_once('_').unwrap().1;
    let mut seen = std::collections::BTreeSet::new();
    digits.bytes().all(|d| seen.insert(d))
}

pub fn gset_injections(cat: &Arc<FinCat>) -> MorphismFamily {
    MorphismFamily::from_predicate(cat, "inj", |c, m| gset_is_injective(c, m))
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum FreeCatError {
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
    #[error("relation closure diverges (more than {0} morphism classes)")]
    RelationClosureDiverges(u64),
}

/// The free category on a graph, modulo relations between parallel paths.
/// Paths are words of edge names (composition order: later edges leftmost).
pub fn gen_free_category(
    vertices: &[&str],
    edges: &[(&str, &str, &str)],
    relations: &[(Vec<&str>, Vec<&str>)],
    guards: &Guards,
) -> Result<Arc<FinCat>, FreeCatError> {
    // enumerate path words breadth-first, rewriting with relations oriented
    // toward the lexicographically smaller word until closure stabilizes
    let vname: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
    let vix: BTreeMap<&str, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edge_data: Vec<(String, usize, usize)> = edges
        .iter()
        .map(|&(n, s, t)| (n.to_string(), vix[s], vix[t]))
        .collect();

    // canonical form: repeatedly replace any occurrence of one side of a
    // relation by the lexicographically smaller side
    let rels: Vec<(Vec<String>, Vec<String>)> = relations
        .iter()
        .map(|(a, b)| {
            let a: Vec<String> = a.iter().map(|s| s.to_string()).collect();
            let b: Vec<String> = b.iter().map(|s| s.to_string()).collect();
            if a <= b {
                (b, a)
            } else {
                (a, b)
            }
        })
        .collect();
    let normalize = |word: &[String]| -> Vec<String> {
        let mut w = word.to_vec();
        let mut changed = true;
        let mut steps = 0;
        while changed && steps < 10_000 {
            changed = false;
            steps += 1;
            for (from, to) in &rels {
                if from.is_empty() {
                    continue;
                }
                for start in 0..w.len().saturating_sub(from.len() - 1) {
                    if w[start..start + from.len()] == from[..] {
                        let mut nw = w[..start].to_vec();
                        nw.extend(to.iter().cloned());
                        nw.extend(w[start + from.len()..].iter().cloned());
                        if nw < w {
                            w = nw;
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
        w
    };

    // breadth-first closure over normal forms
    let mut classes: Vec<(usize, usize, Vec<String>)> = Vec::new(); // (src, tgt, normal word)
    for (i, _) in vname.iter().enumerate() {
        classes.push((i, i, vec![]));
    }
    let mut frontier: Vec<(usize, usize, Vec<String>)> = classes.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (s, t, w) in frontier {
            for (en, es, et) in &edge_data {
                if *es != t {
                    continue;
                }
                let mut nw = vec![en.clone()];
                nw.extend(w.iter().cloned());
                let mut nw = normalize(&nw);
                nw = normalize(&nw);
                let cand = (s, *et, nw);
                if !classes.contains(&cand) {
                    if classes.len() as u64 >= guards.max_enum.min(10_000) {
                        return Err(FreeCatError::RelationClosureDiverges(
                            guards.max_enum.min(10_000),
                        ));
                    }
                    classes.push(cand.clone());
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    classes.sort();
    let word_name = |w: &[String]| -> String {
        if w.is_empty() {
            "~".to_string()
        } else {
            w.join(".")
        }
    };
    let mname = |s: usize, t: usize, w: &[String]| format!("p_{}_{}_{}", vname[s], vname[t], word_name(w));
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    for (s, t, w) in &classes {
        let name = mname(*s, *t, w);
        morphisms.push((name.clone(), vname[*s].clone(), vname[*t].clone()));
        if s == t && w.is_empty() {
            identities.push((vname[*s].clone(), name));
        }
    }
    let mut compositions = Vec::new();
    for (s2, t2, w2) in &classes {
        for (s1, t1, w1) in &classes {
            if t1 != s2 {
                continue;
            }
            let mut w = w2.clone();
            w.extend(w1.iter().cloned());
            let w = normalize(&w);
            if !classes.contains(&(*s1, *t2, w.clone())) {
                return Err(FreeCatError::RelationClosureDiverges(guards.max_enum.min(10_000)));
            }
            compositions.push((mname(*s2, *t2, w2), mname(*s1, *t1, w1), mname(*s1, *t2, &w)));
        }
    }
    let raw = RawCategory {
        name: "free".into(),
        objects: vname.clone(),
        morphisms,
        identities,
        compositions,
    };
    FinCat::validate(&raw).map_err(|_| FreeCatError::RelationClosureDiverges(0))
}

// ---------------------------------------------------------------------------
// indexings
// ---------------------------------------------------------------------------

fn mask_name(n: usize, mask: u32) -> String {
    let bits: String = (0..n).map(|i| if mask & (1 << i) != 0 { '1' } else { '0' }).collect();
    format!("u{bits}")
}

/// Decode a subset-poset fiber object name back to its bitmask.
pub fn subset_mask(cat: &FinCat, o: crate::fincat::Ob) -> u32 {
    let name = cat.object_name(o);
    let mut mask = 0u32;
    for (i, b) in name[1..].bytes().enumerate() {
        if b == b'1' {
            mask |= 1 << i;
        }
    }
    mask
}

/// The poset of subsets of an n-element set as a category.
pub fn subset_fiber(n: usize) -> Arc<FinCat> {
    let total = 1u32 << n;
    let objects: Vec<String> = (0..total).map(|m| mask_name(n, m)).collect();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mname = |s: u32, t: u32| format!("c{}_{}", mask_name(n, s), mask_name(n, t));
    for s in 0..total {
        for t in 0..total {
            if s & !t == 0 {
                morphisms.push((mname(s, t), mask_name(n, s), mask_name(n, t)));
                if s == t {
                    identities.push((mask_name(n, s), mname(s, t)));
                }
            }
        }
    }
    let mut compositions = Vec::new();
    for s in 0..total {
        for t in 0..total {
            if s & !t != 0 {
                continue;
            }
            for r in 0..total {
                if t & !r == 0 {
                    compositions.push((mname(t, r), mname(s, t), mname(s, r)));
                }
            }
        }
    }
    let raw = RawCategory { name: format!("sub{n}"), objects, morphisms, identities, compositions };
    FinCat::validate(&raw).unwrap()
}

/// The subset-poset indexing over a finset skeleton: the fiber at n is the
/// poset of subsets of an n-element set, with restriction by preimage
/// (strictly functorial on the nose).
pub fn subset_poset_indexing(c: &Arc<FinCat>) -> crate::catfun::CatFunctor {
    let fibers: Vec<Arc<FinCat>> = c
        .objects()
        .map(|o| subset_fiber(c.object_name(o).parse().unwrap()))
        .collect();
    let res = c
        .morphisms()
        .map(|m| {
            let (a, _b, graph) = finset_fn(c, m);
            let src_f = &fibers[c.tgt(m).idx()];
            let tgt_f = &fibers[c.src(m).idx()];
            let preimage = |s: u32| -> u32 {
                let mut out = 0u32;
                for (x, &fx) in graph.iter().enumerate() {
                    if s & (1 << fx) != 0 {
                        out |= 1 << x;
                    }
                }
                out
            };
            let ob_map: Vec<crate::fincat::Ob> = src_f
                .objects()
                .map(|o| {
                    tgt_f.object_by_name(&mask_name(a, preimage(subset_mask(src_f, o)))).unwrap()
                })
                .collect();
            let mor_map: Vec<Mor> = src_f
                .morphisms()
                .map(|mo| {
                    let s = preimage(subset_mask(src_f, src_f.src(mo)));
                    let t = preimage(subset_mask(src_f, src_f.tgt(mo)));
                    tgt_f
                        .mor_by_name(&format!("c{}_{}", mask_name(a, s), mask_name(a, t)))
                        .unwrap()
                })
                .collect();
            crate::fincat::Functor { src: src_f.clone(), tgt: tgt_f.clone(), ob_map, mor_map }
        })
        .collect();
    crate::catfun::CatFunctor { base: c.clone(), fibers, res }
}

/// The down-set self-indexing of a divisor lattice: the fiber at d is the
/// divisor lattice of d, with restriction x -> gcd(x, d').
pub fn downset_indexing(d: &Arc<FinCat>) -> crate::catfun::CatFunctor {
    let gcd = |mut a: u32, mut b: u32| {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    let fibers: Vec<Arc<FinCat>> =
        d.objects().map(|o| gen_divisor_lattice(divlat_value(d, o))).collect();
    let res = d
        .morphisms()
        .map(|m| {
            let a = divlat_value(d, d.src(m));
            let src_f = &fibers[d.tgt(m).idx()];
            let tgt_f = &fibers[d.src(m).idx()];
            let ob_map: Vec<crate::fincat::Ob> = src_f
                .objects()
                .map(|o| {
                    let x = divlat_value(src_f, o);
                    tgt_f.object_by_name(&format!("d{:02}", gcd(x, a))).unwrap()
                })
                .collect();
            let mor_map: Vec<Mor> = src_f
                .morphisms()
                .map(|mo| {
                    let x = divlat_value(src_f, src_f.src(mo));
                    let y = divlat_value(src_f, src_f.tgt(mo));
                    tgt_f
                        .mor_by_name(&format!("le_{:02}_{:02}", gcd(x, a), gcd(y, a)))
                        .unwrap()
                })
                .collect();
            crate::fincat::Functor { src: src_f.clone(), tgt: tgt_f.clone(), ob_map, mor_map }
        })
        .collect();
    crate::catfun::CatFunctor { base: d.clone(), fibers, res }
}

/// Elementwise oracle for the double Beck-Chevalley comparison over the
/// subset-poset indexing: for the square with bottom i, right p, top j,
/// left q (apex = src of top/left), evaluate i(forall_q S) and
/// forall_p(j S) over every subset S of the apex and report equality.
pub fn subset_double_bc_oracle(c: &FinCat, bottom: Mor, right: Mor, top: Mor, left: Mor) -> bool {
    let (apex_sz, yp_sz, i_graph) = {
        let (a, b, g) = finset_fn(c, bottom);
        let _ = (a, b);
        let apex = finset_fn(c, top).0;
        (apex, a, g)
    };
    let (_, y_sz, p_graph) = finset_fn(c, right);
    let (_, x_sz, j_graph) = finset_fn(c, top);
    let (_, _, q_graph) = finset_fn(c, left);
    let forall = |graph: &[usize], tgt_sz: usize, s: u32| -> u32 {
        let mut out = 0u32;
        for y in 0..tgt_sz {
            let all_in = graph
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == y)
                .all(|(x, _)| s & (1 << x) != 0);
            if all_in {
                out |= 1 << y;
            }
        }
        out
    };
    let image = |graph: &[usize], s: u32| -> u32 {
        let mut out = 0u32;
        for (x, &v) in graph.iter().enumerate() {
            if s & (1 << x) != 0 {
                out |= 1 << v;
            }
        }
        out
    };
    for s in 0..(1u32 << apex_sz) {
        let lhs = image(&i_graph, forall(&q_graph, yp_sz, s));
        let rhs = forall(&p_graph, y_sz, image(&j_graph, s));
        let _ = x_sz;
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Elementwise oracle for the dual projection formula over the subset-poset
/// indexing: for p with graph g, test T meet forall_p(S) = forall_p(preimage
/// of T meet S) over all subset pairs.
pub fn subset_dual_projection_oracle(c: &FinCat, p: Mor) -> bool {
    let (a_sz, b_sz, graph) = finset_fn(c, p);
    let forall = |s: u32| -> u32 {
        let mut out = 0u32;
        for y in 0..b_sz {
            let all_in = graph
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == y)
                .all(|(x, _)| s & (1 << x) != 0);
            if all_in {
                out |= 1 << y;
            }
        }
        out
    };
    let preimage = |t: u32| -> u32 {
        let mut out = 0u32;
        for (x, &v) in graph.iter().enumerate() {
            if t & (1 << v) != 0 {
                out |= 1 << x;
            }
        }
        out
    };
    for t in 0..(1u32 << b_sz) {
        for s in 0..(1u32 << a_sz) {
            if t & forall(s) != forall(preimage(t) & s) {
                return false;
            }
        }
    }
    true
}

/// A renamed copy of a category (object and morphism identifiers rewritten),
/// used by relabeling-invariance checks. Returns the new category.
pub fn relabeled(
    cat: &FinCat,
    ob_rename: impl Fn(&str) -> String,
    mor_rename: impl Fn(&str) -> String,
) -> Arc<FinCat> {
    let raw = cat.to_raw();
    let raw = RawCategory {
        name: format!("{}_relab", raw.name),
        objects: raw.objects.iter().map(|o| ob_rename(o)).collect(),
        morphisms: raw
            .morphisms
            .iter()
            .map(|(m, s, t)| (mor_rename(m), ob_rename(s), ob_rename(t)))
            .collect(),
        identities: raw.identities.iter().map(|(o, m)| (ob_rename(o), mor_rename(m))).collect(),
        compositions: raw
            .compositions
            .iter()
            .map(|(g, f, h)| (mor_rename(g), mor_rename(f), mor_rename(h)))
            .collect(),
    };
    FinCat::validate(&raw).expect("relabeled category is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finset_counts() {
        let c = gen_finset(2);
        assert_eq!(c.n_objects(), 3);
        assert_eq!(c.n_morphisms(), 11);
        let c3 = gen_finset(3);
        assert_eq!(c3.n_objects(), 4);
        assert_eq!(c3.n_morphisms(), 60);
    }

    #[test]
    fn divisor_lattice_counts() {
        let d = gen_divisor_lattice(12);
        assert_eq!(d.n_objects(), 6);
        assert_eq!(d.n_morphisms(), 18);
    }

    #[test]
    fn c2_sets_counts() {
        // Oracle: enumerate C2-sets of size <= 2 up to equivariant iso:
        // empty, the point, two points, the free orbit.
        let g = gen_gset_c2();
        assert_eq!(g.n_objects(), 4);
        // spot-check homs: no equivariant map from a fixed point into the
        // free orbit
        let pt = g.objects().find(|&o| g.object_name(o).starts_with("x1")).unwrap();
        let free = g
            .objects()
            .find(|&o| {
                let n = g.object_name(o);
                n.starts_with("x2") && !n.ends_with("01")
            })
            .unwrap();
        assert_eq!(g.hom(pt, free).len(), 0);
        // the free orbit has exactly 2 equivariant endomorphisms
        assert_eq!(g.hom(free, free).len(), 2);
    }

    #[test]
    fn free_category_on_commuting_square() {
        let g = gen_free_category(
            &["a", "b", "c", "d"],
            &[("e1", "a", "b"), ("e2", "b", "d"), ("e3", "a", "c"), ("e4", "c", "d")],
            &[(vec!["e2", "e1"], vec!["e4", "e3"])],
            &Guards::default(),
        )
        .unwrap();
        assert_eq!(g.n_objects(), 4);
        // morphisms: 4 identities + e1..e4 + one diagonal class
        assert_eq!(g.n_morphisms(), 9);
    }

    #[test]
    fn free_category_divergence_detected() {
        // a loop with no relations diverges
        let err = gen_free_category(
            &["a"],
            &[("e", "a", "a")],
            &[],
            &Guards { max_objects: 64, max_enum: 50 },
        )
        .unwrap_err();
        assert!(matches!(err, FreeCatError::RelationClosureDiverges(_)));
    }

    #[test]
    fn relabel_roundtrip() {
        let c = gen_finset(2);
        let r = relabeled(&c, |o| format!("z{o}"), |m| format!("z{m}"));
        assert_eq!(r.n_objects(), c.n_objects());
        assert_eq!(r.n_morphisms(), c.n_morphisms());
    }
}
