//! Validated finite categories, functors, and natural transformations.
//!
//! A [`FinCat`] is a finite category presented by identifiers: object names,
//! morphism names with endpoints, chosen identities, and a composition table
//! that is total on composable pairs. Validation checks identity laws and
//! associativity exhaustively. Objects and morphisms are stored sorted by
//! name, so index order is identifier order and "least" tie-breaks are
//! deterministic everywhere.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{GuardExceeded, Guards};

/// Object index into a [`FinCat`]; ordered like the object identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Ob(pub u32);

/// Morphism index into a [`FinCat`]; ordered like the morphism identifier.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Mor(pub u32);

impl Ob {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl Mor {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
struct MorData {
    name: String,
    src: Ob,
    tgt: Ob,
}

/// Raw, unvalidated category description.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub name: String,
    pub objects: Vec<String>,
    /// (morphism name, source object name, target object name)
    pub morphisms: Vec<(String, String, String)>,
    /// (object name, identity morphism name)
    pub identities: Vec<(String, String)>,
    /// (g, f, h) meaning g . f = h
    pub compositions: Vec<(String, String, String)>,
}

/// A violated category axiom, with the witnessing identifiers.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum CatViolation {
    #[error("duplicate identifier `{0}`")]
    DuplicateIdentifier(String),
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("morphism `{mor}` has dangling endpoint `{endpoint}`")]
    DanglingEndpoint { mor: String, endpoint: String },
    #[error("missing composite for g=`{g}`, f=`{f}`")]
    MissingComposite { g: String, f: String },
    #[error("composite `{h}` of g=`{g}`, f=`{f}` has wrong endpoints")]
    BadComposite { g: String, f: String, h: String },
    #[error("composition entry for non-composable pair g=`{g}`, f=`{f}`")]
    NonComposablePair { g: String, f: String },
    #[error("bad identity on object `{object}` (witness morphism `{witness}`)")]
    BadIdentity { object: String, witness: String },
    #[error("missing identity on object `{object}`")]
    MissingIdentity { object: String },
    #[error("non-associative triple h=`{h}`, g=`{g}`, f=`{f}`")]
    NonAssociative { f: String, g: String, h: String },
}

enum CompTable {
    Dense { n: usize, table: Vec<u32> },
    /// sorted by key (g << 32 | f) for binary-search lookup
    Sparse(Vec<(u64, u32)>),
}

const NONE_SENTINEL: u32 = u32::MAX;

fn sparse_key(g: Mor, f: Mor) -> u64 {
    ((g.0 as u64) << 32) | f.0 as u64
}

impl CompTable {
    fn get(&self, g: Mor, f: Mor) -> Option<Mor> {
        match self {
            CompTable::Dense { n, table } => {
                let v = table[g.idx() * n + f.idx()];
                if v == NONE_SENTINEL {
                    None
                } else {
                    Some(Mor(v))
                }
            }
            CompTable::Sparse(entries) => {
                let key = sparse_key(g, f);
                entries
                    .binary_search_by_key(&key, |&(k, _)| k)
                    .ok()
                    .map(|i| Mor(entries[i].1))
            }
        }
    }
}

/// A validated finite category.
pub struct FinCat {
    pub name: String,
    objects: Vec<String>,
    mors: Vec<MorData>,
    identity: Vec<Mor>,
    comp: CompTable,
    /// hom[src * n_obj + tgt] = sorted morphism ids
    hom: Vec<Vec<Mor>>,
    /// two-sided inverse, if the morphism is invertible
    inverse: Vec<Option<Mor>>,
    /// sorted isomorphisms into each object
    isos_into: Vec<Vec<Mor>>,
}

impl std::fmt::Debug for FinCat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "FinCat({}, {} objects, {} morphisms)",
            self.name,
            self.objects.len(),
            self.mors.len()
        )
    }
}

impl FinCat {
    /// Validate a raw description into a category, or report every violated
    /// axiom with its witnesses.
    pub fn validate(raw: &RawCategory) -> Result<Arc<FinCat>, Vec<CatViolation>> {
        let mut errs = Vec::new();

        let mut objects = raw.objects.clone();
        objects.sort();
        for w in objects.windows(2) {
            if w[0] == w[1] {
                errs.push(CatViolation::DuplicateIdentifier(w[0].clone()));
            }
        }
        let ob_ix: BTreeMap<&str, Ob> =
            objects.iter().enumerate().map(|(i, n)| (n.as_str(), Ob(i as u32))).collect();

        let mut mor_names: Vec<&String> = raw.morphisms.iter().map(|(n, _, _)| n).collect();
        mor_names.sort();
        for w in mor_names.windows(2) {
            if w[0] == w[1] {
                errs.push(CatViolation::DuplicateIdentifier(w[0].clone()));
            }
        }

        let mut sorted_mors: Vec<&(String, String, String)> = raw.morphisms.iter().collect();
        sorted_mors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut mors = Vec::with_capacity(sorted_mors.len());
        let mut mor_ix: BTreeMap<&str, Mor> = BTreeMap::new();
        for (i, (name, src, tgt)) in sorted_mors.iter().enumerate() {
            let s = ob_ix.get(src.as_str()).copied();
            let t = ob_ix.get(tgt.as_str()).copied();
            if s.is_none() {
                errs.push(CatViolation::DanglingEndpoint { mor: name.clone(), endpoint: src.clone() });
            }
            if t.is_none() {
                errs.push(CatViolation::DanglingEndpoint { mor: name.clone(), endpoint: tgt.clone() });
            }
            mors.push(MorData {
                name: name.clone(),
                src: s.unwrap_or(Ob(0)),
                tgt: t.unwrap_or(Ob(0)),
            });
            mor_ix.insert(name.as_str(), Mor(i as u32));
        }
        if !errs.is_empty() {
            return Err(errs);
        }

        let n_obj = objects.len();
        let n_mor = mors.len();

        // identities
        let mut identity: Vec<Option<Mor>> = vec![None; n_obj];
        for (ob, id_name) in &raw.identities {
            let Some(&o) = ob_ix.get(ob.as_str()) else {
                errs.push(CatViolation::UnknownReference(ob.clone()));
                continue;
            };
            let Some(&m) = mor_ix.get(id_name.as_str()) else {
                errs.push(CatViolation::UnknownReference(id_name.clone()));
                continue;
            };
            if mors[m.idx()].src != o || mors[m.idx()].tgt != o {
                errs.push(CatViolation::BadIdentity { object: ob.clone(), witness: id_name.clone() });
            }
            identity[o.idx()] = Some(m);
        }
        for (i, id) in identity.iter().enumerate() {
            if id.is_none() {
                errs.push(CatViolation::MissingIdentity { object: objects[i].clone() });
            }
        }

        // composition table
        let dense = n_mor <= 2048;
        let mut dense_table = if dense { vec![NONE_SENTINEL; n_mor * n_mor] } else { Vec::new() };
        let mut sparse_table: HashMap<(u32, u32), u32> = HashMap::new();
        for (g, f, h) in &raw.compositions {
            let (Some(&gm), Some(&fm), Some(&hm)) = (
                mor_ix.get(g.as_str()),
                mor_ix.get(f.as_str()),
                mor_ix.get(h.as_str()),
            ) else {
                for nm in [g, f, h] {
                    if !mor_ix.contains_key(nm.as_str()) {
                        errs.push(CatViolation::UnknownReference(nm.clone()));
                    }
                }
                continue;
            };
            if mors[fm.idx()].tgt != mors[gm.idx()].src {
                errs.push(CatViolation::NonComposablePair { g: g.clone(), f: f.clone() });
                continue;
            }
            if mors[hm.idx()].src != mors[fm.idx()].src || mors[hm.idx()].tgt != mors[gm.idx()].tgt {
                errs.push(CatViolation::BadComposite { g: g.clone(), f: f.clone(), h: h.clone() });
                continue;
            }
            if dense {
                dense_table[gm.idx() * n_mor + fm.idx()] = hm.0;
            } else {
                sparse_table.insert((gm.0, fm.0), hm.0);
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }

        let comp = if dense {
            CompTable::Dense { n: n_mor, table: dense_table }
        } else {
            let mut entries: Vec<(u64, u32)> = sparse_table
                .into_iter()
                .map(|((g, f), h)| (sparse_key(Mor(g), Mor(f)), h))
                .collect();
            entries.sort_unstable_by_key(|&(k, _)| k);
            CompTable::Sparse(entries)
        };
        let identity: Vec<Mor> = identity.into_iter().map(|o| o.unwrap()).collect();

        // totality on composable pairs
        {
            let mut into: Vec<Vec<Mor>> = vec![Vec::new(); n_obj];
            for (i, m) in mors.iter().enumerate() {
                into[m.tgt.idx()].push(Mor(i as u32));
            }
            for g in 0..n_mor {
                let g = Mor(g as u32);
                for &f in &into[mors[g.idx()].src.idx()] {
                    if comp.get(g, f).is_none() {
                        errs.push(CatViolation::MissingComposite {
                            g: mors[g.idx()].name.clone(),
                            f: mors[f.idx()].name.clone(),
                        });
                    }
                }
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }

        for (i, m) in mors.iter().enumerate() {
            let m_id = Mor(i as u32);
            let idl = identity[m.tgt.idx()];
            let idr = identity[m.src.idx()];
            if comp.get(idl, m_id) != Some(m_id) {
                errs.push(CatViolation::BadIdentity {
                    object: objects[m.tgt.idx()].clone(),
                    witness: m.name.clone(),
                });
            }
            if comp.get(m_id, idr) != Some(m_id) {
                errs.push(CatViolation::BadIdentity {
                    object: objects[m.src.idx()].clone(),
                    witness: m.name.clone(),
                });
            }
        }

        // associativity: h o (g o f) = (h o g) o f, over incidence lists
        let mut into: Vec<Vec<Mor>> = vec![Vec::new(); n_obj];
        for (i, m) in mors.iter().enumerate() {
            into[m.tgt.idx()].push(Mor(i as u32));
        }
        'outer: for h in 0..n_mor {
            let h = Mor(h as u32);
            for &g in &into[mors[h.idx()].src.idx()] {
                let hg = comp.get(h, g).unwrap();
                for &f in &into[mors[g.idx()].src.idx()] {
                    let gf = comp.get(g, f).unwrap();
                    if comp.get(h, gf) != comp.get(hg, f) {
                        errs.push(CatViolation::NonAssociative {
                            f: mors[f.idx()].name.clone(),
                            g: mors[g.idx()].name.clone(),
                            h: mors[h.idx()].name.clone(),
                        });
                        if errs.len() > 32 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }

        Ok(Arc::new(Self::finish(raw.name.clone(), objects, mors, identity, comp)))
    }

    /// Like [`FinCat::validate`] but with a guard on the associativity sweep;
    /// `assoc_checked` reports whether the sweep ran.
    pub fn validate_guarded(
        raw: &RawCategory,
        guards: &Guards,
    ) -> Result<(Arc<FinCat>, bool), ValidateError> {
        let triples = Self::assoc_triple_count(raw);
        if triples <= guards.max_enum {
            FinCat::validate(raw).map(|c| (c, true)).map_err(ValidateError::Violations)
        } else {
            let cat = Self::validate_skip_assoc(raw).map_err(ValidateError::Violations)?;
            Ok((cat, false))
        }
    }

    fn assoc_triple_count(raw: &RawCategory) -> u64 {
        // count composable triples without building the category
        let mut by_src: HashMap<&str, u64> = HashMap::new();
        let mut by_tgt: HashMap<&str, u64> = HashMap::new();
        for (_, s, t) in &raw.morphisms {
            *by_src.entry(s.as_str()).or_default() += 1;
            *by_tgt.entry(t.as_str()).or_default() += 1;
        }
        let mut pairs_thru: HashMap<(&str, &str), u64> = HashMap::new();
        for (_, s, t) in &raw.morphisms {
            *pairs_thru.entry((s.as_str(), t.as_str())).or_default() += 1;
        }
        // triples = sum over g of (#f into src g) * (#h out of tgt g)
        let mut total = 0u64;
        for (_, s, t) in &raw.morphisms {
            let fin = by_tgt.get(s.as_str()).copied().unwrap_or(0);
            let hout = by_src.get(t.as_str()).copied().unwrap_or(0);
            total = total.saturating_add(fin.saturating_mul(hout));
        }
        total
    }

    /// Validation with everything except the associativity sweep. Used by
    /// guarded constructors that report associativity as untestable.
    pub fn validate_skip_assoc(raw: &RawCategory) -> Result<Arc<FinCat>, Vec<CatViolation>> {
        // Re-run the identifier/identity/totality part of validate by
        // temporarily draining the associativity loop: cheapest is to copy
        // the body; instead we validate a truncated description when the
        // sweep would be hit. We accept the duplication cost here.
        let mut errs = Vec::new();
        let mut objects = raw.objects.clone();
        objects.sort();
        let ob_ix: BTreeMap<&str, Ob> =
            objects.iter().enumerate().map(|(i, n)| (n.as_str(), Ob(i as u32))).collect();
        let mut sorted_mors: Vec<&(String, String, String)> = raw.morphisms.iter().collect();
        sorted_mors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut mors = Vec::with_capacity(sorted_mors.len());
        let mut mor_ix: BTreeMap<&str, Mor> = BTreeMap::new();
        for (i, (name, src, tgt)) in sorted_mors.iter().enumerate() {
            let (Some(&s), Some(&t)) = (ob_ix.get(src.as_str()), ob_ix.get(tgt.as_str())) else {
                errs.push(CatViolation::DanglingEndpoint {
                    mor: name.clone(),
                    endpoint: src.clone(),
                });
                continue;
            };
            mors.push(MorData { name: name.clone(), src: s, tgt: t });
            mor_ix.insert(name.as_str(), Mor(i as u32));
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        let n_mor = mors.len();
        let mut identity: Vec<Option<Mor>> = vec![None; objects.len()];
        for (ob, id_name) in &raw.identities {
            let (Some(&o), Some(&m)) = (ob_ix.get(ob.as_str()), mor_ix.get(id_name.as_str()))
            else {
                errs.push(CatViolation::UnknownReference(ob.clone()));
                continue;
            };
            identity[o.idx()] = Some(m);
        }
        if identity.iter().any(|i| i.is_none()) {
            errs.push(CatViolation::MissingIdentity { object: "?".into() });
            return Err(errs);
        }
        let identity: Vec<Mor> = identity.into_iter().map(|o| o.unwrap()).collect();
        let dense = n_mor <= 2048;
        let mut dense_table = if dense { vec![NONE_SENTINEL; n_mor * n_mor] } else { Vec::new() };
        let mut sparse_table: HashMap<(u32, u32), u32> = HashMap::new();
        for (g, f, h) in &raw.compositions {
            let (Some(&gm), Some(&fm), Some(&hm)) = (
                mor_ix.get(g.as_str()),
                mor_ix.get(f.as_str()),
                mor_ix.get(h.as_str()),
            ) else {
                errs.push(CatViolation::UnknownReference(g.clone()));
                continue;
            };
            if dense {
                dense_table[gm.idx() * n_mor + fm.idx()] = hm.0;
            } else {
                sparse_table.insert((gm.0, fm.0), hm.0);
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        let comp = if dense {
            CompTable::Dense { n: n_mor, table: dense_table }
        } else {
            let mut entries: Vec<(u64, u32)> = sparse_table
                .into_iter()
                .map(|((g, f), h)| (sparse_key(Mor(g), Mor(f)), h))
                .collect();
            entries.sort_unstable_by_key(|&(k, _)| k);
            CompTable::Sparse(entries)
        };
        for g in 0..n_mor {
            for f in 0..n_mor {
                let (g, f) = (Mor(g as u32), Mor(f as u32));
                if mors[f.idx()].tgt == mors[g.idx()].src && comp.get(g, f).is_none() {
                    errs.push(CatViolation::MissingComposite {
                        g: mors[g.idx()].name.clone(),
                        f: mors[f.idx()].name.clone(),
                    });
                }
            }
        }
        if !errs.is_empty() {
            return Err(errs);
        }
        Ok(Arc::new(Self::finish(raw.name.clone(), objects, mors, identity, comp)))
    }

    fn finish(
        name: String,
        objects: Vec<String>,
        mors: Vec<MorData>,
        identity: Vec<Mor>,
        comp: CompTable,
    ) -> FinCat {
        let n_obj = objects.len();
        let mut hom = vec![Vec::new(); n_obj * n_obj];
        for (i, m) in mors.iter().enumerate() {
            hom[m.src.idx() * n_obj + m.tgt.idx()].push(Mor(i as u32));
        }
        let mut cat = FinCat {
            name,
            objects,
            mors,
            identity,
            comp,
            hom,
            inverse: Vec::new(),
            isos_into: Vec::new(),
        };
        cat.inverse = (0..cat.mors.len())
            .map(|i| {
                let m = Mor(i as u32);
                let (s, t) = (cat.src(m), cat.tgt(m));
                cat.hom(t, s).iter().copied().find(|&w| {
                    cat.comp(w, m) == Some(cat.identity(s)) && cat.comp(m, w) == Some(cat.identity(t))
                })
            })
            .collect();
        cat.isos_into = cat
            .objects()
            .map(|o| {
                let mut v: Vec<Mor> = cat
                    .morphisms()
                    .filter(|&m| cat.tgt(m) == o && cat.inverse[m.idx()].is_some())
                    .collect();
                v.sort();
                v
            })
            .collect();
        cat
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = Ob> + '_ {
        (0..self.objects.len() as u32).map(Ob)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.mors.len() as u32).map(Mor)
    }

    pub fn object_name(&self, o: Ob) -> &str {
        &self.objects[o.idx()]
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.mors[m.idx()].name
    }

    pub fn object_by_name(&self, name: &str) -> Option<Ob> {
        self.objects.binary_search_by(|o| o.as_str().cmp(name)).ok().map(|i| Ob(i as u32))
    }

    pub fn mor_by_name(&self, name: &str) -> Option<Mor> {
        self.mors.binary_search_by(|m| m.name.as_str().cmp(name)).ok().map(|i| Mor(i as u32))
    }

    pub fn src(&self, m: Mor) -> Ob {
        self.mors[m.idx()].src
    }

    pub fn tgt(&self, m: Mor) -> Ob {
        self.mors[m.idx()].tgt
    }

    pub fn identity(&self, o: Ob) -> Mor {
        self.identity[o.idx()]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identity[self.src(m).idx()] == m
    }

    /// g after f; defined exactly when tgt(f) = src(g).
    pub fn comp(&self, g: Mor, f: Mor) -> Option<Mor> {
        if self.tgt(f) != self.src(g) {
            return None;
        }
        self.comp.get(g, f)
    }

    /// Compose a chain right-to-left: `comp_chain([h, g, f])` = h o g o f.
    pub fn comp_chain(&self, chain: &[Mor]) -> Option<Mor> {
        let mut it = chain.iter().rev();
        let mut acc = *it.next()?;
        for &m in it {
            acc = self.comp(m, acc)?;
        }
        Some(acc)
    }

    pub fn hom(&self, s: Ob, t: Ob) -> &[Mor] {
        &self.hom[s.idx() * self.objects.len() + t.idx()]
    }

    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        self.inverse[m.idx()]
    }

    pub fn is_iso(&self, m: Mor) -> bool {
        self.inverse[m.idx()].is_some()
    }

    /// All isomorphisms with target `o`, from any object (including `o`).
    pub fn isos_into(&self, o: Ob) -> &[Mor] {
        &self.isos_into[o.idx()]
    }

    /// Serialize back to a raw description (round-trip partner of validate).
    pub fn to_raw(&self) -> RawCategory {
        RawCategory {
            name: self.name.clone(),
            objects: self.objects.clone(),
            morphisms: self
                .mors
                .iter()
                .map(|m| {
                    (
                        m.name.clone(),
                        self.objects[m.src.idx()].clone(),
                        self.objects[m.tgt.idx()].clone(),
                    )
                })
                .collect(),
            identities: self
                .identity
                .iter()
                .enumerate()
                .map(|(i, m)| (self.objects[i].clone(), self.mors[m.idx()].name.clone()))
                .collect(),
            compositions: {
                let mut v = Vec::new();
                for g in self.morphisms() {
                    for f in self.morphisms() {
                        if let Some(h) = self.comp(g, f) {
                            v.push((
                                self.mor_name(g).to_string(),
                                self.mor_name(f).to_string(),
                                self.mor_name(h).to_string(),
                            ));
                        }
                    }
                }
                v
            },
        }
    }

    /// The opposite category: same identifiers, endpoints swapped, composition
    /// reversed. Involutive on the nose.
    pub fn opposite(&self) -> Arc<FinCat> {
        let raw = RawCategory {
            name: format!("{}^op", self.name.trim_end_matches("^op")),
            objects: self.objects.clone(),
            morphisms: self
                .mors
                .iter()
                .map(|m| {
                    (
                        m.name.clone(),
                        self.objects[m.tgt.idx()].clone(),
                        self.objects[m.src.idx()].clone(),
                    )
                })
                .collect(),
            identities: self
                .identity
                .iter()
                .enumerate()
                .map(|(i, m)| (self.objects[i].clone(), self.mors[m.idx()].name.clone()))
                .collect(),
            compositions: {
                let mut v = Vec::new();
                for g in self.morphisms() {
                    for f in self.morphisms() {
                        if let Some(h) = self.comp(g, f) {
                            // in C^op: f o^op g = h
                            v.push((
                                self.mor_name(f).to_string(),
                                self.mor_name(g).to_string(),
                                self.mor_name(h).to_string(),
                            ));
                        }
                    }
                }
                v
            },
        };
        let mut name = raw.name.clone();
        if self.name.ends_with("^op") {
            name = self.name.trim_end_matches("^op").to_string();
        }
        let raw = RawCategory { name, ..raw };
        FinCat::validate(&raw).expect("opposite of a valid category is valid")
    }

    /// Structural equality: same identifiers and same tables.
    pub fn same_as(&self, other: &FinCat) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.objects != other.objects {
            return false;
        }
        if self.mors.len() != other.mors.len() {
            return false;
        }
        for (a, b) in self.mors.iter().zip(other.mors.iter()) {
            if a.name != b.name || a.src != b.src || a.tgt != b.tgt {
                return false;
            }
        }
        if self.identity != other.identity {
            return false;
        }
        for g in self.morphisms() {
            for f in self.morphisms() {
                if self.comp(g, f) != other.comp(g, f) {
                    return false;
                }
            }
        }
        true
    }

    /// Initial object: unique morphism to every object. Canonical
    /// representative is the least object identifier.
    pub fn initial_object(&self) -> Option<Ob> {
        self.objects().find(|&o| self.objects().all(|t| self.hom(o, t).len() == 1))
    }

    /// Terminal object, canonical representative.
    pub fn terminal_object(&self) -> Option<Ob> {
        self.objects().find(|&o| self.objects().all(|s| self.hom(s, o).len() == 1))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ValidateError {
    #[error("category axioms violated: {0:?}")]
    Violations(Vec<CatViolation>),
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
}

/// A strict functor between finite categories.
#[derive(Clone)]
pub struct Functor {
    pub src: Arc<FinCat>,
    pub tgt: Arc<FinCat>,
    pub ob_map: Vec<Ob>,
    pub mor_map: Vec<Mor>,
}

impl std::fmt::Debug for Functor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Functor({} -> {})", self.src.name, self.tgt.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorViolation {
    #[error("object map has wrong length")]
    ObMapLength,
    #[error("morphism map has wrong length")]
    MorMapLength,
    #[error("endpoints not preserved on morphism `{0}`")]
    Endpoints(String),
    #[error("identity not preserved on object `{0}`")]
    Identity(String),
    #[error("composition not preserved on g=`{g}`, f=`{f}`")]
    Composition { g: String, f: String },
}

impl Functor {
    pub fn identity(cat: &Arc<FinCat>) -> Functor {
        Functor {
            src: cat.clone(),
            tgt: cat.clone(),
            ob_map: cat.objects().collect(),
            mor_map: cat.morphisms().collect(),
        }
    }

    pub fn on_ob(&self, o: Ob) -> Ob {
        self.ob_map[o.idx()]
    }

    pub fn on_mor(&self, m: Mor) -> Mor {
        self.mor_map[m.idx()]
    }

    /// Check endpoint, identity, and composition preservation exhaustively.
    pub fn check(&self) -> Result<(), FunctorViolation> {
        if self.ob_map.len() != self.src.n_objects() {
            return Err(FunctorViolation::ObMapLength);
        }
        if self.mor_map.len() != self.src.n_morphisms() {
            return Err(FunctorViolation::MorMapLength);
        }
        for m in self.src.morphisms() {
            let fm = self.on_mor(m);
            if self.tgt.src(fm) != self.on_ob(self.src.src(m))
                || self.tgt.tgt(fm) != self.on_ob(self.src.tgt(m))
            {
                return Err(FunctorViolation::Endpoints(self.src.mor_name(m).to_string()));
            }
        }
        for o in self.src.objects() {
            if self.on_mor(self.src.identity(o)) != self.tgt.identity(self.on_ob(o)) {
                return Err(FunctorViolation::Identity(self.src.object_name(o).to_string()));
            }
        }
        for g in self.src.morphisms() {
            let src_g = self.src.src(g);
            for x in self.src.objects() {
                for &f in self.src.hom(x, src_g) {
                    let h = self.src.comp(g, f).expect("composable");
                    if self.tgt.comp(self.on_mor(g), self.on_mor(f)) != Some(self.on_mor(h)) {
                        return Err(FunctorViolation::Composition {
                            g: self.src.mor_name(g).to_string(),
                            f: self.src.mor_name(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// self after other.
    pub fn compose(&self, other: &Functor) -> Functor {
        debug_assert!(other.tgt.same_as(&self.src));
        Functor {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            ob_map: other.ob_map.iter().map(|&o| self.on_ob(o)).collect(),
            mor_map: other.mor_map.iter().map(|&m| self.on_mor(m)).collect(),
        }
    }

    pub fn same_as(&self, other: &Functor) -> bool {
        self.ob_map == other.ob_map
            && self.mor_map == other.mor_map
            && self.src.same_as(&other.src)
            && self.tgt.same_as(&other.tgt)
    }
}

/// A natural transformation between parallel functors, with one component
/// morphism of the target category per source object.
#[derive(Clone)]
pub struct NatTransform {
    pub src: Functor,
    pub tgt: Functor,
    pub components: Vec<Mor>,
}

impl std::fmt::Debug for NatTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "NatTransform({} components)", self.components.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NatViolation {
    #[error("functors not parallel")]
    NotParallel,
    #[error("component at `{0}` has wrong endpoints")]
    ComponentEndpoints(String),
    #[error("naturality fails at morphism `{0}`")]
    Naturality(String),
}

impl NatTransform {
    pub fn identity(f: &Functor) -> NatTransform {
        NatTransform {
            src: f.clone(),
            tgt: f.clone(),
            components: f.src.objects().map(|o| f.tgt.identity(f.on_ob(o))).collect(),
        }
    }

    pub fn at(&self, o: Ob) -> Mor {
        self.components[o.idx()]
    }

    pub fn check(&self) -> Result<(), NatViolation> {
        if !self.src.src.same_as(&self.tgt.src) || !self.src.tgt.same_as(&self.tgt.tgt) {
            return Err(NatViolation::NotParallel);
        }
        let cat = &self.src.src;
        let d = &self.src.tgt;
        for o in cat.objects() {
            let c = self.at(o);
            if d.src(c) != self.src.on_ob(o) || d.tgt(c) != self.tgt.on_ob(o) {
                return Err(NatViolation::ComponentEndpoints(cat.object_name(o).to_string()));
            }
        }
        for m in cat.morphisms() {
            let (s, t) = (cat.src(m), cat.tgt(m));
            let lhs = d.comp(self.at(t), self.src.on_mor(m));
            let rhs = d.comp(self.tgt.on_mor(m), self.at(s));
            if lhs != rhs || lhs.is_none() {
                return Err(NatViolation::Naturality(cat.mor_name(m).to_string()));
            }
        }
        Ok(())
    }

    /// Vertical composition: self after other (other: F => G, self: G => H).
    pub fn then(&self, other: &NatTransform) -> NatTransform {
        debug_assert_eq!(self.components.len(), other.components.len());
        let d = &self.src.tgt;
        NatTransform {
            src: other.src.clone(),
            tgt: self.tgt.clone(),
            components: (0..self.components.len())
                .map(|i| {
                    d.comp(self.components[i], other.components[i])
                        .expect("vertical composition of composable transformations")
                })
                .collect(),
        }
    }

    /// Whisker on the right with `h`: components of (self * h) at x are
    /// self.at(h x). For self: F => G : B -> C and h: A -> B, gives
    /// F h => G h : A -> C.
    pub fn whisker_right(&self, h: &Functor) -> NatTransform {
        NatTransform {
            src: self.src.compose(h),
            tgt: self.tgt.compose(h),
            components: h.src.objects().map(|o| self.at(h.on_ob(o))).collect(),
        }
    }

    /// Whisker on the left with `h`: components of (h * self) at x are
    /// h(self.at(x)). For self: F => G : A -> B and h: B -> C, gives
    /// h F => h G : A -> C.
    pub fn whisker_left(&self, h: &Functor) -> NatTransform {
        NatTransform {
            src: h.compose(&self.src),
            tgt: h.compose(&self.tgt),
            components: self.components.iter().map(|&c| h.on_mor(c)).collect(),
        }
    }

    pub fn is_invertible(&self) -> bool {
        let d = &self.src.tgt;
        self.components.iter().all(|&c| d.is_iso(c))
    }

    /// First source object whose component is not invertible.
    pub fn non_invertible_witness(&self) -> Option<Ob> {
        let d = &self.src.tgt;
        self.src.src.objects().find(|&o| !d.is_iso(self.at(o)))
    }

    pub fn inverted(&self) -> Option<NatTransform> {
        let d = &self.src.tgt;
        let mut comps = Vec::with_capacity(self.components.len());
        for &c in &self.components {
            comps.push(d.inverse(c)?);
        }
        Some(NatTransform { src: self.tgt.clone(), tgt: self.src.clone(), components: comps })
    }
}

/// Horizontal composite of natural transformations: for alpha: F => F' over
/// A -> B and beta: G => G' over B -> C, the transformation G F => G' F'
/// with components G'(alpha_x) o beta_{F(x)}.
pub fn horizontal_nat(alpha: &NatTransform, beta: &NatTransform) -> NatTransform {
    let f = &alpha.src;
    let fp = &alpha.tgt;
    let g = &beta.src;
    let gp = &beta.tgt;
    let c = &g.tgt;
    let components = f
        .src
        .objects()
        .map(|x| {
            let first = beta.at(f.on_ob(x));
            let second = gp.on_mor(alpha.at(x));
            c.comp(second, first).expect("horizontal composite")
        })
        .collect();
    NatTransform { src: g.compose(f), tgt: gp.compose(fp), components }
}

/// The comma category (F down G) for functors F: A -> C, G: B -> C.
pub struct CommaCat {
    pub cat: Arc<FinCat>,
    /// object data: (object of A, object of B, mediating morphism of C)
    pub objects: Vec<(Ob, Ob, Mor)>,
    pub proj_left: Functor,
    pub proj_right: Functor,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("functors do not share a target category")]
pub struct TargetMismatch;

/// Build the comma category of two functors into a common category.
/// Objects are triples (a, b, phi: F a -> G b); morphisms are pairs of
/// morphisms making the evident square commute.
pub fn comma_category(f: &Functor, g: &Functor) -> Result<CommaCat, TargetMismatch> {
    if !f.tgt.same_as(&g.tgt) {
        return Err(TargetMismatch);
    }
    let c = &f.tgt;
    let mut objects = Vec::new();
    for a in f.src.objects() {
        for b in g.src.objects() {
            for &phi in c.hom(f.on_ob(a), g.on_ob(b)) {
                objects.push((a, b, phi));
            }
        }
    }
    let ob_names: Vec<String> = objects
        .iter()
        .enumerate()
        .map(|(i, _)| format!("c{i:05}"))
        .collect();
    let _ob_index: HashMap<(Ob, Ob, Mor), usize> =
        objects.iter().enumerate().map(|(i, &k)| (k, i)).collect();

    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut mor_meta: Vec<(usize, usize, Mor, Mor)> = Vec::new();
    for (i, &(a, b, phi)) in objects.iter().enumerate() {
        for (j, &(a2, b2, phi2)) in objects.iter().enumerate() {
            for &u in f.src.hom(a, a2) {
                for &v in g.src.hom(b, b2) {
                    // square: phi2 o F u = G v o phi
                    let lhs = c.comp(phi2, f.on_mor(u));
                    let rhs = c.comp(g.on_mor(v), phi);
                    if lhs == rhs && lhs.is_some() {
                        let name = format!("m{:05}_{:05}_{}_{}", i, j, u.0, v.0);
                        morphisms.push((name.clone(), ob_names[i].clone(), ob_names[j].clone()));
                        mor_meta.push((i, j, u, v));
                        if i == j && f.src.is_identity(u) && g.src.is_identity(v) {
                            identities.push((ob_names[i].clone(), name));
                        }
                    }
                }
            }
        }
    }
    let mut compositions = Vec::new();
    for (gi, &(i2, j2, u2, v2)) in mor_meta.iter().enumerate() {
        for (fi, &(i1, j1, u1, v1)) in mor_meta.iter().enumerate() {
            if j1 != i2 {
                continue;
            }
            let uc = f.src.comp(u2, u1).unwrap();
            let vc = g.src.comp(v2, v1).unwrap();
            // find composite morphism index
            let name = format!("m{:05}_{:05}_{}_{}", i1, j2, uc.0, vc.0);
            compositions.push((morphisms[gi].0.clone(), morphisms[fi].0.clone(), name));
        }
    }
    let raw = RawCategory {
        name: format!("({}|{})", f.src.name, g.src.name),
        objects: ob_names.clone(),
        morphisms,
        identities,
        compositions,
    };
    let cat = FinCat::validate(&raw).expect("comma category is a valid category");
    // projections; note objects were named in enumeration order which is
    // also sorted order (zero-padded indices)
    let mut proj_a_ob = vec![Ob(0); cat.n_objects()];
    let mut proj_b_ob = vec![Ob(0); cat.n_objects()];
    for (i, &(a, b, _)) in objects.iter().enumerate() {
        let o = cat.object_by_name(&ob_names[i]).unwrap();
        proj_a_ob[o.idx()] = a;
        proj_b_ob[o.idx()] = b;
    }
    let mut proj_a_mor = vec![Mor(0); cat.n_morphisms()];
    let mut proj_b_mor = vec![Mor(0); cat.n_morphisms()];
    for (k, &(i, j, u, v)) in mor_meta.iter().enumerate() {
        let name = format!("m{:05}_{:05}_{}_{}", i, j, u.0, v.0);
        let m = cat.mor_by_name(&name).unwrap();
        let _ = k;
        proj_a_mor[m.idx()] = u;
        proj_b_mor[m.idx()] = v;
    }
    let proj_left = Functor { src: cat.clone(), tgt: f.src.clone(), ob_map: proj_a_ob, mor_map: proj_a_mor };
    let proj_right = Functor { src: cat.clone(), tgt: g.src.clone(), ob_map: proj_b_ob, mor_map: proj_b_mor };
    let objects = {
        // re-sort object metadata into category object order
        let mut v = vec![(Ob(0), Ob(0), Mor(0)); objects.len()];
        for (i, &meta) in objects.iter().enumerate() {
            let o = cat.object_by_name(&ob_names[i]).unwrap();
            v[o.idx()] = meta;
        }
        v
    };
    Ok(CommaCat { cat, objects, proj_left, proj_right })
}

/// A constant functor at an object.
pub fn const_functor(src: &Arc<FinCat>, tgt: &Arc<FinCat>, at: Ob) -> Functor {
    Functor {
        src: src.clone(),
        tgt: tgt.clone(),
        ob_map: src.objects().map(|_| at).collect(),
        mor_map: src.morphisms().map(|_| tgt.identity(at)).collect(),
    }
}

/// The category of all functors A -> B with natural transformations,
/// composed pointwise. Guarded by the raw assignment-count bound
/// |ob B|^|ob A| * |mor B|^|mor A|.
pub struct FunCat {
    pub cat: Arc<FinCat>,
    pub functors: Vec<Functor>,
    pub transforms: Vec<NatTransform>,
}

pub fn functor_category(
    a: &Arc<FinCat>,
    b: &Arc<FinCat>,
    guards: &Guards,
) -> Result<FunCat, GuardExceeded> {
    let mut bound: u64 = 1;
    for _ in 0..a.n_objects() {
        bound = bound.saturating_mul(b.n_objects().max(1) as u64);
    }
    for _ in 0..a.n_morphisms() {
        bound = bound.saturating_mul(b.n_morphisms().max(1) as u64);
    }
    crate::guard_enum(guards, "functor_category", bound)?;

    let functors = enumerate_functors(a, b);
    let mut transforms: Vec<NatTransform> = Vec::new();
    let mut ob_names = Vec::new();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut mor_meta: Vec<(usize, usize, Vec<Mor>)> = Vec::new();
    for (i, _f) in functors.iter().enumerate() {
        ob_names.push(format!("F{i:04}"));
    }
    for (i, f) in functors.iter().enumerate() {
        for (j, g) in functors.iter().enumerate() {
            for comps in enumerate_transform_components(f, g) {
                let name = format!(
                    "t{:04}_{:04}_{}",
                    i,
                    j,
                    comps.iter().map(|m| m.0.to_string()).collect::<Vec<_>>().join("c")
                );
                morphisms.push((name.clone(), ob_names[i].clone(), ob_names[j].clone()));
                mor_meta.push((i, j, comps.clone()));
                if i == j && comps.iter().enumerate().all(|(oi, &c)| {
                    b.is_identity(c) && b.src(c) == f.on_ob(Ob(oi as u32))
                }) {
                    identities.push((ob_names[i].clone(), name.clone()));
                }
                transforms.push(NatTransform { src: f.clone(), tgt: g.clone(), components: comps });
            }
        }
    }
    let mut compositions = Vec::new();
    for (gi, (i2, j2, c2)) in mor_meta.iter().enumerate() {
        for (fi, (i1, j1, c1)) in mor_meta.iter().enumerate() {
            if j1 != i2 {
                continue;
            }
            let comps: Vec<Mor> = (0..c1.len())
                .map(|k| b.comp(c2[k], c1[k]).expect("pointwise composition"))
                .collect();
            let name = format!(
                "t{:04}_{:04}_{}",
                i1,
                j2,
                comps.iter().map(|m| m.0.to_string()).collect::<Vec<_>>().join("c")
            );
            compositions.push((morphisms[gi].0.clone(), morphisms[fi].0.clone(), name));
        }
    }
    let raw = RawCategory {
        name: format!("Fun({},{})", a.name, b.name),
        objects: ob_names,
        morphisms,
        identities,
        compositions,
    };
    let cat = FinCat::validate(&raw).expect("functor category is a valid category");
    Ok(FunCat { cat, functors, transforms })
}

/// Enumerate all strict functors A -> B, deterministically ordered by the
/// lexicographic order of their assignment vectors.
pub fn enumerate_functors(a: &Arc<FinCat>, b: &Arc<FinCat>) -> Vec<Functor> {
    let mut out = Vec::new();
    let n_ob = a.n_objects();
    let mut ob_map: Vec<Ob> = Vec::new();
    fn rec_ob(a: &Arc<FinCat>, b: &Arc<FinCat>, ob_map: &mut Vec<Ob>, n_ob: usize, out: &mut Vec<Functor>) {
        if ob_map.len() == n_ob {
            let mut mor_map: Vec<Option<Mor>> = vec![None; a.n_morphisms()];
            rec_mor(a, b, ob_map, &mut mor_map, 0, out);
            return;
        }
        for o in b.objects() {
            ob_map.push(o);
            rec_ob(a, b, ob_map, n_ob, out);
            ob_map.pop();
        }
    }
    fn rec_mor(
        a: &Arc<FinCat>,
        b: &Arc<FinCat>,
        ob_map: &[Ob],
        mor_map: &mut Vec<Option<Mor>>,
        next: usize,
        out: &mut Vec<Functor>,
    ) {
        if next == a.n_morphisms() {
            let f = Functor {
                src: a.clone(),
                tgt: b.clone(),
                ob_map: ob_map.to_vec(),
                mor_map: mor_map.iter().map(|m| m.unwrap()).collect(),
            };
            if f.check().is_ok() {
                out.push(f);
            }
            return;
        }
        let m = Mor(next as u32);
        let s = ob_map[a.src(m).idx()];
        let t = ob_map[a.tgt(m).idx()];
        if a.is_identity(m) {
            mor_map[next] = Some(b.identity(s));
            rec_mor(a, b, ob_map, mor_map, next + 1, out);
            mor_map[next] = None;
            return;
        }
        for &cand in b.hom(s, t) {
            mor_map[next] = Some(cand);
            // prune: check compositions among already-assigned morphisms
            let consistent = (0..=next).all(|other| {
                let om = Mor(other as u32);
                let Some(_oimg) = mor_map[other] else { return true };
                let pairs = [(m, om), (om, m)];
                pairs.iter().all(|&(g, f)| {
                    match a.comp(g, f) {
                        Some(h) if h.idx() <= next => {
                            if let (Some(gi), Some(fi), Some(hi)) =
                                (mor_map[g.idx()], mor_map[f.idx()], mor_map[h.idx()])
                            {
                                b.comp(gi, fi) == Some(hi)
                            } else {
                                true
                            }
                        }
                        _ => true,
                    }
                })
            });
            if consistent {
                rec_mor(a, b, ob_map, mor_map, next + 1, out);
            }
            mor_map[next] = None;
        }
    }
    rec_ob(a, b, &mut ob_map, n_ob, &mut out);
    out
}

fn enumerate_transform_components(f: &Functor, g: &Functor) -> Vec<Vec<Mor>> {
    // all natural transformations f => g by backtracking over components
    let a = &f.src;
    let b = &f.tgt;
    let n = a.n_objects();
    let mut out = Vec::new();
    let mut comps: Vec<Mor> = Vec::new();
    fn ok_so_far(a: &Arc<FinCat>, b: &Arc<FinCat>, f: &Functor, g: &Functor, comps: &[Mor]) -> bool {
        let k = comps.len();
        for m in a.morphisms() {
            let (s, t) = (a.src(m), a.tgt(m));
            if s.idx() < k && t.idx() < k {
                let lhs = b.comp(comps[t.idx()], f.on_mor(m));
                let rhs = b.comp(g.on_mor(m), comps[s.idx()]);
                if lhs != rhs || lhs.is_none() {
                    return false;
                }
            }
        }
        true
    }
    fn rec(
        a: &Arc<FinCat>,
        b: &Arc<FinCat>,
        f: &Functor,
        g: &Functor,
        comps: &mut Vec<Mor>,
        n: usize,
        out: &mut Vec<Vec<Mor>>,
    ) {
        if comps.len() == n {
            out.push(comps.clone());
            return;
        }
        let o = Ob(comps.len() as u32);
        for &c in b.hom(f.on_ob(o), g.on_ob(o)) {
            comps.push(c);
            if ok_so_far(a, b, f, g, comps) {
                rec(a, b, f, g, comps, n, out);
            }
            comps.pop();
        }
    }
    rec(a, b, f, g, &mut comps, n, &mut out);
    out
}

/// Search for a natural isomorphism between parallel functors. Returns the
/// lexicographically least one in component identifiers, or None.
pub fn nat_iso_search(f: &Functor, g: &Functor) -> Option<NatTransform> {
    if !f.src.same_as(&g.src) || !f.tgt.same_as(&g.tgt) {
        return None;
    }
    let a = &f.src;
    let b = &f.tgt;
    let n = a.n_objects();
    let mut comps: Vec<Mor> = Vec::new();
    fn rec(
        a: &Arc<FinCat>,
        b: &Arc<FinCat>,
        f: &Functor,
        g: &Functor,
        comps: &mut Vec<Mor>,
        n: usize,
    ) -> bool {
        if comps.len() == n {
            return true;
        }
        let o = Ob(comps.len() as u32);
        let mut cands: Vec<Mor> = b
            .hom(f.on_ob(o), g.on_ob(o))
            .iter()
            .copied()
            .filter(|&c| b.is_iso(c))
            .collect();
        cands.sort();
        for c in cands {
            comps.push(c);
            let consistent = {
                let k = comps.len();
                a.morphisms().all(|m| {
                    let (s, t) = (a.src(m), a.tgt(m));
                    if s.idx() < k && t.idx() < k {
                        b.comp(comps[t.idx()], f.on_mor(m)) == b.comp(g.on_mor(m), comps[s.idx()])
                    } else {
                        true
                    }
                })
            };
            if consistent && rec(a, b, f, g, comps, n) {
                return true;
            }
            comps.pop();
        }
        false
    }
    if rec(a, b, f, g, &mut comps, n) {
        let t = NatTransform { src: f.clone(), tgt: g.clone(), components: comps };
        debug_assert!(t.check().is_ok());
        Some(t)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn finset2_validates_and_counts() {
        let c = catalog::gen_finset(2);
        assert_eq!(c.n_objects(), 3);
        // |Hom(2,2)| = 4
        let two = c.object_by_name("2").unwrap();
        assert_eq!(c.hom(two, two).len(), 4);
    }

    #[test]
    fn corrupted_monoid_reports_nonassociative() {
        // 3-element monoid (Z/3) with one corrupted product entry
        let mut raw = RawCategory {
            name: "z3".into(),
            objects: vec!["*".into()],
            morphisms: vec![
                ("e".into(), "*".into(), "*".into()),
                ("a".into(), "*".into(), "*".into()),
                ("b".into(), "*".into(), "*".into()),
            ],
            identities: vec![("*".into(), "e".into())],
            compositions: vec![],
        };
        let mul = |x: &str, y: &str| -> String {
            let v = |s: &str| match s {
                "e" => 0,
                "a" => 1,
                _ => 2,
            };
            let n = (v(x) + v(y)) % 3;
            ["e", "a", "b"][n as usize].to_string()
        };
        for g in ["e", "a", "b"] {
            for f in ["e", "a", "b"] {
                raw.compositions.push((g.into(), f.into(), mul(g, f)));
            }
        }
        assert!(FinCat::validate(&raw).is_ok());
        // corrupt a . a = b into a . a = a
        for entry in raw.compositions.iter_mut() {
            if entry.0 == "a" && entry.1 == "a" {
                entry.2 = "a".into();
            }
        }
        let errs = FinCat::validate(&raw).unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, CatViolation::NonAssociative { .. })));
    }

    #[test]
    fn missing_identity_reported() {
        let raw = RawCategory {
            name: "noid".into(),
            objects: vec!["x".into()],
            morphisms: vec![],
            identities: vec![],
            compositions: vec![],
        };
        let errs = FinCat::validate(&raw).unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, CatViolation::MissingIdentity { .. })));
    }

    #[test]
    fn opposite_is_involutive_and_transposes_homs() {
        for c in [catalog::gen_finset(2), catalog::gen_divisor_lattice(12)] {
            let op = c.opposite();
            let opop = op.opposite();
            assert!(opop.same_as(&c));
            for x in c.objects() {
                for y in c.objects() {
                    assert_eq!(c.hom(x, y).len(), op.hom(y, x).len());
                }
            }
        }
    }

    #[test]
    fn opposite_of_poset_interval_reverses_order() {
        let c = catalog::gen_divisor_lattice(2); // the poset [1]
        let op = c.opposite();
        let one = op.object_by_name("d01").unwrap();
        let two = op.object_by_name("d02").unwrap();
        assert_eq!(op.hom(two, one).len(), 1);
        assert_eq!(op.hom(one, two).len(), 0);
        // in op, the non-identity arrow goes 2 -> 1
        let non_id: Vec<_> = op.morphisms().filter(|&m| !op.is_identity(m)).collect();
        assert_eq!(non_id.len(), 1);
        assert_eq!(op.src(non_id[0]), two);
        assert_eq!(op.tgt(non_id[0]), one);
    }

    #[test]
    fn comma_of_identities_is_arrow_category() {
        // comma(id, id) over [1] (divisor lattice of 2) has 3 objects
        let c = catalog::gen_divisor_lattice(2);
        let idf = Functor::identity(&c);
        let comma = comma_category(&idf, &idf).unwrap();
        assert_eq!(comma.cat.n_objects(), 3);
        assert!(comma.proj_left.check().is_ok());
        assert!(comma.proj_right.check().is_ok());
    }

    #[test]
    fn comma_slice_of_finsets() {
        // comma(const_1, id) over finite sets <= 2: one function x -> 1 per x
        let c = catalog::gen_finset(2);
        let one = c.object_by_name("1").unwrap();
        let term = catalog::terminal_cat();
        let cf = const_functor(&term, &c, one);
        let idf = Functor::identity(&c);
        let comma = comma_category(&idf, &cf).unwrap();
        assert_eq!(comma.cat.n_objects(), 3);
    }

    #[test]
    fn comma_with_empty_source_is_empty() {
        let c = catalog::gen_finset(1);
        let empty = catalog::empty_cat();
        let f = Functor { src: empty.clone(), tgt: c.clone(), ob_map: vec![], mor_map: vec![] };
        let idf = Functor::identity(&c);
        let comma = comma_category(&f, &idf).unwrap();
        assert_eq!(comma.cat.n_objects(), 0);
    }

    #[test]
    fn initial_object_of_divisor_lattice() {
        let c = catalog::gen_divisor_lattice(12);
        let init = c.initial_object().unwrap();
        assert_eq!(c.object_name(init), "d01");
        let disc = catalog::discrete_cat(&["a", "b"]);
        assert_eq!(disc.initial_object(), None);
    }

    #[test]
    fn initial_object_of_slice_over_point() {
        // slice of finite sets <= 2 over 1: initial object is 0 -> 1.
        // Oracle: enumerate objects, check unique outgoing morphism to each.
        let c = catalog::gen_finset(2);
        let one = c.object_by_name("1").unwrap();
        let (slice, _proj) = crate::limits::slice(&c, one);
        let init = slice.cat.initial_object().expect("0 -> 1 is initial");
        let leg = slice.leg(init);
        assert_eq!(c.object_name(c.src(leg)), "0");
    }

    #[test]
    fn functor_category_of_intervals() {
        // Fun([1],[1]): 3 monotone endpoint pairs
        let c = catalog::gen_divisor_lattice(2);
        let fc = functor_category(&c, &c, &Guards::default()).unwrap();
        assert_eq!(fc.cat.n_objects(), 3);
        assert!(fc.cat.initial_object().is_some());

        // Fun(empty, B) is terminal
        let e = catalog::empty_cat();
        let fc2 = functor_category(&e, &c, &Guards::default()).unwrap();
        assert_eq!(fc2.cat.n_objects(), 1);
        assert_eq!(fc2.cat.n_morphisms(), 1);
    }

    #[test]
    fn functor_category_interval_into_divlat6() {
        // Fun([1], divisor lattice of 6): one object per comparable pair.
        // Oracle: enumerate comparable pairs in {1,2,3,6}.
        let divs = [1u32, 2, 3, 6];
        let mut oracle = 0;
        for &a in &divs {
            for &b in &divs {
                if b % a == 0 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(oracle, 9);
        let i = catalog::gen_divisor_lattice(2);
        let d6 = catalog::gen_divisor_lattice(6);
        let fc = functor_category(&i, &d6, &Guards::default()).unwrap();
        assert_eq!(fc.cat.n_objects(), oracle);
        // the functor category itself validates (it was built via validate)
    }

    #[test]
    fn nat_iso_search_basics() {
        let c = catalog::gen_finset(2);
        let idf = Functor::identity(&c);
        let t = nat_iso_search(&idf, &idf).unwrap();
        assert!(t.components.iter().enumerate().all(|(i, &m)| c.identity(Ob(i as u32)) == m));

        // constant functors at non-isomorphic objects: no iso
        let term = catalog::terminal_cat();
        let f = const_functor(&term, &c, c.object_by_name("1").unwrap());
        let g = const_functor(&term, &c, c.object_by_name("2").unwrap());
        assert!(nat_iso_search(&f, &g).is_none());
    }

    #[test]
    fn validate_roundtrip_on_catalog() {
        for c in [
            catalog::gen_finset(2),
            catalog::gen_divisor_lattice(12),
            catalog::gen_gset_c2(),
        ] {
            let raw = c.to_raw();
            let c2 = FinCat::validate(&raw).unwrap();
            assert!(c.same_as(&c2));
        }
    }
}
