//! The line-oriented category description format.
//!
//! Sections: `[objects]` (one identifier per line), `[morphisms]`
//! (`name : src -> tgt`), `[identities]` (`obj = name`), `[compose]`
//! (`g . f = h`), `[family NAME]` (comma-separated morphism names, with an
//! optional `wide` line that adds all identities), and `[indexing NAME]`
//! (`fiber OBJ = file:PATH` plus `restrict MOR = file:PATH` lines naming
//! companion files). Comments start with `#`. Parse then serialize then
//! parse is the identity on the parsed form.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::fincat::{FinCat, Functor, Mor, Ob, RawCategory};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected {expected}")]
    Syntax { line: usize, expected: String },
    #[error("line {line}: duplicate identifier `{name}`")]
    DuplicateIdentifier { line: usize, name: String },
    #[error("line {line}: unknown reference `{name}`")]
    UnknownReference { line: usize, name: String },
    #[error("io error reading `{path}`: {message}")]
    Io { path: String, message: String },
}

/// An indexing named in a description file: fibers and restrictions are
/// defined in companion files.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexingSpec {
    pub name: String,
    /// object name -> companion category file
    pub fibers: Vec<(String, String)>,
    /// morphism name -> companion functor file
    pub restricts: Vec<(String, String)>,
}

/// The parsed form of a description file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CategorySpec {
    pub raw: RawCategory,
    /// (name, wide flag, explicit members)
    pub families: Vec<(String, bool, Vec<String>)>,
    pub indexings: Vec<IndexingSpec>,
}

pub fn parse_category_file(text: &str) -> Result<CategorySpec, ParseError> {
    let mut spec = CategorySpec::default();
    let mut section = String::new();
    for (ln, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = ln + 1;
        if line.starts_with('[') {
            if !line.ends_with(']') {
                return Err(ParseError::Syntax { line: lineno, expected: "closing ]".into() });
            }
            section = line[1..line.len() - 1].trim().to_string();
            if let Some(name) = section.strip_prefix("family ") {
                spec.families.push((name.trim().to_string(), false, Vec::new()));
            } else if let Some(name) = section.strip_prefix("indexing ") {
                spec.indexings.push(IndexingSpec {
                    name: name.trim().to_string(),
                    ..Default::default()
                });
            } else if section == "category" || section.starts_with("category ") {
                spec.raw.name = section
                    .strip_prefix("category")
                    .unwrap_or("")
                    .trim()
                    .to_string();
            } else if !matches!(section.as_str(), "objects" | "morphisms" | "identities" | "compose")
            {
                return Err(ParseError::Syntax {
                    line: lineno,
                    expected: "known section name".into(),
                });
            }
            continue;
        }
        match section.as_str() {
            "objects" => {
                if spec.raw.objects.contains(&line.to_string()) {
                    return Err(ParseError::DuplicateIdentifier {
                        line: lineno,
                        name: line.to_string(),
                    });
                }
                spec.raw.objects.push(line.to_string());
            }
            "morphisms" => {
                // name : src -> tgt
                let (name, rest) = line.split_once(':').ok_or_else(|| ParseError::Syntax {
                    line: lineno,
                    expected: "name : src -> tgt".into(),
                })?;
                let (src, tgt) = rest.split_once("->").ok_or_else(|| ParseError::Syntax {
                    line: lineno,
                    expected: "src -> tgt".into(),
                })?;
                let name = name.trim().to_string();
                if spec.raw.morphisms.iter().any(|(n, _, _)| *n == name) {
                    return Err(ParseError::DuplicateIdentifier { line: lineno, name });
                }
                spec.raw.morphisms.push((name, src.trim().to_string(), tgt.trim().to_string()));
            }
            "identities" => {
                let (obj, m) = line.split_once('=').ok_or_else(|| ParseError::Syntax {
                    line: lineno,
                    expected: "obj = morphism".into(),
                })?;
                spec.raw.identities.push((obj.trim().to_string(), m.trim().to_string()));
            }
            "compose" => {
                // g . f = h
                let (lhs, h) = line.split_once('=').ok_or_else(|| ParseError::Syntax {
                    line: lineno,
                    expected: "g . f = h".into(),
                })?;
                let (g, f) = lhs.split_once('.').ok_or_else(|| ParseError::Syntax {
                    line: lineno,
                    expected: "g . f".into(),
                })?;
                let entry =
                    (g.trim().to_string(), f.trim().to_string(), h.trim().to_string());
                for m in [&entry.0, &entry.1, &entry.2] {
                    if !spec.raw.morphisms.iter().any(|(n, _, _)| n == m) {
                        return Err(ParseError::UnknownReference {
                            line: lineno,
                            name: m.clone(),
                        });
                    }
                }
                spec.raw.compositions.push(entry);
            }
            s if s.starts_with("family ") => {
                let fam = spec.families.last_mut().unwrap();
                if line == "wide" {
                    fam.1 = true;
                } else {
                    for part in line.split(',') {
                        let part = part.trim();
                        if part.is_empty() {
                            continue;
                        }
                        if !spec.raw.morphisms.iter().any(|(n, _, _)| n == part) {
                            return Err(ParseError::UnknownReference {
                                line: lineno,
                                name: part.to_string(),
                            });
                        }
                        fam.2.push(part.to_string());
                    }
                }
            }
            s if s.starts_with("indexing ") => {
                let ix = spec.indexings.last_mut().unwrap();
                if let Some(rest) = line.strip_prefix("fiber ") {
                    let (obj, path) = rest.split_once('=').ok_or_else(|| ParseError::Syntax {
                        line: lineno,
                        expected: "fiber OBJ = file:PATH".into(),
                    })?;
                    let path = path.trim().strip_prefix("file:").ok_or_else(|| {
                        ParseError::Syntax { line: lineno, expected: "file:PATH".into() }
                    })?;
                    ix.fibers.push((obj.trim().to_string(), path.to_string()));
                } else if let Some(rest) = line.strip_prefix("restrict ") {
                    let (m, path) = rest.split_once('=').ok_or_else(|| ParseError::Syntax {
                        line: lineno,
                        expected: "restrict MOR = file:PATH".into(),
                    })?;
                    let path = path.trim().strip_prefix("file:").ok_or_else(|| {
                        ParseError::Syntax { line: lineno, expected: "file:PATH".into() }
                    })?;
                    ix.restricts.push((m.trim().to_string(), path.to_string()));
                } else {
                    return Err(ParseError::Syntax {
                        line: lineno,
                        expected: "fiber or restrict line".into(),
                    });
                }
            }
            _ => {
                return Err(ParseError::Syntax {
                    line: lineno,
                    expected: "content inside a section".into(),
                })
            }
        }
    }
    Ok(spec)
}

pub fn serialize_category_spec(spec: &CategorySpec) -> String {
    let mut out = String::new();
    if !spec.raw.name.is_empty() {
        out.push_str(&format!("[category {}]\n", spec.raw.name));
    }
    out.push_str("[objects]\n");
    for o in &spec.raw.objects {
        out.push_str(o);
        out.push('\n');
    }
    out.push_str("[morphisms]\n");
    for (n, s, t) in &spec.raw.morphisms {
        out.push_str(&format!("{n} : {s} -> {t}\n"));
    }
    out.push_str("[identities]\n");
    for (o, m) in &spec.raw.identities {
        out.push_str(&format!("{o} = {m}\n"));
    }
    out.push_str("[compose]\n");
    for (g, f, h) in &spec.raw.compositions {
        out.push_str(&format!("{g} . {f} = {h}\n"));
    }
    for (name, wide, members) in &spec.families {
        out.push_str(&format!("[family {name}]\n"));
        if *wide {
            out.push_str("wide\n");
        }
        if !members.is_empty() {
            out.push_str(&members.join(", "));
            out.push('\n');
        }
    }
    for ix in &spec.indexings {
        out.push_str(&format!("[indexing {}]\n", ix.name));
        for (o, p) in &ix.fibers {
            out.push_str(&format!("fiber {o} = file:{p}\n"));
        }
        for (m, p) in &ix.restricts {
            out.push_str(&format!("restrict {m} = file:{p}\n"));
        }
    }
    out
}

/// A functor description file: `source = file:...`, `target = file:...`,
/// `ob A => B`, `mor f => g`.
pub fn parse_functor_file(
    text: &str,
    base_dir: &Path,
    load: &mut dyn FnMut(&Path) -> Result<Arc<FinCat>, ParseError>,
) -> Result<Functor, ParseError> {
    let mut src: Option<Arc<FinCat>> = None;
    let mut tgt: Option<Arc<FinCat>> = None;
    let mut ob_assign: BTreeMap<String, String> = BTreeMap::new();
    let mut mor_assign: BTreeMap<String, String> = BTreeMap::new();
    for (ln, raw_line) in text.lines().enumerate() {
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with('[') {
            continue;
        }
        let lineno = ln + 1;
        if let Some(rest) = line.strip_prefix("source =") {
            let p = rest.trim().strip_prefix("file:").ok_or_else(|| ParseError::Syntax {
                line: lineno,
                expected: "file:PATH".into(),
            })?;
            src = Some(load(&base_dir.join(p))?);
        } else if let Some(rest) = line.strip_prefix("target =") {
            let p = rest.trim().strip_prefix("file:").ok_or_else(|| ParseError::Syntax {
                line: lineno,
                expected: "file:PATH".into(),
            })?;
            tgt = Some(load(&base_dir.join(p))?);
        } else if let Some(rest) = line.strip_prefix("ob ") {
            let (a, b) = rest.split_once("=>").ok_or_else(|| ParseError::Syntax {
                line: lineno,
                expected: "ob A => B".into(),
            })?;
            ob_assign.insert(a.trim().to_string(), b.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("mor ") {
            let (a, b) = rest.split_once("=>").ok_or_else(|| ParseError::Syntax {
                line: lineno,
                expected: "mor f => g".into(),
            })?;
            mor_assign.insert(a.trim().to_string(), b.trim().to_string());
        } else {
            return Err(ParseError::Syntax { line: lineno, expected: "functor line".into() });
        }
    }
    let src = src.ok_or(ParseError::Syntax { line: 0, expected: "source =".into() })?;
    let tgt = tgt.ok_or(ParseError::Syntax { line: 0, expected: "target =".into() })?;
    let mut ob_map: Vec<Ob> = Vec::with_capacity(src.n_objects());
    for o in src.objects() {
        let name = src.object_name(o);
        let img = ob_assign.get(name).ok_or_else(|| ParseError::UnknownReference {
            line: 0,
            name: name.to_string(),
        })?;
        ob_map.push(tgt.object_by_name(img).ok_or_else(|| ParseError::UnknownReference {
            line: 0,
            name: img.clone(),
        })?);
    }
    let mut mor_map: Vec<Mor> = Vec::with_capacity(src.n_morphisms());
    for m in src.morphisms() {
        let name = src.mor_name(m);
        let img = mor_assign.get(name).ok_or_else(|| ParseError::UnknownReference {
            line: 0,
            name: name.to_string(),
        })?;
        mor_map.push(tgt.mor_by_name(img).ok_or_else(|| ParseError::UnknownReference {
            line: 0,
            name: img.clone(),
        })?);
    }
    Ok(Functor { src, tgt, ob_map, mor_map })
}

/// Load a category description from disk.
pub fn load_category_file(path: &Path) -> Result<CategorySpec, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_category_file(&text)
}

/// Resolve an indexing from a spec into a validated strict CatFunctor,
/// loading companion files relative to `base_dir`.
pub fn load_indexing(
    spec: &CategorySpec,
    name: &str,
    base: &Arc<FinCat>,
    base_dir: &Path,
) -> Result<crate::catfun::CatFunctor, ParseError> {
    let ix = spec
        .indexings
        .iter()
        .find(|i| i.name == name)
        .ok_or_else(|| ParseError::UnknownReference { line: 0, name: name.to_string() })?;
    let mut cat_cache: BTreeMap<PathBuf, Arc<FinCat>> = BTreeMap::new();
    let mut load = |p: &Path| -> Result<Arc<FinCat>, ParseError> {
        if let Some(c) = cat_cache.get(p) {
            return Ok(c.clone());
        }
        let spec = load_category_file(p)?;
        let cat = FinCat::validate(&spec.raw).map_err(|e| ParseError::Io {
            path: p.display().to_string(),
            message: format!("{e:?}"),
        })?;
        cat_cache.insert(p.to_path_buf(), cat.clone());
        Ok(cat)
    };
    let mut fibers: Vec<Option<Arc<FinCat>>> = vec![None; base.n_objects()];
    for (obj, path) in &ix.fibers {
        let o = base.object_by_name(obj).ok_or_else(|| ParseError::UnknownReference {
            line: 0,
            name: obj.clone(),
        })?;
        fibers[o.idx()] = Some(load(&base_dir.join(path))?);
    }
    let fibers: Vec<Arc<FinCat>> = fibers
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            f.ok_or_else(|| ParseError::UnknownReference {
                line: 0,
                name: format!("fiber for object {}", base.object_name(Ob(i as u32))),
            })
        })
        .collect::<Result<_, _>>()?;
    let mut res: Vec<Option<Functor>> = vec![None; base.n_morphisms()];
    for (mname, path) in &ix.restricts {
        let m = base.mor_by_name(mname).ok_or_else(|| ParseError::UnknownReference {
            line: 0,
            name: mname.clone(),
        })?;
        let text = std::fs::read_to_string(base_dir.join(path)).map_err(|e| ParseError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
        res[m.idx()] = Some(parse_functor_file(&text, base_dir, &mut load)?);
    }
    // identities default to identity functors
    for o in base.objects() {
        let m = base.identity(o);
        if res[m.idx()].is_none() {
            res[m.idx()] = Some(Functor::identity(&fibers[o.idx()]));
        }
    }
    let res: Vec<Functor> = res
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            f.ok_or_else(|| ParseError::UnknownReference {
                line: 0,
                name: format!("restriction for {}", base.mor_name(Mor(i as u32))),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(crate::catfun::CatFunctor { base: base.clone(), fibers, res })
}
