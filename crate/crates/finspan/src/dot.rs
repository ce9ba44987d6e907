//! DOT export for categories, spans, 2-cells, and zig-zag paths, plus a
//! minimal syntax check used by the tests.

use crate::fincat::FinCat;
use crate::span2::TwoCell;
use crate::spancat::{Span, TwCat};

fn esc(s: &str) -> String {
    s.replace('"', "\\\"")
}

/// Nodes are objects, edges are non-identity morphisms.
pub fn export_category(cat: &FinCat) -> String {
    let mut out = format!("digraph \"{}\" {{\n", esc(&cat.name));
    for o in cat.objects() {
        out.push_str(&format!("  \"{}\";\n", esc(cat.object_name(o))));
    }
    for m in cat.morphisms() {
        if cat.is_identity(m) {
            continue;
        }
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            esc(cat.object_name(cat.src(m))),
            esc(cat.object_name(cat.tgt(m))),
            esc(cat.mor_name(m))
        ));
    }
    out.push_str("}\n");
    out
}

/// A span category rendered with edges labelled "x <- z -> y".
pub fn export_span_category(span: &crate::spancat::SpanCat) -> String {
    let c = &span.base;
    let mut out = format!("digraph \"{}\" {{\n", esc(&span.cat.name));
    for o in span.cat.objects() {
        out.push_str(&format!("  \"{}\";\n", esc(span.cat.object_name(o))));
    }
    for m in span.cat.morphisms() {
        if span.cat.is_identity(m) {
            continue;
        }
        let s = span.rep(m);
        let label = format!(
            "{} <- {} -> {}",
            c.object_name(c.tgt(s.left)),
            c.object_name(s.apex(c)),
            c.object_name(c.tgt(s.right))
        );
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            esc(span.cat.object_name(span.cat.src(m))),
            esc(span.cat.object_name(span.cat.tgt(m))),
            esc(&label)
        ));
    }
    out.push_str("}\n");
    out
}

/// A 2-cell as a layered diagram: the source span on top, the target span
/// below, the apex between them.
pub fn export_two_cell(cat: &FinCat, cell: &TwoCell) -> String {
    let apex = |s: &Span| cat.object_name(s.apex(cat)).to_string();
    let (x, y) = cell.src.feet(cat);
    let mut out = String::from("digraph cell {\n  rankdir=TB;\n");
    out.push_str(&format!(
        "  src [label=\"{} <- {} -> {}\"];\n",
        esc(cat.object_name(x)),
        esc(&apex(&cell.src)),
        esc(cat.object_name(y))
    ));
    out.push_str(&format!(
        "  mid [label=\"{}\"];\n",
        esc(cat.object_name(cat.src(cell.up)))
    ));
    out.push_str(&format!(
        "  tgt [label=\"{} <- {} -> {}\"];\n",
        esc(cat.object_name(x)),
        esc(&apex(&cell.tgt)),
        esc(cat.object_name(y))
    ));
    out.push_str(&format!("  mid -> src [label=\"{}\"];\n", esc(cat.mor_name(cell.up))));
    out.push_str(&format!("  mid -> tgt [label=\"{}\"];\n", esc(cat.mor_name(cell.down))));
    out.push_str("}\n");
    out
}

/// The twisted arrow poset with only the covering arrows.
pub fn export_tw(tw: &TwCat) -> String {
    let cat = &tw.cat;
    let mut out = format!("digraph \"Tw{}\" {{\n", tw.n);
    for o in cat.objects() {
        out.push_str(&format!("  \"{}\";\n", esc(cat.object_name(o))));
    }
    for m in cat.morphisms() {
        if cat.is_identity(m) {
            continue;
        }
        // keep covering arrows only: no factorization through a third object
        let (s, t) = (cat.src(m), cat.tgt(m));
        let covering = !cat.objects().any(|w| {
            w != s
                && w != t
                && !cat.hom(s, w).is_empty()
                && !cat.hom(w, t).is_empty()
                && cat.hom(s, w).iter().all(|x| !cat.is_identity(*x))
                && cat.hom(w, t).iter().all(|x| !cat.is_identity(*x))
        });
        if covering {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                esc(cat.object_name(s)),
                esc(cat.object_name(t))
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// A zig-zag path through a factorization category.
pub fn export_zigzag(
    fc: &crate::classes::FactorizationCat,
    cat: &FinCat,
    start: usize,
    path: &[crate::extend::ZigZagStep],
) -> String {
    let mut out = String::from("digraph zigzag {\n  rankdir=LR;\n");
    let label = |i: usize| {
        let (im, pm) = fc.facs[i];
        format!("({}, {})", cat.mor_name(im), cat.mor_name(pm))
    };
    let mut nodes = vec![start];
    let mut cur = start;
    for step in path {
        let (m, fwd) = match step {
            crate::extend::ZigZagStep::Forward(m) => (*m, true),
            crate::extend::ZigZagStep::Backward(m) => (*m, false),
        };
        let (s, t) = (fc.cat.src(m).idx(), fc.cat.tgt(m).idx());
        let next = if fwd { t } else { s };
        out.push_str(&format!(
            "  \"n{}\" -> \"n{}\" [label=\"{}\"{}];\n",
            if fwd { s } else { t },
            if fwd { t } else { s },
            esc(cat.mor_name(fc.mediators[m.idx()])),
            if fwd { "" } else { ", dir=back" }
        ));
        nodes.push(next);
        cur = next;
    }
    let _ = cur;
    nodes.sort_unstable();
    nodes.dedup();
    for n in nodes {
        out.push_str(&format!("  \"n{}\" [label=\"{}\"];\n", n, esc(&label(n))));
    }
    out.push_str("}\n");
    out
}

/// Minimal DOT well-formedness check: one digraph block, balanced braces,
/// each statement a node or an edge, quotes balanced.
pub fn validate_dot(text: &str) -> bool {
    let trimmed = text.trim();
    if !trimmed.starts_with("digraph") {
        return false;
    }
    let Some(open) = trimmed.find('{') else { return false };
    if !trimmed.ends_with('}') {
        return false;
    }
    let body = &trimmed[open + 1..trimmed.len() - 1];
    for stmt in body.split(';') {
        let stmt = stmt.trim();
        if stmt.is_empty() {
            continue;
        }
        if stmt.matches('"').count() % 2 != 0 {
            return false;
        }
        if stmt.contains('[') != stmt.contains(']') {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::spancat::tw;

    #[test]
    fn tw2_renders_six_nodes() {
        let t = tw(2);
        let dot = export_tw(&t);
        assert!(validate_dot(&dot));
        let nodes = dot.lines().filter(|l| l.trim().starts_with("\"t") && !l.contains("->")).count();
        assert_eq!(nodes, 6);
    }

    #[test]
    fn category_export_valid() {
        let c = catalog::gen_divisor_lattice(6);
        let dot = export_category(&c);
        assert!(validate_dot(&dot));
    }
}
