//! Structured reports with machine-checkable witnesses.
//!
//! The machine form is deterministic JSON: given identical inputs and
//! guards, the serialized bytes are identical across runs, so the duration
//! field carries a fixed placeholder in the machine form (wall-clock time is
//! reported on the human side only). Every failure witness can be re-run in
//! isolation through [`recheck`].

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::classes::{self, MorphismFamily};
use crate::fincat::FinCat;
use crate::limits::pullback;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Untestable,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: CheckVerdict,
    pub witness: serde_json::Value,
    pub instances: u64,
    pub untestable: u64,
}

impl Check {
    pub fn pass(name: &str, instances: u64, untestable: u64) -> Check {
        Check {
            name: name.to_string(),
            verdict: CheckVerdict::Pass,
            witness: serde_json::Value::Null,
            instances,
            untestable,
        }
    }

    pub fn fail(name: &str, witness: serde_json::Value) -> Check {
        Check {
            name: name.to_string(),
            verdict: CheckVerdict::Fail,
            witness,
            instances: 0,
            untestable: 0,
        }
    }

    pub fn untestable(name: &str, reason: &str) -> Check {
        Check {
            name: name.to_string(),
            verdict: CheckVerdict::Untestable,
            witness: serde_json::json!({ "reason": reason }),
            instances: 0,
            untestable: 1,
        }
    }
}

/// A command report. `duration_ms` is always 0 in the machine form so the
/// serialization is byte-exact across runs; the human printer reports
/// wall-clock time separately.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub duration_ms: u64,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            checks: Vec::new(),
            duration_ms: 0,
        }
    }

    pub fn input(&mut self, key: &str, value: &str) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.verdict != CheckVerdict::Fail)
    }

    pub fn machine_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn human_text(&self, elapsed_ms: u64) -> String {
        let mut out = format!("== {} ==\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("   input {k} = {v}\n"));
        }
        for c in &self.checks {
            let tag = match c.verdict {
                CheckVerdict::Pass => "PASS",
                CheckVerdict::Fail => "FAIL",
                CheckVerdict::Untestable => "SKIP",
            };
            out.push_str(&format!(
                "  [{tag}] {} (instances={}, untestable={})\n",
                c.name, c.instances, c.untestable
            ));
            if c.verdict == CheckVerdict::Fail {
                out.push_str(&format!("         witness: {}\n", c.witness));
            }
        }
        out.push_str(&format!(
            "  {} checks, {} failed, wall-clock {elapsed_ms} ms\n",
            self.checks.len(),
            self.checks.iter().filter(|c| c.verdict == CheckVerdict::Fail).count()
        ));
        out
    }
}

/// Convert an axiom verdict into a check entry.
pub fn check_from_verdict(name: &str, v: &classes::Verdict) -> Check {
    match v {
        classes::Verdict::Pass { checked, untestable } => Check::pass(name, *checked, *untestable),
        classes::Verdict::Fail { witness } => {
            Check::fail(name, serde_json::to_value(witness).unwrap())
        }
    }
}

/// Re-run a single witness against a category and named families. Returns
/// the reproduced verdict (true = the recorded failure reproduces).
pub fn recheck(
    cat: &Arc<FinCat>,
    families: &BTreeMap<String, MorphismFamily>,
    witness: &serde_json::Value,
) -> Result<bool, String> {
    let kind = witness
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| "witness missing `kind`".to_string())?;
    let fam = |name: &str| -> Result<&MorphismFamily, String> {
        families.get(name).ok_or_else(|| format!("unknown family `{name}`"))
    };
    let mor = |v: &serde_json::Value, key: &str| -> Result<crate::fincat::Mor, String> {
        let name = v.get(key).and_then(|x| x.as_str()).ok_or(format!("missing `{key}`"))?;
        cat.mor_by_name(name).ok_or(format!("unknown morphism `{name}`"))
    };
    match kind {
        "left_cancellable" => {
            // failure reproduces if g f and g lie in the family but f does not
            let family = fam(witness["family"].as_str().unwrap_or_default())?;
            let f = mor(witness, "f")?;
            let g = mor(witness, "g")?;
            let h = cat.comp(g, f).ok_or("pair not composable")?;
            Ok(family.contains(h) && family.contains(g) && !family.contains(f))
        }
        "wide" => {
            let family = fam(witness["family"].as_str().unwrap_or_default())?;
            let ob = witness["object"].as_str().ok_or("missing `object`")?;
            let o = cat.object_by_name(ob).ok_or("unknown object")?;
            Ok(!family.contains(cat.identity(o)))
        }
        "composition_closed" => {
            let family = fam(witness["family"].as_str().unwrap_or_default())?;
            let f = mor(witness, "f")?;
            let g = mor(witness, "g")?;
            let h = cat.comp(g, f).ok_or("pair not composable")?;
            Ok(family.contains(f) && family.contains(g) && !family.contains(h))
        }
        "base_change" => {
            let family = fam(witness["family"].as_str().unwrap_or_default())?;
            let k = mor(witness, "family_member")?;
            let g = mor(witness, "along")?;
            let cone = pullback(cat, k, g).ok_or("pullback missing at recheck")?;
            Ok(family.contains(k) && !family.contains(cone.pr_right))
        }
        "no_factorization" => {
            let i_fam = fam("I")?;
            let p_fam = fam("P")?;
            let e = mor(witness, "e")?;
            Ok(classes::factorizations(cat, e, i_fam, p_fam).is_err())
        }
        "bc_double" => {
            // reproduce the elementwise oracle verdict for a subset square
            let bottom = mor(witness, "bottom")?;
            let right = mor(witness, "right")?;
            let cone = pullback(cat, bottom, right).ok_or("pullback missing at recheck")?;
            let verdict = crate::catalog::subset_double_bc_oracle(
                cat,
                bottom,
                right,
                cone.pr_right,
                cone.pr_left,
            );
            Ok(!verdict)
        }
        other => Err(format!("unknown witness kind `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn machine_form_is_deterministic() {
        let mk = || {
            let mut r = Report::new("demo");
            r.input("input", "builtin:finset2");
            r.checks.push(Check::pass("something", 10, 0));
            r.machine_json()
        };
        assert_eq!(mk(), mk());
    }

    #[test]
    fn recheck_left_cancellable_witness() {
        let c = catalog::gen_finset(2);
        let surj = catalog::finset_surjections(&c);
        let verdict = classes::is_left_cancellable(&surj);
        let classes::Verdict::Fail { witness } = verdict else { panic!("expected failure") };
        let classes::Witness::Pair { f, g } = &witness else { panic!("expected pair") };
        let mut fams = BTreeMap::new();
        fams.insert("P".to_string(), surj);
        let json = serde_json::json!({ "kind": "left_cancellable", "family": "P", "f": f, "g": g });
        assert!(recheck(&c, &fams, &json).unwrap());
    }
}
