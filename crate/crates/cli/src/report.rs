//! The serialized result model shared by the JSON, CSV and text emitters.

use std::collections::BTreeMap;
use std::fmt;

use cpn_bundles::comodule::Summand;
use cpn_bundles::counts::CountResult;
use cpn_bundles::detection::{DetectionInstance, Target};
use cpn_bundles::eo::Contribution;
use cpn_bundles::verify::CheckOutcome;
use cpn_bundles::FinitePGroup;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

/// Largest integer a double represents exactly.
pub const MAX_SAFE_INTEGER: i64 = (1 << 53) - 1;

/// An integer that serializes as a JSON number when it fits in a double and
/// as a decimal string otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Int(pub i64);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.unsigned_abs() <= MAX_SAFE_INTEGER as u64 {
            s.serialize_i64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(n) => Ok(Int(n)),
            Repr::Str(s) => s.parse().map(Int).map_err(serde::de::Error::custom),
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Self {
        Int(v)
    }
}

impl From<u32> for Int {
    fn from(v: u32) -> Self {
        Int(i64::from(v))
    }
}

pub fn pair(s: Summand) -> [Int; 2] {
    [Int(s.half_shift), Int(s.length)]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub prime: Int,
    pub rank: Int,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_rank: Option<Int>,
    pub torsion_exponent: u32,
    pub source: String,
    pub citation: String,
}

impl From<&DetectionInstance> for InstanceJson {
    fn from(d: &DetectionInstance) -> Self {
        let (target, dim, degree, group_rank) = match d.target {
            Target::Projective { dim } => ("projective", Some(Int(dim)), None, None),
            Target::Unitary { degree, group_rank } => ("unitary", None, Some(Int(degree)), Some(Int(group_rank))),
        };
        InstanceJson {
            prime: Int(d.prime.get()),
            rank: Int(d.rank),
            target: target.to_string(),
            dim,
            degree,
            group_rank,
            torsion_exponent: d.torsion_exponent,
            source: d.source_label.clone(),
            citation: d.citation.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContributionJson {
    pub source: [Int; 2],
    pub dual: [Int; 2],
    pub piece: [Int; 2],
}

impl From<&Contribution> for ContributionJson {
    fn from(c: &Contribution) -> Self {
        ContributionJson { source: pair(c.source), dual: pair(c.dual), piece: pair(c.piece) }
    }
}

/// One line of a bundle table; also the CSV record layout.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub rank: Int,
    pub dim: Int,
    pub corank: Int,
    pub metastable: bool,
    pub kind: String,
    pub valuation: Option<Int>,
    pub group: String,
    pub citation: String,
}

impl Row {
    pub fn new(rank: i64, dim: i64, res: &CountResult) -> Self {
        Row {
            rank: Int(rank),
            dim: Int(dim),
            corank: Int(dim - rank),
            metastable: res.metastable,
            kind: res.kind.as_str().to_string(),
            valuation: res.valuation.map(Int::from),
            group: res.group.as_ref().map(FinitePGroup::order_string).unwrap_or_default(),
            citation: res.citations.join(";"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub id: u32,
    pub name: String,
    pub status: String,
    pub instances: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub documented: Option<String>,
}

impl From<&CheckOutcome> for CheckJson {
    fn from(c: &CheckOutcome) -> Self {
        CheckJson {
            id: c.id,
            name: c.name.to_string(),
            status: if c.passed() { "pass" } else { "fail" }.to_string(),
            instances: c.instances,
            failures: c.failures.len(),
            first_failure: c.failures.first().cloned(),
            documented: c.documented.clone(),
        }
    }
}

/// Every field a command can produce; each command fills the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Payload {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metastable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eo_lower_bound: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_amended: Option<Int>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Vec<[Int; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub main: Option<Vec<[Int; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub junk: Option<Vec<[Int; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contributions: Option<Vec<ContributionJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<Vec<InstanceJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<Row>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Payload {
    pub fn set_group(&mut self, g: &FinitePGroup) {
        self.group = Some(g.exponents().to_vec());
        self.order = Some(g.order_string());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub query: BTreeMap<String, Value>,
    pub result: Payload,
    pub citations: Vec<String>,
}

impl Report {
    /// Pretty JSON with keys in sorted order and a trailing newline.
    pub fn to_json(&self) -> String {
        // Going through `Value` sorts object keys.
        let v = serde_json::to_value(self).expect("report is always serializable");
        let mut s = serde_json::to_string_pretty(&v).expect("value is always serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let r = &self.result;
        if let Some(rows) = &r.rows {
            w.write_record(["rank", "dim", "corank", "metastable", "kind", "valuation", "group", "citation"])?;
            for row in rows {
                w.serialize(row)?;
            }
        } else if let Some(checks) = &r.checks {
            w.write_record(["id", "name", "status", "instances", "failures"])?;
            for c in checks {
                w.write_record([c.id.to_string(), c.name.clone(), c.status.clone(), c.instances.to_string(), c.failures.to_string()])?;
            }
        } else if let Some(instances) = &r.instances {
            w.write_record(["prime", "rank", "target", "dim", "degree", "torsion_exponent", "source", "citation"])?;
            let opt = |v: Option<Int>| v.map(|x| x.to_string()).unwrap_or_default();
            for i in instances {
                w.write_record([
                    i.prime.to_string(),
                    i.rank.to_string(),
                    i.target.clone(),
                    opt(i.dim),
                    opt(i.degree),
                    i.torsion_exponent.to_string(),
                    i.source.clone(),
                    i.citation.clone(),
                ])?;
            }
        } else if r.main.is_some() || r.decomposition.is_some() {
            w.write_record(["part", "half_shift", "length"])?;
            let parts = [("main", &r.main), ("junk", &r.junk)];
            let mut wrote = false;
            for (name, list) in parts {
                for [s, l] in list.iter().flatten() {
                    w.write_record([name.to_string(), s.to_string(), l.to_string()])?;
                    wrote = true;
                }
            }
            if !wrote {
                for [s, l] in r.decomposition.iter().flatten() {
                    w.write_record(["all".to_string(), s.to_string(), l.to_string()])?;
                }
            }
        } else {
            w.write_record(["kind", "valuation", "group", "order", "eo_lower_bound", "justification", "citation"])?;
            let opt = |v: Option<Int>| v.map(|x| x.to_string()).unwrap_or_default();
            let group = r
                .group
                .as_ref()
                .map(|g| g.iter().map(u32::to_string).collect::<Vec<_>>().join(";"))
                .unwrap_or_default();
            w.write_record([
                r.kind.clone().unwrap_or_default(),
                opt(r.valuation),
                group,
                r.order.clone().unwrap_or_default(),
                opt(r.eo_lower_bound),
                r.justification.clone().unwrap_or_default(),
                self.citations.join(";"),
            ])?;
        }
        w.flush()?;
        Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let r = &self.result;
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<15} {v}\n"));
        let list = |xs: &[[Int; 2]]| {
            if xs.is_empty() {
                "(none)".to_string()
            } else {
                xs.iter().map(|[s, l]| format!("S^{}W_{}", 2 * s.0, l)).collect::<Vec<_>>().join(" + ")
            }
        };
        if let Some(k) = &r.kind {
            line("kind", k.clone());
        }
        if let Some(v) = r.valuation {
            line("valuation", v.to_string());
        }
        if let Some(o) = &r.order {
            let g = r.group.as_deref().unwrap_or_default();
            let prime = self.query.get("prime").and_then(Value::as_i64);
            let cyclic = |e: u32| match prime.and_then(|p| p.checked_pow(e)) {
                Some(order) => format!("Z/{order}"),
                None => format!("Z/p^{e}"),
            };
            let shape = if g.is_empty() {
                "0".to_string()
            } else {
                g.iter().map(|&e| cyclic(e)).collect::<Vec<_>>().join(" + ")
            };
            line("group", format!("{shape} (order {o})"));
        }
        if let Some(m) = r.metastable {
            line("metastable", m.to_string());
        }
        if let Some(b) = r.eo_lower_bound {
            line("eo lower bound", format!("p^{b}"));
        }
        if let Some(j) = r.j {
            line("j", j.to_string());
        }
        if let Some(j) = r.j_amended {
            line("j (amended)", j.to_string());
        }
        if let Some(j) = &r.justification {
            line("justification", j.clone());
        }
        if let Some(m) = &r.main {
            line("main", list(m));
        }
        if let Some(j) = &r.junk {
            line("junk", list(j));
        }
        if r.main.is_none() {
            if let Some(d) = &r.decomposition {
                line("decomposition", list(d));
            }
        }
        if let Some(cs) = &r.contributions {
            for c in cs {
                line(
                    "contribution",
                    format!("{} x {} -> {}", list(&[c.source]), list(&[c.dual]), list(&[c.piece])),
                );
            }
        }
        if let Some(t) = &r.toda {
            line("toda", t.clone());
        }
        if let Some(is) = &r.instances {
            if is.is_empty() {
                line("instances", "(none)".to_string());
            }
            for i in is {
                let target = match (i.dim, i.degree, i.group_rank) {
                    (Some(d), _, _) => format!("rank {} on CP^{d}", i.rank),
                    (_, Some(deg), Some(g)) => format!("pi_{deg} BU({g})"),
                    _ => format!("rank {}", i.rank),
                };
                line("instance", format!("Z/{}^{} {target} from {} [{}]", i.prime, i.torsion_exponent, i.source, i.citation));
            }
        }
        if let Some(n) = &r.note {
            line("note", n.clone());
        }
        if !self.citations.is_empty() {
            line("citations", self.citations.join(", "));
        }
        if let Some(rows) = &r.rows {
            out.push_str(&format!(
                "{:>8} {:>8} {:>6} {:>10} {:>11} {:>9} {:>6}  citation\n",
                "rank", "dim", "corank", "metastable", "kind", "valuation", "group"
            ));
            for row in rows {
                out.push_str(&format!(
                    "{:>8} {:>8} {:>6} {:>10} {:>11} {:>9} {:>6}  {}\n",
                    row.rank.0,
                    row.dim.0,
                    row.corank.0,
                    row.metastable,
                    row.kind,
                    row.valuation.map(|v| v.to_string()).unwrap_or_else(|| "-".to_string()),
                    if row.group.is_empty() { "-" } else { &row.group },
                    row.citation
                ));
            }
        }
        if let Some(checks) = &r.checks {
            for c in checks {
                let status = c.status.to_uppercase();
                out.push_str(&format!("[{status}] {:>2}. {} ({} instances", c.id, c.name, c.instances));
                if c.failures > 0 {
                    out.push_str(&format!(", {} failures; first: {}", c.failures, c.first_failure.as_deref().unwrap_or("")));
                }
                out.push(')');
                if let Some(d) = &c.documented {
                    out.push_str(&format!(" [documented: {d}]"));
                }
                out.push('\n');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_become_strings() {
        let small = serde_json::to_string(&Int(MAX_SAFE_INTEGER)).unwrap();
        assert_eq!(small, "9007199254740991");
        let big = serde_json::to_string(&Int(MAX_SAFE_INTEGER + 1)).unwrap();
        assert_eq!(big, "\"9007199254740992\"");
        let neg = serde_json::to_string(&Int(i64::MIN)).unwrap();
        assert_eq!(neg, "\"-9223372036854775808\"");
        for s in [small, big, neg] {
            let back: Int = serde_json::from_str(&s).unwrap();
            assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }
    }

    #[test]
    fn group_fields() {
        let three = cpn_bundles::Prime::new(3).unwrap();
        let mut p = Payload::default();
        p.set_group(&FinitePGroup::cyclic(three, 1));
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!({"group": [1], "order": "3^1"}));
        p.set_group(&FinitePGroup::trivial(three));
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!({"group": [], "order": "1"}));
    }

    #[test]
    fn decomposition_pairs_are_sorted_arrays() {
        let d = [Summand::new(9, 1), Summand::new(10, 2), Summand::new(11, 2)];
        let v = serde_json::to_value(d.iter().map(|&s| pair(s)).collect::<Vec<_>>()).unwrap();
        assert_eq!(v, serde_json::json!([[9, 1], [10, 2], [11, 2]]));
    }
}
