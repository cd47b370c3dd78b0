use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::Specialization;
use crate::error::{Error, Result};

pub const TABLE_SCHEMA: &str = "chromatic.hh-table/v1";

/// Which route produced a Hochschild homology table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hkr,
    Koszul,
    Bar,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Hkr => "hkr",
            Method::Koszul => "koszul",
            Method::Bar => "bar",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hkr" => Ok(Method::Hkr),
            "koszul" => Ok(Method::Koszul),
            "bar" => Ok(Method::Bar),
            _ => Err(Error::Parse(format!("unknown method `{s}`"))),
        }
    }
}

/// Ranks indexed by homological degree `s` and internal degree `t`, over the
/// domain `s <= s_max`, `lo <= t <= hi`. Zero ranks are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedTable {
    pub method: Method,
    pub s_max: u32,
    pub window: (i32, i32),
    pub specialization: Option<Specialization>,
    entries: BTreeMap<(u32, i32), u64>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    schema: String,
    method: Method,
    s_max: u32,
    window: [i32; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    specialization: Option<Specialization>,
    entries: Vec<TableEntry>,
}

#[derive(Serialize, Deserialize)]
struct TableEntry {
    s: u32,
    t: i32,
    rank: u64,
}

impl BigradedTable {
    pub fn new(method: Method, s_max: u32, window: (i32, i32)) -> Self {
        BigradedTable {
            method,
            s_max,
            window,
            specialization: None,
            entries: BTreeMap::new(),
        }
    }

    pub fn in_domain(&self, s: u32, t: i32) -> bool {
        s <= self.s_max && self.window.0 <= t && t <= self.window.1
    }

    pub fn get(&self, s: u32, t: i32) -> u64 {
        self.entries.get(&(s, t)).copied().unwrap_or(0)
    }

    /// Adds to an entry; entries outside the domain are dropped.
    pub fn add(&mut self, s: u32, t: i32, rank: u64) {
        if rank == 0 || !self.in_domain(s, t) {
            return;
        }
        *self.entries.entry((s, t)).or_insert(0) += rank;
    }

    pub fn set(&mut self, s: u32, t: i32, rank: u64) {
        if rank == 0 {
            self.entries.remove(&(s, t));
        } else if self.in_domain(s, t) {
            self.entries.insert((s, t), rank);
        }
    }

    /// Nonzero entries in `(s, t)` order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, i32, u64)> + '_ {
        self.entries.iter().map(|(&(s, t), &r)| (s, t, r))
    }

    pub fn total_rank(&self, s: u32) -> u64 {
        self.entries().filter(|e| e.0 == s).map(|e| e.2).sum()
    }

    /// Is everything above homological degree zero trivial?
    pub fn concentrated_in_degree_zero(&self) -> bool {
        self.entries().all(|(s, _, _)| s == 0)
    }

    pub fn restrict(&self, s_max: u32, window: (i32, i32)) -> BigradedTable {
        let mut out = BigradedTable::new(self.method, s_max, window);
        out.specialization = self.specialization.clone();
        for (s, t, r) in self.entries() {
            out.add(s, t, r);
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let file = TableFile {
            schema: TABLE_SCHEMA.into(),
            method: self.method,
            s_max: self.s_max,
            window: [self.window.0, self.window.1],
            specialization: self.specialization.clone(),
            entries: self
                .entries()
                .map(|(s, t, rank)| TableEntry { s, t, rank })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&file).expect("table serializes");
        out.push('\n');
        out
    }

    pub fn from_json_str(input: &str) -> Result<BigradedTable> {
        let file: TableFile = serde_json::from_str(input)?;
        if file.schema != TABLE_SCHEMA {
            return Err(Error::Schema(format!(
                "expected {TABLE_SCHEMA}, found {}",
                file.schema
            )));
        }
        let mut table =
            BigradedTable::new(file.method, file.s_max, (file.window[0], file.window[1]));
        table.specialization = file.specialization;
        for e in file.entries {
            if !table.in_domain(e.s, e.t) {
                return Err(Error::Schema(format!(
                    "entry ({}, {}) outside the table domain",
                    e.s, e.t
                )));
            }
            table.set(e.s, e.t, e.rank);
        }
        Ok(table)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,rank\n");
        for (s, t, r) in self.entries() {
            let _ = writeln!(out, "{s},{t},{r}");
        }
        out
    }

    /// Rows indexed by `s`, columns by the internal degrees that carry a
    /// nonzero rank somewhere.
    pub fn to_tex(&self) -> String {
        let cols: Vec<i32> = {
            let mut ts: Vec<i32> = self.entries().map(|e| e.1).collect();
            ts.sort_unstable();
            ts.dedup();
            ts
        };
        let mut out = String::new();
        let _ = writeln!(out, "\\begin{{tabular}}{{r|{}}}", "c".repeat(cols.len()));
        let header: Vec<String> = cols.iter().map(|t| format!("${t}$")).collect();
        let _ = writeln!(
            out,
            "$s \\backslash t$ & {} \\\\ \\hline",
            header.join(" & ")
        );
        for s in 0..=self.s_max {
            let row: Vec<String> = cols
                .iter()
                .map(|&t| match self.get(s, t) {
                    0 => String::from("\\cdot"),
                    r => r.to_string(),
                })
                .map(|c| format!("${c}$"))
                .collect();
            let _ = writeln!(out, "${s}$ & {} \\\\", row.join(" & "));
        }
        out.push_str("\\end{tabular}\n");
        out
    }
}

/// One bidegree where the compared tables disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub s: u32,
    pub t: i32,
    pub ranks: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffReport {
    pub methods: Vec<Method>,
    pub s_max: u32,
    pub window: (i32, i32),
    pub entries: Vec<DiffEntry>,
}

impl DiffReport {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn require_empty(&self) -> Result<()> {
        match self.entries.first() {
            None => Ok(()),
            Some(e) => Err(Error::Mismatch(format!(
                "{} bidegrees differ, first at (s, t) = ({}, {}) with ranks {:?}",
                self.entries.len(),
                e.s,
                e.t,
                e.ranks
            ))),
        }
    }
}

/// Compares tables on the intersection of their domains.
pub fn compare_methods(tables: &[&BigradedTable]) -> Result<DiffReport> {
    let Some(first) = tables.first() else {
        return Err(Error::Unsupported("nothing to compare".into()));
    };
    let s_max = tables.iter().map(|t| t.s_max).min().unwrap_or(first.s_max);
    let lo = tables
        .iter()
        .map(|t| t.window.0)
        .max()
        .unwrap_or(first.window.0);
    let hi = tables
        .iter()
        .map(|t| t.window.1)
        .min()
        .unwrap_or(first.window.1);
    if lo > hi {
        return Err(Error::OutOfRange("tables have no common window".into()));
    }
    let mut keys: Vec<(u32, i32)> = tables
        .iter()
        .flat_map(|t| t.entries().map(|(s, t, _)| (s, t)))
        .filter(|&(s, t)| s <= s_max && lo <= t && t <= hi)
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let entries = keys
        .into_iter()
        .filter_map(|(s, t)| {
            let ranks: Vec<u64> = tables.iter().map(|x| x.get(s, t)).collect();
            (ranks.iter().any(|&r| r != ranks[0])).then_some(DiffEntry { s, t, ranks })
        })
        .collect();
    Ok(DiffReport {
        methods: tables.iter().map(|t| t.method).collect(),
        s_max,
        window: (lo, hi),
        entries,
    })
}
