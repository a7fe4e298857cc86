//! Sparsity patterns, structured systems and sensor placements.
//!
//! All library indices are 0-based. The JSON document format, error messages
//! and reports use 1-based indices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orientation used by [`SparsityPattern::is_dedicated`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

/// Zero/free structure of a rectangular matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsityPattern {
    rows: usize,
    cols: usize,
    entries: BTreeSet<(usize, usize)>,
}

impl SparsityPattern {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparsityPattern {
            rows,
            cols,
            entries: BTreeSet::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparsityPattern {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// Builds a pattern from 0-based `(row, col)` pairs.
    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (position, (r, c)) in entries.into_iter().enumerate() {
            if r >= rows || c >= cols {
                return Err(Error::OutOfBounds {
                    matrix: "pattern".into(),
                    position: position + 1,
                    row: r + 1,
                    col: c + 1,
                    rows,
                    cols,
                });
            }
            if !set.insert((r, c)) {
                return Err(Error::DuplicateEntry {
                    matrix: "pattern".into(),
                    position: position + 1,
                    row: r + 1,
                    col: c + 1,
                });
            }
        }
        Ok(SparsityPattern {
            rows,
            cols,
            entries: set,
        })
    }

    /// Builds a pattern from 1-based `[row, col]` pairs, naming `matrix` in errors.
    pub fn from_one_based(matrix: &str, rows: usize, cols: usize, entries: &[(i64, i64)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (position, &(r, c)) in entries.iter().enumerate() {
            let in_range = r >= 1 && c >= 1 && (r as u64) <= rows as u64 && (c as u64) <= cols as u64;
            if !in_range {
                return Err(Error::OutOfBounds {
                    matrix: matrix.into(),
                    position: position + 1,
                    row: r.max(0) as usize,
                    col: c.max(0) as usize,
                    rows,
                    cols,
                });
            }
            let key = (r as usize - 1, c as usize - 1);
            if !set.insert(key) {
                return Err(Error::DuplicateEntry {
                    matrix: matrix.into(),
                    position: position + 1,
                    row: r as usize,
                    col: c as usize,
                });
            }
        }
        Ok(SparsityPattern {
            rows,
            cols,
            entries: set,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of free parameters, `‖M‖₀`.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.entries.contains(&(row, col))
    }

    /// Nonzeros in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied()
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = usize> + '_ {
        self.entries.range((row, 0)..(row + 1, 0)).map(|&(_, c)| c)
    }

    pub fn col_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cols];
        for &(_, c) in &self.entries {
            counts[c] += 1;
        }
        counts
    }

    pub fn row_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.rows];
        for &(r, _) in &self.entries {
            counts[r] += 1;
        }
        counts
    }

    /// 1-based entry list in row-major order.
    pub fn to_one_based(&self) -> Vec<[usize; 2]> {
        self.entries.iter().map(|&(r, c)| [r + 1, c + 1]).collect()
    }

    pub fn transpose(&self) -> SparsityPattern {
        SparsityPattern {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    /// Vertical stacking `[self; other]`.
    pub fn stack(&self, other: &SparsityPattern) -> Result<SparsityPattern> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns over {} columns",
                self.cols, other.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|&(r, c)| (r + self.rows, c)));
        Ok(SparsityPattern {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Every line along `axis` has exactly one nonzero and no two lines share
    /// the orthogonal index.
    pub fn is_dedicated(&self, axis: Axis) -> bool {
        let (lines, mut seen) = match axis {
            Axis::Rows => (self.row_counts(), vec![false; self.cols]),
            Axis::Columns => (self.col_counts(), vec![false; self.rows]),
        };
        if lines.iter().any(|&k| k != 1) {
            return false;
        }
        self.entries.iter().all(|&(r, c)| {
            let other = if axis == Axis::Rows { c } else { r };
            !std::mem::replace(&mut seen[other], true)
        })
    }

    pub(crate) fn insert(&mut self, row: usize, col: usize) {
        debug_assert!(row < self.rows && col < self.cols);
        self.entries.insert((row, col));
    }
}

/// Returns `is_dedicated` for `m` along `axis`.
pub fn is_dedicated(m: &SparsityPattern, axis: Axis) -> bool {
    m.is_dedicated(axis)
}

/// Output pattern with one dedicated row per measured state, rows in
/// ascending state order.
pub fn build_output_pattern(states: &[usize], n: usize) -> Result<SparsityPattern> {
    let mut sorted = states.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::BadIndex {
                index: w[0] + 1,
                reason: "listed twice",
            });
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&s| s >= n) {
        return Err(Error::BadIndex {
            index: bad + 1,
            reason: "not a state index",
        });
    }
    SparsityPattern::from_entries(sorted.len(), n, sorted.iter().enumerate().map(|(r, &s)| (r, s)))
}

/// The structured quadruple `(A, B, C, D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSystem {
    a: SparsityPattern,
    b: SparsityPattern,
    c: SparsityPattern,
    d: SparsityPattern,
}

impl StructuredSystem {
    /// Validates block dimensions. `d` defaults to the zero pattern.
    pub fn new(
        a: SparsityPattern,
        b: SparsityPattern,
        c: SparsityPattern,
        d: Option<SparsityPattern>,
    ) -> Result<Self> {
        let n = a.rows();
        if n == 0 {
            return Err(Error::DimensionMismatch("the system needs at least one state".into()));
        }
        if a.cols() != n {
            return Err(Error::DimensionMismatch(format!("A is {}x{}, expected square", n, a.cols())));
        }
        if b.rows() != n {
            return Err(Error::DimensionMismatch(format!("B has {} rows, expected {}", b.rows(), n)));
        }
        if c.cols() != n {
            return Err(Error::DimensionMismatch(format!("C has {} columns, expected {}", c.cols(), n)));
        }
        let d = d.unwrap_or_else(|| SparsityPattern::zeros(c.rows(), b.cols()));
        if d.rows() != c.rows() || d.cols() != b.cols() {
            return Err(Error::DimensionMismatch(format!(
                "D is {}x{}, expected {}x{}",
                d.rows(),
                d.cols(),
                c.rows(),
                b.cols()
            )));
        }
        Ok(StructuredSystem { a, b, c, d })
    }

    /// System without outputs.
    pub fn from_ab(a: SparsityPattern, b: SparsityPattern) -> Result<Self> {
        let n = a.rows();
        StructuredSystem::new(a, b, SparsityPattern::zeros(0, n), None)
    }

    pub fn a(&self) -> &SparsityPattern {
        &self.a
    }

    pub fn b(&self) -> &SparsityPattern {
        &self.b
    }

    pub fn c(&self) -> &SparsityPattern {
        &self.c
    }

    pub fn d(&self) -> &SparsityPattern {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn q(&self) -> usize {
        self.b.cols()
    }

    pub fn m(&self) -> usize {
        self.c.rows()
    }

    /// Every input drives exactly one state and no state has two inputs.
    pub fn has_dedicated_inputs(&self) -> bool {
        self.b.is_dedicated(Axis::Columns)
    }

    /// Every output row measures at most one state or input.
    pub fn has_dedicated_outputs(&self) -> bool {
        let cr = self.c.row_counts();
        let dr = self.d.row_counts();
        cr.iter().zip(&dr).all(|(a, b)| a + b <= 1)
    }

    /// The same `(A, B)` with `C` and `D` removed.
    pub fn without_outputs(&self) -> StructuredSystem {
        StructuredSystem {
            a: self.a.clone(),
            b: self.b.clone(),
            c: SparsityPattern::zeros(0, self.n()),
            d: SparsityPattern::zeros(0, self.q()),
        }
    }

    /// States measured by at least one output row.
    pub fn measured_states(&self) -> BTreeSet<usize> {
        self.c.iter().map(|(_, c)| c).collect()
    }

    /// Appends one dedicated output row per state in `states`.
    pub fn with_state_sensors(&self, states: &[usize]) -> Result<StructuredSystem> {
        self.with_sensors(states, &[])
    }

    /// Appends dedicated rows measuring `states` (through `C`) and then
    /// `inputs` (through `D`).
    pub fn with_sensors(&self, states: &[usize], inputs: &[usize]) -> Result<StructuredSystem> {
        let (n, q) = (self.n(), self.q());
        if let Some(&s) = states.iter().find(|&&s| s >= n) {
            return Err(Error::BadIndex {
                index: s + 1,
                reason: "not a state index",
            });
        }
        if let Some(&u) = inputs.iter().find(|&&u| u >= q) {
            return Err(Error::BadIndex {
                index: u + 1,
                reason: "not an input index",
            });
        }
        let extra = states.len() + inputs.len();
        let m0 = self.m();
        let mut c = SparsityPattern::zeros(m0 + extra, n);
        let mut d = SparsityPattern::zeros(m0 + extra, q);
        for (r, col) in self.c.iter() {
            c.insert(r, col);
        }
        for (r, col) in self.d.iter() {
            d.insert(r, col);
        }
        for (k, &s) in states.iter().enumerate() {
            c.insert(m0 + k, s);
        }
        for (k, &u) in inputs.iter().enumerate() {
            d.insert(m0 + states.len() + k, u);
        }
        Ok(StructuredSystem {
            a: self.a.clone(),
            b: self.b.clone(),
            c,
            d,
        })
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[allow(non_snake_case)]
struct SystemDocument {
    n: usize,
    q: usize,
    m: usize,
    A: Vec<(i64, i64)>,
    B: Vec<(i64, i64)>,
    C: Vec<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    D: Option<Vec<(i64, i64)>>,
}

/// Parses the JSON system document. Unknown top-level fields are ignored.
pub fn parse_system(text: &str) -> Result<StructuredSystem> {
    let doc: SystemDocument = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    from_document(&doc)
}

/// Parses a system from an already-decoded JSON value.
pub fn system_from_value(value: &serde_json::Value) -> Result<StructuredSystem> {
    let doc: SystemDocument =
        serde_json::from_value(value.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
    from_document(&doc)
}

fn from_document(doc: &SystemDocument) -> Result<StructuredSystem> {
    if doc.n == 0 {
        return Err(Error::DimensionMismatch("n must be at least 1".into()));
    }
    let a = SparsityPattern::from_one_based("A", doc.n, doc.n, &doc.A)?;
    let b = SparsityPattern::from_one_based("B", doc.n, doc.q, &doc.B)?;
    let c = SparsityPattern::from_one_based("C", doc.m, doc.n, &doc.C)?;
    let d = match &doc.D {
        Some(entries) => Some(SparsityPattern::from_one_based("D", doc.m, doc.q, entries)?),
        None => None,
    };
    StructuredSystem::new(a, b, c, d)
}

/// JSON value of the system document (sorted 1-based entries; `D` only when nonzero).
pub fn system_to_value(sys: &StructuredSystem) -> serde_json::Value {
    let conv = |p: &SparsityPattern| -> Vec<(i64, i64)> {
        p.to_one_based().into_iter().map(|[r, c]| (r as i64, c as i64)).collect()
    };
    let doc = SystemDocument {
        n: sys.n(),
        q: sys.q(),
        m: sys.m(),
        A: conv(sys.a()),
        B: conv(sys.b()),
        C: conv(sys.c()),
        D: if sys.d().nnz() > 0 { Some(conv(sys.d())) } else { None },
    };
    serde_json::to_value(doc).expect("system document is always serializable")
}

pub fn serialize_system(sys: &StructuredSystem) -> String {
    serde_json::to_string(&system_to_value(sys)).expect("system document is always serializable")
}

/// A dedicated sensor target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sensor {
    State(usize),
    Input(usize),
}

impl fmt::Display for Sensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sensor::State(i) => write!(f, "x{}", i + 1),
            Sensor::Input(j) => write!(f, "u{}", j + 1),
        }
    }
}

/// Which phase of a solver introduced a sensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Stage1,
    Stage2,
    Extra,
}

/// A dedicated sensor placement with stage attribution.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlacementResult {
    sensors: Vec<(Sensor, Stage)>,
}

impl PlacementResult {
    pub fn new(sensors: Vec<(Sensor, Stage)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (s, _) in &sensors {
            if !seen.insert(*s) {
                let index = match s {
                    Sensor::State(i) | Sensor::Input(i) => i + 1,
                };
                return Err(Error::BadIndex {
                    index,
                    reason: "measured twice",
                });
            }
        }
        Ok(PlacementResult { sensors })
    }

    pub fn from_states(states: &[usize], stage: Stage) -> Result<Self> {
        PlacementResult::new(states.iter().map(|&s| (Sensor::State(s), stage)).collect())
    }

    /// Sensors in placement order.
    pub fn sensors(&self) -> &[(Sensor, Stage)] {
        &self.sensors
    }

    pub fn measured_states(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .sensors
            .iter()
            .filter_map(|(s, _)| match s {
                Sensor::State(i) => Some(*i),
                Sensor::Input(_) => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub fn measured_inputs(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .sensors
            .iter()
            .filter_map(|(s, _)| match s {
                Sensor::Input(j) => Some(*j),
                Sensor::State(_) => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub fn total(&self) -> usize {
        self.sensors.len()
    }

    pub fn contains(&self, sensor: Sensor) -> bool {
        self.sensors.iter().any(|(s, _)| *s == sensor)
    }

    pub fn stage_of(&self, sensor: Sensor) -> Option<Stage> {
        self.sensors.iter().find(|(s, _)| *s == sensor).map(|(_, st)| *st)
    }

    /// States (sorted) introduced in `stage`.
    pub fn states_in(&self, stage: Stage) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .sensors
            .iter()
            .filter(|(_, st)| *st == stage)
            .filter_map(|(s, _)| match s {
                Sensor::State(i) => Some(*i),
                Sensor::Input(_) => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub(crate) fn push(&mut self, sensor: Sensor, stage: Stage) {
        debug_assert!(!self.contains(sensor));
        self.sensors.push((sensor, stage));
    }

    pub(crate) fn extend(&mut self, other: &PlacementResult) {
        for &(s, st) in &other.sensors {
            if !self.contains(s) {
                self.sensors.push((s, st));
            }
        }
    }

    /// `(C, D)` patterns of the placement: measured states first, then inputs,
    /// each in ascending order.
    pub fn output_patterns(&self, n: usize, q: usize) -> Result<(SparsityPattern, SparsityPattern)> {
        let states = self.measured_states();
        let inputs = self.measured_inputs();
        let rows = states.len() + inputs.len();
        if let Some(&s) = states.iter().find(|&&s| s >= n) {
            return Err(Error::BadIndex {
                index: s + 1,
                reason: "not a state index",
            });
        }
        if let Some(&u) = inputs.iter().find(|&&u| u >= q) {
            return Err(Error::BadIndex {
                index: u + 1,
                reason: "not an input index",
            });
        }
        let c = SparsityPattern::from_entries(rows, n, states.iter().enumerate().map(|(r, &s)| (r, s)))?;
        let d = SparsityPattern::from_entries(
            rows,
            q,
            inputs.iter().enumerate().map(|(k, &u)| (states.len() + k, u)),
        )?;
        Ok((c, d))
    }

    /// `(A, B)` of `sys` closed with this placement as its only outputs.
    pub fn apply(&self, sys: &StructuredSystem) -> Result<StructuredSystem> {
        sys.without_outputs()
            .with_sensors(&self.measured_states(), &self.measured_inputs())
    }
}

#[derive(Debug, Serialize)]
struct SensorEntry {
    kind: &'static str,
    index: usize,
    stage: Stage,
}

#[derive(Debug, Serialize)]
struct StageLists {
    stage1: Vec<String>,
    stage2: Vec<String>,
    extra: Vec<String>,
}

#[derive(Debug, Serialize)]
struct PlacementReport {
    measured_states: Vec<usize>,
    measured_inputs: Vec<usize>,
    total: usize,
    stages: StageLists,
    sensors: Vec<SensorEntry>,
}

impl PlacementResult {
    /// JSON report: sorted 1-based index arrays plus per-sensor stage tags.
    pub fn to_json(&self) -> serde_json::Value {
        let names = |stage: Stage| -> Vec<String> {
            let mut v: Vec<Sensor> = self
                .sensors
                .iter()
                .filter(|(_, st)| *st == stage)
                .map(|(s, _)| *s)
                .collect();
            v.sort();
            v.iter().map(|s| s.to_string()).collect()
        };
        let report = PlacementReport {
            measured_states: self.measured_states().iter().map(|i| i + 1).collect(),
            measured_inputs: self.measured_inputs().iter().map(|i| i + 1).collect(),
            total: self.total(),
            stages: StageLists {
                stage1: names(Stage::Stage1),
                stage2: names(Stage::Stage2),
                extra: names(Stage::Extra),
            },
            sensors: self
                .sensors
                .iter()
                .map(|&(s, stage)| match s {
                    Sensor::State(i) => SensorEntry {
                        kind: "state",
                        index: i + 1,
                        stage,
                    },
                    Sensor::Input(j) => SensorEntry {
                        kind: "input",
                        index: j + 1,
                        stage,
                    },
                })
                .collect(),
        };
        serde_json::to_value(report).expect("placement report is always serializable")
    }
}

/// 1-based rendering of an index set, used in reports.
pub(crate) fn one_based(v: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut out: Vec<usize> = v.into_iter().map(|i| i + 1).collect();
    out.sort_unstable();
    out
}
