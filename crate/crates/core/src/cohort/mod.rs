//! Cohort data model: students, grades, group schemes, and the cell index
//! that all pairwise statistics are computed from.
//!
//! A *cell* is an (entry year, subject) unit. Pairwise comparisons never
//! cross cells: only students who entered in the same year and took the
//! same subject are compared.

mod concordance;
mod discretize;
mod ingest;

pub use concordance::{gpa_concordance_table, GpaConcordance, GpaProportions};
pub use discretize::{discretize_ees, discretize_grade, DiscretizeError};
pub use ingest::{ingest, IngestConfig, IngestReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discrete grade on the 0.1 grid, stored as a tick index `k` for the
/// grid value `k/10`, `k = 0..=100`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Grade(u16);

impl Grade {
    pub const MAX_TICK: u16 = 100;

    /// Discretize a raw grade in `[0, 10]`.
    pub fn from_raw(z: f64) -> std::result::Result<Self, DiscretizeError> {
        discretize_grade(z)
    }

    /// Wrap an existing tick index (`k/10` grid value).
    pub fn from_tick(tick: u16) -> Self {
        assert!(tick <= Self::MAX_TICK, "grade tick {tick} beyond 10.0");
        Grade(tick)
    }

    pub fn tick(self) -> u16 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 10.0
    }
}

/// Discretized entrance exam score (integer grid by default).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ees(i64);

impl Ees {
    pub fn from_raw(z: f64, decimals: u8) -> std::result::Result<Self, DiscretizeError> {
        discretize_ees(z, decimals)
    }

    pub fn from_value(v: i64) -> Self {
        Ees(v)
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

/// One categorical covariate and its admissible levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub name: String,
    pub levels: Vec<String>,
}

/// Group definitions: the cross-product of factor levels, indexed
/// `g = 0..G` with the first factor varying slowest. For the two-factor
/// scheme sex `{F, M}` x school `{Pu, Pr}` this yields the conventional
/// order F-Pu, F-Pr, M-Pu, M-Pr.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct GroupScheme {
    factors: Vec<Factor>,
}

impl GroupScheme {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Config("group scheme needs at least one factor".into()));
        }
        for f in &factors {
            if f.levels.len() < 2 {
                return Err(Error::Config(format!(
                    "factor `{}` needs at least two levels",
                    f.name
                )));
            }
            let mut seen = std::collections::BTreeSet::new();
            for l in &f.levels {
                if !seen.insert(l) {
                    return Err(Error::Config(format!(
                        "factor `{}` lists level `{l}` twice",
                        f.name
                    )));
                }
            }
        }
        let mut names = std::collections::BTreeSet::new();
        for f in &factors {
            if !names.insert(&f.name) {
                return Err(Error::Config(format!("duplicate factor name `{}`", f.name)));
            }
        }
        Ok(GroupScheme { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Number of groups G (product of level counts).
    pub fn group_count(&self) -> usize {
        self.factors.iter().map(|f| f.levels.len()).product()
    }

    /// Number of unordered group pairs G* = G(G-1)/2.
    pub fn pair_count(&self) -> usize {
        let g = self.group_count();
        g * (g - 1) / 2
    }

    /// Map factor level values to the group index, `None` if any level is
    /// unknown. `labels` must be ordered as the factors are.
    pub fn group_of(&self, labels: &[&str]) -> Option<usize> {
        if labels.len() != self.factors.len() {
            return None;
        }
        let mut g = 0usize;
        for (f, l) in self.factors.iter().zip(labels) {
            let pos = f.levels.iter().position(|x| x == l)?;
            g = g * f.levels.len() + pos;
        }
        Some(g)
    }

    /// Human-readable label, e.g. `F-Pu`.
    pub fn group_label(&self, mut g: usize) -> String {
        let mut parts = vec![String::new(); self.factors.len()];
        for (slot, f) in parts.iter_mut().zip(self.factors.iter()).rev() {
            let (q, r) = (g / f.levels.len(), g % f.levels.len());
            *slot = f.levels[r].clone();
            g = q;
        }
        parts.join("-")
    }

    /// Unordered pairs in canonical order: (0,1), (0,2), ..., (G-2, G-1).
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let g = self.group_count();
        let mut out = Vec::with_capacity(self.pair_count());
        for a in 0..g {
            for b in (a + 1)..g {
                out.push((a, b));
            }
        }
        out
    }

    /// Position of pair (g, g') in the canonical enumeration.
    pub fn pair_index(&self, g: usize, g_prime: usize) -> usize {
        let n = self.group_count();
        let (lo, hi) = if g < g_prime { (g, g_prime) } else { (g_prime, g) };
        // pairs before row `lo` plus offset within the row
        lo * n - lo * (lo + 1) / 2 + (hi - lo - 1)
    }
}

impl<'de> Deserialize<'de> for GroupScheme {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let factors = Vec::<Factor>::deserialize(deserializer)?;
        GroupScheme::new(factors).map_err(serde::de::Error::custom)
    }
}

/// One student: identity, entry year, covariate levels, scores.
#[derive(Debug, Clone, Serialize)]
pub struct StudentRecord {
    pub id: String,
    pub entry_year: i32,
    pub group_labels: Vec<String>,
    pub ees_raw: f64,
    /// Discretized EES.
    pub ees: Ees,
    /// GPA in [0, 1]; descriptive table only, never used by the tests.
    pub gpa: Option<f64>,
}

/// One (student, subject) grade observation.
#[derive(Debug, Clone, Serialize)]
pub struct GradeRecord {
    /// Index into `Dataset::students`.
    pub student: u32,
    pub subject: String,
    pub grade_raw: f64,
    pub grade: Grade,
}

/// A student's observation within one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellObs {
    pub student: u32,
    pub ees: Ees,
    pub grade: Grade,
}

/// All takers of one (year, subject) cell, label-independent.
#[derive(Debug, Clone)]
pub struct Cell {
    pub year: i32,
    pub subject: String,
    pub takers: Vec<CellObs>,
}

/// Per-cell membership split by group, for one group assignment.
#[derive(Debug, Clone)]
pub struct CellGroups {
    pub per_group: Vec<Vec<CellObs>>,
}

impl CellGroups {
    pub fn n_agl(&self, g: usize) -> usize {
        self.per_group[g].len()
    }
}

/// Cell bookkeeping for one group assignment: the counts n_agl, n_ag, n_a
/// and the membership sets behind them.
#[derive(Debug, Clone)]
pub struct CohortIndex {
    years: Vec<i32>,
    n_a: Vec<usize>,
    n_ag: Vec<Vec<usize>>,
    cells: Vec<CellGroups>,
}

impl CohortIndex {
    /// Build the index for an explicit group assignment (one group per
    /// student, aligned with `Dataset::students`).
    pub fn build(ds: &Dataset, groups: &[u16]) -> CohortIndex {
        assert_eq!(groups.len(), ds.students.len());
        let g_count = ds.scheme.group_count();
        let year_pos = |y: i32| ds.years.binary_search(&y).expect("year indexed");

        let mut n_a = vec![0usize; ds.years.len()];
        let mut n_ag = vec![vec![0usize; g_count]; ds.years.len()];
        for (s, &g) in ds.students.iter().zip(groups) {
            let yi = year_pos(s.entry_year);
            n_a[yi] += 1;
            n_ag[yi][usize::from(g)] += 1;
        }

        let cells = ds
            .cells
            .iter()
            .map(|cell| {
                let mut per_group = vec![Vec::new(); g_count];
                for obs in &cell.takers {
                    per_group[usize::from(groups[obs.student as usize])].push(*obs);
                }
                CellGroups { per_group }
            })
            .collect();

        CohortIndex {
            years: ds.years.clone(),
            n_a,
            n_ag,
            cells,
        }
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    /// Students who entered in year `a`.
    pub fn n_a(&self, year: i32) -> usize {
        self.year_idx(year).map_or(0, |i| self.n_a[i])
    }

    /// Students of group `g` who entered in year `a`.
    pub fn n_ag(&self, year: i32, g: usize) -> usize {
        self.year_idx(year).map_or(0, |i| self.n_ag[i][g])
    }

    /// Per-cell group membership, aligned with `Dataset::cells`.
    pub fn cell(&self, cell_idx: usize) -> &CellGroups {
        &self.cells[cell_idx]
    }

    pub fn cells(&self) -> &[CellGroups] {
        &self.cells
    }

    fn year_idx(&self, year: i32) -> Option<usize> {
        self.years.binary_search(&year).ok()
    }
}

/// Immutable, validated dataset. Safe to share across threads; permutation
/// replicates rebind group labels without touching the records.
#[derive(Debug)]
pub struct Dataset {
    scheme: GroupScheme,
    students: Vec<StudentRecord>,
    grades: Vec<GradeRecord>,
    years: Vec<i32>,
    cells: Vec<Cell>,
    base_groups: Vec<u16>,
    base_index: CohortIndex,
}

impl Dataset {
    /// Assemble a dataset from validated records. Grades must reference
    /// valid student indices; cells are derived and sorted by
    /// (year, subject).
    pub fn from_records(
        scheme: GroupScheme,
        students: Vec<StudentRecord>,
        grades: Vec<GradeRecord>,
    ) -> Result<Dataset> {
        let mut base_groups = Vec::with_capacity(students.len());
        for s in &students {
            let labels: Vec<&str> = s.group_labels.iter().map(String::as_str).collect();
            let g = scheme.group_of(&labels).ok_or_else(|| Error::Config(format!(
                "student `{}` has labels {:?} outside the scheme",
                s.id, s.group_labels
            )))?;
            base_groups.push(g as u16);
        }

        let mut years: Vec<i32> = students.iter().map(|s| s.entry_year).collect();
        years.sort_unstable();
        years.dedup();

        // group grade observations into (year, subject) cells
        let mut cell_map: std::collections::BTreeMap<(i32, &str), Vec<CellObs>> =
            std::collections::BTreeMap::new();
        for gr in &grades {
            let s = &students[gr.student as usize];
            cell_map
                .entry((s.entry_year, gr.subject.as_str()))
                .or_default()
                .push(CellObs {
                    student: gr.student,
                    ees: s.ees,
                    grade: gr.grade,
                });
        }
        let cells: Vec<Cell> = cell_map
            .into_iter()
            .map(|((year, subject), takers)| Cell {
                year,
                subject: subject.to_string(),
                takers,
            })
            .collect();

        let mut ds = Dataset {
            scheme,
            students,
            grades,
            years,
            cells,
            base_groups,
            base_index: CohortIndex {
                years: Vec::new(),
                n_a: Vec::new(),
                n_ag: Vec::new(),
                cells: Vec::new(),
            },
        };
        ds.base_index = CohortIndex::build(&ds, &ds.base_groups);
        Ok(ds)
    }

    pub fn scheme(&self) -> &GroupScheme {
        &self.scheme
    }

    pub fn students(&self) -> &[StudentRecord] {
        &self.students
    }

    pub fn grades(&self) -> &[GradeRecord] {
        &self.grades
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// The as-observed group assignment.
    pub fn base_groups(&self) -> &[u16] {
        &self.base_groups
    }

    /// Index for the as-observed group assignment.
    pub fn index(&self) -> &CohortIndex {
        &self.base_index
    }

    /// Index for an alternative group assignment (permutation replicates).
    pub fn index_with(&self, groups: &[u16]) -> CohortIndex {
        CohortIndex::build(self, groups)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_by_two_scheme() -> GroupScheme {
        GroupScheme::new(vec![
            Factor {
                name: "sex".into(),
                levels: vec!["F".into(), "M".into()],
            },
            Factor {
                name: "school".into(),
                levels: vec!["Pu".into(), "Pr".into()],
            },
        ])
        .unwrap()
    }

    #[test]
    fn group_index_follows_cross_product_order() {
        let s = two_by_two_scheme();
        assert_eq!(s.group_count(), 4);
        assert_eq!(s.group_of(&["F", "Pu"]), Some(0));
        assert_eq!(s.group_of(&["F", "Pr"]), Some(1));
        assert_eq!(s.group_of(&["M", "Pu"]), Some(2));
        assert_eq!(s.group_of(&["M", "Pr"]), Some(3));
        assert_eq!(s.group_of(&["M", "Px"]), None);
        assert_eq!(s.group_label(1), "F-Pr");
    }

    #[test]
    fn pair_enumeration_is_lexicographic() {
        let s = two_by_two_scheme();
        assert_eq!(s.pairs(), vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        for (k, (a, b)) in s.pairs().into_iter().enumerate() {
            assert_eq!(s.pair_index(a, b), k);
            assert_eq!(s.pair_index(b, a), k);
        }
    }

    #[test]
    fn rejects_duplicate_levels() {
        let err = GroupScheme::new(vec![Factor {
            name: "x".into(),
            levels: vec!["a".into(), "a".into()],
        }]);
        assert!(err.is_err());
    }

    #[test]
    fn index_counts_match_brute_force() {
        let scheme = two_by_two_scheme();
        let students = vec![
            StudentRecord {
                id: "s1".into(),
                entry_year: 2000,
                group_labels: vec!["F".into(), "Pu".into()],
                ees_raw: 612.4,
                ees: Ees::from_value(612),
                gpa: None,
            },
            StudentRecord {
                id: "s2".into(),
                entry_year: 2000,
                group_labels: vec!["M".into(), "Pr".into()],
                ees_raw: 540.0,
                ees: Ees::from_value(540),
                gpa: Some(0.7),
            },
            StudentRecord {
                id: "s3".into(),
                entry_year: 2001,
                group_labels: vec!["F".into(), "Pu".into()],
                ees_raw: 480.0,
                ees: Ees::from_value(480),
                gpa: None,
            },
        ];
        let grades = vec![
            GradeRecord {
                student: 0,
                subject: "calc1".into(),
                grade_raw: 7.3,
                grade: Grade::from_tick(73),
            },
            GradeRecord {
                student: 1,
                subject: "calc1".into(),
                grade_raw: 5.0,
                grade: Grade::from_tick(50),
            },
            GradeRecord {
                student: 2,
                subject: "calc1".into(),
                grade_raw: 9.0,
                grade: Grade::from_tick(90),
            },
        ];
        let ds = Dataset::from_records(scheme, students, grades).unwrap();
        assert_eq!(ds.years(), &[2000, 2001]);
        assert_eq!(ds.cells().len(), 2); // calc1 is year-scoped
        let idx = ds.index();
        assert_eq!(idx.n_a(2000), 2);
        assert_eq!(idx.n_a(2001), 1);
        assert_eq!(idx.n_ag(2000, 0), 1);
        assert_eq!(idx.n_ag(2000, 3), 1);
        // membership sets match the counts
        let c0 = idx.cell(0);
        assert_eq!(c0.n_agl(0), 1);
        assert_eq!(c0.n_agl(3), 1);
        assert_eq!(c0.n_agl(1) + c0.n_agl(2), 0);
        // n_a = sum over groups of n_ag, per year
        for &y in ds.years() {
            let total: usize = (0..4).map(|g| idx.n_ag(y, g)).sum();
            assert_eq!(total, idx.n_a(y));
        }
    }
}
