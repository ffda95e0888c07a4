//! CSV ingestion and validation.
//!
//! `students.csv` header: `student_id,entry_year,<factor columns>,ees,gpa`
//! (gpa may be empty). `grades.csv` header: `student_id,subject_id,grade`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::{Dataset, Ees, Grade, GradeRecord, GroupScheme, StudentRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct IngestConfig {
    /// Accepted entry-year range, inclusive. `None` accepts any year.
    pub year_range: Option<(i32, i32)>,
    /// Fractional digits of the EES grid (0 = integer grid).
    pub ees_decimals: u8,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            year_range: None,
            ees_decimals: 0,
        }
    }
}

/// Counts emitted after ingestion; excluded records mirror the source
/// data's footnoted exclusions rather than failing the run.
#[derive(Debug, Clone, Serialize)]
pub struct IngestReport {
    pub students_read: usize,
    pub students_kept: usize,
    /// Students dropped for a missing covariate value.
    pub students_excluded_missing_covariate: usize,
    pub grades_read: usize,
    pub grades_kept: usize,
    /// Grades dropped because their student was excluded.
    pub grades_dropped_excluded_student: usize,
    /// Year -> group label -> student count.
    pub counts: BTreeMap<i32, BTreeMap<String, usize>>,
}

/// Load and validate a cohort from `students.csv` + `grades.csv`.
pub fn ingest(
    students_path: &Path,
    grades_path: &Path,
    scheme: GroupScheme,
    config: &IngestConfig,
) -> Result<(Dataset, IngestReport)> {
    let sfile = students_path.display().to_string();
    let gfile = grades_path.display().to_string();

    let mut reader = open_csv(students_path, &sfile)?;
    check_students_header(&mut reader, &scheme, &sfile)?;

    let n_factors = scheme.factors().len();
    let mut students: Vec<StudentRecord> = Vec::new();
    let mut by_id: BTreeMap<String, Option<u32>> = BTreeMap::new(); // None = excluded
    let mut excluded = 0usize;
    let mut read = 0usize;

    for (i, rec) in reader.records().enumerate() {
        let row = (i + 2) as u64; // 1-based, after header
        let rec = rec.map_err(|e| Error::Csv {
            path: sfile.clone(),
            source: e,
        })?;
        read += 1;
        let field = |k: usize, name: &str| -> Result<String> {
            rec.get(k).map(str::to_string).ok_or_else(|| Error::MissingColumn {
                file: sfile.clone(),
                row,
                column: name.into(),
            })
        };

        let id = field(0, "student_id")?;
        if by_id.contains_key(&id) {
            return Err(Error::DuplicateStudent {
                file: sfile,
                row,
                id,
            });
        }

        let year: i32 = field(1, "entry_year")?.trim().parse().map_err(|_| Error::Config(format!(
            "{sfile} row {row}: entry_year is not an integer"
        )))?;
        if let Some((min, max)) = config.year_range {
            if year < min || year > max {
                return Err(Error::YearOutOfRange {
                    file: sfile,
                    row,
                    year,
                    min,
                    max,
                });
            }
        }

        let mut labels = Vec::with_capacity(n_factors);
        let mut missing_covariate = false;
        for (k, f) in scheme.factors().iter().enumerate() {
            let v = field(2 + k, &f.name)?.trim().to_string();
            if v.is_empty() {
                missing_covariate = true;
            } else if !f.levels.contains(&v) {
                return Err(Error::UnknownGroupLevel {
                    file: sfile,
                    row,
                    factor: f.name.clone(),
                    level: v,
                });
            }
            labels.push(v);
        }
        if missing_covariate {
            excluded += 1;
            by_id.insert(id, None);
            continue;
        }

        let ees_raw: f64 = field(2 + n_factors, "ees")?.trim().parse().map_err(|_| {
            Error::NonFiniteValue {
                file: sfile.clone(),
                row,
                field: "ees".into(),
            }
        })?;
        let ees = Ees::from_raw(ees_raw, config.ees_decimals).map_err(|_| Error::NonFiniteValue {
            file: sfile.clone(),
            row,
            field: "ees".into(),
        })?;

        let gpa_txt = field(2 + n_factors + 1, "gpa")?.trim().to_string();
        let gpa = if gpa_txt.is_empty() {
            None
        } else {
            let v: f64 = gpa_txt.parse().map_err(|_| Error::NonFiniteValue {
                file: sfile.clone(),
                row,
                field: "gpa".into(),
            })?;
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!(
                    "{sfile} row {row}: gpa {v} outside [0, 1]"
                )));
            }
            Some(v)
        };

        by_id.insert(id.clone(), Some(students.len() as u32));
        students.push(StudentRecord {
            id,
            entry_year: year,
            group_labels: labels,
            ees_raw,
            ees,
            gpa,
        });
    }

    let mut greader = open_csv(grades_path, &gfile)?;
    check_header(&mut greader, &["student_id", "subject_id", "grade"], &gfile)?;

    let mut grades: Vec<GradeRecord> = Vec::new();
    let mut seen_pairs: std::collections::BTreeSet<(u32, String)> = std::collections::BTreeSet::new();
    let mut grades_read = 0usize;
    let mut grades_dropped = 0usize;

    for (i, rec) in greader.records().enumerate() {
        let row = (i + 2) as u64;
        let rec = rec.map_err(|e| Error::Csv {
            path: gfile.clone(),
            source: e,
        })?;
        grades_read += 1;
        let id = rec.get(0).unwrap_or("").to_string();
        let subject = rec.get(1).unwrap_or("").trim().to_string();
        let grade_txt = rec.get(2).unwrap_or("").trim().to_string();

        let student = match by_id.get(&id) {
            None => {
                return Err(Error::OrphanGrade {
                    file: gfile,
                    row,
                    id,
                })
            }
            Some(None) => {
                grades_dropped += 1;
                continue;
            }
            Some(Some(idx)) => *idx,
        };

        let grade_raw: f64 = grade_txt.parse().map_err(|_| Error::NonFiniteValue {
            file: gfile.clone(),
            row,
            field: "grade".into(),
        })?;
        let grade = Grade::from_raw(grade_raw).map_err(|_| Error::GradeOutOfRange {
            file: gfile.clone(),
            row,
            value: grade_raw,
        })?;

        if !seen_pairs.insert((student, subject.clone())) {
            return Err(Error::DuplicateGrade {
                file: gfile,
                row,
                id,
                subject,
            });
        }
        grades.push(GradeRecord {
            student,
            subject,
            grade_raw,
            grade,
        });
    }

    let kept = students.len();
    let grades_kept = grades.len();
    let ds = Dataset::from_records(scheme, students, grades)?;

    let mut counts: BTreeMap<i32, BTreeMap<String, usize>> = BTreeMap::new();
    for &year in ds.years() {
        let per_year = counts.entry(year).or_default();
        for g in 0..ds.scheme().group_count() {
            per_year.insert(ds.scheme().group_label(g), ds.index().n_ag(year, g));
        }
    }

    let report = IngestReport {
        students_read: read,
        students_kept: kept,
        students_excluded_missing_covariate: excluded,
        grades_read,
        grades_kept,
        grades_dropped_excluded_student: grades_dropped,
        counts,
    };
    Ok((ds, report))
}

fn open_csv(path: &Path, label: &str) -> Result<csv::Reader<std::fs::File>> {
    let file = std::fs::File::open(path).map_err(|e| Error::Io {
        path: label.to_string(),
        source: e,
    })?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn check_students_header(
    reader: &mut csv::Reader<std::fs::File>,
    scheme: &GroupScheme,
    file: &str,
) -> Result<()> {
    let mut expected = vec!["student_id".to_string(), "entry_year".to_string()];
    expected.extend(scheme.factors().iter().map(|f| f.name.clone()));
    expected.push("ees".into());
    expected.push("gpa".into());
    check_header_vec(reader, &expected, file)
}

fn check_header(
    reader: &mut csv::Reader<std::fs::File>,
    expected: &[&str],
    file: &str,
) -> Result<()> {
    let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
    check_header_vec(reader, &expected, file)
}

fn check_header_vec(
    reader: &mut csv::Reader<std::fs::File>,
    expected: &[String],
    file: &str,
) -> Result<()> {
    let found: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Csv {
            path: file.to_string(),
            source: e,
        })?
        .iter()
        .map(str::to_string)
        .collect();
    if found != expected {
        return Err(Error::HeaderMismatch {
            file: file.to_string(),
            expected: expected.to_vec(),
            found,
        });
    }
    Ok(())
}
