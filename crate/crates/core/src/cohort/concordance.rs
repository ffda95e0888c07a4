//! Descriptive concordant/discordant pair proportions on (EES, GPA).
//!
//! This is the coarse whole-career comparison: for cross pairs (i in g,
//! j in g'), classify the joint ordering of discretized EES and GPA.
//! Proportions are conditional on untied pairs, so C1+C2+D1+D2 = 1.

use serde::Serialize;

use super::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GpaProportions {
    /// i above j on both EES and GPA.
    pub c1: f64,
    /// j above i on both.
    pub c2: f64,
    /// i below j on EES but above on GPA.
    pub d1: f64,
    /// i above j on EES but below on GPA.
    pub d2: f64,
    pub concordant: f64,
    pub discordant: f64,
}

/// Pair classification for one ordered group pair (g, g'). `proportions`
/// is `None` when no untied pair exists.
#[derive(Debug, Clone, Serialize)]
pub struct GpaConcordance {
    pub group: String,
    pub group_prime: String,
    pub untied_pairs: u64,
    pub tied_pairs: u64,
    /// Pairs skipped because a member lacks a GPA.
    pub missing_gpa_pairs: u64,
    pub proportions: Option<GpaProportions>,
}

/// Classify all cross pairs (i in g, j in g') on (discrete EES, GPA).
pub fn gpa_concordance_table(ds: &Dataset, g: usize, g_prime: usize) -> GpaConcordance {
    let groups = ds.base_groups();
    let members = |want: usize| -> Vec<usize> {
        groups
            .iter()
            .enumerate()
            .filter(|(_, &gr)| usize::from(gr) == want)
            .map(|(i, _)| i)
            .collect()
    };
    let gi = members(g);
    let gj = members(g_prime);

    let mut c1 = 0u64;
    let mut c2 = 0u64;
    let mut d1 = 0u64;
    let mut d2 = 0u64;
    let mut tied = 0u64;
    let mut missing = 0u64;

    for &i in &gi {
        let si = &ds.students()[i];
        let Some(gpa_i) = si.gpa else {
            missing += gj.len() as u64;
            continue;
        };
        for &j in &gj {
            let sj = &ds.students()[j];
            let Some(gpa_j) = sj.gpa else {
                missing += 1;
                continue;
            };
            if si.ees == sj.ees || gpa_i == gpa_j {
                tied += 1;
                continue;
            }
            match (si.ees > sj.ees, gpa_i > gpa_j) {
                (true, true) => c1 += 1,
                (false, false) => c2 += 1,
                (false, true) => d1 += 1,
                (true, false) => d2 += 1,
            }
        }
    }

    let untied = c1 + c2 + d1 + d2;
    let proportions = if untied == 0 {
        None
    } else {
        let n = untied as f64;
        let (c1, c2, d1, d2) = (
            c1 as f64 / n,
            c2 as f64 / n,
            d1 as f64 / n,
            d2 as f64 / n,
        );
        Some(GpaProportions {
            c1,
            c2,
            d1,
            d2,
            concordant: c1 + c2,
            discordant: d1 + d2,
        })
    };

    GpaConcordance {
        group: ds.scheme().group_label(g),
        group_prime: ds.scheme().group_label(g_prime),
        untied_pairs: untied,
        tied_pairs: tied,
        missing_gpa_pairs: missing,
        proportions,
    }
}
