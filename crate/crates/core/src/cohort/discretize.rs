//! Grade and EES discretization.

use super::{Ees, Grade};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum DiscretizeError {
    #[error("value {0} outside [0, 10]")]
    GradeOutOfRange(f64),
    #[error("value {0} is not finite")]
    NotFinite(f64),
}

/// Round a raw grade in `[0, 10]` onto the 0.1 grid.
///
/// Interval rule: `[0, 0.05) -> 0.0`, `[k/10 - 0.05, k/10 + 0.05) -> k/10`
/// for interior ticks, `[9.95, 10] -> 10.0`.
pub fn discretize_grade(z: f64) -> Result<Grade, DiscretizeError> {
    if !z.is_finite() {
        return Err(DiscretizeError::NotFinite(z));
    }
    if !(0.0..=10.0).contains(&z) {
        return Err(DiscretizeError::GradeOutOfRange(z));
    }
    let tick = ((z * 10.0 + 0.5).floor() as u16).min(Grade::MAX_TICK);
    Ok(Grade(tick))
}

/// Round a raw EES value half-up onto a grid with `decimals` fractional
/// digits (0 = integer grid, the default).
pub fn discretize_ees(z: f64, decimals: u8) -> Result<Ees, DiscretizeError> {
    if !z.is_finite() {
        return Err(DiscretizeError::NotFinite(z));
    }
    let scale = 10f64.powi(i32::from(decimals));
    Ok(Ees((z * scale + 0.5).floor() as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grade_interval_rule() {
        assert_eq!(discretize_grade(0.04).unwrap().as_f64(), 0.0);
        assert_eq!(discretize_grade(0.05).unwrap().as_f64(), 0.1);
        assert_eq!(discretize_grade(9.95).unwrap().as_f64(), 10.0);
        assert_eq!(discretize_grade(9.9499).unwrap().as_f64(), 9.9);
        assert_eq!(discretize_grade(7.449999).unwrap().as_f64(), 7.4);
        assert_eq!(discretize_grade(7.45).unwrap().as_f64(), 7.5);
        assert_eq!(discretize_grade(0.0).unwrap().as_f64(), 0.0);
        assert_eq!(discretize_grade(10.0).unwrap().as_f64(), 10.0);
    }

    #[test]
    fn grade_range_errors() {
        assert!(matches!(
            discretize_grade(10.3),
            Err(DiscretizeError::GradeOutOfRange(_))
        ));
        assert!(matches!(
            discretize_grade(-0.01),
            Err(DiscretizeError::GradeOutOfRange(_))
        ));
        assert!(matches!(
            discretize_grade(f64::NAN),
            Err(DiscretizeError::NotFinite(_))
        ));
    }

    #[test]
    fn ees_half_up() {
        assert_eq!(discretize_ees(612.4, 0).unwrap().value(), 612);
        assert_eq!(discretize_ees(612.5, 0).unwrap().value(), 613);
        assert_eq!(discretize_ees(500.0, 0).unwrap().value(), 500);
        assert_eq!(discretize_ees(612.46, 1).unwrap().value(), 6125);
        assert!(discretize_ees(f64::INFINITY, 0).is_err());
    }

    proptest! {
        // idempotent on grid values
        #[test]
        fn grade_idempotent(tick in 0u16..=100) {
            let v = Grade::from_tick(tick).as_f64();
            prop_assert_eq!(discretize_grade(v).unwrap().tick(), tick);
        }

        // monotone nondecreasing
        #[test]
        fn grade_monotone(a in 0.0f64..=10.0, b in 0.0f64..=10.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(discretize_grade(lo).unwrap() <= discretize_grade(hi).unwrap());
        }

        #[test]
        fn ees_monotone(a in -1e6f64..=1e6, b in -1e6f64..=1e6) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(discretize_ees(lo, 0).unwrap() <= discretize_ees(hi, 0).unwrap());
        }
    }
}
