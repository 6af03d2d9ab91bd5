//! Closed-form largeness verdicts for the standard families. These are
//! independent of the symbolic pipeline: the sl2 list and the copy-count
//! thresholds below are classical classification facts, and the test suites
//! replay small cases through the full certificate machinery against them.

use crate::error::{Error, Result};
use crate::repspec::Family;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleFamily {
    Gl,
    Sl,
    So,
    Sp,
    G2,
    Spin7,
}

impl OracleFamily {
    pub fn name(&self) -> &'static str {
        match self {
            OracleFamily::Gl => "gl",
            OracleFamily::Sl => "sl",
            OracleFamily::So => "so",
            OracleFamily::Sp => "sp",
            OracleFamily::G2 => "g2",
            OracleFamily::Spin7 => "spin7",
        }
    }
}

impl From<Family> for OracleFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::Gl => OracleFamily::Gl,
            Family::Sl => OracleFamily::Sl,
            Family::So => OracleFamily::So,
            Family::Sp => OracleFamily::Sp,
        }
    }
}

/// Verdict for p copies of the defining space plus q copies of its dual.
/// The bounds are sharp, and adding copies preserves largeness, so the
/// inequality decides every (p, q), not just the ones above the line.
#[derive(Clone, Debug, Serialize)]
pub struct ClassicalVerdict {
    pub family: OracleFamily,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub one_large: bool,
    /// Human-readable form of the deciding inequality.
    pub condition: String,
}

pub fn classical_verdict(
    family: OracleFamily,
    n: usize,
    p: usize,
    q: usize,
) -> Result<ClassicalVerdict> {
    if p + q == 0 {
        return Err(Error::InvalidSpec("need at least one copy of V".into()));
    }
    let self_dual = !matches!(family, OracleFamily::Gl | OracleFamily::Sl);
    if self_dual && q != 0 {
        return Err(Error::InvalidSpec(format!(
            "{} is self-dual; use q = 0",
            family.name()
        )));
    }
    let (one_large, condition) = match family {
        OracleFamily::Gl => {
            if n < 1 {
                return Err(Error::InvalidSpec("gl needs n >= 1".into()));
            }
            (p >= n && q >= n, format!("p >= {n} and q >= {n}"))
        }
        OracleFamily::Sl => {
            if n < 2 {
                return Err(Error::InvalidSpec("sl needs n >= 2".into()));
            }
            (p + q >= 2 * n - 1, format!("p + q >= {}", 2 * n - 1))
        }
        OracleFamily::So => {
            if n < 2 {
                return Err(Error::InvalidSpec("so needs n >= 2".into()));
            }
            (p >= n - 1, format!("p >= {}", n - 1))
        }
        OracleFamily::Sp => {
            if n < 1 {
                return Err(Error::InvalidSpec("sp needs n >= 1".into()));
            }
            (p >= 2 * n + 1, format!("p >= {}", 2 * n + 1))
        }
        OracleFamily::G2 => {
            if n != 7 {
                return Err(Error::InvalidSpec("g2 acts on C^7; use n = 7".into()));
            }
            (p >= 4, "p >= 4".into())
        }
        OracleFamily::Spin7 => {
            if n != 8 {
                return Err(Error::InvalidSpec("spin7 acts on C^8; use n = 8".into()));
            }
            (p >= 5, "p >= 5".into())
        }
    };
    Ok(ClassicalVerdict {
        family,
        n,
        p,
        q,
        one_large,
        condition,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sl2Verdict {
    OneLarge,
    NotOneLarge,
    /// The classification assumes no trivial summand; a degree-0 block
    /// falls outside it.
    OutsideTable,
}

impl Sl2Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Sl2Verdict::OneLarge => "one_large",
            Sl2Verdict::NotOneLarge => "not_one_large",
            Sl2Verdict::OutsideTable => "outside_table",
        }
    }
}

/// Verdict for a direct sum of binary-form blocks with the given degrees.
/// Every such module without a trivial summand is 1-large, except the three
/// small exceptions: one degree-1 block, two degree-1 blocks, one degree-2
/// block.
pub fn sl2_verdict(degrees: &[usize]) -> Sl2Verdict {
    if degrees.is_empty() || degrees.contains(&0) {
        return Sl2Verdict::OutsideTable;
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    if sorted == [1] || sorted == [1, 1] || sorted == [2] {
        Sl2Verdict::NotOneLarge
    } else {
        Sl2Verdict::OneLarge
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_exceptions_are_frozen() {
        assert_eq!(sl2_verdict(&[1]), Sl2Verdict::NotOneLarge);
        assert_eq!(sl2_verdict(&[1, 1]), Sl2Verdict::NotOneLarge);
        assert_eq!(sl2_verdict(&[2]), Sl2Verdict::NotOneLarge);
        assert_eq!(sl2_verdict(&[3]), Sl2Verdict::OneLarge);
        assert_eq!(sl2_verdict(&[1, 1, 1]), Sl2Verdict::OneLarge);
        assert_eq!(sl2_verdict(&[1, 2]), Sl2Verdict::OneLarge);
        assert_eq!(sl2_verdict(&[2, 1]), Sl2Verdict::OneLarge);
        assert_eq!(sl2_verdict(&[4]), Sl2Verdict::OneLarge);
        assert_eq!(sl2_verdict(&[]), Sl2Verdict::OutsideTable);
        assert_eq!(sl2_verdict(&[0, 3]), Sl2Verdict::OutsideTable);
    }

    #[test]
    fn sp1_copies_agree_with_the_binary_form_table() {
        // sp(2) on C^2 is the degree-1 binary form picture, so p copies of
        // C^2 must get the same verdict from both tables.
        for p in 1..=6 {
            let v = classical_verdict(OracleFamily::Sp, 1, p, 0).unwrap();
            let degrees = vec![1usize; p];
            let expected = sl2_verdict(&degrees) == Sl2Verdict::OneLarge;
            assert_eq!(v.one_large, expected, "p = {p}");
        }
    }

    #[test]
    fn so3_copies_agree_with_the_binary_form_table() {
        // so(3) on C^3 matches the degree-2 binary form block, so p copies
        // must get the same verdict from both tables.
        for p in 1..=5 {
            let v = classical_verdict(OracleFamily::So, 3, p, 0).unwrap();
            let degrees = vec![2usize; p];
            let expected = sl2_verdict(&degrees) == Sl2Verdict::OneLarge;
            assert_eq!(v.one_large, expected, "p = {p}");
        }
    }

    #[test]
    fn sl2_copies_agree_with_the_binary_form_table() {
        // For sl(2) the dual of C^2 is isomorphic to C^2, so p copies plus
        // q dual copies match p + q degree-1 blocks.
        for p in 0..=4 {
            for q in 0..=4 {
                if p + q == 0 {
                    continue;
                }
                let v = classical_verdict(OracleFamily::Sl, 2, p, q).unwrap();
                let degrees = vec![1usize; p + q];
                let expected = sl2_verdict(&degrees) == Sl2Verdict::OneLarge;
                assert_eq!(v.one_large, expected, "p = {p}, q = {q}");
            }
        }
    }

    #[test]
    fn threshold_spot_checks() {
        assert!(classical_verdict(OracleFamily::Gl, 2, 2, 2).unwrap().one_large);
        assert!(!classical_verdict(OracleFamily::Gl, 2, 1, 5).unwrap().one_large);
        assert!(classical_verdict(OracleFamily::Sl, 3, 3, 2).unwrap().one_large);
        assert!(!classical_verdict(OracleFamily::Sl, 3, 2, 2).unwrap().one_large);
        assert!(classical_verdict(OracleFamily::So, 4, 3, 0).unwrap().one_large);
        assert!(!classical_verdict(OracleFamily::So, 4, 2, 0).unwrap().one_large);
        assert!(classical_verdict(OracleFamily::Sp, 2, 5, 0).unwrap().one_large);
        assert!(!classical_verdict(OracleFamily::Sp, 2, 4, 0).unwrap().one_large);
        assert!(classical_verdict(OracleFamily::G2, 7, 4, 0).unwrap().one_large);
        assert!(!classical_verdict(OracleFamily::G2, 7, 3, 0).unwrap().one_large);
        assert!(classical_verdict(OracleFamily::Spin7, 8, 5, 0).unwrap().one_large);
        assert!(!classical_verdict(OracleFamily::Spin7, 8, 4, 0).unwrap().one_large);
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(classical_verdict(OracleFamily::So, 3, 2, 1).is_err());
        assert!(classical_verdict(OracleFamily::Sp, 2, 0, 0).is_err());
        assert!(classical_verdict(OracleFamily::G2, 6, 4, 0).is_err());
        assert!(classical_verdict(OracleFamily::Sl, 1, 3, 0).is_err());
    }
}
