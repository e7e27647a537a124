//! Checks for the elimination workflow: when does a solution of `(UA)v = Ub`
//! also solve `Av = b`.

use serde::Serialize;

use crate::error::Result;
use crate::layout::Lines;
use crate::matrix::SymbolicMatrix;
use crate::product::{decide_defined, product, Decision};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformChecks {
    pub v_row_finite: bool,
    pub vu_is_identity: bool,
    pub ua_defined: bool,
}

/// Decisions the verdict rests on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub vu: Decision,
    pub ua: Decision,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub checks: TransformChecks,
    /// `"ACCEPT"` or `"REJECT"`.
    pub verdict: &'static str,
    /// First failing check, for rejections.
    pub reason: Option<String>,
    pub provenance: Provenance,
}

impl TransformReport {
    pub fn accepted(&self) -> bool {
        self.verdict == "ACCEPT"
    }
}

/// Validate multiplying `(UA)v = Ub` on the left by `V`.
///
/// Accepted when `V` is row finite, `VU = I` and `UA` is defined: then `V`
/// row finite and `UA` defined give `V(UA) = (VU)A = A`, so any solution of
/// the transformed system solves the original one.
pub fn validate_transform(v: &SymbolicMatrix, u: &SymbolicMatrix, a: &SymbolicMatrix) -> Result<TransformReport> {
    let (lv, lu, la) = (Lines::of_matrix(v), Lines::of_matrix(u), Lines::of_matrix(a));
    let v_row_finite = lv.flags().row_finite;
    let vu = decide_defined(&lv, &lu);
    let vu_is_identity = vu.defined && product(v, u)?.equals(&SymbolicMatrix::identity())?;
    let ua = decide_defined(&lu, &la);
    let checks = TransformChecks { v_row_finite, vu_is_identity, ua_defined: ua.defined };
    let reason = if !v_row_finite {
        Some("V not row finite")
    } else if !vu.defined {
        Some("VU undefined")
    } else if !vu_is_identity {
        Some("VU is not the identity")
    } else if !ua.defined {
        Some("UA undefined")
    } else {
        None
    };
    Ok(TransformReport {
        checks,
        verdict: if reason.is_none() { "ACCEPT" } else { "REJECT" },
        reason: reason.map(String::from),
        provenance: Provenance { vu, ua },
    })
}

/// Whether the column `v` solves `Av = b`.
pub fn check_solution(a: &SymbolicMatrix, v: &SymbolicMatrix, b: &SymbolicMatrix) -> Result<bool> {
    product(a, v)?.equals(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Primitive;

    #[test]
    fn identity_transform_is_accepted() {
        let i = SymbolicMatrix::identity();
        let v = SymbolicMatrix::new([Primitive::upper_cone(0, 1, 1)]).unwrap();
        let r = validate_transform(&i, &i, &v).unwrap();
        assert!(r.accepted());
        assert_eq!(r.reason, None);
    }

    #[test]
    fn undefined_vu_is_reported() {
        let v = SymbolicMatrix::new([Primitive::row_prog(1, 1, 1, 1), Primitive::diag(0, 1, 1)]).unwrap();
        let u = SymbolicMatrix::new([Primitive::col_prog(1, 1, 1, 1)]).unwrap();
        let r = validate_transform(&v, &u, &SymbolicMatrix::identity()).unwrap();
        assert_eq!(r.reason.as_deref(), Some("V not row finite"));
        assert!(!r.provenance.vu.defined);
    }
}
