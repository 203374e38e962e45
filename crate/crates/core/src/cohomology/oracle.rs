//! Numerical cross-check: singular values of `T − I` on a truncated GNS basis.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::phase::PhasedScalar;
use crate::skew::SkewSystem;

/// Nullspace estimate of `π(α^{−n}(u_n))·V_θ − I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub level: i64,
    pub truncation: i64,
    pub tol: f64,
    /// Number of singular values below `tol`.
    pub dimension: usize,
    /// All singular values, ascending.
    pub singular_values: Vec<f64>,
    /// Truncated basis vectors whose image leaves the truncation.
    pub leaked_columns: usize,
    /// Invariant blocks the matrix splits into.
    pub blocks: usize,
    pub warning: Option<String>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut j = i;
        while self.0[j] != r {
            let next = self.0[j];
            self.0[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Build `T − I` with `T(a) = α^{−n}(u_n)·θ(a)` on monomials `U^pV^q` with
/// `|p|, |q| ≤ m` (circle: `|p| ≤ m`), split it into connected blocks and
/// count small singular values per block. `Z∞` uses the single basis vector
/// of `L²(δ∞)`.
pub fn oracle_nullspace(sys: &SkewSystem, n: i64, m: i64, tol: f64) -> Result<OracleReport> {
    if m < 0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("truncation must be nonnegative and tol positive".into()));
    }
    let ctx = sys.context();
    let w = sys.step_coefficient(n);
    if !ctx.is_torus() {
        let s = (w.state() - 1.0).norm();
        return Ok(OracleReport {
            level: n,
            truncation: m,
            tol,
            dimension: usize::from(s < tol),
            singular_values: vec![s],
            leaked_columns: 0,
            blocks: 1,
            warning: None,
        });
    }
    let q_range = if matches!(ctx.kind(), AlgebraKind::Circle) { 0 } else { m };
    let basis: Vec<(i64, i64)> = (-m..=m).flat_map(|p| (-q_range..=q_range).map(move |q| (p, q))).collect();
    let index: HashMap<(i64, i64), usize> = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();

    let mut columns: Vec<Vec<(usize, Complex64)>> = Vec::with_capacity(basis.len());
    let mut leaked = vec![false; basis.len()];
    let mut uf = UnionFind((0..basis.len()).collect());
    for (j, &(p, q)) in basis.iter().enumerate() {
        let e = Element::monomial(ctx, p, q, PhasedScalar::one(ctx.basis()))?;
        let image = w.mul(&sys.theta().apply(&e)?)?.sub(&e)?;
        let mut col = Vec::new();
        for (key, s) in image.torus_terms().expect("torus") {
            let c = s.eval();
            if c.norm() == 0.0 {
                continue;
            }
            match index.get(key) {
                Some(&i) => {
                    col.push((i, c));
                    uf.union(i, j);
                }
                None => leaked[j] = true,
            }
        }
        columns.push(col);
    }

    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for j in 0..basis.len() {
        let r = uf.find(j);
        groups.entry(r).or_default().push(j);
    }
    let mut singular_values = Vec::with_capacity(basis.len());
    let mut leaky_blocks = 0;
    for members in groups.values() {
        if members.iter().any(|&j| leaked[j]) {
            leaky_blocks += 1;
        }
        let local: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let size = members.len();
        let mut mat = DMatrix::<Complex64>::zeros(size, size);
        for (k, &j) in members.iter().enumerate() {
            for &(i, c) in &columns[j] {
                mat[(local[&i], k)] += c;
            }
        }
        if size == 1 {
            singular_values.push(mat[(0, 0)].norm());
        } else {
            singular_values.extend(mat.singular_values().iter().copied());
        }
    }
    singular_values.sort_by(f64::total_cmp);
    let dimension = singular_values.iter().filter(|s| **s < tol).count();
    let leaked_columns = leaked.iter().filter(|b| **b).count();
    let warning = (leaky_blocks > 0).then(|| format!("boundary leakage in {leaky_blocks} shifted blocks"));
    Ok(OracleReport {
        level: n,
        truncation: m,
        tol,
        dimension,
        singular_values,
        leaked_columns,
        blocks: groups.len(),
        warning,
    })
}
