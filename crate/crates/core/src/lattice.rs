//! Integer solutions of small linear systems `A·x = b`.

use num::integer::Integer;

/// Integer solution set of `A·x = b`: `particular + Z·kernel`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<i128>,
    pub kernel: Vec<Vec<i128>>,
}

/// Solve `A·x = b` over the integers by column Hermite reduction.
///
/// `a` is row-major with every row of the same length. Returns `None` when
/// no integer solution exists.
pub fn solve_integer(a: &[Vec<i128>], b: &[i128]) -> Option<IntegerSolution> {
    let rows = a.len();
    assert_eq!(rows, b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<i128>> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut c = 0;
    for r in 0..rows {
        if c == cols {
            break;
        }
        for j in c + 1..cols {
            if h[r][j] == 0 {
                continue;
            }
            let (x, y) = (h[r][c], h[r][j]);
            let e = x.extended_gcd(&y);
            let (g, s, t) = (e.gcd, e.x, e.y);
            let (px, py) = (x / g, y / g);
            // new col c = s·col_c + t·col_j ; new col j = -py·col_c + px·col_j
            combine_cols(&mut h, c, j, s, t, -py, px);
            combine_cols(&mut u, c, j, s, t, -py, px);
        }
        if h[r][c] != 0 {
            if h[r][c] < 0 {
                negate_col(&mut h, c);
                negate_col(&mut u, c);
            }
            pivots.push((r, c));
            c += 1;
        }
    }
    let rank = c;

    let mut y = vec![0i128; cols];
    let mut next = 0;
    for r in 0..rows {
        let mut residual = b[r];
        for j in 0..next {
            residual -= h[r][j] * y[j];
        }
        if next < pivots.len() && pivots[next].0 == r {
            let p = h[r][next];
            if residual % p != 0 {
                return None;
            }
            y[next] = residual / p;
            next += 1;
        } else if residual != 0 {
            return None;
        }
    }

    let particular = (0..cols).map(|i| (0..cols).map(|j| u[i][j] * y[j]).sum()).collect();
    let kernel = (rank..cols).map(|j| (0..cols).map(|i| u[i][j]).collect()).collect();
    Some(IntegerSolution { particular, kernel })
}

fn combine_cols(m: &mut [Vec<i128>], c: usize, j: usize, s: i128, t: i128, p: i128, q: i128) {
    for row in m.iter_mut() {
        let (x, y) = (row[c], row[j]);
        row[c] = s * x + t * y;
        row[j] = p * x + q * y;
    }
}

fn negate_col(m: &mut [Vec<i128>], c: usize) {
    for row in m.iter_mut() {
        row[c] = -row[c];
    }
}
