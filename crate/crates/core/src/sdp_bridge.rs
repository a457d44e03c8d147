//! Optional bridge to an external SDP solver.
//!
//! The max-min-eigenvalue problem solved per facial-reduction round,
//!
//! ```text
//! maximize    gamma
//! subject to  C0 + sum_j mu_j D_j - gamma I  is PSD,
//! ```
//!
//! is exported in the sparse SDPA format (`.dat-s`): dual variables are
//! `y = (mu_1..mu_K, gamma)`, one PSD block, objective `b = e_{K+1}`,
//! constraint matrices `F_j = -D_j` for `j <= K`, `F_{K+1} = I`, and
//! `F_0 = -C0` so the standard SDPA dual `sum y_j F_j - F_0 >= 0` matches
//! the constraint above. Only upper-triangle nonzeros are written.
//!
//! When a backend command is configured the file is handed to it as the
//! single argument and the command must print the dual vector `y` (one
//! number per line, `K + 1` lines) on standard output. The built-in
//! interior-point solver is the default; the bridge exists for
//! cross-checking against established solvers.

use std::io::Write;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Serialize one round's SDP in sparse SDPA format.
pub fn to_sdpa(c0: &DenseMatrix, dirs: &[DenseMatrix]) -> String {
    let r = c0.rows;
    let k = dirs.len();
    let mut out = String::new();
    out.push_str("\"max-rank moment face subproblem\"\n");
    out.push_str(&format!("{}\n", k + 1)); // mDIM
    out.push_str("1\n"); // nBLOCK
    out.push_str(&format!("{}\n", r)); // block sizes
    let mut b = vec!["0".to_string(); k + 1];
    b[k] = "1".to_string();
    out.push_str(&format!("{}\n", b.join(" ")));

    let mut emit = |mat_index: usize, m: &DenseMatrix, scale: f64| {
        for i in 0..m.rows {
            for j in i..m.cols {
                let v = m.get(i, j) * scale;
                if v != 0.0 {
                    out.push_str(&format!("{} 1 {} {} {:.17e}\n", mat_index, i + 1, j + 1, v));
                }
            }
        }
    };
    emit(0, c0, -1.0); // F0 = -C0
    for (j, d) in dirs.iter().enumerate() {
        emit(j + 1, d, -1.0); // F_j = -D_j
    }
    emit(k + 1, &DenseMatrix::identity(r), 1.0); // F_{K+1} = I
    out
}

/// Run the configured backend on one subproblem and read the dual vector.
pub fn solve_external(command: &str, c0: &DenseMatrix, dirs: &[DenseMatrix]) -> Result<Vec<f64>> {
    let payload = to_sdpa(c0, dirs);
    let dir = std::env::temp_dir();
    let path = dir.join(format!(
        "realvar-sdp-{}-{:x}.dat-s",
        std::process::id(),
        payload.len()
    ));
    {
        let mut f = std::fs::File::create(&path)
            .map_err(|e| Error::Other(format!("sdp bridge: create temp file: {}", e)))?;
        f.write_all(payload.as_bytes())
            .map_err(|e| Error::Other(format!("sdp bridge: write: {}", e)))?;
    }
    let output = std::process::Command::new(command)
        .arg(&path)
        .output()
        .map_err(|e| Error::Other(format!("sdp bridge: spawn '{}': {}", command, e)))?;
    let _ = std::fs::remove_file(&path);
    if !output.status.success() {
        return Err(Error::Other(format!(
            "sdp bridge: '{}' exited with {}",
            command, output.status
        )));
    }
    let text = String::from_utf8_lossy(&output.stdout);
    let values: Vec<f64> = text
        .split_whitespace()
        .map(|tok| tok.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Other(format!("sdp bridge: bad dual vector: {}", e)))?;
    if values.len() != dirs.len() + 1 {
        return Err(Error::Other(format!(
            "sdp bridge: expected {} dual values, got {}",
            dirs.len() + 1,
            values.len()
        )));
    }
    Ok(values)
}
