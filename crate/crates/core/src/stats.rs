//! Rank-based comparison of methods: the Friedman test with the
//! Iman-Davenport correction and the post-hoc Nemenyi critical difference.

use std::path::Path;

use crate::error::{Error, Result};
use crate::tables;

/// Scores of k methods on N items (datasets or labels); higher is better.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreTable {
    pub methods: Vec<String>,
    pub items: Vec<String>,
    /// Row-major: `scores[item][method]`.
    pub scores: Vec<Vec<f64>>,
}

impl ScoreTable {
    pub fn new(methods: Vec<String>, items: Vec<String>, scores: Vec<Vec<f64>>) -> Result<Self> {
        if scores.len() != items.len() {
            return Err(Error::Contract("one score row per item required".into()));
        }
        for row in &scores {
            if row.len() != methods.len() {
                return Err(Error::Contract("ragged score table".into()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Contract("non-finite score".into()));
            }
        }
        Ok(ScoreTable {
            methods,
            items,
            scores,
        })
    }

    pub fn n_methods(&self) -> usize {
        self.methods.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    /// CSV with methods as columns and items as rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("item");
        for m in &self.methods {
            out.push(',');
            out.push_str(m);
        }
        out.push('\n');
        for (item, row) in self.items.iter().zip(&self.scores) {
            out.push_str(item);
            for v in row {
                out.push(',');
                out.push_str(&format!("{v}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(content: &str) -> Result<Self> {
        let mut lines = content.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::Data("empty score table".into()))?;
        let methods: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
        if methods.is_empty() {
            return Err(Error::Data("score table has no method columns".into()));
        }
        let mut items = Vec::new();
        let mut scores = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            items.push(
                fields
                    .next()
                    .ok_or_else(|| Error::Data(format!("line {}: missing item", idx + 1)))?
                    .to_string(),
            );
            let row: Vec<f64> = fields
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| Error::Data(format!("line {}: bad score {f:?}", idx + 1)))
                })
                .collect::<Result<_>>()?;
            scores.push(row);
        }
        ScoreTable::new(methods, items, scores)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Ranks within one item row: rank 1 is the highest score; tied scores get
/// the average of the positions they span.
pub fn rank_row(scores: &[f64]) -> Vec<f64> {
    let k = scores.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .expect("finite scores")
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0.0; k];
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j + 1 < k && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // positions i..=j (0-based) share the average rank
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Friedman test outcome.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FriedmanOutcome {
    /// Average rank per method (lower is better).
    pub avg_ranks: Vec<f64>,
    /// The Friedman chi-square statistic over average ranks.
    pub chi2: f64,
    /// The corrected F statistic; absent when the correction is singular.
    pub f_stat: Option<f64>,
    /// Whether the corrected statistic could be used; when false the
    /// decision fell back to the uncorrected chi-square test.
    pub corrected: bool,
    pub alpha: f64,
    pub reject: bool,
}

fn alpha_index(alpha: f64) -> Result<usize> {
    if (alpha - 0.05).abs() < 1e-12 {
        Ok(0)
    } else if (alpha - 0.10).abs() < 1e-12 {
        Ok(1)
    } else {
        Err(Error::Contract(format!(
            "alpha {alpha} unsupported; use 0.05 or 0.10"
        )))
    }
}

fn chi2_critical(df: usize, alpha: f64) -> Result<f64> {
    let table = if alpha_index(alpha)? == 0 {
        &tables::CHI2_CRIT_05
    } else {
        &tables::CHI2_CRIT_10
    };
    if df == 0 || df > table.len() {
        return Err(Error::Contract(format!(
            "chi-square critical value for df {df} not tabulated"
        )));
    }
    Ok(table[df - 1])
}

/// Upper critical value of F(df1, df2); df2 beyond the grid interpolates
/// linearly in 1/df2 toward the limiting value.
fn f_critical(df1: usize, df2: usize, alpha: f64) -> Result<f64> {
    let table = if alpha_index(alpha)? == 0 {
        &tables::F_CRIT_05
    } else {
        &tables::F_CRIT_10
    };
    if df1 == 0 || df1 > table.len() {
        return Err(Error::Contract(format!(
            "F critical value for df1 {df1} not tabulated"
        )));
    }
    if df2 == 0 {
        return Err(Error::Contract("df2 must be positive".into()));
    }
    let row = &table[df1 - 1];
    let grid = &tables::DF2_GRID;
    if let Some(pos) = grid.iter().position(|&g| g == df2) {
        return Ok(row[pos]);
    }
    if df2 < *grid.last().unwrap() {
        // between grid points below 120: bracket and interpolate in 1/df2
        let hi = grid.iter().position(|&g| g > df2).unwrap();
        let (g0, g1) = (grid[hi - 1], grid[hi]);
        let (v0, v1) = (row[hi - 1], row[hi]);
        let t = (1.0 / g0 as f64 - 1.0 / df2 as f64) / (1.0 / g0 as f64 - 1.0 / g1 as f64);
        return Ok(v0 + t * (v1 - v0));
    }
    // beyond 120: interpolate between the last grid value and the limit
    let g0 = *grid.last().unwrap();
    let v0 = row[grid.len() - 1];
    let v_inf = row[grid.len()];
    let t = (1.0 / g0 as f64 - 1.0 / df2 as f64) / (1.0 / g0 as f64);
    Ok(v0 + t * (v_inf - v0))
}

/// Friedman test over a score table: per-item ranks (ties averaged), the
/// chi-square statistic, and the Iman-Davenport corrected F statistic
/// checked against F(k-1, (k-1)(N-1)). When the correction is singular
/// (perfectly consistent rankings) the decision falls back to the
/// uncorrected chi-square test and `corrected` is false.
pub fn friedman_test(table: &ScoreTable, alpha: f64) -> Result<FriedmanOutcome> {
    alpha_index(alpha)?;
    let k = table.n_methods();
    let n = table.n_items();
    if k < 2 {
        return Err(Error::Contract("need at least 2 methods".into()));
    }
    if n < 2 {
        return Err(Error::Contract("need at least 2 items".into()));
    }

    let mut rank_sums = vec![0.0; k];
    for row in &table.scores {
        for (sum, rank) in rank_sums.iter_mut().zip(rank_row(row)) {
            *sum += rank;
        }
    }
    let avg_ranks: Vec<f64> = rank_sums.iter().map(|s| s / n as f64).collect();

    let kf = k as f64;
    let nf = n as f64;
    let sum_sq: f64 = avg_ranks.iter().map(|r| r * r).sum();
    let chi2 = 12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0) * (kf + 1.0) / 4.0);
    let chi2 = chi2.max(0.0);

    let denominator = nf * (kf - 1.0) - chi2;
    if denominator <= 1e-9 {
        // correction singular: fall back to the uncorrected test
        let reject = chi2 > chi2_critical(k - 1, alpha)?;
        return Ok(FriedmanOutcome {
            avg_ranks,
            chi2,
            f_stat: None,
            corrected: false,
            alpha,
            reject,
        });
    }
    let f_stat = (nf - 1.0) * chi2 / denominator;
    let critical = f_critical(k - 1, (k - 1) * (n - 1), alpha)?;
    Ok(FriedmanOutcome {
        avg_ranks,
        chi2,
        f_stat: Some(f_stat),
        corrected: true,
        alpha,
        reject: f_stat > critical,
    })
}

/// Critical difference of the Nemenyi post-hoc test:
/// `q_alpha(k) * sqrt(k(k+1) / (6N))`, k in 2..=20, alpha 0.05 or 0.10.
pub fn nemenyi_cd(k: usize, n: usize, alpha: f64) -> Result<f64> {
    let table = if alpha_index(alpha)? == 0 {
        &tables::NEMENYI_Q_05
    } else {
        &tables::NEMENYI_Q_10
    };
    if !(2..=20).contains(&k) {
        return Err(Error::Contract(format!("k = {k} outside tabulated 2..=20")));
    }
    if n == 0 {
        return Err(Error::Contract("need at least one item".into()));
    }
    let q = table[k - 2];
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * n as f64)).sqrt())
}
