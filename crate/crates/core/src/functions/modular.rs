use crate::error::{invalid, Result};
use crate::objective::{ComponentOracle, DecomposableObjective, GroundSet};

/// `f(S) = Σ_{e∈S} values[e]`.
struct Modular {
    values: Vec<f64>,
}

impl ComponentOracle for Modular {
    fn value(&self, members: &[usize]) -> f64 {
        members.iter().map(|&e| self.values[e]).sum()
    }
}

/// One modular component per row of the `N × n` matrix `rows`.
pub fn modular_objective(rows: &[Vec<f64>]) -> Result<DecomposableObjective> {
    let n = check_matrix(rows)?;
    let components = rows
        .iter()
        .map(|r| Box::new(Modular { values: r.clone() }) as Box<dyn ComponentOracle>)
        .collect();
    DecomposableObjective::new(GroundSet::new(n)?, components)
}

/// `f(S) = max_{e∈S} values[e]`, zero on the empty set.
///
/// This is a weighted coverage function: sort the values, and let the layer
/// between consecutive values be covered by every element at least as large.
struct MaxValue {
    values: Vec<f64>,
}

impl ComponentOracle for MaxValue {
    fn value(&self, members: &[usize]) -> f64 {
        members.iter().map(|&e| self.values[e]).fold(0.0, f64::max)
    }
}

/// One max-value component per row; the singleton values `fⁱ(e)` are exactly the matrix entries.
pub fn max_value_objective(rows: Vec<Vec<f64>>) -> Result<DecomposableObjective> {
    let n = check_matrix(&rows)?;
    let components = rows
        .into_iter()
        .map(|values| Box::new(MaxValue { values }) as Box<dyn ComponentOracle>)
        .collect();
    DecomposableObjective::new(GroundSet::new(n)?, components)
}

/// `f(S) = |S|²`. Supermodular; exists only to exercise the validators.
pub fn supermodular_fixture(n: usize) -> Result<DecomposableObjective> {
    let square = |m: &[usize]| (m.len() * m.len()) as f64;
    DecomposableObjective::new(GroundSet::new(n)?, vec![Box::new(square)])
}

fn check_matrix(rows: &[Vec<f64>]) -> Result<usize> {
    let n = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| invalid("matrix has no rows"))?;
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(invalid(format!(
                "row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        if let Some(v) = r.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid(format!(
                "row {i} has a negative or non-finite entry {v}"
            )));
        }
    }
    Ok(n)
}
