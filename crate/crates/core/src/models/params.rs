use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{int, Coeff};

/// Declared role of a parameter tensor; selects the load-time checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamKind {
    General,
    /// Structure constants `c^r_{pq}`, stored as `[r, p, q]`.
    Structure,
    /// A symmetric invertible bilinear form.
    Metric,
    /// A totally antisymmetric symbol.
    LeviCivita,
}

impl ParamKind {
    pub fn keyword(self) -> Option<&'static str> {
        match self {
            ParamKind::General => None,
            ParamKind::Structure => Some("structure"),
            ParamKind::Metric => Some("metric"),
            ParamKind::LeviCivita => Some("levi"),
        }
    }
}

/// A named constant tensor with sparse exact entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub kind: ParamKind,
    pub entries: BTreeMap<Vec<usize>, Coeff>,
}

impl ParamTensor {
    pub fn new(name: &str, shape: Vec<usize>, kind: ParamKind) -> Self {
        ParamTensor {
            name: name.to_string(),
            shape,
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, idx: Vec<usize>, value: Coeff) {
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    pub fn get(&self, idx: &[usize]) -> Coeff {
        self.entries.get(idx).cloned().unwrap_or_else(Coeff::zero)
    }

    /// `δ_{ij}` on `n` values.
    pub fn identity(name: &str, n: usize, kind: ParamKind) -> Self {
        let mut t = ParamTensor::new(name, vec![n, n], kind);
        for i in 0..n {
            t.set(vec![i, i], Coeff::one());
        }
        t
    }

    pub fn diagonal(name: &str, diag: &[i64], kind: ParamKind) -> Self {
        let mut t = ParamTensor::new(name, vec![diag.len(); 2], kind);
        for (i, &d) in diag.iter().enumerate() {
            t.set(vec![i, i], int(d));
        }
        t
    }

    /// The Levi–Civita symbol on `n` values with `ε_{01…} = 1`.
    pub fn levi_civita(name: &str, n: usize, kind: ParamKind) -> Self {
        let mut t = ParamTensor::new(name, vec![n; n], kind);
        for perm in permutations(n) {
            let sign = permutation_sign(&perm);
            t.set(perm, int(sign));
        }
        t
    }

    /// Problems found by the kind-specific checks; empty when consistent.
    pub fn validate(&self) -> Vec<String> {
        match self.kind {
            ParamKind::General => Vec::new(),
            ParamKind::Structure => self.structure_problems(),
            ParamKind::Metric => self.metric_problems(),
            ParamKind::LeviCivita => self.levi_problems(),
        }
    }

    fn structure_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.shape.len() != 3 || self.shape.iter().any(|&n| n != self.shape[0]) {
            out.push(format!("{} must have shape [N,N,N]", self.name));
            return out;
        }
        let n = self.shape[0];
        for r in 0..n {
            for p in 0..n {
                for q in 0..n {
                    if self.get(&[r, p, q]) != -self.get(&[r, q, p]) {
                        out.push(format!("{}[{r},{p},{q}] is not antisymmetric in p,q", self.name));
                    }
                }
            }
        }
        // c^r_{pq} c^q_{st} + cyclic in (p,s,t) = 0
        for r in 0..n {
            for p in 0..n {
                for s in 0..n {
                    for t in 0..n {
                        let mut total = Coeff::zero();
                        for q in 0..n {
                            total += self.get(&[r, p, q]) * self.get(&[q, s, t])
                                + self.get(&[r, s, q]) * self.get(&[q, t, p])
                                + self.get(&[r, t, q]) * self.get(&[q, p, s]);
                        }
                        if !total.is_zero() {
                            out.push(format!(
                                "{} violates the Jacobi identity at r={r}, (p,s,t)=({p},{s},{t}): {total}",
                                self.name
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    fn metric_problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.shape.len() != 2 || self.shape[0] != self.shape[1] {
            return vec![format!("{} must be square", self.name)];
        }
        let n = self.shape[0];
        for i in 0..n {
            for j in 0..n {
                if self.get(&[i, j]) != self.get(&[j, i]) {
                    out.push(format!("{}[{i},{j}] is not symmetric", self.name));
                }
            }
        }
        let rows: Vec<Vec<Coeff>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(&[i, j])).collect())
            .collect();
        if determinant(rows).is_zero() {
            out.push(format!("{} is degenerate", self.name));
        }
        out
    }

    fn levi_problems(&self) -> Vec<String> {
        let n = self.shape.len();
        if self.shape.iter().any(|&k| k != n) {
            return vec![format!("{} must have shape [n; n]", self.name)];
        }
        let mut out = Vec::new();
        for (idx, v) in &self.entries {
            for a in 0..n {
                for b in a + 1..n {
                    let mut swapped = idx.clone();
                    swapped.swap(a, b);
                    if self.get(&swapped) != -v.clone() {
                        out.push(format!("{} is not antisymmetric at {idx:?}", self.name));
                    }
                }
            }
        }
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                sign = -sign;
            }
        }
    }
    sign
}

fn determinant(mut m: Vec<Vec<Coeff>>) -> Coeff {
    let n = m.len();
    let mut det = Coeff::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Coeff::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = &row[col] / &p;
            for (x, y) in row.iter_mut().zip(pivot_row).skip(col) {
                *x -= &factor * y;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_constants_pass() {
        let f = ParamTensor::levi_civita("f", 3, ParamKind::Structure);
        assert!(f.validate().is_empty());
        assert_eq!(f.entries.len(), 6);
    }

    #[test]
    fn corrupted_constants_fail() {
        let mut f = ParamTensor::levi_civita("f", 3, ParamKind::Structure);
        f.set(vec![2, 0, 1], int(2));
        assert!(f.validate().iter().any(|p| p.contains("antisymmetric")));

        // [e0,e1] = e2 + e0 keeps antisymmetry but breaks Jacobi
        let mut g = ParamTensor::levi_civita("f", 3, ParamKind::Structure);
        g.set(vec![0, 0, 1], int(1));
        g.set(vec![0, 1, 0], int(-1));
        let problems = g.validate();
        assert!(problems.iter().all(|p| !p.contains("antisymmetric")));
        assert!(problems.iter().any(|p| p.contains("Jacobi")));
    }

    #[test]
    fn metric_checks() {
        assert!(ParamTensor::diagonal("g", &[1, -1, -1, -1], ParamKind::Metric)
            .validate()
            .is_empty());
        assert!(!ParamTensor::diagonal("g", &[1, 0], ParamKind::Metric)
            .validate()
            .is_empty());
        assert!(ParamTensor::levi_civita("eps", 4, ParamKind::LeviCivita)
            .validate()
            .is_empty());
    }
}
